//! Analytical bounds on the number of tests needed to find `L` non-defective
//! items, and optimised error-probability bounds.
//!
//! Thresholds are real numbers of tests in the same units as `I^(j)`
//! (nats cancel in every `Gamma / I` ratio). Round up with `ceil` only when an
//! integer test count is wanted.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::info::{e0_general, hb, mutual_info_all, ChannelSpec};
use crate::model::{DesignParams, NoiseParams, ProblemConfig};

/// Mutual information at or below this many nats is treated as zero.
pub const MIN_INFORMATION: f64 = 1e-12;

/// Golden-section tolerance on `rho`.
pub const RHO_TOLERANCE: f64 = 1e-9;

const RHO_GRID_POINTS: usize = 101;

/// `ln C(n, k)` via `ln Gamma`.
///
/// `k` is first replaced by `min(k, n - k)`, so symmetric arguments give
/// bitwise identical results, and `k <= 1` is evaluated exactly.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(domain("k", k as f64, "[0, n]"));
    }
    let k = k.min(n - k);
    Ok(match k {
        0 => 0.0,
        1 => (n as f64).ln(),
        _ => {
            let (n, k) = (n as f64, k as f64);
            libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
        }
    })
}

/// `ln C(n, k)` with `ln 0 = -inf` outside `0 <= k <= n`.
fn ln_choose(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        f64::NEG_INFINITY
    } else {
        log_binomial(n as u64, k as u64).unwrap()
    }
}

fn check_j(config: &ProblemConfig, j: usize) -> Result<()> {
    if j == 0 || j > config.k() {
        return Err(domain("j", j as f64, "[1, K]"));
    }
    Ok(())
}

/// Probability-like factor of the complement-pick scheme:
/// `sum_{i=1..j} C(N-K-j, L-i) C(j, i) / C(N-K, L)`.
pub fn c0_factor(config: &ProblemConfig, j: usize) -> Result<f64> {
    config.validate()?;
    check_j(config, j)?;
    let inactive = config.n_inactive() as i64;
    let (l, j) = (config.l() as i64, j as i64);
    let denom = ln_choose(inactive, l);
    let total: f64 = (1..=j)
        .map(|i| ln_choose(inactive - j, l - i) + ln_choose(j, i) - denom)
        .filter(|t| t.is_finite())
        .map(f64::exp)
        .sum();
    Ok(total.min(1.0))
}

/// One `j` term of the multi-stage analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageTerm {
    pub j: usize,
    /// `L_j = (N - K) - (N_stg K - j)`.
    pub l_j: usize,
    /// `ln C2(L, N, K, j)`.
    pub ln_c2: f64,
}

/// `ceil(L / K)`.
pub fn stage_count(config: &ProblemConfig) -> usize {
    config.l().div_ceil(config.k())
}

/// `L_j` and `ln C2` for every `j in 1..=K`; fails when `L_1 <= 0`.
pub fn multistage_terms(config: &ProblemConfig) -> Result<Vec<StageTerm>> {
    config.validate()?;
    let k = config.k() as i64;
    let stages = stage_count(config) as i64;
    let inactive = config.n_inactive() as i64;
    let l_1 = inactive - (stages * k - 1);
    if l_1 <= 0 {
        return Err(Error::Precondition(format!(
            "L_1 = (N - K) - (ceil(L/K) K - 1) = {l_1} must be positive"
        )));
    }
    Ok((1..=k)
        .map(|j| {
            let l_j = inactive - (stages * k - j);
            let ln_c2 =
                ln_choose(inactive, l_j) + ln_choose(k * stages - j, k - j) + ln_choose(k, 1) + ln_choose(k - 1, j - 1);
            StageTerm {
                j: j as usize,
                l_j: l_j as usize,
                ln_c2,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFactors {
    /// `ln[(N - K) K]`, the find-all-defectives factor.
    pub gamma_ud: f64,
    /// Complement-pick factor.
    pub gamma_u1: f64,
    /// `max_j ln C2 / L_j`, the multi-stage factor.
    pub gamma_u2: f64,
    pub gamma_u2_argmax_j: usize,
    /// `ln C2 / L_j` per `j`.
    pub per_j: Vec<f64>,
}

pub fn gamma_factors(config: &ProblemConfig) -> Result<GammaFactors> {
    let terms = multistage_terms(config)?;
    let (k, l, inactive) = (config.k() as i64, config.l() as i64, config.n_inactive() as i64);
    let gamma_ud = ln_choose(inactive, 1) + ln_choose(k, 1);
    let gamma_u1 = gamma_ud + ln_choose(inactive - 1, l - 1) - ln_choose(inactive, l);
    let per_j: Vec<f64> = terms.iter().map(|t| t.ln_c2 / t.l_j as f64).collect();
    let (argmax, gamma_u2) = argmax(&per_j);
    Ok(GammaFactors {
        gamma_ud,
        gamma_u1,
        gamma_u2,
        gamma_u2_argmax_j: argmax + 1,
        per_j,
    })
}

/// First index of the maximum.
fn argmax(values: &[f64]) -> (usize, f64) {
    values.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (i, v)| if v > best.1 { (i, v) } else { best },
    )
}

/// A log-count that may be `+inf` when its denominator count is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LogCount {
    Finite(f64),
    Infinite,
}

impl LogCount {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Converse factor `ln[C(N-K+j, j) / C(N-K+j-L, j)]`.
pub fn gamma_l(config: &ProblemConfig, j: usize) -> Result<LogCount> {
    config.validate()?;
    check_j(config, j)?;
    let top = config.n_inactive() as i64 + j as i64;
    let rest = top - config.l() as i64;
    if rest < j as i64 {
        return Ok(LogCount::Infinite);
    }
    Ok(LogCount::Finite(ln_choose(top, j as i64) - ln_choose(rest, j as i64)))
}

/// A `max over j` threshold and the `j` attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub value: f64,
    pub argmax_j: usize,
}

impl Threshold {
    fn from_terms(terms: &[f64]) -> Self {
        let (i, value) = argmax(terms);
        Self { value, argmax_j: i + 1 }
    }

    /// Smallest integer test count strictly above the threshold.
    pub fn tests(&self) -> u64 {
        (self.value.floor() + 1.0).max(0.0) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sufficiency {
    /// Find the active set, then pick from its complement.
    pub scheme1: Threshold,
    /// Likelihood-sort scheme; only for `K = 1`.
    pub k1: Option<Threshold>,
    /// Multi-stage scheme; `None` when `L_1 <= 0`.
    pub multistage: Option<Threshold>,
    /// Alternative `j`-wise analysis of the multi-stage scheme (comparison
    /// only, never tighter on the boolean-OR channels).
    pub alt_j: Option<Threshold>,
}

fn channel_infos(config: &ProblemConfig, design: &DesignParams, noise: &NoiseParams) -> Result<Vec<f64>> {
    config.validate()?;
    let channel = ChannelSpec::new(config.k(), *design, *noise)?;
    mutual_info_all(&channel)
}

fn check_informative(infos: &[f64]) -> Result<()> {
    if let Some((i, &info)) = infos
        .iter()
        .enumerate()
        .find(|(_, &v)| v.is_nan() || v <= MIN_INFORMATION)
    {
        return Err(Error::DegenerateChannel { j: i as u64 + 1, info });
    }
    Ok(())
}

pub fn sufficiency(config: &ProblemConfig, design: &DesignParams, noise: &NoiseParams) -> Result<Sufficiency> {
    let infos = channel_infos(config, design, noise)?;
    sufficiency_with(config, &infos)
}

fn sufficiency_with(config: &ProblemConfig, infos: &[f64]) -> Result<Sufficiency> {
    check_informative(infos)?;
    let (n, k, l) = (config.n() as i64, config.k() as i64, config.l() as i64);
    let inactive = n - k;

    let scheme1: Vec<f64> = (1..=k)
        .map(|j| {
            let c0 = c0_factor(config, j as usize).unwrap();
            (ln_choose(inactive, j) + ln_choose(k, j) + c0.ln()) / infos[j as usize - 1]
        })
        .collect();

    let k1 = (k == 1).then(|| Threshold {
        value: ln_choose(inactive, l - 1) / ((n - l) as f64 * infos[0]),
        argmax_j: 1,
    });

    let (multistage, alt_j) = match multistage_terms(config) {
        Ok(terms) => {
            let stages = stage_count(config) as i64;
            let main: Vec<f64> = terms.iter().map(|t| t.ln_c2 / (t.l_j as f64 * infos[0])).collect();
            let alt: Vec<f64> = terms
                .iter()
                .map(|t| {
                    let j = t.j as i64;
                    let count = ln_choose(inactive, t.l_j as i64) + ln_choose(k * stages - j, k - j) + ln_choose(k, j);
                    let groups = (t.l_j / t.j) as f64;
                    if groups == 0.0 {
                        f64::INFINITY
                    } else {
                        count / (groups * infos[t.j - 1])
                    }
                })
                .collect();
            (Some(Threshold::from_terms(&main)), Some(Threshold::from_terms(&alt)))
        }
        Err(_) => (None, None),
    };

    Ok(Sufficiency {
        scheme1: Threshold::from_terms(&scheme1),
        k1,
        multistage,
        alt_j,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Necessity {
    /// Largest finite `Gamma_l(j) / I^(j)`.
    pub value: f64,
    pub argmax_j: usize,
    /// `j` values whose `Gamma_l` is infinite.
    pub infinite_j: Vec<usize>,
}

pub fn necessity(config: &ProblemConfig, design: &DesignParams, noise: &NoiseParams) -> Result<Necessity> {
    let infos = channel_infos(config, design, noise)?;
    necessity_with(config, &infos)
}

fn necessity_with(config: &ProblemConfig, infos: &[f64]) -> Result<Necessity> {
    check_informative(infos)?;
    let mut infinite_j = Vec::new();
    let mut terms = Vec::with_capacity(config.k());
    for j in 1..=config.k() {
        match gamma_l(config, j)? {
            LogCount::Finite(g) => terms.push(g / infos[j - 1]),
            LogCount::Infinite => {
                infinite_j.push(j);
                terms.push(f64::NEG_INFINITY);
            }
        }
    }
    let best = Threshold::from_terms(&terms);
    Ok(Necessity {
        value: best.value,
        argmax_j: best.argmax_j,
        infinite_j,
    })
}

/// Maximises a concave function on `[lo, hi]`: a uniform grid locates the
/// peak, then golden-section search refines it inside the neighbouring grid
/// cells.
pub fn maximize_concave(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let step = (hi - lo) / (RHO_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..RHO_GRID_POINTS).map(|i| f(lo + i as f64 * step)).collect();
    let (best_i, best_v) = argmax(&grid);
    let mut best = (lo + best_i as f64 * step, best_v);

    let mut a = lo + best_i.saturating_sub(1) as f64 * step;
    let mut b = (lo + (best_i + 1) as f64 * step).min(hi);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// One summand of the error-probability bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeTerm {
    pub j: usize,
    /// The `n` of `E0(rho, 1, n)`.
    pub n_power: usize,
    /// Log-count charged per unit `rho`.
    pub ln_count: f64,
    pub rho_star: f64,
    /// `max_rho F(rho)`, never negative.
    pub exponent: f64,
    /// `exp(-M exponent)`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeBound {
    pub m_tests: usize,
    /// Sum of the terms, clipped to `[0, 1]`.
    pub bound: f64,
    pub terms: Vec<PeTerm>,
}

/// Optimised upper bound on the error probability of the likelihood-sort
/// (`K = 1`) or multi-stage decoder with `m_tests` tests.
pub fn pe_upper(config: &ProblemConfig, design: &DesignParams, noise: &NoiseParams, m_tests: usize) -> Result<PeBound> {
    config.validate()?;
    if m_tests == 0 {
        return Err(domain("M", 0.0, "M >= 1"));
    }
    let channel = ChannelSpec::new(config.k(), *design, *noise)?;
    let summands: Vec<(usize, usize, f64)> = if config.k() == 1 {
        let (n, l) = (config.n() as i64, config.l() as i64);
        vec![(1, (n - l) as usize, ln_choose(n - 1, l - 1))]
    } else {
        multistage_terms(config)?
            .into_iter()
            .map(|t| (t.j, t.l_j, t.ln_c2))
            .collect()
    };
    let m = m_tests as f64;
    let terms: Vec<PeTerm> = summands
        .into_iter()
        .map(|(j, n_power, ln_count)| {
            let objective = |rho: f64| e0_general(&channel, rho, 1, n_power).unwrap().value - rho * ln_count / m;
            let (rho, value) = maximize_concave(objective, 0.0, 1.0, RHO_TOLERANCE);
            let (rho_star, exponent) = if value > 0.0 { (rho, value) } else { (0.0, 0.0) };
            PeTerm {
                j,
                n_power,
                ln_count,
                rho_star,
                exponent,
                value: (-m * exponent).exp(),
            }
        })
        .collect();
    let bound = terms.iter().map(|t| t.value).sum::<f64>().clamp(0.0, 1.0);
    Ok(PeBound { m_tests, bound, terms })
}

/// Closed-form upper estimate of `Gamma_u2`, valid when `L` is a multiple of
/// `K`, `N - K > 4`, `L >= K` and `2 <= L - 1 <= N - K - 2`.
pub fn gamma_mu(config: &ProblemConfig) -> Result<f64> {
    config.validate()?;
    let (k, l, inactive) = (config.k(), config.l(), config.n_inactive());
    if l % k != 0 {
        return Err(Error::Precondition(format!("L = {l} must be a multiple of K = {k}")));
    }
    if inactive <= 4 {
        return Err(Error::Precondition(format!("N - K = {inactive} must exceed 4")));
    }
    if l < k {
        return Err(Error::Precondition(format!("L = {l} must be at least K = {k}")));
    }
    if l < 3 || l + 1 > inactive {
        return Err(Error::Precondition(format!(
            "need 2 <= L - 1 <= N - K - 2, got L - 1 = {} and N - K - 2 = {}",
            l - 1,
            inactive as i64 - 2
        )));
    }
    let alpha = config.alpha();
    let inactive = inactive as f64;
    let block_term = if k == 1 {
        0.0
    } else {
        let n_b = inactive / (k - 1) as f64;
        (std::f64::consts::E * alpha * n_b).ln() / n_b
    };
    let k = k as f64;
    let count_term = (k.ln() + k) / inactive;
    Ok(hb(alpha) / (1.0 - alpha) + (block_term + count_term) / (1.0 - alpha))
}

/// Scaling parameters of the linear-`K` regime: `K = beta N`,
/// `L = gamma (N - K)`, `K >= K0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    pub beta: f64,
    pub gamma_frac: f64,
    pub k0: usize,
}

impl AsymptoticParams {
    pub fn new(beta: f64, gamma_frac: f64, k0: usize) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(domain("beta", beta, "(0, 1)"));
        }
        if !(gamma_frac > 0.0 && gamma_frac < 1.0) {
            return Err(domain("gamma", gamma_frac, "(0, 1)"));
        }
        if k0 < 2 {
            return Err(domain("K0", k0 as f64, "K0 >= 2"));
        }
        Ok(Self { beta, gamma_frac, k0 })
    }

    /// `C3 = -ln[1 - (1 - 1/K0)^K0 + e^-2]`.
    pub fn c3(&self) -> f64 {
        let k0 = self.k0 as f64;
        -(1.0 - (1.0 - 1.0 / k0).powf(k0) + (-2.0f64).exp()).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearKBound {
    pub threshold: f64,
    /// Large-`N` limit of the closed-form upper estimate of the threshold.
    pub asymptotic_mu: f64,
    pub c3: f64,
    pub c3_prime: f64,
}

/// Noiseless sufficiency with `p = 1/K` when `K` grows linearly with `N`.
pub fn suff_linear_k(config: &ProblemConfig, asym: &AsymptoticParams) -> Result<LinearKBound> {
    config.validate()?;
    let (n, k, l) = (config.n(), config.k(), config.l());
    if l + 2 * k >= n {
        return Err(Error::Precondition(format!(
            "need L < N - 2K, got L = {l} and N - 2K = {}",
            n as i64 - 2 * k as i64
        )));
    }
    if k < asym.k0 {
        return Err(Error::Precondition(format!(
            "need K >= K0, got K = {k} and K0 = {}",
            asym.k0
        )));
    }
    let terms = multistage_terms(config)?;
    let l_1 = terms[0].l_j as f64;
    let worst = terms.iter().map(|t| t.ln_c2 / l_1).fold(f64::NEG_INFINITY, f64::max);
    let c3 = asym.c3();
    let kf = k as f64;
    let threshold = kf * worst / c3 + kf.ln() / c3;

    let (beta, gamma) = (asym.beta, asym.gamma_frac);
    let c3_prime = (1.0 + beta / ((1.0 - beta) * (1.0 - gamma))) / c3;
    let asymptotic_mu = kf / c3 * hb(gamma) / (1.0 - gamma)
        + kf / (c3 * (1.0 - gamma)) * (beta / (1.0 - beta) * ((gamma * (1.0 - beta) / beta).ln() + 2.0))
        + c3_prime * kf.ln();
    Ok(LinearKBound {
        threshold,
        asymptotic_mu,
        c3,
        c3_prime,
    })
}

/// `gamma(alpha) = alpha / (1 - alpha) ln(1 / alpha)` on `(0, 1)`.
pub fn gap_function(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    Ok(alpha / (1.0 - alpha) * (1.0 / alpha).ln())
}

/// Every analytical quantity for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub config: ProblemConfig,
    pub design: DesignParams,
    pub noise: NoiseParams,
    /// `I^(1), ..., I^(K)` in nats.
    pub mutual_info: Vec<f64>,
    pub gamma_ud: f64,
    pub gamma_u1: f64,
    pub gamma_u2: Option<f64>,
    pub gamma_u2_argmax_j: Option<usize>,
    pub gamma_mu: Option<f64>,
    pub sufficiency: Sufficiency,
    pub necessity: Necessity,
    pub suff_linear_k: Option<LinearKBound>,
    /// At the configuration's `M`, when `M >= 1` and the multi-stage
    /// analysis applies.
    pub pe_bound: Option<PeBound>,
    pub alpha: f64,
}

impl BoundReport {
    pub fn compute(config: &ProblemConfig, design: &DesignParams, noise: &NoiseParams) -> Result<Self> {
        let infos = channel_infos(config, design, noise)?;
        let sufficiency = sufficiency_with(config, &infos)?;
        let necessity = necessity_with(config, &infos)?;
        let (l, inactive, k) = (config.l() as i64, config.n_inactive() as i64, config.k() as i64);
        let gamma_ud = ln_choose(inactive, 1) + ln_choose(k, 1);
        let gamma_u1 = gamma_ud + ln_choose(inactive - 1, l - 1) - ln_choose(inactive, l);
        let factors = gamma_factors(config).ok();
        let pe_bound = if config.m() >= 1 {
            pe_upper(config, design, noise, config.m()).ok()
        } else {
            None
        };
        Ok(Self {
            config: *config,
            design: *design,
            noise: *noise,
            mutual_info: infos,
            gamma_ud,
            gamma_u1,
            gamma_u2: factors.as_ref().map(|f| f.gamma_u2),
            gamma_u2_argmax_j: factors.as_ref().map(|f| f.gamma_u2_argmax_j),
            gamma_mu: gamma_mu(config).ok(),
            sufficiency,
            necessity,
            suff_linear_k: None,
            pe_bound,
            alpha: config.alpha(),
        })
    }

    /// Adds the linear-`K` regime threshold; fails if its preconditions
    /// (noiseless, `p = 1/K`, `L < N - 2K`, `K >= K0`) do not hold.
    pub fn with_linear_k(mut self, asym: &AsymptoticParams) -> Result<Self> {
        if !self.noise.is_noiseless() {
            return Err(Error::Precondition(
                "linear-K bound requires the noiseless channel".into(),
            ));
        }
        let expected = 1.0 / self.config.k() as f64;
        if (self.design.p() - expected).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "linear-K bound requires p = 1/K = {expected}"
            )));
        }
        self.suff_linear_k = Some(suff_linear_k(&self.config, asym)?);
        Ok(self)
    }

    pub fn csv_row(&self) -> BoundCsvRow {
        BoundCsvRow {
            n: self.config.n(),
            k: self.config.k(),
            l: self.config.l(),
            p: self.design.p(),
            u: self.noise.u(),
            q: self.noise.q(),
            i1: self.mutual_info[0],
            gamma_ud: self.gamma_ud,
            gamma_u1: self.gamma_u1,
            gamma_u2: self.gamma_u2,
            gamma_mu: self.gamma_mu,
            suff_scheme1: self.sufficiency.scheme1.value,
            suff_k1: self.sufficiency.k1.map(|t| t.value),
            suff_multistage: self.sufficiency.multistage.map(|t| t.value),
            suff_alt_j: self.sufficiency.alt_j.map(|t| t.value),
            necessity: self.necessity.value,
            alpha: self.alpha,
        }
    }
}

/// Flat CSV form of a [`BoundReport`]; undefined quantities are empty cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCsvRow {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub p: f64,
    pub u: f64,
    pub q: f64,
    pub i1: f64,
    pub gamma_ud: f64,
    pub gamma_u1: f64,
    pub gamma_u2: Option<f64>,
    pub gamma_mu: Option<f64>,
    pub suff_scheme1: f64,
    pub suff_k1: Option<f64>,
    pub suff_multistage: Option<f64>,
    pub suff_alt_j: Option<f64>,
    pub necessity: f64,
    pub alpha: f64,
}

pub const BOUND_CSV_COLUMNS: [&str; 17] = [
    "n",
    "k",
    "l",
    "p",
    "u",
    "q",
    "i1",
    "gamma_ud",
    "gamma_u1",
    "gamma_u2",
    "gamma_mu",
    "suff_scheme1",
    "suff_k1",
    "suff_multistage",
    "suff_alt_j",
    "necessity",
    "alpha",
];
