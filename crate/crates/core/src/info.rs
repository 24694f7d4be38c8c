//! Information-theoretic primitives of the boolean-OR group-testing channel.
//!
//! Every probability here depends on a pattern of inputs only through its
//! Hamming weight, so sums over `2^K` input patterns collapse to binomially
//! weighted sums over weights. Costs are `O(K^2)` at worst.

use serde::{Deserialize, Serialize};

use crate::bounds::log_binomial;
use crate::error::{domain, Error, Result};
use crate::model::{row_null_probability, DesignParams, NoiseParams, OutcomeVector, TestMatrix};

/// The group-testing channel `P(Y | X_S)` for `K` defectives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub k_defective: usize,
    pub design: DesignParams,
    pub noise: NoiseParams,
}

impl ChannelSpec {
    pub fn new(k_defective: usize, design: DesignParams, noise: NoiseParams) -> Result<Self> {
        let channel = Self {
            k_defective,
            design,
            noise,
        };
        channel.validate()?;
        Ok(channel)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_defective == 0 {
            return Err(Error::InvalidConfig("K must be at least 1".into()));
        }
        self.design.validate()?;
        self.noise.validate()
    }

    fn check_split(&self, j_split: usize) -> Result<()> {
        if j_split == 0 || j_split > self.k_defective {
            return Err(domain("j", j_split as f64, "[1, K]"));
        }
        Ok(())
    }

    /// `Pr(y = 0)` when `m` of the active inputs are ones.
    fn null_prob(&self, m: usize) -> f64 {
        row_null_probability(m, &self.noise)
    }
}

/// One evaluation of `E0(rho, j, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentEval {
    pub rho: f64,
    pub j_split: usize,
    pub n_power: usize,
    /// Nats.
    pub value: f64,
}

/// `H_b(p)` in nats with `0 ln 0 = 0`.
pub fn binary_entropy(prob: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(domain("prob", prob, "[0, 1]"));
    }
    Ok(hb(prob))
}

pub(crate) fn hb(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    term(p) + term(1.0 - p)
}

/// Binomial(n, p) log-probabilities for weights `0..=n`.
pub(crate) fn binomial_log_pmf(n: usize, p: f64) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    (0..=n)
        .map(|i| log_binomial(n as u64, i as u64).unwrap() + i as f64 * lp + (n - i) as f64 * lq)
        .collect()
}

fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    binomial_log_pmf(n, p).into_iter().map(f64::exp).collect()
}

/// `ln sum_i exp(x_i)`, returning `-inf` for an empty or all `-inf` input.
pub(crate) fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Per-weight log-likelihood table: `ln P(y | m ones)` for `m in 0..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLikTable {
    ln_null: Vec<f64>,
    ln_positive: Vec<f64>,
}

impl LogLikTable {
    pub fn new(k: usize, noise: &NoiseParams) -> Self {
        let (ln_null, ln_positive) = (0..=k)
            .map(|m| {
                let p0 = row_null_probability(m, noise);
                (p0.ln(), (-p0).ln_1p())
            })
            .unzip();
        Self { ln_null, ln_positive }
    }

    pub fn k(&self) -> usize {
        self.ln_null.len() - 1
    }

    #[inline]
    pub fn ln_prob(&self, outcome: bool, ones: usize) -> f64 {
        if outcome {
            self.ln_positive[ones]
        } else {
            self.ln_null[ones]
        }
    }
}

/// Scores candidate column subsets against a fixed outcome vector.
///
/// Per-row ones counts are accumulated with bit-sliced adders over 64-row
/// words, so a score costs `O(M/64 * k log k)` word operations. Two subsets
/// with the same table of (count, outcome) frequencies receive bitwise
/// identical scores.
#[derive(Debug, Clone)]
pub struct SubsetScorer<'a> {
    matrix: &'a TestMatrix,
    table: LogLikTable,
    outcome_words: Vec<u64>,
}

impl<'a> SubsetScorer<'a> {
    pub fn new(
        matrix: &'a TestMatrix,
        outcomes: &OutcomeVector,
        subset_size: usize,
        noise: &NoiseParams,
    ) -> Result<Self> {
        if outcomes.len() != matrix.rows() {
            return Err(Error::Dimension(format!(
                "{} outcomes for a matrix with {} rows",
                outcomes.len(),
                matrix.rows()
            )));
        }
        if subset_size == 0 {
            return Err(Error::Dimension("subset must hold at least one column".into()));
        }
        let mut outcome_words = vec![0u64; matrix.rows().div_ceil(64)];
        for (r, &y) in outcomes.outcomes.iter().enumerate() {
            if y {
                outcome_words[r / 64] |= 1 << (r % 64);
            }
        }
        Ok(Self {
            matrix,
            table: LogLikTable::new(subset_size, noise),
            outcome_words,
        })
    }

    pub fn subset_size(&self) -> usize {
        self.table.k()
    }

    /// `sum_rows ln P(y_row | ones of the row restricted to columns)`.
    ///
    /// `columns.len()` must equal [`Self::subset_size`] and every index must
    /// be a valid column.
    pub fn score(&self, columns: &[usize]) -> f64 {
        self.score_key(columns).loglik()
    }

    /// The log-likelihood split into impossible rows and the finite part of
    /// the remaining rows; see [`SubsetScore`].
    pub fn score_key(&self, columns: &[usize]) -> SubsetScore {
        let k = self.table.k();
        debug_assert_eq!(columns.len(), k);
        if k < 64 {
            let mut null_counts = [0u32; 64];
            let mut pos_counts = [0u32; 64];
            self.tally(columns, &mut null_counts[..=k], &mut pos_counts[..=k]);
            self.total(&null_counts[..=k], &pos_counts[..=k])
        } else {
            let mut null_counts = vec![0u32; k + 1];
            let mut pos_counts = vec![0u32; k + 1];
            self.tally(columns, &mut null_counts, &mut pos_counts);
            self.total(&null_counts, &pos_counts)
        }
    }

    /// Counts rows by (ones among `columns`, outcome).
    fn tally(&self, columns: &[usize], null_counts: &mut [u32], pos_counts: &mut [u32]) {
        let k = columns.len();
        let planes_len = (usize::BITS - k.leading_zeros()) as usize;
        let mut planes = [0u64; 64];
        let planes = &mut planes[..planes_len];
        let rows = self.matrix.rows();
        for (w, &y) in self.outcome_words.iter().enumerate() {
            let valid = if (w + 1) * 64 <= rows {
                u64::MAX
            } else {
                (1u64 << (rows % 64)) - 1
            };
            planes.iter_mut().for_each(|p| *p = 0);
            for &c in columns {
                let mut carry = self.matrix.column_words(c)[w];
                for plane in planes.iter_mut() {
                    if carry == 0 {
                        break;
                    }
                    let next = *plane & carry;
                    *plane ^= carry;
                    carry = next;
                }
            }
            for m in 0..=k {
                let mut mask = valid;
                for (b, plane) in planes.iter().enumerate() {
                    mask &= if (m >> b) & 1 == 1 { *plane } else { !*plane };
                }
                if mask != 0 {
                    pos_counts[m] += (mask & y).count_ones();
                    null_counts[m] += (mask & !y).count_ones();
                }
            }
        }
    }

    fn total(&self, null_counts: &[u32], pos_counts: &[u32]) -> SubsetScore {
        let mut score = SubsetScore {
            impossible_null: 0,
            impossible_positive: 0,
            finite: 0.0,
        };
        let tables = [
            (null_counts, &self.table.ln_null),
            (pos_counts, &self.table.ln_positive),
        ];
        for (outcome, (counts, ln_table)) in tables.into_iter().enumerate() {
            for (ones, (&count, &ln_p)) in counts.iter().zip(ln_table.iter()).enumerate() {
                if count == 0 {
                    continue;
                }
                if ln_p == f64::NEG_INFINITY {
                    if outcome == 0 {
                        score.impossible_null += count * ones as u32;
                    } else {
                        score.impossible_positive += count;
                    }
                } else {
                    score.finite += count as f64 * ln_p;
                }
            }
        }
        score
    }
}

/// Subset log-likelihood with its `-inf` part kept apart.
///
/// Orders like the log-likelihood. Impossible candidates, which all have
/// likelihood zero, are further ranked by the small-noise limit of the
/// likelihood with `u, q -> 0` and `q >> u`: a negative test holding `m`
/// candidates costs `m ln(1/u)`, a positive test holding none costs
/// `ln(1/q)`. So candidates are ranked by their total membership in tests
/// that should not be negative, then by impossible positive tests, then by
/// the likelihood of the possible rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetScore {
    /// Candidate memberships in negative tests that cannot be negative,
    /// i.e. such tests weighted by their number of candidates.
    pub impossible_null: u32,
    /// Positive outcomes under a pool that cannot test positive.
    pub impossible_positive: u32,
    /// `sum` of `ln P` over the possible rows.
    pub finite: f64,
}

impl SubsetScore {
    pub fn is_impossible(&self) -> bool {
        self.impossible_null > 0 || self.impossible_positive > 0
    }

    pub fn loglik(&self) -> f64 {
        if self.is_impossible() {
            f64::NEG_INFINITY
        } else {
            self.finite
        }
    }

    /// Total order; smaller means less likely.
    pub fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .impossible_null
            .cmp(&self.impossible_null)
            .then(other.impossible_positive.cmp(&self.impossible_positive))
            .then(self.finite.total_cmp(&other.finite))
    }
}

/// Log-likelihood of the outcomes given that `columns` are the defective
/// items; `-inf` when some observed outcome is impossible under them.
pub fn loglik_subset(
    outcomes: &OutcomeVector,
    matrix: &TestMatrix,
    columns: &[usize],
    noise: &NoiseParams,
) -> Result<f64> {
    if let Some(&bad) = columns.iter().find(|&&c| c >= matrix.cols()) {
        return Err(Error::Dimension(format!(
            "column {bad} outside a matrix with {} columns",
            matrix.cols()
        )));
    }
    let scorer = SubsetScorer::new(matrix, outcomes, columns.len(), noise)?;
    Ok(scorer.score(columns))
}

/// `(H(Y | X_{S^(K-j)}), H(Y | X_S))` in nats.
pub fn cond_entropy_given_partial(channel: &ChannelSpec, j_split: usize) -> Result<(f64, f64)> {
    channel.validate()?;
    channel.check_split(j_split)?;
    let k = channel.k_defective;
    let p = channel.design.p();
    let u = channel.noise.u();
    // E[u^(ones among j unknown inputs)]
    let unknown_factor = (1.0 - p * (1.0 - u)).powi(j_split as i32);

    let known = k - j_split;
    let partial: f64 = binomial_pmf(known, p)
        .iter()
        .enumerate()
        .map(|(l, w)| w * hb(channel.null_prob(l) * unknown_factor))
        .sum();
    let full: f64 = binomial_pmf(k, p)
        .iter()
        .enumerate()
        .map(|(i, w)| w * hb(channel.null_prob(i)))
        .sum();
    Ok((partial, full))
}

/// `I^(j) = I(Y, X_{S^(K-j)}; X_{S^(j)})` in nats.
pub fn mutual_info_exact(channel: &ChannelSpec, j_split: usize) -> Result<f64> {
    let (partial, full) = cond_entropy_given_partial(channel, j_split)?;
    Ok((partial - full).max(0.0))
}

/// `I^(1), ..., I^(K)`.
pub fn mutual_info_all(channel: &ChannelSpec) -> Result<Vec<f64>> {
    (1..=channel.k_defective)
        .map(|j| mutual_info_exact(channel, j))
        .collect()
}

/// `E0(rho, j, n)` for `rho in [0, 1]`. Exactly zero at `rho = 0`.
pub fn e0_general(channel: &ChannelSpec, rho: f64, j_split: usize, n_power: usize) -> Result<ExponentEval> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(domain("rho", rho, "[0, 1]"));
    }
    let value = e0_analytic(channel, rho, j_split, n_power)?;
    Ok(ExponentEval {
        rho,
        j_split,
        n_power,
        value,
    })
}

/// The `E0` expression on its full analytic domain `1 + rho n > 0`.
///
/// Equal to [`e0_general`] on `[0, 1]`; the extension to small negative `rho`
/// exists for central-difference derivative checks at the origin.
pub fn e0_analytic(channel: &ChannelSpec, rho: f64, j_split: usize, n_power: usize) -> Result<f64> {
    channel.validate()?;
    channel.check_split(j_split)?;
    if n_power == 0 {
        return Err(domain("n", 0.0, "positive integers"));
    }
    let power = 1.0 + rho * n_power as f64;
    if power.is_nan() || power <= 0.0 || !rho.is_finite() || rho > 1.0 {
        return Err(domain("rho", rho, "1 + rho n > 0 and rho <= 1"));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let s = 1.0 / power;
    let k = channel.k_defective;
    let p = channel.design.p();
    let known_w = binomial_log_pmf(k - j_split, p);
    let unknown_w = binomial_log_pmf(j_split, p);

    let mut outer = Vec::with_capacity(2 * known_w.len());
    for (l, lw) in known_w.iter().enumerate() {
        for outcome in [false, true] {
            let inner = log_sum_exp(unknown_w.iter().enumerate().map(|(i, uw)| {
                let p0 = channel.null_prob(l + i);
                let ln_py = if outcome { (-p0).ln_1p() } else { p0.ln() };
                uw + s * ln_py
            }));
            outer.push(lw + inner / s);
        }
    }
    Ok(-log_sum_exp(outer))
}

/// Closed form of `E0(rho, 1, n)` on the noiseless channel.
pub fn e0_noiseless_closed(k_defective: usize, p: f64, rho: f64, n_power: usize) -> Result<f64> {
    if k_defective == 0 {
        return Err(domain("K", 0.0, "positive integers"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "(0, 1)"));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(domain("rho", rho, "[0, 1]"));
    }
    if n_power == 0 {
        return Err(domain("n", 0.0, "positive integers"));
    }
    let others_absent = (1.0 - p).powi(k_defective as i32 - 1);
    let power = 1.0 + rho * n_power as f64;
    let inner = (1.0 - p).powf(power) + p.powf(power);
    Ok(-(others_absent * inner + 1.0 - others_absent).ln())
}

/// Large-`K` approximation interval for `I^(j)`, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiApprox {
    pub lower: f64,
    pub upper: f64,
}

impl MiApprox {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }
}

/// Default allowance for the dropped `O(1/K^2)` remainder: `5 / K^2`.
pub fn default_slack(k: usize) -> f64 {
    5.0 / (k as f64 * k as f64)
}

/// Approximates `I^(j)` with `delta = pK`, dropping `O(1/K^2)` terms.
///
/// Additive-only channels (`u = 0`) give a point estimate (`lower == upper`);
/// dilution-only channels (`q = 0`, `u <= 0.5`) give a sandwich.
pub fn mutual_info_approx(channel: &ChannelSpec, j_split: usize) -> Result<MiApprox> {
    channel.validate()?;
    channel.check_split(j_split)?;
    let (u, q) = (channel.noise.u(), channel.noise.q());
    let k = channel.k_defective as f64;
    let delta = channel.design.p() * k;
    let frac = j_split as f64 / k;
    let u_ln_u = if u > 0.0 { u * u.ln() } else { 0.0 };
    let first = delta * (-delta * (1.0 - u)).exp() * (1.0 - q) * (u_ln_u + 1.0 - u) * frac;

    if u > 0.0 && q > 0.0 {
        return Err(Error::UnsupportedChannel(
            "approximation covers additive-only or dilution-only noise".into(),
        ));
    }
    if q > 0.0 {
        let second = delta * (-delta).exp() * ((1.0 / q).ln() - (1.0 - q)) * frac;
        let value = first + second;
        return Ok(MiApprox {
            lower: value,
            upper: value,
        });
    }
    if u > 0.5 {
        return Err(Error::UnsupportedChannel(format!(
            "dilution approximation requires u <= 0.5, got {u}"
        )));
    }
    let log_term = (1.0 - u) * (k / (j_split as f64 * delta * (1.0 - u))).ln();
    let second_lo = delta * (-delta).exp() * (log_term - u) * frac;
    let second_hi = delta * (-delta * (1.0 - u * u)).exp() * (log_term - u + u * u) * frac;
    Ok(MiApprox {
        lower: first + second_lo,
        upper: first + second_hi,
    })
}
