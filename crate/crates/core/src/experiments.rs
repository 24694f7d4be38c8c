//! Monte Carlo estimates of the decoding error probability, parameter sweeps,
//! and the data behind the factor comparison figure and the order tables.
//!
//! Every row type is flat so the same field names appear in the CSV columns
//! and in the JSON mirror.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{gamma_factors, gamma_l, necessity, pe_upper, sufficiency, BoundCsvRow, BOUND_CSV_COLUMNS};
use crate::decode::{check_guardrail, decode, Scheme};
use crate::error::{Error, Result};
use crate::info::hb;
use crate::model::{derive_seed, generate_outcomes, sample_instance, DesignParams, NoiseParams, ProblemConfig};
use crate::par::{try_map_collect, Execution};

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

pub const DEFAULT_TRIALS: usize = 10_000;

/// Wilson score interval for `errors` successes out of `n` at 95%.
pub fn wilson_interval(errors: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (n, z2) = (n as f64, WILSON_Z * WILSON_Z);
    let p = errors as f64 / n;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = WILSON_Z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // Clamp so the interval always contains p_hat despite rounding.
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

/// Seeds of trial `t`: (instance, outcomes, decoder).
pub fn trial_seeds(master_seed: u64, trial: u64) -> (u64, u64, u64) {
    (
        derive_seed(master_seed, 3 * trial),
        derive_seed(master_seed, 3 * trial + 1),
        derive_seed(master_seed, 3 * trial + 2),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub exec: Execution,
    /// Bypass the subset-enumeration guardrail.
    pub force: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialBatch {
    pub config: ProblemConfig,
    pub design: DesignParams,
    pub noise: NoiseParams,
    pub scheme: Scheme,
    pub m_tests: usize,
    pub n_trials: usize,
    pub errors_observed: usize,
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Optimised analytical bound at `m_tests`, for the sort and multi-stage
    /// decoders.
    pub pe_bound: Option<f64>,
    pub master_seed: u64,
    /// Not serialised and ignored by `==`, so repeated runs compare equal.
    #[serde(skip)]
    pub wall_time_ms: u64,
}

impl PartialEq for TrialBatch {
    fn eq(&self, other: &Self) -> bool {
        self.row() == other.row()
            && self.config == other.config
            && self.design == other.design
            && self.noise == other.noise
    }
}

impl TrialBatch {
    /// Half the width of the Wilson interval.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.wilson_high - self.wilson_low)
    }

    pub fn row(&self) -> TrialRow {
        TrialRow {
            n: self.config.n(),
            k: self.config.k(),
            l: self.config.l(),
            m: self.m_tests,
            p: self.design.p(),
            u: self.noise.u(),
            q: self.noise.q(),
            scheme: self.scheme,
            n_trials: self.n_trials,
            errors_observed: self.errors_observed,
            p_hat: self.p_hat,
            wilson_low: self.wilson_low,
            wilson_high: self.wilson_high,
            pe_bound: self.pe_bound,
            master_seed: self.master_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub p: f64,
    pub u: f64,
    pub q: f64,
    pub scheme: Scheme,
    pub n_trials: usize,
    pub errors_observed: usize,
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub pe_bound: Option<f64>,
    pub master_seed: u64,
}

pub fn estimate_pe(
    config: &ProblemConfig,
    design: &DesignParams,
    noise: &NoiseParams,
    scheme: Scheme,
    m_tests: usize,
    n_trials: usize,
    master_seed: u64,
) -> Result<TrialBatch> {
    estimate_pe_with(
        config,
        design,
        noise,
        scheme,
        m_tests,
        n_trials,
        master_seed,
        RunOptions::default(),
    )
}

/// Runs `n_trials` independent (instance, outcomes, decode) trials.
#[allow(clippy::too_many_arguments)]
pub fn estimate_pe_with(
    config: &ProblemConfig,
    design: &DesignParams,
    noise: &NoiseParams,
    scheme: Scheme,
    m_tests: usize,
    n_trials: usize,
    master_seed: u64,
    options: RunOptions,
) -> Result<TrialBatch> {
    let config = config.with_tests(m_tests);
    config.validate()?;
    design.validate()?;
    noise.validate()?;
    if scheme == Scheme::K1Sort && config.k() != 1 {
        return Err(Error::WrongK(config.k() as u64));
    }
    check_guardrail(scheme, &config, options.force)?;

    let start = Instant::now();
    let trials: Vec<u64> = (0..n_trials as u64).collect();
    let flags = try_map_collect(options.exec, trials, |t| {
        let (s_inst, s_out, s_dec) = trial_seeds(master_seed, t);
        let instance = sample_instance(&config, design, s_inst)?;
        let outcomes = generate_outcomes(&instance, noise, s_out);
        decode(scheme, &instance, &outcomes, &config, noise, s_dec, true).map(|r| r.error_flag)
    })?;
    let errors_observed = flags.into_iter().filter(|&e| e).count();

    let pe_bound = match scheme {
        Scheme::Scheme1 => None,
        _ if m_tests == 0 => None,
        _ => pe_upper(&config, design, noise, m_tests).ok().map(|b| b.bound),
    };
    let (wilson_low, wilson_high) = wilson_interval(errors_observed, n_trials);
    Ok(TrialBatch {
        config,
        design: *design,
        noise: *noise,
        scheme,
        m_tests,
        n_trials,
        errors_observed,
        p_hat: if n_trials == 0 {
            0.0
        } else {
            errors_observed as f64 / n_trials as f64
        },
        wilson_low,
        wilson_high,
        pe_bound,
        master_seed,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// One batch per entry of `m_list`, in the given order. All batches share
/// `master_seed`, so the designs for smaller `M` are prefixes of those for
/// larger `M`.
#[allow(clippy::too_many_arguments)]
pub fn sweep_m(
    config: &ProblemConfig,
    design: &DesignParams,
    noise: &NoiseParams,
    scheme: Scheme,
    m_list: &[usize],
    n_trials: usize,
    master_seed: u64,
    options: RunOptions,
) -> Result<Vec<TrialBatch>> {
    m_list
        .iter()
        .map(|&m| estimate_pe_with(config, design, noise, scheme, m, n_trials, master_seed, options))
        .collect()
}

/// Factors on the `M I^(1)` scale for one `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRow {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub alpha: f64,
    /// `None` when the multi-stage analysis does not apply (`L_1 <= 0`).
    pub gamma_u2: Option<f64>,
    pub gamma_u1: f64,
    pub gamma_ud: f64,
    pub gamma_l1: f64,
}

pub const FACTOR_COLUMNS: [&str; 8] = ["n", "k", "l", "alpha", "gamma_u2", "gamma_u1", "gamma_ud", "gamma_l1"];

/// `Gamma_u2`, `Gamma_u1`, `Gamma_ud` and `Gamma_l(j = 1)` for each `L`.
pub fn compare_factors(n: usize, k: usize, l_list: &[usize]) -> Result<Vec<FactorRow>> {
    l_list
        .iter()
        .map(|&l| {
            let config = ProblemConfig::new(n, k, l, 0)?;
            let (l_i, inactive, k_f) = (l as u64, config.n_inactive() as f64, k as f64);
            let gamma_ud = inactive.ln() + k_f.ln();
            let gamma_u1 = gamma_ud + crate::bounds::log_binomial(config.n_inactive() as u64 - 1, l_i - 1)?
                - crate::bounds::log_binomial(config.n_inactive() as u64, l_i)?;
            Ok(FactorRow {
                n,
                k,
                l,
                alpha: config.alpha(),
                gamma_u2: gamma_factors(&config).ok().map(|f| f.gamma_u2),
                gamma_u1,
                gamma_ud,
                gamma_l1: gamma_l(&config, 1)?.to_f64(),
            })
        })
        .collect()
}

/// Noise settings of the order tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum NoiseCase {
    Noiseless,
    Dilution { u: f64 },
    Additive { q: f64 },
}

impl NoiseCase {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Noiseless => "noiseless",
            Self::Dilution { .. } => "dilution",
            Self::Additive { .. } => "additive",
        }
    }

    pub fn noise(&self) -> Result<NoiseParams> {
        match *self {
            Self::Noiseless => Ok(NoiseParams::NOISELESS),
            Self::Dilution { u } => {
                if u > 0.5 {
                    return Err(Error::UnsupportedChannel(format!(
                        "order tables cover dilution u <= 0.5, got {u}"
                    )));
                }
                NoiseParams::dilution(u)
            }
            Self::Additive { q } => {
                if q <= 0.0 {
                    return Err(Error::UnsupportedChannel("additive case needs q > 0".into()));
                }
                NoiseParams::additive(q)
            }
        }
    }

    /// Factor multiplying `K / ln K` in the predicted order.
    fn order_scale(&self, k: usize) -> f64 {
        let ln_k = (k as f64).ln();
        match *self {
            Self::Noiseless => 1.0,
            Self::Dilution { u } => 1.0 / (1.0 - u),
            Self::Additive { q } => ln_k / (1.0 / q).ln(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub case: String,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub alpha: f64,
    pub u: f64,
    pub q: f64,
    pub suff_computed: f64,
    pub suff_predicted: f64,
    pub suff_ratio: f64,
    pub nec_computed: f64,
    pub nec_predicted: f64,
    pub nec_ratio: f64,
}

pub const ORDER_COLUMNS: [&str; 13] = [
    "case",
    "n",
    "k",
    "l",
    "alpha",
    "u",
    "q",
    "suff_computed",
    "suff_predicted",
    "suff_ratio",
    "nec_computed",
    "nec_predicted",
    "nec_ratio",
];

/// `L` realising the fraction `alpha = (L - 1) / (N - K)` as closely as
/// possible.
pub fn l_for_alpha(n: usize, k: usize, alpha: f64) -> usize {
    let l = (alpha * (n - k) as f64).round() as usize + 1;
    l.clamp(1, n - k)
}

/// Computed multi-stage sufficiency and necessity thresholds next to their
/// predicted orders, for every (K, alpha, case) with `N = n_per_k * K` and
/// `p = 1/K`.
pub fn order_tables(
    k_list: &[usize],
    alpha_list: &[f64],
    noise_cases: &[NoiseCase],
    n_per_k: usize,
) -> Result<Vec<OrderRow>> {
    let mut rows = Vec::new();
    for case in noise_cases {
        let noise = case.noise()?;
        for &k in k_list {
            let n = n_per_k * k;
            for &alpha_target in alpha_list {
                let l = l_for_alpha(n, k, alpha_target);
                let config = ProblemConfig::new(n, k, l, 0)?;
                let design = DesignParams::default_for(k);
                let suff = sufficiency(&config, &design, &noise)?;
                let suff_computed = suff
                    .multistage
                    .ok_or_else(|| Error::Precondition(format!("multi-stage bound undefined at N={n}, K={k}, L={l}")))?
                    .value;
                let nec_computed = necessity(&config, &design, &noise)?.value;
                let alpha = config.alpha();
                let base = k as f64 / (k as f64).ln() * case.order_scale(k);
                let suff_predicted = base * hb(alpha) / (1.0 - alpha);
                let nec_predicted = base * (1.0 / (1.0 - alpha)).ln();
                rows.push(OrderRow {
                    case: case.name().to_string(),
                    n,
                    k,
                    l,
                    alpha,
                    u: noise.u(),
                    q: noise.q(),
                    suff_computed,
                    suff_predicted,
                    suff_ratio: suff_computed / suff_predicted,
                    nec_computed,
                    nec_predicted,
                    nec_ratio: nec_computed / nec_predicted,
                });
            }
        }
    }
    Ok(rows)
}

pub const TRIAL_COLUMNS: [&str; 15] = [
    "n",
    "k",
    "l",
    "m",
    "p",
    "u",
    "q",
    "scheme",
    "n_trials",
    "errors_observed",
    "p_hat",
    "wilson_low",
    "wilson_high",
    "pe_bound",
    "master_seed",
];

/// A flat record with a fixed column list.
pub trait Record: Serialize {
    const COLUMNS: &'static [&'static str];
}

impl Record for TrialRow {
    const COLUMNS: &'static [&'static str] = &TRIAL_COLUMNS;
}

impl Record for FactorRow {
    const COLUMNS: &'static [&'static str] = &FACTOR_COLUMNS;
}

impl Record for OrderRow {
    const COLUMNS: &'static [&'static str] = &ORDER_COLUMNS;
}

impl Record for BoundCsvRow {
    const COLUMNS: &'static [&'static str] = &BOUND_CSV_COLUMNS;
}

/// Run metadata: tool version plus every resolved parameter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Meta(pub Vec<(String, String)>);

impl Meta {
    pub fn new() -> Self {
        let mut meta = Self::default();
        meta.push("tool", env!("CARGO_PKG_NAME"));
        meta.push("version", env!("CARGO_PKG_VERSION"));
        meta
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    fn comment_line(&self) -> String {
        let fields: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# {}\n", fields.join(" "))
    }

    fn to_json_map(&self) -> serde_json::Map<String, serde_json::Value> {
        self.0
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect()
    }
}

fn output_err(e: impl std::fmt::Display) -> Error {
    Error::Output(e.to_string())
}

/// `# key=value ...` metadata line, mandatory header row, one row per record.
pub fn write_csv<W: Write, R: Record>(mut out: W, meta: &Meta, rows: &[R]) -> Result<()> {
    out.write_all(meta.comment_line().as_bytes()).map_err(output_err)?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(R::COLUMNS).map_err(output_err)?;
    for row in rows {
        writer.serialize(row).map_err(output_err)?;
    }
    writer.flush().map_err(output_err)
}

/// `{"meta": {...}, "rows": [...]}` plus optional extra top-level entries.
pub fn write_json<W: Write, R: Record>(
    mut out: W,
    meta: &Meta,
    rows: &[R],
    extra: Option<(&str, serde_json::Value)>,
) -> Result<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("meta".into(), serde_json::Value::Object(meta.to_json_map()));
    doc.insert("rows".into(), serde_json::to_value(rows).map_err(output_err)?);
    if let Some((key, value)) = extra {
        doc.insert(key.into(), value);
    }
    serde_json::to_writer_pretty(&mut out, &doc).map_err(output_err)?;
    out.write_all(b"\n").map_err(output_err)
}
