//! Decoders that return `L` items believed to be non-defective.
//!
//! Candidates are ranked by [`SubsetScore`]: a `-inf` log-likelihood compares
//! below every finite one, and among impossible candidates the one with more
//! impossible rows compares lower. Remaining ties go to the lexicographically
//! smallest index tuple, so every decoder is a deterministic function of
//! (matrix, outcomes, seed).

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::stage_count;
use crate::error::{Error, Result};
use crate::info::{SubsetScore, SubsetScorer};
use crate::model::{Instance, NoiseParams, OutcomeVector, ProblemConfig};

/// Largest number of subsets a single decode may score without `force`.
pub const SUBSET_GUARDRAIL: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Maximum-likelihood active set, then a random pick from its complement.
    Scheme1,
    /// Sort single items by likelihood; `K = 1` only.
    K1Sort,
    /// Greedy least-likely `K`-subsets over `ceil(L/K)` stages.
    Multistage,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Scheme1, Scheme::K1Sort, Scheme::Multistage];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Scheme1 => "scheme1",
            Self::K1Sort => "k1_sort",
            Self::Multistage => "multistage",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|scheme| scheme.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown scheme {s:?} (scheme1, k1_sort, multistage)")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub scheme: Scheme,
    pub selected_inactive: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimated_active: Option<Vec<usize>>,
    /// Whether `selected_inactive` contains a defective item.
    pub error_flag: bool,
    #[serde(rename = "stages", default, skip_serializing_if = "Option::is_none")]
    pub stage_trace: Option<Vec<Vec<usize>>>,
}

impl DecodeResult {
    fn new(scheme: Scheme, selected_inactive: Vec<usize>, instance: &Instance) -> Self {
        let error_flag = selected_inactive.iter().any(|&i| instance.is_defective(i));
        Self {
            scheme,
            selected_inactive,
            estimated_active: None,
            error_flag,
            stage_trace: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decode results always serialise")
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
fn binomial_saturating(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Number of candidate subsets one decode of `scheme` scores.
pub fn subsets_to_score(scheme: Scheme, config: &ProblemConfig) -> u128 {
    let (n, k) = (config.n(), config.k());
    match scheme {
        Scheme::Scheme1 => binomial_saturating(n, k),
        Scheme::K1Sort => n as u128,
        Scheme::Multistage => (0..stage_count(config))
            .map(|stage| binomial_saturating(n - stage * k, k))
            .fold(0u128, u128::saturating_add),
    }
}

pub fn check_guardrail(scheme: Scheme, config: &ProblemConfig, force: bool) -> Result<()> {
    let subsets = subsets_to_score(scheme, config);
    if subsets > SUBSET_GUARDRAIL && !force {
        return Err(Error::EnumerationTooLarge {
            subsets,
            limit: SUBSET_GUARDRAIL,
        });
    }
    Ok(())
}

fn check_view(instance: &Instance, outcomes: &OutcomeVector, config: &ProblemConfig) -> Result<()> {
    config.validate()?;
    if instance.matrix.cols() != config.n() {
        return Err(Error::Dimension(format!(
            "matrix has {} columns, configuration has N = {}",
            instance.matrix.cols(),
            config.n()
        )));
    }
    if instance.matrix.rows() != config.m() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows, configuration has M = {}",
            instance.matrix.rows(),
            config.m()
        )));
    }
    if instance.defective_set.len() != config.k() {
        return Err(Error::Dimension(format!(
            "{} defectives recorded, configuration has K = {}",
            instance.defective_set.len(),
            config.k()
        )));
    }
    if outcomes.len() != instance.matrix.rows() {
        return Err(Error::Dimension(format!(
            "{} outcomes for {} tests",
            outcomes.len(),
            instance.matrix.rows()
        )));
    }
    Ok(())
}

/// Scans all `k`-subsets of `pool` in lexicographic order and returns the
/// first one that no later subset beats under `better`.
fn best_subset(
    scorer: &SubsetScorer<'_>,
    pool: &[usize],
    k: usize,
    better: impl Fn(&SubsetScore, &SubsetScore) -> bool,
) -> (Vec<usize>, SubsetScore) {
    debug_assert!(k >= 1 && k <= pool.len());
    let n = pool.len();
    let mut pos: Vec<usize> = (0..k).collect();
    let mut columns: Vec<usize> = pos.iter().map(|&p| pool[p]).collect();
    let mut best = (columns.clone(), scorer.score_key(&columns));
    loop {
        // Advance to the next combination of positions.
        let Some(i) = (0..k).rev().find(|&i| pos[i] < n - k + i) else {
            return best;
        };
        pos[i] += 1;
        for t in i + 1..k {
            pos[t] = pos[t - 1] + 1;
        }
        for t in i..k {
            columns[t] = pool[pos[t]];
        }
        let score = scorer.score_key(&columns);
        if better(&score, &best.1) {
            best.0.copy_from_slice(&columns);
            best.1 = score;
        }
    }
}

/// Maximum-likelihood active set, then a uniformly random `L`-subset of its
/// complement drawn from `seed`. The selection is returned sorted.
pub fn decode_scheme1(
    instance: &Instance,
    outcomes: &OutcomeVector,
    config: &ProblemConfig,
    noise: &NoiseParams,
    seed: u64,
    force: bool,
) -> Result<DecodeResult> {
    check_view(instance, outcomes, config)?;
    check_guardrail(Scheme::Scheme1, config, force)?;
    let (n, k, l) = (config.n(), config.k(), config.l());
    let scorer = SubsetScorer::new(&instance.matrix, outcomes, k, noise)?;
    let pool: Vec<usize> = (0..n).collect();
    let (active, _) = best_subset(&scorer, &pool, k, |s, best| s.total_cmp(best).is_gt());

    let complement: Vec<usize> = (0..n).filter(|i| active.binary_search(i).is_err()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected: Vec<usize> = index::sample(&mut rng, complement.len(), l)
        .into_iter()
        .map(|i| complement[i])
        .collect();
    selected.sort_unstable();

    let mut result = DecodeResult::new(Scheme::Scheme1, selected, instance);
    result.estimated_active = Some(active);
    Ok(result)
}

/// `K = 1`: the `L` items with the smallest single-item log-likelihood, in
/// order of increasing likelihood (smaller index first on ties).
pub fn decode_scheme2_k1(
    instance: &Instance,
    outcomes: &OutcomeVector,
    config: &ProblemConfig,
    noise: &NoiseParams,
) -> Result<DecodeResult> {
    if config.k() != 1 {
        return Err(Error::WrongK(config.k() as u64));
    }
    check_view(instance, outcomes, config)?;
    let scorer = SubsetScorer::new(&instance.matrix, outcomes, 1, noise)?;
    let mut ranked: Vec<(SubsetScore, usize)> = (0..config.n()).map(|i| (scorer.score_key(&[i]), i)).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let selected = ranked.into_iter().take(config.l()).map(|(_, i)| i).collect();
    Ok(DecodeResult::new(Scheme::K1Sort, selected, instance))
}

/// Greedy multi-stage decoder: each of `ceil(L/K)` stages removes the
/// least-likely `K`-subset of the remaining pool. The first `L` collected
/// items are returned in collection order.
pub fn decode_scheme2_multistage(
    instance: &Instance,
    outcomes: &OutcomeVector,
    config: &ProblemConfig,
    noise: &NoiseParams,
    force: bool,
) -> Result<DecodeResult> {
    check_view(instance, outcomes, config)?;
    check_guardrail(Scheme::Multistage, config, force)?;
    let k = config.k();
    let scorer = SubsetScorer::new(&instance.matrix, outcomes, k, noise)?;
    let mut pool: Vec<usize> = (0..config.n()).collect();
    let mut stages = Vec::with_capacity(stage_count(config));
    for _ in 0..stage_count(config) {
        let (chosen, _) = best_subset(&scorer, &pool, k, |s, best| s.total_cmp(best).is_lt());
        pool.retain(|i| chosen.binary_search(i).is_err());
        stages.push(chosen);
    }
    let selected = stages.iter().flatten().copied().take(config.l()).collect();
    let mut result = DecodeResult::new(Scheme::Multistage, selected, instance);
    result.stage_trace = Some(stages);
    Ok(result)
}

/// Dispatches to the decoder for `scheme`; `seed` is only used by
/// [`Scheme::Scheme1`].
pub fn decode(
    scheme: Scheme,
    instance: &Instance,
    outcomes: &OutcomeVector,
    config: &ProblemConfig,
    noise: &NoiseParams,
    seed: u64,
    force: bool,
) -> Result<DecodeResult> {
    match scheme {
        Scheme::Scheme1 => decode_scheme1(instance, outcomes, config, noise, seed, force),
        Scheme::K1Sort => decode_scheme2_k1(instance, outcomes, config, noise),
        Scheme::Multistage => decode_scheme2_multistage(instance, outcomes, config, noise, force),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TestMatrix;

    fn instance(rows: &[&str], defective: &[usize]) -> Instance {
        let rows: Vec<Vec<bool>> = rows.iter().map(|r| r.bytes().map(|b| b == b'1').collect()).collect();
        Instance {
            matrix: TestMatrix::from_rows(&rows).unwrap(),
            defective_set: defective.to_vec(),
            seed: 0,
        }
    }

    fn outcomes(bits: &str) -> OutcomeVector {
        OutcomeVector {
            outcomes: bits.bytes().map(|b| b == b'1').collect(),
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for scheme in Scheme::ALL {
            assert_eq!(scheme.as_str().parse::<Scheme>().unwrap(), scheme);
            assert_eq!(serde_json::to_string(&scheme).unwrap(), format!("\"{scheme}\""));
        }
        assert!("ml".parse::<Scheme>().is_err());
    }

    #[test]
    fn saturating_binomials() {
        assert_eq!(binomial_saturating(40, 6), 3_838_380);
        assert_eq!(binomial_saturating(40, 7), 18_643_560);
        assert_eq!(binomial_saturating(5, 6), 0);
        assert_eq!(binomial_saturating(10_000, 5_000), u128::MAX);
    }

    #[test]
    fn guardrail_counts() {
        let c = ProblemConfig::new(40, 7, 10, 10).unwrap();
        assert!(matches!(
            check_guardrail(Scheme::Scheme1, &c, false),
            Err(Error::EnumerationTooLarge {
                subsets: 18_643_560,
                ..
            })
        ));
        assert!(check_guardrail(Scheme::Scheme1, &c, true).is_ok());
        let c = ProblemConfig::new(20, 2, 4, 10).unwrap();
        assert_eq!(subsets_to_score(Scheme::Multistage, &c), 190 + 153);
    }

    #[test]
    fn noiseless_k1_sort() {
        // Item 2 is defective; items 0 and 3 appear in the negative test and
        // cover neither positive one, item 1 misses one positive test.
        let inst = instance(&["1001", "0110", "0010"], &[2]);
        let y = outcomes("011");
        let c = ProblemConfig::new(4, 1, 2, 3).unwrap();
        let r = decode_scheme2_k1(&inst, &y, &c, &NoiseParams::NOISELESS).unwrap();
        assert_eq!(r.selected_inactive, vec![0, 3]);
        assert!(!r.error_flag);
        let c = ProblemConfig::new(4, 1, 3, 3).unwrap();
        let r = decode_scheme2_k1(&inst, &y, &c, &NoiseParams::NOISELESS).unwrap();
        assert_eq!(r.selected_inactive, vec![0, 3, 1]);
        let m = decode_scheme2_multistage(&inst, &y, &c, &NoiseParams::NOISELESS, false).unwrap();
        assert_eq!(m.selected_inactive, r.selected_inactive);
        assert_eq!(m.stage_trace.unwrap(), vec![vec![0], vec![3], vec![1]]);
    }

    #[test]
    fn negative_membership_outranks_uncovered_positives() {
        // Items 0 and 1 are each in one negative test and miss both positive
        // ones; item 2 is defective and item 3 is never tested, so it only
        // misses the positive tests.
        let inst = instance(&["1000", "0100", "0010", "0010"], &[2]);
        let y = outcomes("0011");
        let c = ProblemConfig::new(4, 1, 3, 4).unwrap();
        let r = decode_scheme2_k1(&inst, &y, &c, &NoiseParams::NOISELESS).unwrap();
        assert_eq!(r.selected_inactive, vec![0, 1, 3]);
        // Pairs: {0, 1} sits in two negative tests, every other pair in fewer.
        let inst = Instance {
            defective_set: vec![2, 3],
            ..inst
        };
        let c = ProblemConfig::new(4, 2, 2, 4).unwrap();
        let r = decode_scheme2_multistage(&inst, &y, &c, &NoiseParams::NOISELESS, false).unwrap();
        assert_eq!(r.selected_inactive, vec![0, 1]);
    }

    #[test]
    fn k1_sort_rejects_other_k() {
        let inst = instance(&["11"], &[0]);
        let c = ProblemConfig::new(3, 2, 1, 1).unwrap();
        let inst3 = Instance {
            matrix: TestMatrix::zeros(1, 3),
            ..inst
        };
        assert_eq!(
            decode_scheme2_k1(&inst3, &outcomes("0"), &c, &NoiseParams::NOISELESS),
            Err(Error::WrongK(2))
        );
    }

    #[test]
    fn scheme1_recovers_unique_consistent_set() {
        let inst = instance(&["1100", "0110", "0011", "1001"], &[1, 2]);
        let y = outcomes("1110");
        let c = ProblemConfig::new(4, 2, 2, 4).unwrap();
        let r = decode_scheme1(&inst, &y, &c, &NoiseParams::NOISELESS, 1, false).unwrap();
        assert_eq!(r.estimated_active, Some(vec![1, 2]));
        assert_eq!(r.selected_inactive, vec![0, 3]);
        assert!(!r.error_flag);
        let json = r.to_json();
        assert!(json.contains("\"scheme\":\"scheme1\"") && !json.contains("stages"));
    }

    #[test]
    fn multistage_truncates_last_stage() {
        let inst = instance(&["110000", "001100"], &[4, 5]);
        let y = outcomes("00");
        let c = ProblemConfig::new(6, 2, 3, 2).unwrap();
        let r = decode_scheme2_multistage(&inst, &y, &c, &NoiseParams::NOISELESS, false).unwrap();
        let stages = r.stage_trace.clone().unwrap();
        assert_eq!(stages.len(), 2);
        assert_eq!(r.selected_inactive.len(), 3);
        assert_eq!(&r.selected_inactive[..2], &stages[0][..]);
        assert_eq!(stages[0], vec![0, 1]);
        assert!(!r.error_flag);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let inst = instance(&["1100"], &[1, 2]);
        let c = ProblemConfig::new(5, 2, 2, 1).unwrap();
        assert!(matches!(
            decode_scheme1(&inst, &outcomes("1"), &c, &NoiseParams::NOISELESS, 0, false),
            Err(Error::Dimension(_))
        ));
        let c = ProblemConfig::new(4, 2, 2, 1).unwrap();
        assert!(matches!(
            decode_scheme1(&inst, &outcomes("10"), &c, &NoiseParams::NOISELESS, 0, false),
            Err(Error::Dimension(_))
        ));
    }
}
