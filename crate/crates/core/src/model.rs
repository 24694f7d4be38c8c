//! Problem configuration and the generative noisy group-testing process.
//!
//! A test outcome is the boolean OR, over the defective items placed in the
//! pool, of an independent `Bernoulli(1 - u)` survival indicator (dilution),
//! further OR-ed with an independent `Bernoulli(q)` false positive
//! (additive noise). Marginalising both gives
//! `Pr(y = 0 | m participating defectives) = (1 - q) u^m`.

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Instance dimensions: `N` items, `K` defectives, `L` requested
/// non-defectives and `M` tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemConfig {
    #[serde(rename = "n")]
    n_items: usize,
    #[serde(rename = "k")]
    n_defective: usize,
    #[serde(rename = "l")]
    n_requested: usize,
    #[serde(rename = "m")]
    n_tests: usize,
}

impl ProblemConfig {
    pub fn new(n_items: usize, n_defective: usize, n_requested: usize, n_tests: usize) -> Result<Self> {
        let config = Self {
            n_items,
            n_defective,
            n_requested,
            n_tests,
        };
        config.validate()?;
        Ok(config)
    }

    /// Re-checks the invariants; useful after deserialisation.
    pub fn validate(&self) -> Result<()> {
        let (n, k, l) = (self.n_items, self.n_defective, self.n_requested);
        if k < 1 || k >= n {
            return Err(Error::InvalidConfig(format!("need 1 <= K < N, got N = {n}, K = {k}")));
        }
        if l < 1 || l > n - k {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= L <= N - K = {}, got L = {l}",
                n - k
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n_items
    }

    pub fn k(&self) -> usize {
        self.n_defective
    }

    pub fn l(&self) -> usize {
        self.n_requested
    }

    pub fn m(&self) -> usize {
        self.n_tests
    }

    /// Number of non-defective items, `N - K`.
    pub fn n_inactive(&self) -> usize {
        self.n_items - self.n_defective
    }

    /// The same dimensions with a different test count.
    pub fn with_tests(self, n_tests: usize) -> Self {
        Self { n_tests, ..self }
    }

    /// `alpha = (L - 1) / (N - K)`, the fraction of non-defectives requested.
    pub fn alpha(&self) -> f64 {
        (self.n_requested - 1) as f64 / self.n_inactive() as f64
    }
}

/// Channel noise: per-item dilution probability `u` and additive false
/// positive probability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    #[serde(rename = "u")]
    dilution_u: f64,
    #[serde(rename = "q")]
    additive_q: f64,
}

impl NoiseParams {
    pub const NOISELESS: Self = Self {
        dilution_u: 0.0,
        additive_q: 0.0,
    };

    pub fn new(dilution_u: f64, additive_q: f64) -> Result<Self> {
        let noise = Self { dilution_u, additive_q };
        noise.validate()?;
        Ok(noise)
    }

    pub fn dilution(u: f64) -> Result<Self> {
        Self::new(u, 0.0)
    }

    pub fn additive(q: f64) -> Result<Self> {
        Self::new(0.0, q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.dilution_u) {
            return Err(domain("u", self.dilution_u, "[0, 1)"));
        }
        if !(0.0..1.0).contains(&self.additive_q) {
            return Err(domain("q", self.additive_q, "[0, 1)"));
        }
        Ok(())
    }

    pub fn u(&self) -> f64 {
        self.dilution_u
    }

    pub fn q(&self) -> f64 {
        self.additive_q
    }

    pub fn is_noiseless(&self) -> bool {
        self.dilution_u == 0.0 && self.additive_q == 0.0
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self::NOISELESS
    }
}

/// Pooling density: every matrix entry is `Bernoulli(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    #[serde(rename = "p")]
    pool_density_p: f64,
}

impl DesignParams {
    pub fn new(p: f64) -> Result<Self> {
        let design = Self { pool_density_p: p };
        design.validate()?;
        Ok(design)
    }

    /// `p = 1/K`, falling back to `p = 1/2` for a single defective where
    /// `1/K` would leave the open interval.
    pub fn default_for(k: usize) -> Self {
        let p = if k >= 2 { 1.0 / k as f64 } else { 0.5 };
        Self { pool_density_p: p }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.pool_density_p;
        if !(p > 0.0 && p < 1.0) {
            return Err(domain("p", p, "(0, 1)"));
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        self.pool_density_p
    }
}

/// `Pr(y = 0 | m participating defectives) = (1 - q) u^m` with `u^0 = 1`.
pub fn row_null_probability(ones_count: usize, noise: &NoiseParams) -> f64 {
    let survive_all = if ones_count == 0 {
        1.0
    } else {
        noise.u().powf(ones_count as f64)
    };
    (1.0 - noise.q()) * survive_all
}

/// Derives an independent 64-bit seed for `stream` from `master`.
///
/// Uses the ChaCha stream counter, so derived seeds do not depend on the
/// order in which streams are requested.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Dense boolean `M x N` matrix stored column-major as packed bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestMatrix {
    rows: usize,
    cols: usize,
    words_per_col: usize,
    bits: Vec<u64>,
}

impl TestMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_col = rows.div_ceil(64);
        Self {
            rows,
            cols,
            words_per_col,
            bits: vec![0; words_per_col * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut matrix = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &bit) in row.iter().enumerate() {
                matrix.set(r, c, bit);
            }
        }
        Ok(matrix)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.rows && col < self.cols);
        let word = self.bits[col * self.words_per_col + row / 64];
        (word >> (row % 64)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        let word = &mut self.bits[col * self.words_per_col + row / 64];
        let mask = 1u64 << (row % 64);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    /// Bit words of one column; bit `r % 64` of word `r / 64` is row `r`.
    pub fn column_words(&self, col: usize) -> &[u64] {
        &self.bits[col * self.words_per_col..(col + 1) * self.words_per_col]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The same items with columns reordered: column `c` of the result is
    /// column `perm[c]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        let mut out = Self::zeros(self.rows, self.cols);
        for (c, &src) in perm.iter().enumerate() {
            let w = self.words_per_col;
            out.bits[c * w..(c + 1) * w].copy_from_slice(self.column_words(src));
        }
        out
    }

    fn row_hex(&self, row: usize) -> String {
        let bits: Vec<bool> = (0..self.cols).map(|c| self.get(row, c)).collect();
        pack_hex(&bits)
    }
}

/// A realised design: the matrix, the hidden defective set and the seed that
/// produced both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub matrix: TestMatrix,
    /// Sorted ascending.
    pub defective_set: Vec<usize>,
    pub seed: u64,
}

impl Instance {
    pub fn is_defective(&self, item: usize) -> bool {
        self.defective_set.binary_search(&item).is_ok()
    }

    /// Number of defectives placed in test `row`.
    pub fn participating(&self, row: usize) -> usize {
        self.defective_set.iter().filter(|&&d| self.matrix.get(row, d)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeVector {
    pub outcomes: Vec<bool>,
}

impl OutcomeVector {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

/// Draws the defective set uniformly among `K`-subsets, then the matrix row
/// by row with i.i.d. `Bernoulli(p)` entries.
///
/// Because rows are drawn in order after the defective set, the first `M'`
/// rows of an instance with `M > M'` tests equal the instance drawn with
/// `M'` tests and the same seed.
pub fn sample_instance(config: &ProblemConfig, design: &DesignParams, seed: u64) -> Result<Instance> {
    config.validate()?;
    design.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut defective_set = index::sample(&mut rng, config.n(), config.k()).into_vec();
    defective_set.sort_unstable();

    let p = design.p();
    let mut matrix = TestMatrix::zeros(config.m(), config.n());
    for r in 0..config.m() {
        for c in 0..config.n() {
            if rng.gen_bool(p) {
                matrix.set(r, c, true);
            }
        }
    }
    Ok(Instance {
        matrix,
        defective_set,
        seed,
    })
}

/// Runs the noisy OR channel over every test row. Dilution masks and additive
/// noise are drawn fresh from `seed` and discarded.
pub fn generate_outcomes(instance: &Instance, noise: &NoiseParams, seed: u64) -> OutcomeVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let survive = 1.0 - noise.u();
    let outcomes = (0..instance.matrix.rows())
        .map(|r| {
            let mut positive = false;
            for &d in &instance.defective_set {
                if instance.matrix.get(r, d) {
                    let kept = noise.u() == 0.0 || rng.gen_bool(survive);
                    positive |= kept;
                }
            }
            if noise.q() > 0.0 && rng.gen_bool(noise.q()) {
                positive = true;
            }
            positive
        })
        .collect();
    OutcomeVector { outcomes }
}

fn pack_hex(bits: &[bool]) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    hex::encode(bytes)
}

fn unpack_hex(text: &str, n_bits: usize) -> Result<Vec<bool>> {
    let bytes = hex::decode(text).map_err(|e| Error::Record(format!("bad hex: {e}")))?;
    if bytes.len() != n_bits.div_ceil(8) {
        return Err(Error::Record(format!(
            "expected {} hex bytes for {n_bits} bits, got {}",
            n_bits.div_ceil(8),
            bytes.len()
        )));
    }
    let bits: Vec<bool> = (0..bytes.len() * 8)
        .map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0)
        .collect();
    if bits[n_bits..].iter().any(|&b| b) {
        return Err(Error::Record("non-zero padding bits".into()));
    }
    Ok(bits[..n_bits].to_vec())
}

/// Flat JSON record of one realised experiment, sufficient for replay.
///
/// Matrix rows and outcomes are hex strings of MSB-first packed bits; the
/// trailing pad bits of the last byte are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub p: f64,
    pub u: f64,
    pub q: f64,
    pub seed: u64,
    pub defective_set: Vec<usize>,
    pub matrix_rows: Vec<String>,
    pub outcomes: String,
}

/// Everything a replay record decodes into.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub config: ProblemConfig,
    pub design: DesignParams,
    pub noise: NoiseParams,
    pub instance: Instance,
    pub outcomes: OutcomeVector,
}

impl ReplayRecord {
    pub fn new(
        config: &ProblemConfig,
        design: &DesignParams,
        noise: &NoiseParams,
        instance: &Instance,
        outcomes: &OutcomeVector,
    ) -> Self {
        Self {
            n: config.n(),
            k: config.k(),
            l: config.l(),
            m: instance.matrix.rows(),
            p: design.p(),
            u: noise.u(),
            q: noise.q(),
            seed: instance.seed,
            defective_set: instance.defective_set.clone(),
            matrix_rows: (0..instance.matrix.rows())
                .map(|r| instance.matrix.row_hex(r))
                .collect(),
            outcomes: pack_hex(&outcomes.outcomes),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Record(e.to_string()))
    }

    pub fn replay(&self) -> Result<Replay> {
        let config = ProblemConfig::new(self.n, self.k, self.l, self.m)?;
        let design = DesignParams::new(self.p)?;
        let noise = NoiseParams::new(self.u, self.q)?;
        if self.matrix_rows.len() != self.m {
            return Err(Error::Record(format!(
                "{} matrix rows for m = {}",
                self.matrix_rows.len(),
                self.m
            )));
        }
        let mut defective_set = self.defective_set.clone();
        defective_set.sort_unstable();
        defective_set.dedup();
        if defective_set.len() != self.k || defective_set.iter().any(|&d| d >= self.n) {
            return Err(Error::Record(
                "defective set must hold K distinct items in [0, N)".into(),
            ));
        }
        let rows = self
            .matrix_rows
            .iter()
            .map(|row| unpack_hex(row, self.n))
            .collect::<Result<Vec<_>>>()?;
        let mut matrix = TestMatrix::zeros(self.m, self.n);
        for (r, row) in rows.iter().enumerate() {
            for (c, &bit) in row.iter().enumerate() {
                matrix.set(r, c, bit);
            }
        }
        let outcomes = OutcomeVector {
            outcomes: unpack_hex(&self.outcomes, self.m)?,
        };
        Ok(Replay {
            config,
            design,
            noise,
            instance: Instance {
                matrix,
                defective_set,
                seed: self.seed,
            },
            outcomes,
        })
    }
}
