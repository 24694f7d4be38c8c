//! Brute-force reference implementations, independent of the weight-collapsed
//! formulas in the library.

use healthy_gt::model::{Instance, OutcomeVector};

/// `Pr(Y = 0 | m defectives present)` straight from the channel definition.
fn p_null(m: u32, u: f64, q: f64) -> f64 {
    (1.0 - q) * u.powi(m as i32)
}

fn p_y(y: bool, m: u32, u: f64, q: f64) -> f64 {
    let p0 = p_null(m, u, q);
    if y {
        1.0 - p0
    } else {
        p0
    }
}

/// `Q(x)` of a bit pattern of `len` i.i.d. Bernoulli(p) entries.
fn q_pattern(x: u32, len: usize, p: f64) -> f64 {
    let ones = x.count_ones() as i32;
    p.powi(ones) * (1.0 - p).powi(len as i32 - ones)
}

/// `I^(j)` from its definition, enumerating all `2^K` input patterns:
/// `sum Q(x_j) P(y, x_rest | x_j) ln[P(y, x_rest | x_j) / P(y, x_rest)]`.
pub fn mutual_info_naive(k: usize, j: usize, p: f64, u: f64, q: f64) -> f64 {
    let rest = k - j;
    let mut total = 0.0;
    for y in [false, true] {
        for x_rest in 0..(1u32 << rest) {
            let q_rest = q_pattern(x_rest, rest, p);
            let joint = |x_j: u32| p_y(y, x_rest.count_ones() + x_j.count_ones(), u, q) * q_rest;
            let marginal: f64 = (0..(1u32 << j)).map(|x_j| q_pattern(x_j, j, p) * joint(x_j)).sum();
            for x_j in 0..(1u32 << j) {
                let cond = joint(x_j);
                if cond > 0.0 {
                    total += q_pattern(x_j, j, p) * cond * (cond / marginal).ln();
                }
            }
        }
    }
    total
}

/// `E0(rho, j, n)` from its definition by enumeration.
pub fn e0_naive(k: usize, j: usize, n: usize, rho: f64, p: f64, u: f64, q: f64) -> f64 {
    let rest = k - j;
    let power = 1.0 + rho * n as f64;
    let mut total = 0.0;
    for y in [false, true] {
        for x_rest in 0..(1u32 << rest) {
            let q_rest = q_pattern(x_rest, rest, p);
            let inner: f64 = (0..(1u32 << j))
                .map(|x_j| {
                    let cond = p_y(y, x_rest.count_ones() + x_j.count_ones(), u, q) * q_rest;
                    q_pattern(x_j, j, p) * cond.powf(1.0 / power)
                })
                .sum();
            total += inner.powf(power);
        }
    }
    -total.ln()
}

/// `C(n, k)` in exact integer arithmetic.
pub fn binomial_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Row-by-row log-likelihood of `columns` being the defective set.
pub fn loglik_naive(instance: &Instance, outcomes: &OutcomeVector, columns: &[usize], u: f64, q: f64) -> f64 {
    (0..instance.matrix.rows())
        .map(|r| {
            let m = columns.iter().filter(|&&c| instance.matrix.get(r, c)).count() as u32;
            p_y(outcomes.outcomes[r], m, u, q).ln()
        })
        .sum()
}

/// Error probability of "pick L uniformly from the complement of the first K
/// items" against a uniformly random defective K-set, by exhaustive
/// enumeration of both the defective set and the selection.
pub fn blind_pick_error(n: usize, k: usize, l: usize) -> f64 {
    let complement: Vec<usize> = (k..n).collect();
    let defective_sets = subsets(&(0..n).collect::<Vec<_>>(), k);
    let selections = subsets(&complement, l);
    let mut errors = 0u64;
    for d in &defective_sets {
        for s in &selections {
            if s.iter().any(|i| d.contains(i)) {
                errors += 1;
            }
        }
    }
    errors as f64 / (defective_sets.len() * selections.len()) as f64
}

/// All `k`-subsets of `items`, in lexicographic order.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut with_first: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    with_first.extend(subsets(&items[1..], k));
    with_first
}
