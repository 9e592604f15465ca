//! Unweighted all-pairs distances by repeated squaring of reachability.
//!
//! `R_0 = A` and `R_{k+1} = R_k OR R_k R_k`, so `R_k` marks pairs joined by a
//! walk of length `1..=2^k`. The schedule stops once `2^k >= n - 1` or the
//! matrix stops changing. Exact hop counts come from binary descent over the
//! stored powers: per pair, the largest `d` with the target still unreached
//! is assembled from powers of two, using `I OR R_k` as the step relation.

use crate::ledger::CostLedger;
use crate::matmul::{GprConfig, GprError};

use super::boolean::{boolean_product, BoolMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApspResult {
    /// `dist[i][j]`, `None` when `j` is unreachable from `i`.
    pub dist: Vec<Vec<Option<u32>>>,
    /// Packed Boolean products used by the squaring schedule.
    pub bmm_calls: u32,
    /// Vector-matrix products used by the descent (bitset, not packed).
    pub refinement_products: u64,
}

type Bits = Vec<u64>;

fn rows_as_bits(m: &BoolMatrix) -> Vec<Bits> {
    let n = m.n();
    let words = n.div_ceil(64).max(1);
    (0..n)
        .map(|i| {
            let mut r = vec![0u64; words];
            for j in 0..n {
                if m.get(i, j) {
                    r[j / 64] |= 1 << (j % 64);
                }
            }
            r
        })
        .collect()
}

fn step(v: &Bits, rows: &[Bits]) -> Bits {
    let mut out = vec![0u64; v.len()];
    for (i, row) in rows.iter().enumerate() {
        if v[i / 64] >> (i % 64) & 1 == 1 {
            for (o, r) in out.iter_mut().zip(row) {
                *o |= r;
            }
        }
    }
    out
}

fn has(v: &Bits, j: usize) -> bool {
    v[j / 64] >> (j % 64) & 1 == 1
}

pub fn apsp_unweighted(adj: &BoolMatrix, cfg: &GprConfig, ledger: &mut CostLedger) -> Result<ApspResult, GprError> {
    let n = adj.n();
    let mut powers = vec![adj.clone()];
    let mut bmm_calls = 0;
    while n > 2 && (1usize << (powers.len() - 1)) < n - 1 {
        let r = powers.last().expect("nonempty");
        let next = r.or(&boolean_product(r, r, cfg, ledger)?);
        bmm_calls += 1;
        let stable = &next == r;
        powers.push(next);
        if stable {
            break;
        }
    }
    let steps: Vec<Vec<Bits>> = powers
        .iter()
        .map(|p| rows_as_bits(&p.or(&BoolMatrix::identity(n))))
        .collect();
    let closure = powers.last().expect("nonempty");
    let mut refinement_products = 0u64;
    let mut dist = vec![vec![None; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = Some(0);
        for j in 0..n {
            if i == j || !closure.get(i, j) {
                continue;
            }
            let mut v: Bits = vec![0u64; n.div_ceil(64).max(1)];
            v[i / 64] |= 1 << (i % 64);
            let mut d = 0u32;
            for k in (0..steps.len()).rev() {
                let w = step(&v, &steps[k]);
                refinement_products += 1;
                if !has(&w, j) {
                    v = w;
                    d += 1 << k;
                }
            }
            row[j] = Some(d + 1);
        }
    }
    Ok(ApspResult {
        dist,
        bmm_calls,
        refinement_products,
    })
}
