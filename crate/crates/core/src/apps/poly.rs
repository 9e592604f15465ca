//! Full polynomial convolution as one packed product.
//!
//! Split `f = f0 + x^h f1`. The row `R = f0 + beta^-1 f1` against
//! `S = T0 + beta T1`, where `T0[i][t] = g[t-i]` and `T1[i][t] = g[t-h-i]`
//! are banded Toeplitz blocks, has degree-0 coefficient
//! `f0 T0 + f1 T1 = f * g`. The packed recursion splits the `2n - 1` output
//! columns down to single coefficients.

use crate::bigint::Int;
use crate::extractor::choose_global_base;
use crate::ledger::CostLedger;
use crate::matmul::{gpr_packed, GprConfig, GprError, IntegerLeaf};
use crate::matrix::IntMatrix;
use crate::packing::PackedMatrix;

use super::AppError;

pub fn schoolbook_convolution(f: &[Int], g: &[Int]) -> Vec<Int> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = &out[i + j] + &(a * b);
        }
    }
    out
}

/// `f * g` for equal power-of-two lengths.
pub fn poly_convolution_gpr(f: &[Int], g: &[Int], cfg: &GprConfig, ledger: &mut CostLedger) -> Result<Vec<Int>, AppError> {
    let n = f.len();
    if g.len() != n {
        return Err(AppError::LengthMismatch(n, g.len()));
    }
    if n == 0 || !n.is_power_of_two() {
        return Err(AppError::NotPowerOfTwo(n));
    }
    if n == 1 {
        return Ok(vec![ledger.mul(&f[0], &g[0])]);
    }
    let bmax = f.iter().chain(g).map(Int::abs).max().unwrap_or_default().max(Int::one());
    let base = choose_global_base(n, &bmax).map_err(GprError::from)?;
    let h = n / 2;
    let width = 2 * n - 1;
    let g_at = |k: isize| -> Int {
        if (0..n as isize).contains(&k) {
            g[k as usize].clone()
        } else {
            Int::zero()
        }
    };
    let f0 = IntMatrix::from_fn(1, h, |_, i| f[i].clone());
    let f1 = IntMatrix::from_fn(1, h, |_, i| f[h + i].clone());
    let t0 = IntMatrix::from_fn(h, width, |i, t| g_at(t as isize - i as isize));
    let t1 = IntMatrix::from_fn(h, width, |i, t| g_at(t as isize - (h + i) as isize));
    let r = PackedMatrix::embed_shaped(1, h, vec![(0, f0), (-1, f1)]).map_err(GprError::from)?;
    let s = PackedMatrix::embed_shaped(h, width, vec![(0, t0), (1, t1)]).map_err(GprError::from)?;
    let out = gpr_packed(&r, &s, &base, 0, cfg, ledger, 0, (0, 0), &mut IntegerLeaf)?;
    Ok(out.row(0).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        let mut l = CostLedger::default();
        let cfg = GprConfig::audited();
        assert_eq!(poly_convolution_gpr(&ints(&[1]), &ints(&[1]), &cfg, &mut l).unwrap(), ints(&[1]));
        assert_eq!(poly_convolution_gpr(&ints(&[1, 2]), &ints(&[3, 4]), &cfg, &mut l).unwrap(), ints(&[3, 10, 8]));
        assert_eq!(
            poly_convolution_gpr(&ints(&[1, 2]), &ints(&[3]), &cfg, &mut l),
            Err(AppError::LengthMismatch(2, 1))
        );
        assert_eq!(poly_convolution_gpr(&ints(&[1, 2, 3]), &ints(&[1, 2, 3]), &cfg, &mut l), Err(AppError::NotPowerOfTwo(3)));
    }
}
