//! Slice-staged extraction: pack at `beta = sigma^K` and recover the target
//! coefficient one balanced base-`sigma` digit per pass.
//!
//! Pass `s` removes the digits found so far, shifts the packed value so that
//! digit `s` sits in the middle band of a base-`sigma` window, reduces the
//! window modulo `sigma^3` and applies the ordinary extractor with base
//! `sigma`. The extractor only ever sees about `3 log2(sigma)` bits.

use thiserror::Error;

use crate::bigint::Int;
use crate::extractor::{choose_global_base, mid_beta_q, ExtractError};
use crate::ledger::{CostError, CostLedger};
use crate::matmul::{check_inputs, leaf_scaled_product, packed_top, schoolbook_oracle, GprConfig, GprError, LeafCtx, LeafEvaluator};
use crate::matrix::{IntMatrix, Origin};
use crate::packing::{GlobalBase, PackedMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error("slice count K = {0} must be at least 2")]
    TooFewSlices(u32),
    #[error("pass {s} needs {s} previous digits, got {got}")]
    DigitCount { s: u32, got: usize },
    #[error(transparent)]
    InexactShift(#[from] CostError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Gpr(#[from] GprError),
}

/// `sigma = 2^q_sigma`, `beta = sigma^K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceConfig {
    pub k: u32,
    pub q_sigma: u32,
    pub sigma: Int,
    pub beta: GlobalBase,
}

impl SliceConfig {
    /// `sigma` is the smallest power of two at least `4 S0 + 1` for the padded size `n`.
    pub fn new(n: usize, bmax: &Int, k: u32) -> Result<Self, SliceError> {
        if k < 2 {
            return Err(SliceError::TooFewSlices(k));
        }
        let sb = choose_global_base(n, bmax).map_err(GprError::from)?;
        let q = sb.q * k;
        Ok(SliceConfig {
            k,
            q_sigma: sb.q,
            sigma: sb.beta.clone(),
            beta: GlobalBase {
                q,
                beta: Int::pow2(q as u64),
                ..sb
            },
        })
    }
}

/// `sum_s digits[s] sigma^s`.
pub fn reconstruct(digits: &[Int], sigma: &Int) -> Int {
    digits.iter().rev().fold(Int::zero(), |acc, d| acc * sigma + d)
}

/// Digit `s` of the target coefficient held in `v` (the scaled packed value
/// `beta z` at `beta = sigma^k`, `sigma = 2^q_sigma`), given digits `0..s`.
pub fn per_slice_extract(
    v: &Int,
    q_sigma: u32,
    k: u32,
    e0: i32,
    s: u32,
    previous: &[Int],
    ledger: &mut CostLedger,
) -> Result<Int, SliceError> {
    if previous.len() != s as usize {
        return Err(SliceError::DigitCount { s, got: previous.len() });
    }
    let q = q_sigma as u64;
    let kq = k as u64 * q;
    let mut x = ledger.shift(v, -(e0 as i64) * kq as i64)?;
    if s > 0 {
        let mut low = Int::zero();
        for d in previous.iter().rev() {
            let up = ledger.shift(&low, q as i64)?;
            low = ledger.add(&up, d);
        }
        let low = ledger.shift(&low, kq as i64)?;
        x = ledger.sub(&x, &low);
    }
    let w = ledger.shr_floor(&x, (k + s - 1) as u64 * q);
    let mut w = ledger.mod_pow2(&w, 3 * q);
    if w >= Int::pow2(3 * q - 1) {
        w = ledger.sub(&w, &Int::pow2(3 * q));
    }
    ledger.gauge("slice_window_bits", w.bit_length());
    Ok(mid_beta_q(&w, q, ledger)?)
}

struct SliceLeaf<'a> {
    cfg: &'a SliceConfig,
    pass: u32,
    digits: &'a [IntMatrix],
}

impl LeafEvaluator for SliceLeaf<'_> {
    fn eval(&mut self, r: &PackedMatrix, s: &PackedMatrix, ctx: &LeafCtx<'_>, ledger: &mut CostLedger) -> Result<IntMatrix, GprError> {
        let z = leaf_scaled_product(r, s, ctx.base.q as u64, ledger)?;
        let mut out = IntMatrix::zeros(z.rows(), z.cols()).with_origin(Origin::Derived);
        for i in 0..z.rows() {
            for j in 0..z.cols() {
                let prev: Vec<Int> = self.digits.iter().map(|d| d.get(ctx.row + i, ctx.col + j).clone()).collect();
                let digit = per_slice_extract(z.get(i, j), self.cfg.q_sigma, self.cfg.k, ctx.e0, self.pass, &prev, ledger).map_err(
                    |e| match e {
                        SliceError::Extract(x) => GprError::Extract(x),
                        SliceError::Gpr(g) => g,
                        other => GprError::ContractViolation {
                            depth: ctx.depth,
                            detail: other.to_string(),
                        },
                    },
                )?;
                out.set(i, j, digit);
            }
        }
        Ok(out)
    }
}

/// `A B` by `K` full packed passes, one digit of every entry per pass.
pub fn gpr_top_slice_staged(
    a: &IntMatrix,
    b: &IntMatrix,
    bmax: &Int,
    k: u32,
    cfg: &GprConfig,
    ledger: &mut CostLedger,
) -> Result<IntMatrix, SliceError> {
    if k < 2 {
        return Err(SliceError::TooFewSlices(k));
    }
    cfg.validate()?;
    let n = check_inputs(a, b, bmax)?;
    let np = n.next_power_of_two();
    if np <= cfg.n0 {
        return Ok(schoolbook_oracle(a, b, ledger)?);
    }
    let sc = SliceConfig::new(np, bmax, k)?;
    ledger.gauge("slice_sigma_bits", sc.q_sigma as u64);
    ledger.gauge("slice_beta_bits", sc.beta.q as u64);
    let (ap, bp) = (a.padded(np, np), b.padded(np, np));
    let mut digits: Vec<IntMatrix> = Vec::with_capacity(k as usize);
    for pass in 0..k {
        ledger.tally("slice_passes", 1);
        let mut leaf = SliceLeaf {
            cfg: &sc,
            pass,
            digits: &digits,
        };
        let d = packed_top(&ap, &bp, &sc.beta, cfg, ledger, &mut leaf)?;
        digits.push(d);
    }
    let out = IntMatrix::from_fn(n, n, |i, j| {
        let ds: Vec<Int> = digits.iter().map(|d| d.get(i, j).clone()).collect();
        reconstruct(&ds, &sc.sigma)
    });
    Ok(out.with_origin(Origin::Derived))
}

/// Per-band width of the widest extraction window seen, `ceil(bits / 3)`.
pub fn per_pass_extraction_width(ledger: &CostLedger) -> Option<u64> {
    ledger.gauge_of("slice_window_bits").map(|b| b.div_ceil(3))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled(u: &Int, m: &Int, l: &Int, beta: &Int) -> Int {
        u * beta * beta + m * beta + l
    }

    #[test]
    fn two_digit_example() {
        let mut led = CostLedger::default();
        let (q, k) = (3u32, 2u32);
        let sigma = Int::pow2(q as u64);
        let beta = Int::pow2((q * k) as u64);
        let m = Int::from(2) * &sigma + Int::from(3);
        let v = scaled(&Int::from(5), &m, &Int::from(1), &beta);
        let d0 = per_slice_extract(&v, q, k, 0, 0, &[], &mut led).unwrap();
        assert_eq!(d0, Int::from(3));
        let d1 = per_slice_extract(&v, q, k, 0, 1, std::slice::from_ref(&d0), &mut led).unwrap();
        assert_eq!(d1, Int::from(2));
        assert_eq!(reconstruct(&[d0, d1], &sigma), m);
    }

    #[test]
    fn reconstruct_examples() {
        assert_eq!(reconstruct(&[Int::from(3), Int::from(2)], &Int::from(8)), Int::from(19));
        assert_eq!(reconstruct(&[Int::zero(), Int::zero(), Int::zero()], &Int::from(8)), Int::zero());
    }

    #[test]
    fn k_one_is_rejected() {
        let a = IntMatrix::identity(4);
        let err = gpr_top_slice_staged(&a, &a, &Int::one(), 1, &GprConfig::default(), &mut CostLedger::default());
        assert_eq!(err, Err(SliceError::TooFewSlices(1)));
    }

    #[test]
    fn all_ones_two_passes() {
        let a = IntMatrix::from_fn(4, 4, |_, _| Int::one());
        let mut led = CostLedger::default();
        let c = gpr_top_slice_staged(&a, &a, &Int::one(), 2, &GprConfig::audited(), &mut led).unwrap();
        assert_eq!(c, IntMatrix::from_fn(4, 4, |_, _| Int::from(4)));
        assert_eq!(led.tally_of("slice_passes"), 2);
    }
}
