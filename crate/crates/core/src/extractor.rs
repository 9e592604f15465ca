//! Two-round middle-digit extraction and the base/bound bookkeeping around it.

use thiserror::Error;

use crate::bigint::Int;
use crate::ledger::CostLedger;
use crate::packing::GlobalBase;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("rounding tie while dividing {value} by 2^{bits}")]
    TieDetected { value: Int, bits: u64 },
    #[error("depth {ell} too deep for n = {n}")]
    DepthTooDeep { n: usize, ell: u32 },
    #[error("size {0} must be a power of two and at least 2")]
    InvalidSize(usize),
}

/// `round(v / 2^k)`, half away from zero; an exact half raises `TieDetected`.
pub fn round_div_pow2(v: &Int, k: u64, ledger: &mut CostLedger) -> Result<Int, ExtractError> {
    if k == 0 {
        return Ok(v.clone());
    }
    let half = Int::pow2(k - 1);
    if ledger.mod_pow2(v, k) == half {
        return Err(ExtractError::TieDetected {
            value: v.clone(),
            bits: k,
        });
    }
    let shifted = ledger.add(v, &half);
    Ok(ledger.shr_floor(&shifted, k))
}

/// Middle base-`2^q` digit of `z`, given `v = 2^q z`:
/// `round(z) - 2^q round(z / 2^q)`.
pub fn mid_beta_q(v: &Int, q: u64, ledger: &mut CostLedger) -> Result<Int, ExtractError> {
    let r1 = round_div_pow2(v, q, ledger)?;
    let r2 = round_div_pow2(v, 2 * q, ledger)?;
    let hi = ledger.shift(&r2, q as i64).expect("left shifts are exact");
    Ok(ledger.sub(&r1, &hi))
}

pub fn mid_beta(v: &Int, base: &GlobalBase, ledger: &mut CostLedger) -> Result<Int, ExtractError> {
    mid_beta_q(v, base.q as u64, ledger)
}

/// `|M| <= (beta-1)/2` and `|L| <= (beta-1)/4`, compared in integers.
pub fn slack_holds(m: &Int, l: &Int, beta: &Int) -> bool {
    let room = beta - &Int::one();
    m.abs().shl(1) <= room && l.abs().shl(2) <= room
}

/// `S0 = (n/2) B^2` and the smallest power of two `beta >= 4 S0 + 1`.
pub fn choose_global_base(n: usize, bmax: &Int) -> Result<GlobalBase, ExtractError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(ExtractError::InvalidSize(n));
    }
    let s0 = Int::from(n / 2) * (bmax * bmax);
    Ok(base_for_bound(s0, n, bmax.clone()))
}

/// The smallest power of two at least `4 s0 + 1`.
pub(crate) fn base_for_bound(s0: Int, n: usize, bmax: Int) -> GlobalBase {
    // ceil(log2(x + 1)) is the bit length of x for x >= 1.
    let q = s0.shl(2).bit_length() as u32;
    GlobalBase {
        q,
        beta: Int::pow2(q as u64),
        s0,
        n,
        bmax,
    }
}

/// `S_ell = (n / 2^{ell+1}) B^2`.
pub fn depth_bound(n: usize, bmax: &Int, ell: u32) -> Result<Int, ExtractError> {
    let d = 1usize.checked_shl(ell + 1).filter(|&d| d <= n);
    match d {
        Some(d) => Ok(Int::from(n / d) * (bmax * bmax)),
        None => Err(ExtractError::DepthTooDeep { n, ell }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packed(u: i64, m: i64, l: i64, q: u32) -> Int {
        let beta = Int::pow2(q as u64);
        Int::from(u) * &beta * &beta + Int::from(m) * beta + Int::from(l)
    }

    #[test]
    fn mid_beta_examples() {
        let mut l = CostLedger::default();
        assert_eq!(mid_beta_q(&Int::from(850), 4, &mut l).unwrap(), Int::from(5));
        assert_eq!(mid_beta_q(&Int::from(206), 4, &mut l).unwrap(), Int::from(-3));
        assert_eq!(mid_beta_q(&Int::zero(), 4, &mut l).unwrap(), Int::zero());
        assert_eq!(packed(3, 5, 2, 4), Int::from(850));
        assert_eq!(packed(1, -3, -2, 4), Int::from(206));
    }

    #[test]
    fn exact_half_is_a_tie() {
        let mut l = CostLedger::default();
        // z = 0.5 exactly
        assert!(matches!(
            mid_beta_q(&Int::from(8), 4, &mut l),
            Err(ExtractError::TieDetected { .. })
        ));
    }

    #[test]
    fn slack_examples() {
        let b9 = Int::from(9);
        assert!(slack_holds(&Int::from(4), &Int::from(2), &b9));
        assert!(!slack_holds(&Int::from(5), &Int::zero(), &b9));
        assert!(slack_holds(&Int::zero(), &Int::zero(), &Int::from(2)));
        assert!(!slack_holds(&Int::zero(), &Int::from(3), &b9));
    }

    #[test]
    fn base_examples() {
        let one = Int::one();
        let b = choose_global_base(4, &one).unwrap();
        assert_eq!((b.s0.clone(), b.beta.clone()), (Int::from(2), Int::from(16)));
        let b = choose_global_base(8, &one).unwrap();
        assert_eq!((b.s0.clone(), b.beta.clone()), (Int::from(4), Int::from(32)));
        for n in [2usize, 16, 64, 1024] {
            let b = choose_global_base(n, &one).unwrap();
            assert!(b.beta >= Int::from(2 * n + 1));
        }
        assert_eq!(choose_global_base(6, &one), Err(ExtractError::InvalidSize(6)));
        // 4*S0 + 1 = 2^k + 1 still rounds up.
        let b = choose_global_base(2, &Int::from(2)).unwrap();
        assert_eq!(b.beta, Int::from(32));
    }

    #[test]
    fn depth_bound_examples() {
        let one = Int::one();
        assert_eq!(depth_bound(8, &one, 0).unwrap(), Int::from(4));
        assert_eq!(depth_bound(8, &one, 2).unwrap(), Int::from(1));
        assert_eq!(depth_bound(8, &Int::from(3), 0).unwrap(), Int::from(36));
        assert_eq!(depth_bound(8, &one, 3), Err(ExtractError::DepthTooDeep { n: 8, ell: 3 }));
    }
}
