//! Three-case solution of `T(n) = sum_i T(alpha_i n) + M(n)` when the
//! non-recursive work `M(n)` is quadratic up to polylog factors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AppError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceDescriptor {
    pub alphas: Vec<BigRational>,
    /// Polylog exponent of the kernel cost.
    pub c: u32,
}

impl RecurrenceDescriptor {
    pub fn new(alphas: Vec<BigRational>, c: u32) -> Result<Self, AppError> {
        for a in &alphas {
            if !a.is_positive() || a >= &BigRational::one() {
                return Err(AppError::InvalidAlpha(a.to_string()));
            }
        }
        Ok(RecurrenceDescriptor { alphas, c })
    }

    /// Parses `0.5,0.5`, `1/3,2/3` or `0.5x8` (eight copies of 0.5).
    pub fn parse_alphas(text: &str) -> Result<Vec<BigRational>, AppError> {
        let mut out = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (value, count) = match item.split_once('x') {
                Some((v, c)) => (v, c.trim().parse::<usize>().map_err(|e| AppError::Parse(format!("{item}: {e}")))?),
                None => (item, 1),
            };
            let a = parse_rational(value.trim())?;
            out.extend(std::iter::repeat(a).take(count));
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, AppError> {
    let bad = || AppError::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Type2Class {
    pub case: u8,
    pub exponent: f64,
    pub extra_log_power: u32,
    /// `sum alpha_i^2` as an exact fraction.
    pub sum_alpha_sq: String,
    /// `|sum alpha_i^exponent - 1|` for case 3, zero otherwise.
    pub residual: f64,
}

/// Case 1: `sum alpha^2 < 1`, exponent 2. Case 2: `= 1`, exponent 2 with one
/// extra log. Case 3: `> 1`, exponent `gamma` with `sum alpha^gamma = 1`,
/// found by bisection.
pub fn classify_type2(r: &RecurrenceDescriptor) -> Type2Class {
    let sum: BigRational = r.alphas.iter().map(|a| a * a).fold(BigRational::zero(), |s, x| s + x);
    let one = BigRational::one();
    let sum_alpha_sq = sum.to_string();
    if sum < one {
        return Type2Class {
            case: 1,
            exponent: 2.0,
            extra_log_power: 0,
            sum_alpha_sq,
            residual: 0.0,
        };
    }
    if sum == one {
        return Type2Class {
            case: 2,
            exponent: 2.0,
            extra_log_power: 1,
            sum_alpha_sq,
            residual: 0.0,
        };
    }
    let alphas: Vec<f64> = r.alphas.iter().map(|a| a.to_f64().unwrap_or(0.0)).collect();
    let f = |g: f64| alphas.iter().map(|a| a.powf(g)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (2.0f64, 4.0f64);
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let gamma = 0.5 * (lo + hi);
    Type2Class {
        case: 3,
        exponent: gamma,
        extra_log_power: 0,
        sum_alpha_sq,
        residual: f(gamma).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(text: &str) -> RecurrenceDescriptor {
        RecurrenceDescriptor::new(RecurrenceDescriptor::parse_alphas(text).unwrap(), 0).unwrap()
    }

    #[test]
    fn three_cases() {
        let c = classify_type2(&desc("0.5,0.5"));
        assert_eq!((c.case, c.exponent, c.sum_alpha_sq.as_str()), (1, 2.0, "1/2"));
        let c = classify_type2(&desc("0.5x4"));
        assert_eq!((c.case, c.extra_log_power), (2, 1));
        let c = classify_type2(&desc("1/2x8"));
        assert_eq!(c.case, 3);
        assert!((c.exponent - 3.0).abs() <= 1e-9);
        assert!(c.residual <= 1e-9);
    }

    #[test]
    fn invalid_alphas() {
        let bad = RecurrenceDescriptor::parse_alphas("1.5").unwrap();
        assert!(matches!(RecurrenceDescriptor::new(bad, 0), Err(AppError::InvalidAlpha(_))));
        assert!(RecurrenceDescriptor::parse_alphas("abc").is_err());
        assert!(RecurrenceDescriptor::parse_alphas("1/0").is_err());
    }
}
