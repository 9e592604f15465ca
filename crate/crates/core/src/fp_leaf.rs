//! Floating-point leaves with certified exact extraction.
//!
//! A leaf sums its degree-0 and degree-(-1) band products separately in a
//! binary floating-point format, carries a priori error budgets for both
//! sums, and recovers the exact integer coefficient with the rearranged
//! extractor `round(M + L/beta) - beta round(M/beta + L/beta^2)`, which never
//! forms the large `U beta` term. When the guard inequality cannot be
//! certified the leaf falls back to the exact integer path.
//!
//! Formats are emulated: a `t`-bit significand rounds every product and every
//! pairwise sum to nearest, ties to even. All band terms are integers, so the
//! emulation works on exact integers and `Binary { bits: 53 }` reproduces IEEE
//! double arithmetic on them bit for bit. `DoubleDouble` is modelled as a
//! 106-bit significand.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigint::Int;
use crate::ledger::{ceil_log2, CostLedger};
use crate::matmul::{gpr_top_based, schoolbook_oracle, GprConfig, GprError, IntegerLeaf, LeafCtx, LeafEvaluator};
use crate::matrix::{IntMatrix, Origin};
use crate::packing::{GlobalBase, PackedMatrix};
use crate::rng::InstanceRng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("certified middle-band error {bound} exceeds 1/4 - 2^-20")]
    PrecisionInsufficient { bound: String },
    #[error("{band} band magnitude {sum} exceeds its budget {budget}")]
    BudgetExceeded { band: &'static str, sum: Int, budget: Int },
    #[error("floating-point guard does not hold")]
    GuardViolated,
    #[error("size {0} must be a power of two and at least 4")]
    InvalidSize(usize),
    #[error("no available format reaches unit roundoff {0}")]
    NoFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Precision {
    Binary { bits: u32 },
    DoubleDouble,
}

impl Precision {
    pub const DOUBLE: Precision = Precision::Binary { bits: 53 };

    pub fn significand_bits(&self) -> u32 {
        match self {
            Precision::Binary { bits } => *bits,
            Precision::DoubleDouble => 106,
        }
    }

    /// `u = 2^-t` for a `t`-bit significand.
    pub fn unit_roundoff(&self) -> BigRational {
        pow2_rat(-(self.significand_bits() as i64))
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Binary { bits: 53 } => write!(f, "double"),
            Precision::Binary { bits } => write!(f, "binary{bits}"),
            Precision::DoubleDouble => write!(f, "double-double"),
        }
    }
}

fn pow2_rat(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
    }
}

fn rat(x: &Int) -> BigRational {
    BigRational::from_integer(x.as_bigint().clone())
}

/// Margin subtracted from 1/4 in the middle-band contract.
pub fn rstar_limit() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(4)) - pow2_rat(-20)
}

/// `1 / (8 ceil(log2(n/2)) n B^2)`.
pub fn required_unit_roundoff(n: usize, bmax: &Int) -> Result<BigRational, FpError> {
    if n < 4 || !n.is_power_of_two() {
        return Err(FpError::InvalidSize(n));
    }
    let p = ceil_log2((n / 2) as u64);
    let den = Int::from(8 * p) * Int::from(n) * bmax * bmax;
    Ok(BigRational::new(BigInt::one(), den.into_bigint()))
}

/// Double when it suffices, else double-double.
pub fn select_precision(u_req: &BigRational) -> Result<Precision, FpError> {
    [Precision::DOUBLE, Precision::DoubleDouble]
        .into_iter()
        .find(|p| &p.unit_roundoff() <= u_req)
        .ok_or_else(|| FpError::NoFormat(u_req.to_string()))
}

/// The narrowest emulated binary format with `u <= u_req`.
pub fn coarsest_binary(u_req: &BigRational) -> Precision {
    let mut bits = 1;
    while (Precision::Binary { bits }).unit_roundoff() > *u_req {
        bits += 1;
    }
    Precision::Binary { bits }
}

/// `p u / (1 - p u)`, or `None` when `p u >= 1`.
pub fn gamma(p: u64, u: &BigRational) -> Option<BigRational> {
    let pu = BigRational::from_integer(BigInt::from(p)) * u;
    if pu >= BigRational::one() {
        return None;
    }
    Some(&pu / (BigRational::one() - &pu))
}

/// Rounds an integer to `bits` significant bits, ties to even.
pub fn round_to_bits(x: &Int, bits: u32) -> Int {
    let len = x.abs().as_bigint().bits();
    if len <= bits as u64 {
        return x.clone();
    }
    let drop = len - bits as u64;
    let mag = x.abs();
    let mut m = mag.shr_floor(drop);
    let rem = mag.mod_pow2(drop);
    let half = Int::pow2(drop - 1);
    let odd = m.mod_pow2(1) == Int::one();
    if rem > half || (rem == half && odd) {
        m = m + Int::one();
    }
    let r = m.shl(drop);
    if x.is_negative() {
        -r
    } else {
        r
    }
}

/// Pairwise (recursive halving) sum with each partial sum rounded.
pub fn pairwise_sum(xs: &[Int], bits: u32) -> Int {
    match xs.len() {
        0 => Int::zero(),
        1 => xs[0].clone(),
        len => {
            let h = len.div_ceil(2);
            round_to_bits(&(pairwise_sum(&xs[..h], bits) + pairwise_sum(&xs[h..], bits)), bits)
        }
    }
}

/// Rounded products, and whether any of them was inexact.
fn rounded_products(terms: &[(Int, Int)], bits: u32) -> (Vec<Int>, bool, Int) {
    let mut inexact = false;
    let mut abs_sum = Int::zero();
    let mut out = Vec::with_capacity(terms.len());
    for (a, b) in terms {
        let p = a * b;
        abs_sum = abs_sum + p.abs();
        if p.is_zero() {
            continue;
        }
        let r = round_to_bits(&p, bits);
        inexact |= r != p;
        out.push(r);
    }
    (out, inexact, abs_sum)
}

/// Summation depth for `m` nonzero terms, plus one if products were rounded.
fn error_depth(m: usize, inexact: bool) -> u64 {
    let base = if m <= 1 { 0 } else { ceil_log2(m as u64) };
    base + inexact as u64
}

/// Approximate middle and lower bands with their certified error budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandPair {
    pub m_hat: BigRational,
    pub l_hat: BigRational,
    pub delta_m_bound: BigRational,
    pub eta_l: BigRational,
    pub s_ell: Int,
}

/// Sums the middle band (magnitude budget `2 s_ell`) and the lower band
/// (budget `s_ell`) in `precision`.
pub fn bandwise_reduce(
    mid_terms: &[(Int, Int)],
    low_terms: &[(Int, Int)],
    s_ell: &Int,
    precision: Precision,
) -> Result<BandPair, FpError> {
    let bits = precision.significand_bits();
    let u = precision.unit_roundoff();
    let (mid, mid_inexact, mid_abs) = rounded_products(mid_terms, bits);
    let (low, low_inexact, low_abs) = rounded_products(low_terms, bits);
    let mid_budget = s_ell.shl(1);
    if mid_abs > mid_budget {
        return Err(FpError::BudgetExceeded {
            band: "middle",
            sum: mid_abs,
            budget: mid_budget,
        });
    }
    if &low_abs > s_ell {
        return Err(FpError::BudgetExceeded {
            band: "lower",
            sum: low_abs,
            budget: s_ell.clone(),
        });
    }
    let insufficient = |bound: String| FpError::PrecisionInsufficient { bound };
    let gm = gamma(error_depth(mid.len(), mid_inexact), &u).ok_or_else(|| insufficient("unbounded".into()))?;
    let gl = gamma(error_depth(low.len(), low_inexact), &u).ok_or_else(|| insufficient("unbounded".into()))?;
    let delta_m_bound = gm * rat(&mid_budget);
    if delta_m_bound > rstar_limit() {
        return Err(insufficient(delta_m_bound.to_string()));
    }
    Ok(BandPair {
        m_hat: rat(&pairwise_sum(&mid, bits)),
        l_hat: rat(&pairwise_sum(&low, bits)),
        delta_m_bound,
        eta_l: gl * rat(s_ell),
        s_ell: s_ell.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpGuard {
    pub s0: Int,
    pub s_ell: Int,
    pub eta_l: BigRational,
    pub delta_m_bound: BigRational,
    pub beta: Int,
}

/// `beta >= 4 (S0 + eta_L) + 1` and `delta_M + (S_ell + eta_L) / beta < 1/2`, exactly.
pub fn fp_guard_holds(g: &FpGuard) -> bool {
    let beta = rat(&g.beta);
    let four = BigRational::from_integer(BigInt::from(4));
    let first = beta >= four * (rat(&g.s0) + &g.eta_l) + BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let second = &g.delta_m_bound + (rat(&g.s_ell) + &g.eta_l) / &beta < half;
    first && second
}

/// Exact middle coefficient from approximate bands, or `GuardViolated`.
pub fn u_free_extract(pair: &BandPair, base: &GlobalBase) -> Result<Int, FpError> {
    let guard = FpGuard {
        s0: base.s0.clone(),
        s_ell: pair.s_ell.clone(),
        eta_l: pair.eta_l.clone(),
        delta_m_bound: pair.delta_m_bound.clone(),
        beta: base.beta.clone(),
    };
    if !fp_guard_holds(&guard) {
        return Err(FpError::GuardViolated);
    }
    let beta = rat(&base.beta);
    let r1 = (&pair.m_hat + &pair.l_hat / &beta).round();
    let r2 = (&pair.m_hat / &beta + &pair.l_hat / (&beta * &beta)).round();
    let m = (r1 - &beta * r2).round();
    Ok(Int::from(m.to_integer()))
}

/// `2^ceil(log2(4 (S0 + eta_L) + 1))`.
pub fn choose_plug_and_play_base(s0: &Int, eta_l: &BigRational) -> GlobalBase {
    let target = BigRational::from_integer(BigInt::from(4)) * (rat(s0) + eta_l) + BigRational::one();
    let mut q = 0u32;
    while pow2_rat(q as i64) < target {
        q += 1;
    }
    GlobalBase {
        q,
        beta: Int::pow2(q as u64),
        s0: s0.clone(),
        n: 0,
        bmax: Int::zero(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpDot {
    pub value: Int,
    pub error_bound: BigRational,
}

/// Pairwise-summed dot product in `precision` with its bound
/// `gamma_p sum |a_i b_i|`.
pub fn classical_dot_fp(a: &[Int], b: &[Int], precision: Precision) -> FpDot {
    assert_eq!(a.len(), b.len(), "dot product of unequal lengths");
    let bits = precision.significand_bits();
    let terms: Vec<(Int, Int)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    let (prods, inexact, abs_sum) = rounded_products(&terms, bits);
    let p = error_depth(a.len(), inexact).max(1);
    let g = gamma(p, &precision.unit_roundoff()).expect("precision far too coarse for this length");
    FpDot {
        value: pairwise_sum(&prods, bits),
        error_bound: g * rat(&abs_sum),
    }
}

/// Leaf evaluator summing bands in floating point; falls back to the exact
/// integer leaf whenever the bands cannot be certified.
pub struct FpLeaf {
    pub precision: Precision,
    pub s_ell: Int,
}

impl LeafEvaluator for FpLeaf {
    fn eval(&mut self, r: &PackedMatrix, s: &PackedMatrix, ctx: &LeafCtx<'_>, ledger: &mut CostLedger) -> Result<IntMatrix, GprError> {
        if ctx.e0 != 0 {
            return IntegerLeaf.eval(r, s, ctx, ledger);
        }
        let (r0, rm) = (r.project(0), r.project(-1));
        let (s0, s1) = (s.project(0), s.project(1));
        let k = r.cols();
        let mut out = IntMatrix::zeros(r.rows(), s.cols()).with_origin(Origin::Derived);
        for i in 0..r.rows() {
            for j in 0..s.cols() {
                let mut mid = Vec::with_capacity(2 * k);
                let mut low = Vec::with_capacity(k);
                for t in 0..k {
                    mid.push((r0.get(i, t).clone(), s0.get(t, j).clone()));
                    mid.push((rm.get(i, t).clone(), s1.get(t, j).clone()));
                    low.push((rm.get(i, t).clone(), s0.get(t, j).clone()));
                }
                ledger.tally("fp_band_terms", 3 * k as u64);
                let extracted = bandwise_reduce(&mid, &low, &self.s_ell, self.precision)
                    .and_then(|pair| u_free_extract(&pair, ctx.base));
                match extracted {
                    Ok(m) => out.set(i, j, m),
                    Err(_) => {
                        ledger.tally("fp_fallbacks", 1);
                        return IntegerLeaf.eval(r, s, ctx, ledger);
                    }
                }
            }
        }
        ledger.tally("leaf_products", 1);
        Ok(out)
    }
}

/// Packed recursion with floating-point leaves. The base is the plug-and-play
/// choice for the lower-band budget of a panel leaf.
pub fn gpr_top_fp(
    a: &IntMatrix,
    b: &IntMatrix,
    bmax: &Int,
    precision: Precision,
    cfg: &GprConfig,
    ledger: &mut CostLedger,
) -> Result<IntMatrix, GprError> {
    let np = a.rows().next_power_of_two();
    if np < 2 {
        return schoolbook_oracle(a, b, ledger);
    }
    // Panel leaves keep the full inner width np/2, so every leaf band is
    // bounded by the root bound S0.
    let s0 = Int::from(np / 2) * (bmax * bmax);
    let bits = precision.significand_bits();
    let products_inexact = (bmax * bmax).bit_length() > bits as u64;
    let p_low = error_depth(np / 2, products_inexact);
    let eta = gamma(p_low, &precision.unit_roundoff())
        .map(|g| g * rat(&s0))
        .ok_or(GprError::InvalidConfig(format!("{precision} is too coarse for n = {np}")))?;
    let mut base = choose_plug_and_play_base(&s0, &eta);
    base.n = np;
    base.bmax = bmax.clone();
    let mut leaf = FpLeaf {
        precision,
        s_ell: s0,
    };
    gpr_top_based(a, b, bmax, cfg, ledger, &mut leaf, &mut |_| Ok(base.clone()))
}

/// One row of the stability comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityRow {
    pub n: usize,
    pub bmax: u64,
    pub precision: String,
    pub trials: u64,
    pub fpgpr_max_err: Int,
    pub classical_max_err: Int,
    pub classical_bound: f64,
    pub fp_fallbacks: u64,
}

impl StabilityRow {
    pub const CSV_HEADER: &'static str = "n,Bmax,precision,fpgprMaxErr,classicalMaxErr,classicalBound";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:e}",
            self.n, self.bmax, self.precision, self.fpgpr_max_err, self.classical_max_err, self.classical_bound
        )
    }
}

/// Random `n x n` instances in `[-bmax, bmax]`: the largest entrywise error
/// of the floating-point-leaf recursion and of the classical pairwise dot
/// product, both in `precision`.
pub fn stability_comparison(n: usize, bmax: u64, trials: u64, seed: u64, precision: Precision) -> Result<StabilityRow, GprError> {
    let b = Int::from(bmax);
    let mut fp_err = Int::zero();
    let mut cl_err = Int::zero();
    let mut cl_bound = BigRational::zero();
    let mut ledger = CostLedger::default();
    for t in 0..trials {
        let mut rng = InstanceRng::for_trial(seed, t);
        let (x, y) = (rng.matrix(n, n, bmax), rng.matrix(n, n, bmax));
        let exact = schoolbook_oracle(&x, &y, &mut CostLedger::default())?;
        let fp = gpr_top_fp(&x, &y, &b, precision, &GprConfig::default(), &mut ledger)?;
        let yt = y.transpose();
        for i in 0..n {
            for j in 0..n {
                fp_err = fp_err.max((fp.get(i, j) - exact.get(i, j)).abs());
                let d = classical_dot_fp(x.row(i), yt.row(j), precision);
                cl_err = cl_err.max((&d.value - exact.get(i, j)).abs());
                if d.error_bound > cl_bound {
                    cl_bound = d.error_bound;
                }
            }
        }
    }
    Ok(StabilityRow {
        n,
        bmax,
        precision: precision.to_string(),
        trials,
        fpgpr_max_err: fp_err,
        classical_max_err: cl_err,
        classical_bound: rat_to_f64(&cl_bound),
        fp_fallbacks: ledger.tally_of("fp_fallbacks"),
    })
}

fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl From<FpError> for GprError {
    fn from(e: FpError) -> Self {
        GprError::InvalidConfig(e.to_string())
    }
}
