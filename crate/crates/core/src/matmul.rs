//! Packed recursive matrix multiplication.
//!
//! The top level splits `A` and `B` into quadrants and forms, for each output
//! quadrant `(i, j)`, the packed pair
//! `R_ij = A_i1 + beta^-1 A_i2`, `S_ij = B_1j + beta B_2j`, whose degree-0
//! coefficient is `C_ij`. [`gpr_packed`] then recurses on those pairs without
//! ever unpacking: a child keeps one row half of each left coefficient and one
//! column half of each right coefficient, so the coefficients handed down are
//! always blocks of the original inputs. Only leaves materialize numbers and
//! extract.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigint::Int;
use crate::extractor::{choose_global_base, depth_bound, mid_beta_q, ExtractError};
use crate::ledger::{CostLedger, LedgerSnapshot};
use crate::matrix::{IntMatrix, MatrixError, Origin};
use crate::packing::{materialize, GlobalBase, PackedMatrix, PackingError};
use crate::rng::{trial_seed, InstanceRng};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GprError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("coefficient ownership violated at depth {depth}: {detail}")]
    ContractViolation { depth: u32, detail: String },
    #[error("entry ({row}, {col}) = {value} exceeds the bound {bmax}")]
    EntryBoundViolation { row: usize, col: usize, value: Int, bmax: Int },
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Mode {
    /// Packed recursion all the way to the leaves.
    #[default]
    LiteralRecursion,
    /// One level of packing per call; coefficient products by plain recursion.
    SingleLevelPacked,
}

/// How a node's packed operands are cut for its children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ChildShape {
    /// Row half of every left coefficient at full inner width, column half of
    /// every right coefficient.
    #[default]
    Panel,
    /// Square quarter blocks: `R0[i][0] + beta^-1 R-1[i][1]` and
    /// `S0[0][j] + beta S1[1][j]`. Drops the cross terms, so it is wrong for
    /// any node with inner width above one; kept to exercise mismatch reporting.
    SquareBlocks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GprConfig {
    pub n0: usize,
    pub audit_co: bool,
    pub mode: Mode,
    pub child_shape: ChildShape,
}

impl Default for GprConfig {
    fn default() -> Self {
        GprConfig {
            n0: 1,
            audit_co: false,
            mode: Mode::LiteralRecursion,
            child_shape: ChildShape::Panel,
        }
    }
}

impl GprConfig {
    pub fn audited() -> Self {
        GprConfig {
            audit_co: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), GprError> {
        if self.n0 == 0 || !self.n0.is_power_of_two() {
            return Err(GprError::InvalidConfig(format!("n0 = {} is not a power of two", self.n0)));
        }
        Ok(())
    }
}

/// Position of a leaf in the global output, passed to leaf evaluators.
#[derive(Debug, Clone, Copy)]
pub struct LeafCtx<'a> {
    pub base: &'a GlobalBase,
    pub e0: i32,
    pub depth: u32,
    pub row: usize,
    pub col: usize,
}

/// Computes the degree-`e0` coefficient of `R S` for a leaf pair.
pub trait LeafEvaluator {
    fn eval(&mut self, r: &PackedMatrix, s: &PackedMatrix, ctx: &LeafCtx<'_>, ledger: &mut CostLedger) -> Result<IntMatrix, GprError>;
}

/// Materializes `beta R(beta)` and `S(beta)`, multiplies them as integers and
/// extracts the middle digit of each entry.
#[derive(Debug, Default, Clone, Copy)]
pub struct IntegerLeaf;

/// `beta R(beta) S(beta)` entrywise, with operand widths recorded at the leaf depth.
pub fn leaf_scaled_product(r: &PackedMatrix, s: &PackedMatrix, q: u64, ledger: &mut CostLedger) -> Result<IntMatrix, GprError> {
    let vr = materialize(r, q, 1, ledger)?;
    let vs = materialize(s, q, 0, ledger)?;
    for v in vr.entries().iter().chain(vs.entries()) {
        ledger.record_temporary(v);
    }
    ledger.tally("leaf_products", 1);
    Ok(vr.mul_costed(&vs, ledger)?)
}

/// Applies `beta^-e0` to a scaled value.
pub fn shift_to_target(v: &Int, e0: i32, q: u64, ledger: &mut CostLedger) -> Result<Int, GprError> {
    if e0 == 0 {
        return Ok(v.clone());
    }
    ledger
        .shift(v, -(e0 as i64) * q as i64)
        .map_err(|e| GprError::ContractViolation {
            depth: ledger.current_depth().unwrap_or(0),
            detail: e.to_string(),
        })
}

impl LeafEvaluator for IntegerLeaf {
    fn eval(&mut self, r: &PackedMatrix, s: &PackedMatrix, ctx: &LeafCtx<'_>, ledger: &mut CostLedger) -> Result<IntMatrix, GprError> {
        let q = ctx.base.q as u64;
        let z = leaf_scaled_product(r, s, q, ledger)?;
        let mut out = IntMatrix::zeros(z.rows(), z.cols()).with_origin(Origin::Derived);
        for i in 0..z.rows() {
            for j in 0..z.cols() {
                let v = shift_to_target(z.get(i, j), ctx.e0, q, ledger)?;
                out.set(i, j, mid_beta_q(&v, q, ledger)?);
            }
        }
        Ok(out)
    }
}

pub fn schoolbook_oracle(a: &IntMatrix, b: &IntMatrix, ledger: &mut CostLedger) -> Result<IntMatrix, GprError> {
    Ok(a.mul_costed(b, ledger)?)
}

/// The four top-level pairs `(R_ij, S_ij)`, indexed `[i][j]`.
pub fn quadrant_packings(a: &IntMatrix, b: &IntMatrix) -> Result<[[(PackedMatrix, PackedMatrix); 2]; 2], GprError> {
    let n = a.rows();
    if n % 2 != 0 {
        return Err(GprError::OddDimension(n));
    }
    if a.shape() != (n, n) || b.shape() != (n, n) {
        return Err(MatrixError::ShapeMismatch("quadrant packing needs equal square matrices".into()).into());
    }
    let h = n / 2;
    let qa = |i: usize, k: usize| a.block(i * h, k * h, h, h);
    let qb = |k: usize, j: usize| b.block(k * h, j * h, h, h);
    let pair = |i: usize, j: usize| -> Result<(PackedMatrix, PackedMatrix), GprError> {
        let r = PackedMatrix::embed_shaped(h, h, vec![(0, qa(i, 0)), (-1, qa(i, 1))])?;
        let s = PackedMatrix::embed_shaped(h, h, vec![(0, qb(0, j)), (1, qb(1, j))])?;
        Ok((r, s))
    };
    Ok([[pair(0, 0)?, pair(0, 1)?], [pair(1, 0)?, pair(1, 1)?]])
}

/// Index ranges `(start, len)` of the halves of `len`, or the whole range
/// when it is already within the cutoff.
fn halves(len: usize, n0: usize) -> Vec<(usize, usize)> {
    if len <= n0 {
        vec![(0, len)]
    } else {
        let h = len.div_ceil(2);
        vec![(0, h), (h, len - h)]
    }
}

fn audit_operands(r: &PackedMatrix, s: &PackedMatrix, base: &GlobalBase, depth: u32) -> Result<(), GprError> {
    let fail = |detail: String| Err(GprError::ContractViolation { depth, detail });
    if let Some(d) = r.support().into_iter().find(|d| !(-1..=0).contains(d)) {
        return fail(format!("left operand carries degree {d}"));
    }
    if let Some(d) = s.support().into_iter().find(|d| !(0..=1).contains(d)) {
        return fail(format!("right operand carries degree {d}"));
    }
    for (side, p) in [("left", r), ("right", s)] {
        for (d, m) in p.coeffs() {
            if m.origin() != Origin::Input {
                return fail(format!("{side} degree-{d} coefficient is a product, not an input block"));
            }
            if m.max_abs() > base.bmax {
                return fail(format!("{side} degree-{d} coefficient exceeds the entry bound {}", base.bmax));
            }
        }
    }
    Ok(())
}

fn child_pair(
    r: &PackedMatrix,
    s: &PackedMatrix,
    (r0, rh): (usize, usize),
    (c0, ch): (usize, usize),
    shape: ChildShape,
) -> Result<(PackedMatrix, PackedMatrix), GprError> {
    let k = r.cols();
    let (rp0, rm1) = (r.project(0), r.project(-1));
    let (sp0, sp1) = (s.project(0), s.project(1));
    if shape == ChildShape::SquareBlocks && k >= 2 {
        let kh = k / 2;
        let rc = PackedMatrix::embed_shaped(rh, kh, vec![(0, rp0.block(r0, 0, rh, kh)), (-1, rm1.block(r0, kh, rh, kh))])?;
        let sc = PackedMatrix::embed_shaped(kh, ch, vec![(0, sp0.block(0, c0, kh, ch)), (1, sp1.block(kh, c0, kh, ch))])?;
        return Ok((rc, sc));
    }
    let rc = PackedMatrix::embed_shaped(rh, k, vec![(0, rp0.block(r0, 0, rh, k)), (-1, rm1.block(r0, 0, rh, k))])?;
    let sc = PackedMatrix::embed_shaped(k, ch, vec![(0, sp0.block(0, c0, k, ch)), (1, sp1.block(0, c0, k, ch))])?;
    Ok((rc, sc))
}

/// Degree-`e0` coefficient of `R S`. `row`/`col` locate this node's output
/// block in the global result and are only used by leaf evaluators.
#[allow(clippy::too_many_arguments)]
pub fn gpr_packed(
    r: &PackedMatrix,
    s: &PackedMatrix,
    base: &GlobalBase,
    e0: i32,
    cfg: &GprConfig,
    ledger: &mut CostLedger,
    depth: u32,
    (row, col): (usize, usize),
    leaf: &mut dyn LeafEvaluator,
) -> Result<IntMatrix, GprError> {
    if r.cols() != s.rows() {
        return Err(MatrixError::ShapeMismatch(format!(
            "packed operands {}x{} and {}x{}",
            r.rows(),
            r.cols(),
            s.rows(),
            s.cols()
        ))
        .into());
    }
    ledger.enter_depth(depth);
    let out = gpr_packed_inner(r, s, base, e0, cfg, ledger, depth, (row, col), leaf);
    ledger.exit_depth();
    let out = out?;
    if cfg.audit_co {
        // Each output entry is a sum of 2k products of entries bounded by B.
        let bound = Int::from(2 * r.cols()) * (&base.bmax * &base.bmax);
        let exact_bound = depth_bound(base.n, &base.bmax, depth).ok().map(|b| b.shl(1));
        for v in out.entries() {
            let a = v.abs();
            if a > bound {
                return Err(GprError::ContractViolation {
                    depth,
                    detail: format!("returned coefficient {v} exceeds {bound}"),
                });
            }
            if exact_bound.as_ref().is_some_and(|b| &a > b) {
                ledger.tally("returns_above_2s_ell", 1);
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn gpr_packed_inner(
    r: &PackedMatrix,
    s: &PackedMatrix,
    base: &GlobalBase,
    e0: i32,
    cfg: &GprConfig,
    ledger: &mut CostLedger,
    depth: u32,
    (row, col): (usize, usize),
    leaf: &mut dyn LeafEvaluator,
) -> Result<IntMatrix, GprError> {
    if cfg.audit_co {
        audit_operands(r, s, base, depth)?;
    }
    if r.rows() <= cfg.n0 && s.cols() <= cfg.n0 {
        let ctx = LeafCtx { base, e0, depth, row, col };
        return leaf.eval(r, s, &ctx, ledger);
    }
    if cfg.audit_co {
        // Audit runs also materialize internal operands so widths are
        // observable at every depth.
        let q = base.q as u64;
        for v in materialize(r, q, 1, ledger)?.entries() {
            ledger.record_temporary(v);
        }
        for v in materialize(s, q, 0, ledger)?.entries() {
            ledger.record_temporary(v);
        }
    }
    let mut out = IntMatrix::zeros(r.rows(), s.cols()).with_origin(Origin::Derived);
    for rr in halves(r.rows(), cfg.n0) {
        for cc in halves(s.cols(), cfg.n0) {
            let (rc, sc) = child_pair(r, s, rr, cc, cfg.child_shape)?;
            let block = gpr_packed(&rc, &sc, base, e0, cfg, ledger, depth + 1, (row + rr.0, col + cc.0), leaf)?;
            out.place(rr.0, cc.0, &block);
        }
    }
    Ok(out)
}

/// Checks squareness and the entry bound; returns the size.
pub fn check_inputs(a: &IntMatrix, b: &IntMatrix, bmax: &Int) -> Result<usize, GprError> {
    let n = a.rows();
    if a.shape() != (n, n) || b.shape() != (n, n) {
        return Err(MatrixError::ShapeMismatch(format!(
            "need equal square matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ))
        .into());
    }
    for m in [a, b] {
        for i in 0..n {
            for j in 0..n {
                if &m.get(i, j).abs() > bmax {
                    return Err(GprError::EntryBoundViolation {
                        row: i,
                        col: j,
                        value: m.get(i, j).clone(),
                        bmax: bmax.clone(),
                    });
                }
            }
        }
    }
    Ok(n)
}

/// Runs the four top-level packed calls on already padded power-of-two
/// inputs and assembles the product.
pub fn packed_top(
    a: &IntMatrix,
    b: &IntMatrix,
    base: &GlobalBase,
    cfg: &GprConfig,
    ledger: &mut CostLedger,
    leaf: &mut dyn LeafEvaluator,
) -> Result<IntMatrix, GprError> {
    let n = a.rows();
    let h = n / 2;
    let packs = quadrant_packings(a, b)?;
    let mut out = IntMatrix::zeros(n, n).with_origin(Origin::Derived);
    for (i, row) in packs.iter().enumerate() {
        for (j, (r, s)) in row.iter().enumerate() {
            let block = gpr_packed(r, s, base, 0, cfg, ledger, 0, (i * h, j * h), leaf)?;
            out.place(i * h, j * h, &block);
        }
    }
    Ok(out)
}

/// `A B` for square inputs with `|entries| <= bmax`.
pub fn gpr_top(a: &IntMatrix, b: &IntMatrix, bmax: &Int, cfg: &GprConfig, ledger: &mut CostLedger) -> Result<IntMatrix, GprError> {
    gpr_top_with(a, b, bmax, cfg, ledger, &mut IntegerLeaf)
}

pub fn gpr_top_with(
    a: &IntMatrix,
    b: &IntMatrix,
    bmax: &Int,
    cfg: &GprConfig,
    ledger: &mut CostLedger,
    leaf: &mut dyn LeafEvaluator,
) -> Result<IntMatrix, GprError> {
    gpr_top_based(a, b, bmax, cfg, ledger, leaf, &mut |n| Ok(choose_global_base(n, bmax)?))
}

/// As [`gpr_top_with`], with the base computed from the padded size by `make_base`.
pub fn gpr_top_based(
    a: &IntMatrix,
    b: &IntMatrix,
    bmax: &Int,
    cfg: &GprConfig,
    ledger: &mut CostLedger,
    leaf: &mut dyn LeafEvaluator,
    make_base: &mut dyn FnMut(usize) -> Result<GlobalBase, GprError>,
) -> Result<IntMatrix, GprError> {
    cfg.validate()?;
    let n = check_inputs(a, b, bmax)?;
    let np = n.next_power_of_two();
    if np <= cfg.n0 {
        return schoolbook_oracle(a, b, ledger);
    }
    let (ap, bp) = (a.padded(np, np), b.padded(np, np));
    let full = match cfg.mode {
        Mode::LiteralRecursion => {
            let base = make_base(np)?;
            packed_top(&ap, &bp, &base, cfg, ledger, leaf)?
        }
        Mode::SingleLevelPacked => single_level(&ap, &bp, cfg.n0, ledger)?,
    };
    Ok(full.block(0, 0, n, n))
}

/// Degree-`e` coefficient of `U V` using `mul` for block products and only
/// the pairs that land on `e`.
pub fn project_product_with(
    u: &PackedMatrix,
    v: &PackedMatrix,
    e: i32,
    ledger: &mut CostLedger,
    mul: &mut dyn FnMut(&IntMatrix, &IntMatrix, &mut CostLedger) -> Result<IntMatrix, GprError>,
) -> Result<IntMatrix, GprError> {
    let mut acc = IntMatrix::zeros(u.rows(), v.cols()).with_origin(Origin::Derived);
    for (p, up) in u.coeffs() {
        if let Some(vq) = v.coeff(e - p) {
            let prod = mul(up, vq, ledger)?;
            acc = acc.add_costed(&prod, ledger)?;
        }
    }
    Ok(acc)
}

fn single_level(a: &IntMatrix, b: &IntMatrix, n0: usize, ledger: &mut CostLedger) -> Result<IntMatrix, GprError> {
    let n = a.rows();
    if n <= n0 {
        return schoolbook_oracle(a, b, ledger);
    }
    let h = n / 2;
    let packs = quadrant_packings(a, b)?;
    let mut out = IntMatrix::zeros(n, n).with_origin(Origin::Derived);
    for (i, row) in packs.iter().enumerate() {
        for (j, (r, s)) in row.iter().enumerate() {
            let block = project_product_with(r, s, 0, ledger, &mut |x, y, l| single_level(x, y, n0, l))?;
            out.place(i * h, j * h, &block);
        }
    }
    Ok(out)
}

/// Top-level quadrant followed by each child quadrant down to the leaf that
/// produces output entry `(row, col)` of a padded `np x np` product, and the
/// leaf's depth.
pub fn locate_leaf(np: usize, n0: usize, row: usize, col: usize) -> (Vec<[u8; 2]>, u32) {
    let h = np / 2;
    let mut path = vec![[(row / h) as u8, (col / h) as u8]];
    let (mut r, mut c) = (row % h, col % h);
    let (mut rows, mut cols) = (h, h);
    while rows > n0 || cols > n0 {
        let (mut qi, mut qj) = (0u8, 0u8);
        if rows > n0 {
            let half = rows.div_ceil(2);
            if r >= half {
                qi = 1;
                r -= half;
                rows -= half;
            } else {
                rows = half;
            }
        }
        if cols > n0 {
            let half = cols.div_ceil(2);
            if c >= half {
                qj = 1;
                c -= half;
                cols -= half;
            } else {
                cols = half;
            }
        }
        path.push([qi, qj]);
    }
    let depth = (path.len() - 1) as u32;
    (path, depth)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Mismatch {
    pub trial: u64,
    pub trial_seed: u64,
    pub quadrant_path: Vec<[u8; 2]>,
    pub depth: u32,
    pub row: usize,
    pub col: usize,
    pub expected: Int,
    pub got: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConformanceReport {
    pub n: usize,
    pub bmax: u64,
    pub seed: u64,
    pub trials: u64,
    pub mode: Mode,
    pub child_shape: ChildShape,
    pub passed: bool,
    pub mismatched_trials: u64,
    pub first_mismatch: Option<Mismatch>,
    pub error: Option<String>,
    pub leaf_products: u64,
    pub ledger: LedgerSnapshot,
}

/// Random `n x n` pairs with entries in `[-bmax, bmax]`, trial `t` seeded by
/// [`trial_seed`]`(seed, t)`, compared entrywise against the schoolbook product.
pub fn run_conformance(n: usize, bmax: u64, trials: u64, seed: u64, cfg: &GprConfig) -> ConformanceReport {
    run_conformance_on(n, bmax, trials, seed, cfg, |rng| (rng.matrix(n, n, bmax), rng.matrix(n, n, bmax)))
}

/// As [`run_conformance`] with a custom instance generator.
pub fn run_conformance_on(
    n: usize,
    bmax: u64,
    trials: u64,
    seed: u64,
    cfg: &GprConfig,
    mut make: impl FnMut(&mut InstanceRng) -> (IntMatrix, IntMatrix),
) -> ConformanceReport {
    let mut ledger = CostLedger::default();
    let mut oracle_ledger = CostLedger::default();
    let bound = Int::from(bmax);
    let np = n.next_power_of_two();
    let mut first_mismatch = None;
    let mut error = None;
    let mut mismatched = 0;
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let (a, b) = make(&mut InstanceRng::new(ts));
        let expected = schoolbook_oracle(&a, &b, &mut oracle_ledger).expect("square inputs");
        match gpr_top(&a, &b, &bound, cfg, &mut ledger) {
            Ok(got) => {
                let diff = (0..n * n).map(|k| (k / n, k % n)).find(|&(i, j)| got.get(i, j) != expected.get(i, j));
                if let Some((row, col)) = diff {
                    mismatched += 1;
                    if first_mismatch.is_none() {
                        let (quadrant_path, depth) = if np > cfg.n0 && cfg.mode == Mode::LiteralRecursion {
                            locate_leaf(np, cfg.n0, row, col)
                        } else {
                            (Vec::new(), 0)
                        };
                        first_mismatch = Some(Mismatch {
                            trial: t,
                            trial_seed: ts,
                            quadrant_path,
                            depth,
                            row,
                            col,
                            expected: expected.get(row, col).clone(),
                            got: got.get(row, col).clone(),
                        });
                    }
                }
            }
            Err(e) => {
                mismatched += 1;
                if error.is_none() {
                    error = Some(format!("trial {t} (seed {ts}): {e}"));
                }
            }
        }
    }
    ConformanceReport {
        n,
        bmax,
        seed,
        trials,
        mode: cfg.mode,
        child_shape: cfg.child_shape,
        passed: first_mismatch.is_none() && error.is_none(),
        mismatched_trials: mismatched,
        first_mismatch,
        error,
        leaf_products: ledger.tally_of("leaf_products"),
        ledger: ledger.snapshot(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::formal_product;

    fn ones(n: usize) -> IntMatrix {
        IntMatrix::from_fn(n, n, |_, _| Int::one())
    }

    #[test]
    fn scalar_leaf() {
        let mut l = CostLedger::default();
        let base = GlobalBase::power_of_two(6);
        let r = PackedMatrix::embed(vec![(0, IntMatrix::from_i64(1, 1, &[1])), (-1, IntMatrix::from_i64(1, 1, &[2]))]).unwrap();
        let s = PackedMatrix::embed(vec![(0, IntMatrix::from_i64(1, 1, &[3])), (1, IntMatrix::from_i64(1, 1, &[4]))]).unwrap();
        let out = gpr_packed(&r, &s, &base, 0, &GprConfig::default(), &mut l, 0, (0, 0), &mut IntegerLeaf).unwrap();
        assert_eq!(out, IntMatrix::from_i64(1, 1, &[11]));
    }

    #[test]
    fn all_ones_quadrants() {
        let mut l = CostLedger::default();
        let a = ones(4);
        let base = choose_global_base(4, &Int::one()).unwrap();
        let packs = quadrant_packings(&a, &a).unwrap();
        for row in &packs {
            for (r, s) in row {
                let out = gpr_packed(r, s, &base, 0, &GprConfig::audited(), &mut l, 0, (0, 0), &mut IntegerLeaf).unwrap();
                assert_eq!(out, IntMatrix::from_i64(2, 2, &[4, 4, 4, 4]));
            }
        }
        let c = gpr_top(&a, &a, &Int::one(), &GprConfig::default(), &mut l).unwrap();
        assert_eq!(c, IntMatrix::from_fn(4, 4, |_, _| Int::from(4)));
    }

    #[test]
    fn pure_base_case_matches_formal_projection() {
        let mut rng = InstanceRng::new(3);
        let cfg = GprConfig { n0: 2, ..GprConfig::audited() };
        let base = choose_global_base(4, &Int::from(5)).unwrap();
        for _ in 0..20 {
            let r = PackedMatrix::embed(vec![(0, rng.matrix(2, 2, 5)), (-1, rng.matrix(2, 2, 5))]).unwrap();
            let s = PackedMatrix::embed(vec![(0, rng.matrix(2, 2, 5)), (1, rng.matrix(2, 2, 5))]).unwrap();
            let mut l = CostLedger::default();
            let got = gpr_packed(&r, &s, &base, 0, &cfg, &mut l, 0, (0, 0), &mut IntegerLeaf).unwrap();
            assert_eq!(got, formal_product(&r, &s, &mut l).unwrap().project(0));
        }
    }

    #[test]
    fn packing_layout() {
        let a = IntMatrix::from_fn(4, 4, |i, j| Int::from((10 * i + j) as i64));
        let b = IntMatrix::from_fn(4, 4, |i, j| Int::from(-((10 * i + j) as i64)));
        let p = quadrant_packings(&a, &b).unwrap();
        let (r11, s11) = &p[0][0];
        assert_eq!(r11.project(0), a.block(0, 0, 2, 2));
        assert_eq!(r11.project(-1), a.block(0, 2, 2, 2));
        assert_eq!(s11.project(0), b.block(0, 0, 2, 2));
        assert_eq!(s11.project(1), b.block(2, 0, 2, 2));
        let (r22, s22) = &p[1][1];
        assert_eq!(r22.project(0), a.block(2, 0, 2, 2));
        assert_eq!(r22.project(-1), a.block(2, 2, 2, 2));
        assert_eq!(s22.project(0), b.block(0, 2, 2, 2));
        assert_eq!(s22.project(1), b.block(2, 2, 2, 2));
        assert_eq!(quadrant_packings(&IntMatrix::zeros(3, 3), &IntMatrix::zeros(3, 3)), Err(GprError::OddDimension(3)));
    }

    #[test]
    fn cutoff_returns_schoolbook() {
        let mut l = CostLedger::default();
        let a = IntMatrix::from_i64(2, 2, &[1, 2, 3, 4]);
        let cfg = GprConfig { n0: 2, ..GprConfig::default() };
        assert_eq!(gpr_top(&a, &a, &Int::from(4), &cfg, &mut l).unwrap(), IntMatrix::from_i64(2, 2, &[7, 10, 15, 22]));
        assert_eq!(l.tally_of("leaf_products"), 0);
    }

    #[test]
    fn entry_bound_is_enforced() {
        let mut l = CostLedger::default();
        let a = IntMatrix::from_i64(2, 2, &[1, 2, 3, 4]);
        assert!(matches!(
            gpr_top(&a, &a, &Int::from(3), &GprConfig::default(), &mut l),
            Err(GprError::EntryBoundViolation { row: 1, col: 1, .. })
        ));
    }

    #[test]
    fn padding_is_stripped() {
        let mut l = CostLedger::default();
        let mut rng = InstanceRng::new(11);
        let a = rng.matrix(5, 5, 2);
        let b = rng.matrix(5, 5, 2);
        let got = gpr_top(&a, &b, &Int::from(2), &GprConfig::audited(), &mut l).unwrap();
        assert_eq!(got, schoolbook_oracle(&a, &b, &mut CostLedger::default()).unwrap());
    }

    #[test]
    fn leaf_path_location() {
        let (path, depth) = locate_leaf(8, 1, 5, 2);
        assert_eq!(path, vec![[1, 0], [0, 1], [1, 0]]);
        assert_eq!(depth, 2);
    }

    #[test]
    fn square_children_are_reported_not_aborted() {
        let cfg = GprConfig {
            child_shape: ChildShape::SquareBlocks,
            ..GprConfig::default()
        };
        let rep = run_conformance(8, 1, 5, 1, &cfg);
        assert!(!rep.passed);
        let m = rep.first_mismatch.expect("square children drop terms");
        assert_eq!(m.quadrant_path.len() as u32, m.depth + 1);
        assert_ne!(m.expected, m.got);
        assert_eq!(rep.trials, 5);
    }
}
