//! Graded embeddings: matrices indexed by an integer degree, their formal
//! products, and numeric materialization at a power-of-two base.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use thiserror::Error;

use crate::bigint::Int;
use crate::ledger::CostLedger;
use crate::matrix::{IntMatrix, MatrixError, Origin};

/// Degrees outside this range are rejected outright.
pub const MIN_DEGREE: i32 = -8;
pub const MAX_DEGREE: i32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("degree {0} appears twice")]
    DuplicateDegree(i32),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("degree {0} outside [{MIN_DEGREE}, {MAX_DEGREE}]")]
    DegreeOutOfRange(i32),
    #[error("cannot embed an empty block list")]
    Empty,
    #[error("degree {0} cannot be materialized (support must lie in {{-1, 0, 1}})")]
    UnsupportedSupport(i32),
    #[error("malformed packed matrix: {0}")]
    Format(String),
}

impl From<MatrixError> for PackingError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::ShapeMismatch(s) => PackingError::ShapeMismatch(s),
            MatrixError::Parse(s) => PackingError::Format(s),
        }
    }
}

/// `X(beta) = sum_d beta^d X[d]` with all coefficients of one shape.
/// Zero coefficients are dropped, so [`PackedMatrix::support`] lists only
/// degrees that actually contribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedMatrix {
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<i32, IntMatrix>,
    declared: BTreeSet<i32>,
}

fn check_degree(d: i32) -> Result<(), PackingError> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&d) {
        return Err(PackingError::DegreeOutOfRange(d));
    }
    Ok(())
}

impl PackedMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PackedMatrix {
            rows,
            cols,
            coeffs: BTreeMap::new(),
            declared: BTreeSet::new(),
        }
    }

    /// Embeds `(degree, block)` pairs; the shape is taken from the first block.
    pub fn embed(blocks: Vec<(i32, IntMatrix)>) -> Result<Self, PackingError> {
        let (rows, cols) = blocks.first().ok_or(PackingError::Empty)?.1.shape();
        Self::embed_shaped(rows, cols, blocks)
    }

    /// Like [`embed`](Self::embed) but with an explicit shape, so an empty list is allowed.
    pub fn embed_shaped(rows: usize, cols: usize, blocks: Vec<(i32, IntMatrix)>) -> Result<Self, PackingError> {
        let mut p = PackedMatrix::zero(rows, cols);
        for (d, m) in blocks {
            check_degree(d)?;
            if m.shape() != (rows, cols) {
                return Err(PackingError::ShapeMismatch(format!(
                    "degree {d} block is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !p.declared.insert(d) {
                return Err(PackingError::DuplicateDegree(d));
            }
            if !m.is_zero() {
                p.coeffs.insert(d, m);
            }
        }
        Ok(p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Degrees with a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<i32> {
        self.coeffs.keys().copied().collect()
    }

    pub fn declared_support(&self) -> &BTreeSet<i32> {
        &self.declared
    }

    pub fn coeff(&self, d: i32) -> Option<&IntMatrix> {
        self.coeffs.get(&d)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &IntMatrix)> {
        self.coeffs.iter().map(|(&d, m)| (d, m))
    }

    /// The degree-`e` coefficient, or the zero matrix when absent.
    pub fn project(&self, e: i32) -> IntMatrix {
        self.coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.rows, self.cols))
    }

    /// Coefficientwise sum.
    pub fn add(&self, other: &PackedMatrix) -> Result<PackedMatrix, PackingError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(PackingError::ShapeMismatch("packed sum of different shapes".into()));
        }
        let degrees: BTreeSet<i32> = self.declared.union(&other.declared).copied().collect();
        let mut blocks = Vec::new();
        for d in degrees {
            blocks.push((d, self.project(d).plus(&other.project(d))?));
        }
        Self::embed_shaped(self.rows, self.cols, blocks)
    }

    pub fn to_json(&self) -> Value {
        let blocks: serde_json::Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(d, m)| (d.to_string(), Value::String(m.to_string())))
            .collect();
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "support": self.support().into_iter().collect::<Vec<_>>(),
            "blocks": blocks,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, PackingError> {
        let bad = |what: &str| PackingError::Format(what.to_string());
        let blocks = v.get("blocks").and_then(Value::as_object).ok_or_else(|| bad("missing blocks"))?;
        let mut parsed = Vec::new();
        for (k, m) in blocks {
            let d: i32 = k.parse().map_err(|_| bad("degree key is not an integer"))?;
            let text = m.as_str().ok_or_else(|| bad("block must be matrix text"))?;
            parsed.push((d, text.parse::<IntMatrix>()?));
        }
        let dim = |key: &str| v.get(key).and_then(Value::as_u64).map(|x| x as usize);
        match (dim("rows"), dim("cols")) {
            (Some(r), Some(c)) => Self::embed_shaped(r, c, parsed),
            _ => Self::embed(parsed),
        }
    }
}

/// `W[e] = sum_{p+q=e} U[p] V[q]`, every block product by costed schoolbook.
pub fn formal_product(u: &PackedMatrix, v: &PackedMatrix, ledger: &mut CostLedger) -> Result<PackedMatrix, PackingError> {
    if u.cols != v.rows {
        return Err(PackingError::ShapeMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            u.rows, u.cols, v.rows, v.cols
        )));
    }
    let mut acc: BTreeMap<i32, IntMatrix> = BTreeMap::new();
    for (p, up) in u.coeffs() {
        for (q, vq) in v.coeffs() {
            let e = p + q;
            check_degree(e)?;
            let prod = up.mul_costed(vq, ledger)?;
            let next = match acc.remove(&e) {
                Some(prev) => prev.add_costed(&prod, ledger)?,
                None => prod,
            };
            acc.insert(e, next);
        }
    }
    let mut w = PackedMatrix::zero(u.rows, v.cols);
    for (e, m) in acc {
        w.declared.insert(e);
        if !m.is_zero() {
            w.coeffs.insert(e, m.with_origin(Origin::Derived));
        }
    }
    Ok(w)
}

/// Number of nonzero coefficient pairs `(p, q)` with `p + q = e0`.
pub fn convolution_width(u: &PackedMatrix, v: &PackedMatrix, e0: i32) -> usize {
    u.coeffs
        .keys()
        .filter(|&&p| v.coeffs.contains_key(&(e0 - p)))
        .count()
}

/// Entrywise `sum_d 2^{q (d + scale)} P[d]`. Requires `d + scale >= 0` for
/// every stored degree so that only left shifts occur.
pub fn materialize(p: &PackedMatrix, q: u64, scale: i32, ledger: &mut CostLedger) -> Result<IntMatrix, PackingError> {
    for &d in p.coeffs.keys() {
        if d + scale < 0 {
            return Err(PackingError::UnsupportedSupport(d));
        }
    }
    let mut out = IntMatrix::zeros(p.rows, p.cols).with_origin(Origin::Derived);
    for i in 0..p.rows {
        for j in 0..p.cols {
            let mut acc: Option<Int> = None;
            for (&d, m) in &p.coeffs {
                let x = m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let term = ledger
                    .shift(x, q as i64 * (d + scale) as i64)
                    .expect("left shifts are exact");
                acc = Some(match acc {
                    Some(a) => ledger.add(&a, &term),
                    None => term,
                });
            }
            out.set(i, j, acc.unwrap_or_default());
        }
    }
    Ok(out)
}

/// `beta * P(beta)` for support in `{-1, 0, 1}`: a value
/// `z = U beta + M + L / beta` is carried as `U beta^2 + M beta + L`.
pub fn materialize_scaled(p: &PackedMatrix, base: &GlobalBase, ledger: &mut CostLedger) -> Result<IntMatrix, PackingError> {
    if let Some(&d) = p.coeffs.keys().find(|&&d| !(-1..=1).contains(&d)) {
        return Err(PackingError::UnsupportedSupport(d));
    }
    materialize(p, base.q as u64, 1, ledger)
}

/// A power-of-two packing base `beta = 2^q` and the root bound it was sized for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalBase {
    pub q: u32,
    pub beta: Int,
    pub s0: Int,
    pub n: usize,
    pub bmax: Int,
}

impl GlobalBase {
    /// `beta = 2^q` with the largest root bound it supports, `floor((beta-1)/4)`.
    pub fn power_of_two(q: u32) -> Self {
        let beta = Int::pow2(q as u64);
        let s0 = (&beta - &Int::one()).shr_floor(2);
        GlobalBase {
            q,
            beta,
            s0,
            n: 0,
            bmax: Int::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1(v: i64) -> IntMatrix {
        IntMatrix::from_i64(1, 1, &[v])
    }

    #[test]
    fn embed_records_support() {
        let a = IntMatrix::from_i64(2, 2, &[1, 2, 3, 4]);
        let b = IntMatrix::from_i64(2, 2, &[0, 1, 0, 0]);
        let r = PackedMatrix::embed(vec![(0, a.clone()), (-1, b.clone())]).unwrap();
        assert_eq!(r.support(), BTreeSet::from([-1, 0]));
        let s = PackedMatrix::embed(vec![(0, a.clone()), (1, b)]).unwrap();
        assert_eq!(s.support(), BTreeSet::from([0, 1]));
        assert_eq!(
            PackedMatrix::embed(vec![(0, a.clone()), (0, a.clone())]),
            Err(PackingError::DuplicateDegree(0))
        );
        assert!(matches!(
            PackedMatrix::embed(vec![(0, a), (1, m1(3))]),
            Err(PackingError::ShapeMismatch(_))
        ));
        assert_eq!(PackedMatrix::embed(vec![(9, m1(1))]), Err(PackingError::DegreeOutOfRange(9)));
    }

    #[test]
    fn zero_blocks_are_pruned() {
        let p = PackedMatrix::embed(vec![(0, m1(5)), (-1, m1(0))]).unwrap();
        assert_eq!(p.support(), BTreeSet::from([0]));
        assert_eq!(p.declared_support(), &BTreeSet::from([-1, 0]));
        assert_eq!(p.project(-1), m1(0));
        assert_eq!(p.project(5), m1(0));
    }

    #[test]
    fn scalar_formal_product() {
        let mut l = CostLedger::default();
        let r = PackedMatrix::embed(vec![(0, m1(1)), (-1, m1(2))]).unwrap();
        let s = PackedMatrix::embed(vec![(0, m1(3)), (1, m1(4))]).unwrap();
        let w = formal_product(&r, &s, &mut l).unwrap();
        assert_eq!(w.project(-1), m1(6));
        assert_eq!(w.project(0), m1(11));
        assert_eq!(w.project(1), m1(4));
        assert_eq!(convolution_width(&r, &s, 0), 2);
        assert_eq!(convolution_width(&r, &s, -1), 1);
        assert_eq!(convolution_width(&r, &s, 3), 0);
    }

    #[test]
    fn materialize_examples() {
        let mut l = CostLedger::default();
        let base = GlobalBase::power_of_two(6);
        let p = PackedMatrix::embed(vec![(-1, m1(6)), (0, m1(11)), (1, m1(4))]).unwrap();
        assert_eq!(materialize_scaled(&p, &base, &mut l).unwrap(), m1(17094));
        let u = PackedMatrix::embed(vec![(0, m1(-7))]).unwrap();
        assert_eq!(materialize_scaled(&u, &base, &mut l).unwrap(), m1(-7 * 64));
        let bad = PackedMatrix::embed(vec![(-2, m1(1))]).unwrap();
        assert_eq!(materialize_scaled(&bad, &base, &mut l), Err(PackingError::UnsupportedSupport(-2)));
    }

    #[test]
    fn json_round_trip() {
        let p = PackedMatrix::embed(vec![(0, IntMatrix::from_i64(1, 2, &[1, -1])), (1, IntMatrix::from_i64(1, 2, &[0, 3]))]).unwrap();
        let v = p.to_json();
        assert_eq!(v["support"], json!([0, 1]));
        assert_eq!(PackedMatrix::from_json(&v).unwrap(), p);
    }
}
