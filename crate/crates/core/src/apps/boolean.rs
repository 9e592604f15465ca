//! Boolean matrices and Boolean products through the integer packed product.

use std::fmt;

use crate::bigint::Int;
use crate::ledger::CostLedger;
use crate::matmul::{gpr_top, GprConfig, GprError};
use crate::matrix::IntMatrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    data: Vec<bool>,
}

impl BoolMatrix {
    pub fn falses(n: usize) -> Self {
        BoolMatrix { n, data: vec![false; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| i == j)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        BoolMatrix { n, data }
    }

    /// Rows of `0`/`1` characters.
    pub fn from_rows(rows: &[&str]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| rows[i].as_bytes()[j] == b'1')
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i * self.n + j] = v;
    }

    pub fn any(&self) -> bool {
        self.data.iter().any(|&b| b)
    }

    pub fn or(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n);
        BoolMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a || *b).collect(),
        }
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |i, j| Int::from(self.get(i, j) as u8))
    }

    /// `[m_ij > 0]`.
    pub fn positive(m: &IntMatrix) -> BoolMatrix {
        BoolMatrix::from_fn(m.rows(), |i, j| !m.get(i, j).is_zero() && !m.get(i, j).is_negative())
    }

    /// Keeps entries with `j >= i`.
    pub fn upper(&self) -> BoolMatrix {
        Self::from_fn(self.n, |i, j| j >= i && self.get(i, j))
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// `(Shift Y)[k][j] = Y[k+1][j]` for `k < j`, false elsewhere.
pub fn shift_up(y: &BoolMatrix) -> BoolMatrix {
    BoolMatrix::from_fn(y.n, |k, j| k < j && y.get(k + 1, j))
}

/// Boolean product by thresholding the packed integer product of 0/1 matrices.
pub fn boolean_product(x: &BoolMatrix, y: &BoolMatrix, cfg: &GprConfig, ledger: &mut CostLedger) -> Result<BoolMatrix, GprError> {
    ledger.tally("bmm_calls", 1);
    let p = gpr_top(&x.to_int(), &y.to_int(), &Int::one(), cfg, ledger)?;
    Ok(BoolMatrix::positive(&p))
}

/// `(X * Y)[i][j] = OR_{k=i}^{j-1} X[i][k] AND Y[k+1][j]`. Computed as the
/// product of the upper triangle of `X` with `Shift Y`; the mask keeps terms
/// with `k < i` out, which also leaves the diagonal false.
pub fn offset_boolean_product(x: &BoolMatrix, y: &BoolMatrix, cfg: &GprConfig, ledger: &mut CostLedger) -> Result<BoolMatrix, GprError> {
    boolean_product(&x.upper(), &shift_up(y), cfg, ledger)
}
