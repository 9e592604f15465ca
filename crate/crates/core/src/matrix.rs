//! Dense integer matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigint::Int;
use crate::ledger::CostLedger;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// Where a matrix came from. Blocks cut out of caller-supplied inputs stay
/// `Input`; anything produced by a multiplication is `Derived`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Origin {
    #[default]
    Input,
    Derived,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
    #[serde(skip)]
    origin: Origin,
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for IntMatrix {}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
            origin: Origin::Input,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            data,
            origin: Origin::Input,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&v| Int::from(v)).collect())
            .expect("entry count matches shape")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix {
            rows,
            cols,
            data,
            origin: Origin::Input,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn max_abs(&self) -> Int {
        self.data.iter().map(Int::abs).max().unwrap_or_default()
    }

    /// The `rows x cols` block starting at `(r0, c0)`. Keeps the origin tag.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + cols]);
        }
        IntMatrix {
            rows,
            cols,
            data,
            origin: self.origin,
        }
    }

    /// Writes `src` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, src: &IntMatrix) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols, "place out of range");
        for i in 0..src.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + src.cols].clone_from_slice(src.row(i));
        }
    }

    /// Zero-pads to `rows x cols`.
    pub fn padded(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols).with_origin(self.origin);
        m.place(0, 0, self);
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).with_origin(self.origin)
    }

    pub fn map(&self, f: impl Fn(&Int) -> Int) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            origin: self.origin,
        }
    }

    /// Entrywise sum, unmetered.
    pub fn plus(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        self.check_same_shape(other)?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            origin: Origin::Derived,
        })
    }

    fn check_same_shape(&self, other: &IntMatrix) -> Result<(), MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Entrywise sum with costed additions.
    pub fn add_costed(&self, other: &IntMatrix, ledger: &mut CostLedger) -> Result<IntMatrix, MatrixError> {
        self.check_same_shape(other)?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| ledger.add(a, b))
                .collect(),
            origin: Origin::Derived,
        })
    }

    /// Schoolbook product with every multiply and add charged to `ledger`.
    pub fn mul_costed(&self, other: &IntMatrix, ledger: &mut CostLedger) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols).with_origin(Origin::Derived);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    let p = ledger.mul(self.get(i, k), other.get(k, j));
                    acc = if k == 0 { p } else { ledger.add(&acc, &p) };
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

/// `"rows cols"` on the first line, then one row of decimal integers per line.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(Int::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| MatrixError::Parse("empty input".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| MatrixError::Parse(format!("header: {e}"))))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(MatrixError::Parse(format!("header needs two sizes, got {header:?}")));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for (i, line) in lines.enumerate() {
            let row: Vec<Int> = line
                .split_whitespace()
                .map(|t| Int::from_str(t).map_err(|e| MatrixError::Parse(format!("row {i}: {e}"))))
                .collect::<Result<_, _>>()?;
            if row.len() != cols {
                return Err(MatrixError::Parse(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        IntMatrix::from_vec(rows, cols, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format_parses_back() {
        let m = IntMatrix::from_i64(2, 3, &[1, -2, 3, 0, 5, -6]);
        let text = m.to_string();
        assert_eq!(text, "2 3\n1 -2 3\n0 5 -6\n");
        assert_eq!(text.parse::<IntMatrix>().unwrap(), m);
    }

    #[test]
    fn text_format_rejects_ragged_rows() {
        assert!(matches!("2 2\n1 2\n3\n".parse::<IntMatrix>(), Err(MatrixError::Parse(_))));
    }

    #[test]
    fn block_and_place() {
        let m = IntMatrix::from_fn(4, 4, |i, j| Int::from((4 * i + j) as i64));
        let b = m.block(2, 0, 2, 2);
        assert_eq!(b, IntMatrix::from_i64(2, 2, &[8, 9, 12, 13]));
        let mut z = IntMatrix::zeros(4, 4);
        z.place(2, 0, &b);
        assert_eq!(z.get(3, 1), &Int::from(13));
    }

    #[test]
    fn product_is_tagged_derived() {
        let mut l = CostLedger::default();
        let a = IntMatrix::identity(2);
        let p = a.mul_costed(&a, &mut l).unwrap();
        assert_eq!(p, a);
        assert_eq!(p.origin(), Origin::Derived);
        assert_eq!(a.origin(), Origin::Input);
    }
}
