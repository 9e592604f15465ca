//! Triangle counting from `trace(A^3) / 6`.

use serde::{Deserialize, Serialize};

use crate::bigint::Int;
use crate::ledger::CostLedger;
use crate::matmul::{gpr_top, GprConfig};

use super::boolean::BoolMatrix;
use super::AppError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TriangleResult {
    pub has_triangle: bool,
    pub count: Int,
    pub trace: Int,
}

/// `A^2` with entry bound 1, then `A A^2` with entry bound `n`, each with its
/// own base.
pub fn triangle_detect(adj: &BoolMatrix, cfg: &GprConfig, ledger: &mut CostLedger) -> Result<TriangleResult, AppError> {
    let n = adj.n();
    for i in 0..n {
        if adj.get(i, i) {
            return Err(AppError::NonzeroDiagonal(i));
        }
        for j in i + 1..n {
            if adj.get(i, j) != adj.get(j, i) {
                return Err(AppError::AsymmetricInput(i, j));
            }
        }
    }
    let a = adj.to_int();
    let a2 = gpr_top(&a, &a, &Int::one(), cfg, ledger)?;
    let a3 = gpr_top(&a, &a2, &Int::from(n.max(1)), cfg, ledger)?;
    let trace = (0..n).fold(Int::zero(), |acc, i| acc + a3.get(i, i));
    let count = Int::from(trace.as_bigint() / 6);
    Ok(TriangleResult {
        has_triangle: !count.is_zero(),
        count,
        trace,
    })
}
