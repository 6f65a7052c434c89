//! Gram–Schmidt with re-orthogonalization.

use super::basis::ColumnSet;
use super::dense::DenseMat;
use super::kernels::{norm2, scale};
use crate::error::{Error, Result};

/// A further projection pass runs when a pass shrinks the norm below this
/// fraction of its input.
const REORTH_RATIO: f64 = std::f64::consts::FRAC_1_SQRT_2;
const MAX_PASSES: usize = 3;
/// Relative size below which a projected vector is treated as zero.
pub const BREAKDOWN_TOL: f64 = 1e-14;
/// Relative size below which `merge_orthonormal` drops a column.
pub const RANK_TOL: f64 = 1e-12;

/// Result of orthonormalizing one vector against a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthonormalized {
    pub vector: Vec<f64>,
    /// Norm after projection, before normalization.
    pub norm: f64,
    pub passes: usize,
}

/// Orthonormalizes `v` against the orthonormal columns of `q`. Breakdown is
/// reported when the projected norm falls below `BREAKDOWN_TOL·‖v‖`.
pub fn orthonormalize_against<C: ColumnSet + ?Sized>(v: Vec<f64>, q: &C) -> Result<Orthonormalized> {
    let s = norm2(&v);
    orthonormalize_against_scaled(v, q, s)
}

/// Like [`orthonormalize_against`] but with an explicit breakdown scale, so
/// callers can measure breakdown relative to an operator norm.
pub fn orthonormalize_against_scaled<C: ColumnSet + ?Sized>(
    mut v: Vec<f64>,
    q: &C,
    breakdown_scale: f64,
) -> Result<Orthonormalized> {
    if v.len() != q.nrows() {
        return Err(Error::DimensionMismatch { expected: q.nrows(), found: v.len() });
    }
    let mut before = norm2(&v);
    let mut after = before;
    let mut passes = 0;
    if q.ncols() > 0 {
        while passes < MAX_PASSES {
            let h = q.project(&v);
            q.subtract_combination(&h, &mut v);
            passes += 1;
            after = norm2(&v);
            if after >= REORTH_RATIO * before {
                break;
            }
            before = after;
        }
    }
    let threshold = BREAKDOWN_TOL * breakdown_scale;
    if !(after > threshold) {
        return Err(Error::Breakdown { norm: after, threshold });
    }
    scale(1.0 / after, &mut v);
    Ok(Orthonormalized { vector: v, norm: after, passes })
}

/// Orthonormal basis of the range of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Merged {
    pub basis: DenseMat,
    /// Columns of `x` found numerically dependent and dropped.
    pub dropped: usize,
}

/// Orthonormal basis for the column span of `x`, built column by column with
/// twice-applied Gram–Schmidt. A column whose remaining norm after projection
/// is below `RANK_TOL·‖x‖` is dropped rather than treated as an error.
pub fn merge_orthonormal(x: &DenseMat) -> Merged {
    let rows = x.rows();
    let xnorm = (0..x.cols()).map(|j| norm2(x.col(j))).fold(0.0, f64::max);
    let tol = RANK_TOL * xnorm;
    let mut accepted = DenseMat::zeros(rows, 0);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(x.cols());
    let mut dropped = 0;
    for j in 0..x.cols() {
        let mut v = x.col(j).to_vec();
        for _ in 0..2 {
            let h = accepted.project(&v);
            accepted.subtract_combination(&h, &mut v);
        }
        let nv = norm2(&v);
        if nv <= tol || cols.len() == rows {
            dropped += 1;
            continue;
        }
        scale(1.0 / nv, &mut v);
        cols.push(v);
        accepted = DenseMat::from_columns(rows, &cols).expect("uniform columns");
    }
    Merged { basis: accepted, dropped }
}
