//! Dense kernels for small projected matrices and tall basis blocks.

mod basis;
mod dense;
pub mod kernels;
mod ortho;
mod symeig;
mod tridiag;

pub use basis::{Basis, ColumnSet};
pub use dense::{DenseMat, DenseSymmetric};
pub use ortho::{
    merge_orthonormal, orthonormalize_against, orthonormalize_against_scaled, Merged, Orthonormalized,
    BREAKDOWN_TOL, RANK_TOL,
};
pub use symeig::{sym_eig, sym_eigvals, EigenPairs};
pub use tridiag::{tridiag_eig_smallest, SymTridiagonal};
