//! Sparse symmetric operators, Matrix Market I/O and test-matrix generators.

mod csr;
mod gen;
mod mtx;

pub use csr::{LinearOperator, SparseMatrixCsr, EXACT_SYMMETRY_TOL};
pub use gen::{gen_laplacian_l, grid_laplacian, random_sparse_symmetric, RandomSparse};
pub use mtx::{format_matrix_market, parse_matrix_market, read_matrix_market, write_matrix_market, INGEST_SYMMETRY_TOL};
