//! Sparse symmetric eigensolvers: Lanczos with rational-Krylov compression,
//! thick-restart Krylov–Schur, and plain Lanczos with full
//! reorthogonalization.

pub mod compression;
pub mod error;
pub mod krylov_schur;
pub mod lanczos;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod sparse;
pub mod zolotarev;

pub use error::{Error, Result};
