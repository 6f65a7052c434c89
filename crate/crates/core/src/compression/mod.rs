//! Compression of a Krylov-like decomposition onto the span of wanted Ritz
//! vectors and a rational Krylov space built from a Zolotarev filter.

mod plan;
mod rational;

pub use plan::{apply_compression, plan_compression, CompressionPlan, GAP_FLOOR};
pub use rational::{filter_poles, rational_krylov_basis, Pole, RationalBasis};
