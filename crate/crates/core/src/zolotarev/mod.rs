//! Zolotarev rational approximation of a step function.

mod elliptic;
mod filter;

pub use elliptic::{ellipk, ellipk_complement, jacobi_sn_cn_dn};
pub use filter::{
    build_filter, evaluate_filter, minimal_half_degree, required_degree, validation_error, ConjugatePair,
    ZolotarevFilter, DEGREE_CAP, GRID_POINTS,
};
