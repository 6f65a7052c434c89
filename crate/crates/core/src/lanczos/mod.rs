//! Krylov-like decompositions, Lanczos with compression and plain Lanczos.

mod history;
mod ritz;
mod solver;
mod state;

pub use history::{Checkpoint, ConvergenceHistory, Event};
pub use ritz::{estimate_residual, extract_ritz, RitzResult};
pub use solver::{
    default_tol_ra, lanczos_solve, lanczos_solve_observed, lc_solve, lc_solve_observed, SolveOptions, SolveOutput, Stage,
};
pub use state::{init_state, start_vector, Continuation, KrylovLikeState};

pub(crate) use ritz::extract_with_residual;
pub(crate) use solver::{k_smallest_values, MemoryBudget};
