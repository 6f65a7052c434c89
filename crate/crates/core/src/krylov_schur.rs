//! Thick-restart Lanczos in Krylov–Schur form.

use crate::error::{Error, Result};
use crate::lanczos::{
    extract_with_residual, k_smallest_values, Checkpoint, Continuation, ConvergenceHistory, Event, KrylovLikeState,
    MemoryBudget, SolveOptions, SolveOutput, Stage,
};
use crate::linalg::kernels::norm2;
use crate::linalg::{sym_eig, DenseSymmetric};
use crate::sparse::LinearOperator;

/// Keeps the `ell` smallest Ritz pairs: `Q ← Q·S_ℓ`, `T ← diag(θ_1..θ_ℓ)`.
/// The coupling to `q_next` is picked up by the next expansion.
pub fn ks_restart(state: &mut KrylovLikeState, ell: usize) -> Result<()> {
    let j = state.basis_size();
    if ell == 0 || ell >= j {
        return Err(Error::InvalidArgument(format!("restart size {ell} must lie in [1, {j})")));
    }
    let eig = sym_eig(&state.projected())?.truncated(ell);
    state.compress(&eig.vectors, Continuation::Restart)?;
    state.set_projected(&DenseSymmetric::diag(&eig.values))
}

/// `β·‖e_jᵀS_k‖` for the `k` smallest eigenvectors `S_k` of `T`, which is
/// the residual norm of the current Ritz block.
fn restart_residual(state: &KrylovLikeState, k: usize) -> Result<f64> {
    let j = state.basis_size();
    let eig = sym_eig(&state.projected())?;
    let last: Vec<f64> = (0..k.min(j)).map(|c| eig.vectors[(j - 1, c)]).collect();
    Ok(state.coupling().abs() * norm2(&last))
}

pub fn ks_solve<A: LinearOperator + ?Sized>(a: &A, opts: &SolveOptions) -> Result<SolveOutput> {
    ks_solve_observed(a, opts, |_, _| {})
}

pub fn ks_solve_observed<A, F>(a: &A, opts: &SolveOptions, mut observe: F) -> Result<SolveOutput>
where
    A: LinearOperator + ?Sized,
    F: FnMut(&KrylovLikeState, Stage<'_>),
{
    let n = a.order();
    let k = opts.k;
    let m = opts.m;
    let ell = opts.ell.unwrap_or(m / 2);
    if k == 0 || k > ell || ell >= m || m > n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ k ≤ ell < m ≤ n, got k={k}, ell={ell}, m={m}, n={n}")));
    }
    for (name, v) in [("tol_res", opts.tol_res)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {v}")));
        }
    }
    MemoryBudget::new(opts.memory_cap, n).check(m)?;
    let mut state = crate::lanczos::init_state(a, opts.seed)?.with_fill_in(opts.fill_in);
    state.reserve(m);
    let mut history = ConvergenceHistory::new();
    let mut est = f64::INFINITY;

    while state.matvecs() < opts.max_matvecs {
        let broke = state.expand_step(a)?;
        observe(&state, Stage::Expanded);
        let j = state.basis_size();
        let check = broke || j == m;
        let ritz = if opts.ritz_every_step || check { k_smallest_values(&state.projected(), k)? } else { Vec::new() };
        let mut cp = Checkpoint { matvecs: state.matvecs(), ritz, residual_estimate: None, event: Event::Expand };
        if check {
            est = restart_residual(&state, k)?;
            cp.residual_estimate = Some(est);
            let converged = est <= opts.tol_res * state.norm_estimate();
            if broke || converged {
                cp.event = if broke { Event::Breakdown } else { Event::Converged };
                history.push(cp);
                let mut result = extract_with_residual(&state, k.min(j), est)?;
                result.converged = converged;
                return Ok(SolveOutput { result, history, state });
            }
            ks_restart(&mut state, ell)?;
            observe(&state, Stage::Restarted);
            cp.event = Event::Restart { ell };
        }
        history.push(cp);
    }
    if state.basis_size() >= k {
        est = restart_residual(&state, k)?;
    }
    let k = k.min(state.basis_size());
    let result = extract_with_residual(&state, k, est)?;
    Ok(SolveOutput { result, history, state })
}
