use super::history::{Checkpoint, ConvergenceHistory, Event};
use super::ritz::{estimate_residual, extract_with_residual, RitzResult};
use super::state::{init_state, KrylovLikeState};
use crate::compression::{apply_compression, plan_compression, CompressionPlan};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigvals, DenseSymmetric, SymTridiagonal};
use crate::sparse::LinearOperator;

/// Filter tolerance used when none is given: slightly below typical residual
/// tolerances, tighter for larger blocks.
pub fn default_tol_ra(k: usize) -> f64 {
    if k <= 4 {
        1e-6
    } else {
        1e-7
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Number of smallest eigenpairs wanted.
    pub k: usize,
    /// Basis size at which convergence is checked and the basis compressed.
    pub m: usize,
    /// Restart size for Krylov–Schur; `None` means `m/2`.
    pub ell: Option<usize>,
    /// Convergence when the residual estimate is at most `tol_res·‖A‖`.
    pub tol_res: f64,
    pub tol_ra: f64,
    pub seed: u64,
    pub max_matvecs: usize,
    pub fill_in: bool,
    /// Cap on basis storage in bytes.
    pub memory_cap: Option<usize>,
    /// Record the `k` smallest Ritz values after every product rather than
    /// only where convergence is checked.
    pub ritz_every_step: bool,
}

impl SolveOptions {
    pub fn new(k: usize, m: usize) -> Self {
        Self {
            k,
            m,
            ell: None,
            tol_res: 1e-8,
            tol_ra: default_tol_ra(k),
            seed: 0,
            max_matvecs: 100_000,
            fill_in: true,
            memory_cap: None,
            ritz_every_step: true,
        }
    }

    fn validate(&self, n: usize, plain: bool) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if !plain {
            if self.m <= self.k {
                return bad(format!("m = {} must exceed k = {}", self.m, self.k));
            }
            if self.m > n {
                return bad(format!("m = {} exceeds the matrix order {n}", self.m));
            }
        }
        if self.k > n {
            return bad(format!("k = {} exceeds the matrix order {n}", self.k));
        }
        for (name, v) in [("tol_res", self.tol_res), ("tol_ra", self.tol_ra)] {
            if !(v > 0.0 && v < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        if self.max_matvecs == 0 {
            return bad("max_matvecs must be positive".into());
        }
        Ok(())
    }
}

/// Result of a solver run.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub result: RitzResult,
    pub history: ConvergenceHistory,
    /// Final decomposition, for diagnostics.
    pub state: KrylovLikeState,
}

/// Points at which a solver reports its state to an observer.
#[derive(Debug, Clone, Copy)]
pub enum Stage<'a> {
    Expanded,
    BeforeCompression(&'a CompressionPlan),
    Compressed(&'a CompressionPlan),
    Restarted,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct MemoryBudget {
    cap: Option<usize>,
    n: usize,
}

impl MemoryBudget {
    pub(crate) fn new(cap: Option<usize>, n: usize) -> Self {
        Self { cap, n }
    }

    /// A basis of `cols` columns plus its compressed copy.
    fn needed(&self, cols: usize) -> usize {
        2 * self.n * cols * std::mem::size_of::<f64>()
    }

    pub(crate) fn allows(&self, cols: usize) -> bool {
        self.cap.is_none_or(|c| self.needed(cols) <= c)
    }

    pub(crate) fn check(&self, cols: usize) -> Result<()> {
        match self.cap {
            Some(cap) if self.needed(cols) > cap => Err(Error::MemoryBudget { needed: self.needed(cols), cap }),
            _ => Ok(()),
        }
    }
}

pub(crate) fn k_smallest_values(t: &DenseSymmetric, k: usize) -> Result<Vec<f64>> {
    let mut v = sym_eigvals(t)?;
    v.truncate(k);
    Ok(v)
}

fn finish(state: KrylovLikeState, history: ConvergenceHistory, k: usize, est: f64, converged: bool) -> Result<SolveOutput> {
    let k = k.min(state.basis_size());
    let mut result = extract_with_residual(&state, k, est)?;
    result.converged = converged;
    Ok(SolveOutput { result, history, state })
}

/// Lanczos with compression.
pub fn lc_solve<A: LinearOperator + ?Sized>(a: &A, opts: &SolveOptions) -> Result<SolveOutput> {
    lc_solve_observed(a, opts, |_, _| {})
}

/// [`lc_solve`] with a callback invoked after every step and around every
/// compression.
pub fn lc_solve_observed<A, F>(a: &A, opts: &SolveOptions, mut observe: F) -> Result<SolveOutput>
where
    A: LinearOperator + ?Sized,
    F: FnMut(&KrylovLikeState, Stage<'_>),
{
    let n = a.order();
    opts.validate(n, false)?;
    let budget = MemoryBudget::new(opts.memory_cap, n);
    budget.check(opts.m)?;
    let mut state = init_state(a, opts.seed)?.with_fill_in(opts.fill_in);
    state.reserve(opts.m);
    let mut history = ConvergenceHistory::new();
    let k = opts.k;
    let mut m_cur = opts.m;

    while state.matvecs() < opts.max_matvecs {
        let broke = state.expand_step(a)?;
        observe(&state, Stage::Expanded);
        let j = state.basis_size();
        let check = broke || j == m_cur;
        let ritz = if opts.ritz_every_step || check { k_smallest_values(&state.projected(), k)? } else { Vec::new() };
        let mut cp = Checkpoint { matvecs: state.matvecs(), ritz, residual_estimate: None, event: Event::Expand };
        if check {
            let i = state.alpha_hist().len();
            let est = estimate_residual(state.alpha_hist(), state.beta_hist(), k.min(i))?;
            cp.residual_estimate = Some(est);
            let converged = est <= opts.tol_res * state.norm_estimate();
            if broke || converged {
                cp.event = if broke { Event::Breakdown } else { Event::Converged };
                history.push(cp);
                return finish(state, history, k, est, converged);
            }
            match plan_compression(&state.projected(), k, opts.tol_ra) {
                Ok(plan) => {
                    observe(&state, Stage::BeforeCompression(&plan));
                    apply_compression(&mut state, &plan)?;
                    observe(&state, Stage::Compressed(&plan));
                    cp.event = Event::Compress { ell: plan.ell, k_hat: plan.k_star, p: plan.filter.p };
                }
                Err(Error::NoCompressionPossible(_)) | Err(Error::GapTooSmall { .. }) => {
                    let grown = (m_cur + (m_cur / 2).max(1)).min(n);
                    if grown == m_cur || !budget.allows(grown) {
                        budget.check(grown)?;
                        return Err(Error::NoCompressionPossible(format!("basis cannot grow beyond {m_cur}")));
                    }
                    m_cur = grown;
                    cp.event = Event::Grow { m: m_cur };
                }
                Err(e) => return Err(e),
            }
        }
        history.push(cp);
    }
    let i = state.alpha_hist().len();
    let est = estimate_residual(state.alpha_hist(), state.beta_hist(), k.min(i))?;
    finish(state, history, k, est, false)
}

/// Unrestarted Lanczos with full reorthogonalization; convergence is checked
/// after every product.
pub fn lanczos_solve<A: LinearOperator + ?Sized>(a: &A, opts: &SolveOptions) -> Result<SolveOutput> {
    lanczos_solve_observed(a, opts, |_, _| {})
}

pub fn lanczos_solve_observed<A, F>(a: &A, opts: &SolveOptions, mut observe: F) -> Result<SolveOutput>
where
    A: LinearOperator + ?Sized,
    F: FnMut(&KrylovLikeState, Stage<'_>),
{
    let n = a.order();
    opts.validate(n, true)?;
    let budget = MemoryBudget::new(opts.memory_cap, n);
    let mut state = init_state(a, opts.seed)?.with_fill_in(opts.fill_in);
    let mut history = ConvergenceHistory::new();
    let k = opts.k;
    let mut est = f64::INFINITY;

    while state.matvecs() < opts.max_matvecs {
        budget.check(state.basis_size() + 1)?;
        let broke = state.expand_step(a)?;
        observe(&state, Stage::Expanded);
        let i = state.alpha_hist().len();
        let alpha = state.alpha_hist();
        let beta = state.beta_hist();
        let shadow = SymTridiagonal::new(alpha.to_vec(), beta[..i - 1].to_vec())?;
        let mut ritz = shadow.eigenvalues()?;
        ritz.truncate(k);
        let mut cp = Checkpoint { matvecs: state.matvecs(), ritz, residual_estimate: None, event: Event::Expand };
        if i >= k {
            est = estimate_residual(alpha, beta, k)?;
            cp.residual_estimate = Some(est);
            let converged = est <= opts.tol_res * state.norm_estimate();
            if broke || converged {
                cp.event = if broke { Event::Breakdown } else { Event::Converged };
                history.push(cp);
                return finish(state, history, k, est, converged);
            }
        } else if broke {
            cp.event = Event::Breakdown;
            history.push(cp);
            return finish(state, history, k, 0.0, true);
        }
        history.push(cp);
    }
    finish(state, history, k, est, false)
}
