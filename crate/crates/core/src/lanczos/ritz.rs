use super::state::KrylovLikeState;
use crate::error::{Error, Result};
use crate::linalg::kernels::{axpy, norm2};
use crate::linalg::{sym_eig, Basis, SymTridiagonal};
use crate::sparse::LinearOperator;

/// Residual estimate `|β_i|·‖e_iᵀW_{i,k}‖` from the tridiagonal built out of
/// the Lanczos coefficients `α_1..α_i`, `β_1..β_{i−1}`, where `W_{i,k}` holds
/// its `k` smallest eigenvectors and `β_i = beta_hist[i−1]` is the current
/// coupling.
pub fn estimate_residual(alpha_hist: &[f64], beta_hist: &[f64], k: usize) -> Result<f64> {
    let i = alpha_hist.len();
    if beta_hist.len() != i {
        return Err(Error::DimensionMismatch { expected: i, found: beta_hist.len() });
    }
    if i < k || k == 0 {
        return Err(Error::NotEnoughPairs { requested: k, available: i });
    }
    let beta_i = beta_hist[i - 1];
    if beta_i == 0.0 {
        return Ok(0.0);
    }
    let t = SymTridiagonal::new(alpha_hist.to_vec(), beta_hist[..i - 1].to_vec())?;
    let (_, last) = t.smallest_with_last_components(k)?;
    Ok(beta_i.abs() * norm2(&last))
}

/// Ritz approximation to the `k` smallest eigenpairs.
#[derive(Debug, Clone)]
pub struct RitzResult {
    pub values: Vec<f64>,
    pub vectors: Basis,
    pub residual_estimate: f64,
    pub matvecs: usize,
    pub converged: bool,
}

impl RitzResult {
    /// `‖A·U − U·diag(μ)‖_F`, computed with `k` uncounted products.
    pub fn true_residual<A: LinearOperator + ?Sized>(&self, a: &A) -> f64 {
        let mut sq = 0.0;
        let mut w = vec![0.0; self.vectors.n()];
        for (c, &mu) in self.values.iter().enumerate() {
            let u = self.vectors.col(c);
            a.apply(u, &mut w);
            axpy(-mu, u, &mut w);
            let r = norm2(&w);
            sq += r * r;
        }
        sq.sqrt()
    }
}

/// The `k` smallest eigenpairs of `T` lifted by `Q`, with the residual
/// estimate taken from the Lanczos coefficient history.
pub fn extract_ritz(state: &KrylovLikeState, k: usize) -> Result<RitzResult> {
    let j = state.basis_size();
    if k > j || k == 0 {
        return Err(Error::NotEnoughPairs { requested: k, available: j });
    }
    let residual = estimate_residual(state.alpha_hist(), state.beta_hist(), k)?;
    extract_with_residual(state, k, residual)
}

pub(crate) fn extract_with_residual(state: &KrylovLikeState, k: usize, residual_estimate: f64) -> Result<RitzResult> {
    let j = state.basis_size();
    if k > j {
        return Err(Error::NotEnoughPairs { requested: k, available: j });
    }
    let ep = sym_eig(&state.projected())?.truncated(k);
    Ok(RitzResult {
        values: ep.values,
        vectors: state.basis().times(&ep.vectors)?,
        residual_estimate,
        matvecs: state.matvecs(),
        converged: false,
    })
}
