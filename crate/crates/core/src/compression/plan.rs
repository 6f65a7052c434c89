use super::rational::{filter_poles, rational_krylov_basis_with};
use crate::error::{Error, Result};
use crate::lanczos::{Continuation, KrylovLikeState};
use crate::linalg::{merge_orthonormal, sym_eig, DenseMat, DenseSymmetric};
use crate::zolotarev::{build_filter, required_degree, ZolotarevFilter};

/// Gaps `θ_{k̂+1} − θ_k` at or below `GAP_FLOOR·max(1, |θ_m|)` are treated as
/// zero.
pub const GAP_FLOOR: f64 = 1e-13;
/// Candidates tried, in order of the objective, before giving up.
const MAX_CANDIDATES: usize = 8;

/// How to compress an `m × m` projected matrix.
#[derive(Debug, Clone)]
pub struct CompressionPlan {
    /// Number of leading Ritz vectors retained (`k̂`).
    pub k_star: usize,
    pub filter: ZolotarevFilter,
    /// Orthonormal `m × ℓ` compression matrix.
    pub v: DenseMat,
    pub ell: usize,
    pub retained_eigvec_count: usize,
    /// Columns contributed by the rational Krylov space after truncation.
    pub rational_dim: usize,
    /// Value of the objective `k̂ + d` that selected this plan.
    pub objective: usize,
    /// Ritz values `θ_1..θ_m` of the matrix that was planned for.
    pub ritz_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    k_hat: usize,
    d: usize,
    tau: f64,
    delta: f64,
    eta: f64,
}

/// Chooses `k̂ ∈ [k, m−1]` minimizing `k̂ + d_k̂` and builds
/// `V = orth([s_1..s_k̂ | Q(T, e_m, Ξ_k̂)])`.
pub fn plan_compression(t: &DenseSymmetric, k: usize, tol_ra: f64) -> Result<CompressionPlan> {
    let m = t.order();
    if k == 0 || k >= m {
        return Err(Error::InvalidArgument(format!("need 1 ≤ k < m, got k = {k}, m = {m}")));
    }
    let eig = sym_eig(t)?;
    let theta = &eig.values;
    let floor = GAP_FLOOR * theta[m - 1].abs().max(1.0);

    let mut candidates = Vec::new();
    for k_hat in k..m {
        let gap = theta[k_hat] - theta[k - 1];
        if gap <= floor {
            continue;
        }
        let tau = 0.5 * (theta[k - 1] + theta[k_hat]);
        let delta = 0.5 * gap;
        let eta = (theta[m - 1] - tau).max(tau - theta[0]);
        let d = required_degree(tol_ra, delta, eta)?;
        candidates.push(Candidate { k_hat, d, tau, delta, eta });
    }
    if candidates.is_empty() {
        return Err(Error::NoCompressionPossible("every gap above the wanted Ritz values is below the floor".into()));
    }
    candidates.sort_by_key(|c| (c.k_hat + c.d, c.k_hat));

    let mut e_m = vec![0.0; m];
    e_m[m - 1] = 1.0;
    let mut smallest_ell = usize::MAX;
    for c in candidates.iter().take(MAX_CANDIDATES) {
        let filter = match build_filter(c.tau, c.delta, c.eta, tol_ra) {
            Ok(f) => f,
            Err(Error::GapTooSmall { .. }) => continue,
            Err(e) => return Err(e),
        };
        if filter.pole_count() > m {
            continue;
        }
        let rational = rational_krylov_basis_with(t, &eig, &filter_poles(&filter), &e_m)?;
        let mut cols: Vec<Vec<f64>> = (0..c.k_hat).map(|i| eig.vectors.col(i).to_vec()).collect();
        cols.extend((0..rational.basis.cols()).map(|i| rational.basis.col(i).to_vec()));
        let merged = merge_orthonormal(&DenseMat::from_columns(m, &cols)?);
        let ell = merged.basis.cols();
        smallest_ell = smallest_ell.min(ell);
        if ell < m {
            return Ok(CompressionPlan {
                k_star: c.k_hat,
                filter,
                v: merged.basis,
                ell,
                retained_eigvec_count: c.k_hat,
                rational_dim: rational.basis.cols(),
                objective: c.k_hat + c.d,
                ritz_values: eig.values.clone(),
            });
        }
    }
    Err(Error::NoCompressionPossible(if smallest_ell == usize::MAX {
        "no candidate filter could be built".into()
    } else {
        format!("smallest compressed basis has {smallest_ell} columns, basis size is {m}")
    }))
}

/// Compresses the decomposition with `Q ← Q·V`, `T ← VᵀTV`.
pub fn apply_compression(state: &mut KrylovLikeState, plan: &CompressionPlan) -> Result<()> {
    let j = state.basis_size();
    if plan.v.rows() != j {
        return Err(Error::DimensionMismatch { expected: j, found: plan.v.rows() });
    }
    if plan.ell >= j {
        return Err(Error::InvalidArgument(format!("plan keeps {} of {j} columns", plan.ell)));
    }
    state.compress(&plan.v, Continuation::Lanczos)
}
