//! Accuracy and cost measures used to compare solvers.

use crate::lanczos::ConvergenceHistory;

/// `Σ(μ_i − λ_i) / Σλ_i` when the reference values are all positive, the
/// plain sum `Σ(μ_i − λ_i)` otherwise.
pub fn relative_ritz_error(ritz: &[f64], reference: &[f64]) -> f64 {
    let diff: f64 = ritz.iter().zip(reference).map(|(m, l)| m - l).sum();
    if reference.iter().all(|&l| l > 0.0) {
        diff / reference.iter().sum::<f64>()
    } else {
        diff
    }
}

/// First matvec count at which the recorded Ritz values reach `tol` in
/// [`relative_ritz_error`].
pub fn matvecs_to_tolerance(history: &ConvergenceHistory, reference: &[f64], tol: f64) -> Option<usize> {
    history
        .checkpoints
        .iter()
        .find(|c| c.ritz.len() >= reference.len() && relative_ritz_error(&c.ritz, reference).abs() <= tol)
        .map(|c| c.matvecs)
}

/// `1 − lc/ks`: the fraction of products saved by the first method.
pub fn improvement(lc_matvecs: usize, ks_matvecs: usize) -> f64 {
    1.0 - lc_matvecs as f64 / ks_matvecs as f64
}
