use crate::error::{Error, Result};
use crate::linalg::kernels::norm2;
use crate::linalg::{sym_eig, ColumnSet, DenseMat, DenseSymmetric, EigenPairs};
use crate::zolotarev::{ConjugatePair, ZolotarevFilter};

/// Relative norm below which a new rational Krylov direction counts as
/// already contained in the basis.
const DEPENDENCE_TOL: f64 = 1e-12;
/// A pole closer than this (relative to `‖T‖`) to the spectrum is singular.
const COLLISION_TOL: f64 = 1e-12;
/// Relative amount added to the imaginary part of a colliding pole.
const POLE_NUDGE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pole {
    Infinite,
    /// A conjugate pair `re ± i·im`, counted as two poles.
    Pair(ConjugatePair),
}

impl Pole {
    fn count(&self) -> usize {
        match self {
            Pole::Infinite => 1,
            Pole::Pair(_) => 2,
        }
    }
}

/// `[∞, ∞, ξ_1, ξ̄_1, …]` for a filter.
pub fn filter_poles(filter: &ZolotarevFilter) -> Vec<Pole> {
    let mut poles = vec![Pole::Infinite; filter.infinite_pole_count];
    poles.extend(filter.finite_poles.iter().map(|&p| Pole::Pair(p)));
    poles
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalBasis {
    pub basis: DenseMat,
    /// Directions dropped as numerically dependent.
    pub truncated: usize,
}

pub fn rational_krylov_basis(t: &DenseSymmetric, poles: &[Pole], start: &[f64]) -> Result<RationalBasis> {
    let eig = sym_eig(t)?;
    rational_krylov_basis_with(t, &eig, poles, start)
}

/// `(T² − 2aT + (a² + b²)I)⁻¹·v` through the eigendecomposition of `T`.
fn quadratic_solve(eig: &EigenPairs, norm_t: f64, pair: ConjugatePair, v: &[f64]) -> Result<Vec<f64>> {
    let a = pair.re;
    let floor = (COLLISION_TOL * norm_t).powi(2);
    let mut b = pair.im;
    let mut shifts: Vec<f64> = eig.values.iter().map(|&th| (th - a) * (th - a) + b * b).collect();
    if shifts.iter().any(|&s| s < floor) {
        b += POLE_NUDGE * norm_t;
        shifts = eig.values.iter().map(|&th| (th - a) * (th - a) + b * b).collect();
        if shifts.iter().any(|&s| s < floor) {
            return Err(Error::SingularShift { imag: b });
        }
    }
    let coords = eig.vectors.tr_matvec(v)?;
    let scaled: Vec<f64> = coords.iter().zip(&shifts).map(|(c, s)| c / s).collect();
    eig.vectors.matvec(&scaled)
}

pub(crate) fn rational_krylov_basis_with(
    t: &DenseSymmetric,
    eig: &EigenPairs,
    poles: &[Pole],
    start: &[f64],
) -> Result<RationalBasis> {
    let m = t.order();
    if start.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: start.len() });
    }
    let total: usize = poles.iter().map(Pole::count).sum();
    if total > m {
        return Err(Error::InvalidArgument(format!("{total} poles exceed the order {m}")));
    }
    let norm_t = eig.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(f64::MIN_POSITIVE);

    let mut accepted = DenseMat::zeros(m, 0);
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut truncated = 0;
    let mut used_start = false;

    let offer = |cand: Vec<f64>, cols: &mut Vec<Vec<f64>>, accepted: &mut DenseMat| {
        let before = norm2(&cand);
        let mut v = cand;
        for _ in 0..2 {
            let h = accepted.project(&v);
            accepted.subtract_combination(&h, &mut v);
        }
        let after = norm2(&v);
        if !(after > DEPENDENCE_TOL * before) {
            return false;
        }
        v.iter_mut().for_each(|x| *x /= after);
        cols.push(v);
        *accepted = DenseMat::from_columns(m, cols).expect("uniform columns");
        true
    };

    for pole in poles {
        let cont = cols.last().cloned().unwrap_or_else(|| start.to_vec());
        match pole {
            Pole::Infinite => {
                let cand = if used_start { t.matvec(&cont)? } else { start.to_vec() };
                used_start = true;
                if !offer(cand, &mut cols, &mut accepted) {
                    truncated += 1;
                }
            }
            Pole::Pair(pair) => {
                let w = quadratic_solve(eig, norm_t, *pair, &cont)?;
                let tw = t.matvec(&w)?;
                for cand in [w, tw] {
                    if !offer(cand, &mut cols, &mut accepted) {
                        truncated += 1;
                    }
                }
            }
        }
    }
    Ok(RationalBasis { basis: accepted, truncated })
}
