use std::f64::consts::PI;

use super::elliptic::{ellipk_complement, sncndn};
use crate::error::{Error, Result};

/// Largest sign-approximant degree `2p + 1` the constructor will produce.
pub const DEGREE_CAP: usize = 200;
/// Points in the validation grid (half on each side of the gap).
pub const GRID_POINTS: usize = 10_000;

/// `d = ⌈(2/π²)·ln(4/tol)·ln(4η/δ)⌉`, the degree at which a Zolotarev
/// approximant to the step across `[τ−η, τ−δ] ∪ [τ+δ, τ+η]` reaches `tol`.
pub fn required_degree(tol_ra: f64, delta: f64, eta: f64) -> Result<usize> {
    if !(tol_ra > 0.0 && tol_ra < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1), got {tol_ra}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("gap half-width must be positive, got {delta}")));
    }
    let d = (2.0 / (PI * PI)) * (4.0 / tol_ra).ln() * (4.0 * eta / delta).ln();
    Ok(d.ceil() as usize)
}

/// A finite pole `re ± i·im` of the filter; only the upper one is stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatePair {
    pub re: f64,
    pub im: f64,
}

/// Rational approximation `r_τ` of the step that is 1 below `τ` and 0 above,
/// accurate to `tol_ra` outside `(τ−δ, τ+δ)` and inside `[τ−η, τ+η]`.
///
/// `r_τ(y) = (1 − Z((y − τ)/η))/2` with the odd Zolotarev sign approximant
/// `Z(x) = M·x·Π_j (x² + c_{2j}) / (x² + c_{2j−1})` of type `(2p+1, 2p)` on
/// `±[δ/η, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZolotarevFilter {
    pub tau: f64,
    pub delta: f64,
    pub eta: f64,
    pub tol_ra: f64,
    /// Value of [`required_degree`] for these parameters.
    pub degree_d: usize,
    /// Half-degree actually used; the sign approximant has degree `2p + 1`.
    pub p: usize,
    pub finite_poles: Vec<ConjugatePair>,
    pub infinite_pole_count: usize,
    /// Largest deviation from the step over the validation grid.
    pub achieved_error: f64,
    scale: f64,
    /// `(c_{2j}, c_{2j−1})` for `j = 1..p`.
    coeffs: Vec<(f64, f64)>,
}

impl ZolotarevFilter {
    /// Degree `2p + 1` of the underlying sign approximant.
    pub fn degree(&self) -> usize {
        2 * self.p + 1
    }

    /// Number of poles `2p + 2`: the conjugate pairs plus two at infinity.
    pub fn pole_count(&self) -> usize {
        2 * self.finite_poles.len() + self.infinite_pole_count
    }

    /// Sign approximant in the normalized variable `x = (y − τ)/η`.
    pub fn sign_approx(&self, x: f64) -> f64 {
        let x2 = x * x;
        let mut r = self.scale * x;
        for &(num, den) in &self.coeffs {
            r *= (x2 + num) / (x2 + den);
        }
        r
    }

    pub fn evaluate(&self, y: f64) -> f64 {
        evaluate_filter(self, y)
    }
}

pub fn evaluate_filter(filter: &ZolotarevFilter, y: f64) -> f64 {
    0.5 * (1.0 - filter.sign_approx((y - filter.tau) / filter.eta))
}

/// Zolotarev coefficients `c_1..c_{2p}` for `ℓ = δ/η`.
fn zolotarev_coeffs(ell: f64, p: usize) -> Vec<f64> {
    // Functions of modulus ℓ' = √(1 − ℓ²); their complementary parameter is ℓ².
    let kp = ellipk_complement(ell);
    let mc = ell * ell;
    let denom = (2 * p + 1) as f64;
    (1..=2 * p)
        .map(|i| {
            let (sn, cn, _) = sncndn(i as f64 * kp / denom, mc);
            let ratio = sn / cn;
            mc * ratio * ratio
        })
        .collect()
}

/// Logarithmically spaced points on `[ell, 1]`, clustered towards `ell`.
fn half_grid(ell: f64, count: usize) -> impl Iterator<Item = f64> {
    let span = -ell.ln();
    (0..count).map(move |i| {
        if i + 1 == count {
            1.0
        } else {
            ell * (span * i as f64 / (count - 1) as f64).exp()
        }
    })
}

fn unscaled(x: f64, coeffs: &[(f64, f64)]) -> f64 {
    let x2 = x * x;
    coeffs.iter().fold(x, |r, &(num, den)| r * (x2 + num) / (x2 + den))
}

fn try_degree(tau: f64, delta: f64, eta: f64, tol_ra: f64, degree_d: usize, p: usize) -> ZolotarevFilter {
    let ell = delta / eta;
    let c = zolotarev_coeffs(ell, p);
    let coeffs: Vec<(f64, f64)> = (0..p).map(|j| (c[2 * j + 1], c[2 * j])).collect();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in half_grid(ell, 4 * GRID_POINTS) {
        let f = unscaled(x, &coeffs);
        lo = lo.min(f);
        hi = hi.max(f);
    }
    let finite_poles = coeffs.iter().map(|&(_, den)| ConjugatePair { re: tau, im: eta * den.sqrt() }).collect();
    let mut filter = ZolotarevFilter {
        tau,
        delta,
        eta,
        tol_ra,
        degree_d,
        p,
        finite_poles,
        infinite_pole_count: 2,
        achieved_error: f64::INFINITY,
        scale: 2.0 / (lo + hi),
        coeffs,
    };
    filter.achieved_error = validation_error(&filter);
    filter
}

/// Largest `|r_τ − χ_τ|` over the validation grid on both sides of the gap.
pub fn validation_error(filter: &ZolotarevFilter) -> f64 {
    let ell = filter.delta / filter.eta;
    let mut err: f64 = 0.0;
    for x in half_grid(ell, GRID_POINTS / 2) {
        let below = filter.tau - filter.eta * x;
        let above = filter.tau + filter.eta * x;
        err = err.max((evaluate_filter(filter, below) - 1.0).abs());
        err = err.max(evaluate_filter(filter, above).abs());
    }
    err
}

/// Builds `r_τ` starting from half-degree `p = ⌈d/2⌉` and raising `p` until
/// the validation grid error drops below `tol_ra`.
pub fn build_filter(tau: f64, delta: f64, eta: f64, tol_ra: f64) -> Result<ZolotarevFilter> {
    if !(eta >= delta) {
        return Err(Error::InvalidArgument(format!("eta = {eta} must be at least delta = {delta}")));
    }
    let d = required_degree(tol_ra, delta, eta)?;
    let mut p = d.div_ceil(2).max(1);
    loop {
        if 2 * p + 1 > DEGREE_CAP {
            return Err(Error::GapTooSmall { cap: DEGREE_CAP });
        }
        let f = try_degree(tau, delta, eta, tol_ra, d, p);
        if f.achieved_error < tol_ra {
            return Ok(f);
        }
        p += 1;
    }
}

/// Smallest half-degree whose approximant passes validation, searched upward
/// from 1. Used to judge how tight [`required_degree`] is.
pub fn minimal_half_degree(delta: f64, eta: f64, tol_ra: f64) -> Result<usize> {
    let d = required_degree(tol_ra, delta, eta)?;
    for p in 1..=DEGREE_CAP / 2 {
        if try_degree(0.0, delta, eta, tol_ra, d, p).achieved_error < tol_ra {
            return Ok(p);
        }
    }
    Err(Error::GapTooSmall { cap: DEGREE_CAP })
}
