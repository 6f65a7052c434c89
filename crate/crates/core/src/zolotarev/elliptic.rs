//! Complete elliptic integral of the first kind and Jacobi elliptic functions,
//! both via the arithmetic-geometric mean.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

/// `K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ)` for modulus `0 ≤ k < 1`.
pub fn ellipk(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::InvalidArgument(format!("elliptic modulus must lie in [0, 1), got {k}")));
    }
    Ok(ellipk_complement(((1.0 - k) * (1.0 + k)).sqrt()))
}

/// `K` expressed through the complementary modulus `k' = √(1 − k²)`. Passing
/// `k'` directly avoids the cancellation in `1 − k²` when `k` is close to 1.
pub fn ellipk_complement(kp: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, kp)
}

/// `(sn, cn, dn)` of argument `u` for modulus `0 ≤ k < 1`.
pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::InvalidArgument(format!("elliptic modulus must lie in [0, 1), got {k}")));
    }
    Ok(sncndn(u, (1.0 - k) * (1.0 + k)))
}

/// Jacobi functions for complementary parameter `mc = 1 − k²`, by descending
/// Landen transformation.
pub(crate) fn sncndn(u: f64, mc: f64) -> (f64, f64, f64) {
    const CA: f64 = 1e-8;
    if mc == 0.0 {
        let cn = 1.0 / u.cosh();
        return (u.tanh(), cn, cn);
    }
    let mut em = [0.0f64; 16];
    let mut en = [0.0f64; 16];
    let mut a = 1.0;
    let mut emc = mc;
    let mut c = 1.0;
    let mut l = 0;
    for i in 0..16 {
        l = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CA * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let v = u * c;
    let mut sn = v.sin();
    let mut cn = v.cos();
    let mut dn = 1.0;
    if sn != 0.0 {
        let mut a = cn / sn;
        c *= a;
        for ii in (0..=l).rev() {
            let b = em[ii];
            a *= c;
            c *= dn;
            dn = (en[ii] + a) / (b + a);
            a = c / b;
        }
        let s = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { s } else { -s };
        cn = c * sn;
    }
    (sn, cn, dn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_zero_is_half_pi() {
        assert_eq!(ellipk(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k_half_matches_power_series() {
        // K(k) = π/2 · Σ [(2n)! / (2^{2n} (n!)²)]² k^{2n}
        let k: f64 = 0.5;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..200 {
            let r = (2 * n - 1) as f64 / (2 * n) as f64;
            term *= r * r * k * k;
            sum += term;
        }
        let series = FRAC_PI_2 * sum;
        let agm = ellipk(k).unwrap();
        assert!((agm - series).abs() < 1e-15 * series);
        assert!((agm - 1.685_750_354_812_596).abs() < 1e-14);
    }

    #[test]
    fn modulus_one_rejected() {
        assert!(ellipk(1.0).is_err());
        assert!(ellipk(-0.1).is_err());
        assert!(jacobi_sn_cn_dn(0.3, 1.0).is_err());
    }

    #[test]
    fn degenerate_moduli() {
        for u in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            let (s, c, d) = jacobi_sn_cn_dn(u, 0.0).unwrap();
            assert!((s - f64::sin(u)).abs() < 1e-15);
            assert!((c - f64::cos(u)).abs() < 1e-15);
            assert_eq!(d, 1.0);
        }
        assert_eq!(jacobi_sn_cn_dn(0.0, 0.8).unwrap(), (0.0, 1.0, 1.0));
    }

    #[test]
    fn quarter_period_values() {
        let k = 0.8;
        let kk = ellipk(k).unwrap();
        let (s, c, d) = jacobi_sn_cn_dn(kk, k).unwrap();
        assert!((s - 1.0).abs() < 1e-14);
        assert!(c.abs() < 1e-7);
        assert!((d - 0.6).abs() < 1e-14);
    }
}
