use lancom::zolotarev::{
    build_filter, ellipk, evaluate_filter, jacobi_sn_cn_dn, minimal_half_degree, required_degree,
};
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;

/// Trapezoidal rule; spectrally accurate here because the integrand is an
/// even, π-periodic function of θ.
fn trapezoid(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + h * i as f64)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

#[test]
fn ellipk_near_one_matches_quadrature() {
    let k: f64 = 0.999;
    let integrand = |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
    let oracle = trapezoid(&integrand, 0.0, FRAC_PI_2, 4000);
    let value = ellipk(k).unwrap();
    assert!(value.is_finite());
    assert!((value - oracle).abs() <= 1e-12 * oracle, "{value} vs {oracle}");
}

#[test]
fn jacobi_functions_match_ode_oracle() {
    // sn' = cn·dn, cn' = −sn·dn, dn' = −k²·sn·cn, integrated by classical RK4.
    let k: f64 = 0.7;
    let u = 0.5;
    let steps = 5000;
    let h = u / steps as f64;
    let rhs = |y: [f64; 3]| [y[1] * y[2], -y[0] * y[2], -k * k * y[0] * y[1]];
    let mut y = [0.0, 1.0, 1.0];
    for _ in 0..steps {
        let add = |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
        let k1 = rhs(y);
        let k2 = rhs(add(y, k1, h / 2.0));
        let k3 = rhs(add(y, k2, h / 2.0));
        let k4 = rhs(add(y, k3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    let (sn, cn, dn) = jacobi_sn_cn_dn(u, k).unwrap();
    assert!((sn - y[0]).abs() < 1e-12);
    assert!((cn - y[1]).abs() < 1e-12);
    assert!((dn - y[2]).abs() < 1e-12);
}

#[test]
fn validation_grid_example() {
    let f = build_filter(0.0, 0.1, 1.0, 1e-6).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..5000 {
        let x = 0.1 + 0.9 * i as f64 / 4999.0;
        worst = worst.max((evaluate_filter(&f, -x) - 1.0).abs());
        worst = worst.max(evaluate_filter(&f, x).abs());
    }
    assert!(worst < 1e-6, "{worst:e}");
    assert!(f.achieved_error < 1e-6);
}

#[test]
fn degree_bound_is_tight_on_sweep() {
    for ratio in [1e-1, 1e-2, 1e-3] {
        for tol in [1e-4, 1e-6] {
            let d = required_degree(tol, ratio, 1.0).unwrap();
            let f = build_filter(0.0, ratio, 1.0, tol).unwrap();
            assert!(f.achieved_error < tol);
            assert!(f.degree() <= d + 2, "ratio={ratio} tol={tol}");
            let pmin = minimal_half_degree(ratio, 1.0, tol).unwrap();
            assert!(d <= 2 * pmin + 1 + 2, "ratio={ratio} tol={tol}: d={d} pmin={pmin}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn filter_symmetry_and_accuracy(
        tau in -10.0f64..10.0,
        log_ratio in -3.0f64..-0.1,
        eta in 0.1f64..100.0,
        tol_exp in 3i32..9,
    ) {
        let delta = eta * 10f64.powf(log_ratio);
        let tol = 10f64.powi(-tol_exp);
        let f = build_filter(tau, delta, eta, tol).unwrap();
        prop_assert!(f.achieved_error < tol);
        prop_assert_eq!(f.pole_count(), 2 * f.p + 2);
        for i in 0..50 {
            let x = 2.0 * eta * i as f64 / 49.0;
            prop_assert!((f.evaluate(tau - x) + f.evaluate(tau + x) - 1.0).abs() < 1e-13);
        }
        for pair in &f.finite_poles {
            prop_assert_eq!(pair.re, tau);
            prop_assert!(pair.im > 0.0);
        }
    }
}
