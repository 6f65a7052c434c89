use lancom::compression::{apply_compression, filter_poles, plan_compression, rational_krylov_basis, Pole};
use lancom::krylov_schur::ks_restart;
use lancom::lanczos::{init_state, lc_solve_observed, KrylovLikeState, SolveOptions, Stage};
use lancom::linalg::{merge_orthonormal, sym_eig, DenseMat, DenseSymmetric};
use lancom::sparse::{gen_laplacian_l, random_sparse_symmetric, RandomSparse, SparseMatrixCsr};
use lancom::zolotarev::ConjugatePair;
use proptest::prelude::*;

fn unit(m: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[i] = 1.0;
    v
}

/// `‖(I − VVᵀ)x‖`.
fn outside(v: &DenseMat, x: &[f64]) -> f64 {
    let c = v.tr_matvec(x).unwrap();
    let back = v.matvec(&c).unwrap();
    back.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Dense Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

#[test]
fn quadratic_pole_pair_direction_is_in_span() {
    let m = 5;
    let d: Vec<f64> = (1..=m).map(|i| i as f64).collect();
    let t = DenseSymmetric::diag(&d);
    let start = vec![1.0 / (m as f64).sqrt(); m];
    let pair = ConjugatePair { re: 2.0, im: 1.0 };
    let poles = [Pole::Infinite, Pole::Infinite, Pole::Pair(pair)];
    let rb = rational_krylov_basis(&t, &poles, &start).unwrap();
    assert_eq!(rb.basis.cols(), 4);
    assert_eq!(rb.truncated, 0);
    assert!(rb.basis.orthonormality_defect() < 1e-14);

    // (T² − 4T + 5I)⁻¹ applied to the last accepted direction before the pair.
    let tv = t.matvec(&start).unwrap();
    let mut quad = vec![vec![0.0; m]; m];
    for i in 0..m {
        quad[i][i] = d[i] * d[i] - 4.0 * d[i] + 5.0;
    }
    let w = solve(quad, tv);
    let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let w: Vec<f64> = w.iter().map(|x| x / nw).collect();
    assert!(outside(&rb.basis, &w) < 1e-12);
    assert!(outside(&rb.basis, &start) < 1e-12);
}

#[test]
fn full_pole_list_spans_whole_space() {
    let t = DenseSymmetric::from_rows(&[
        vec![2.0, 1.0, 0.0, 0.0],
        vec![1.0, 3.0, 1.0, 0.0],
        vec![0.0, 1.0, 4.0, 1.0],
        vec![0.0, 0.0, 1.0, 5.0],
    ])
    .unwrap();
    let pair = ConjugatePair { re: 3.0, im: 0.5 };
    let rb = rational_krylov_basis(&t, &[Pole::Infinite, Pole::Infinite, Pole::Pair(pair)], &unit(4, 3)).unwrap();
    assert_eq!(rb.basis.cols(), 4);
    assert!(rb.basis.orthonormality_defect() < 1e-13);
}

#[test]
fn merge_of_random_columns_is_orthonormal_with_same_span() {
    let g = lancom::rng::gaussian_vector(20 * 20, 5);
    let x = DenseMat::from_col_major(20, 20, g).unwrap();
    let merged = merge_orthonormal(&x);
    assert_eq!(merged.basis.cols(), 20);
    assert_eq!(merged.dropped, 0);
    assert!(merged.basis.orthonormality_defect() < 1e-13);
    for j in 0..20 {
        let c = x.col(j);
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(outside(&merged.basis, c) < 1e-12 * n);
    }
}

#[test]
fn merge_drops_repeated_columns() {
    let a: Vec<f64> = (0..10).map(|i| (i as f64).sin()).collect();
    let b: Vec<f64> = (0..10).map(|i| (i as f64).cos()).collect();
    let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + 2.0 * y).collect();
    let x = DenseMat::from_columns(10, &[a, b, sum]).unwrap();
    let merged = merge_orthonormal(&x);
    assert_eq!(merged.basis.cols(), 2);
    assert_eq!(merged.dropped, 1);
}

fn lanczos_steps(a: &SparseMatrixCsr, steps: usize, seed: u64) -> KrylovLikeState {
    let mut s = init_state(a, seed).unwrap();
    for _ in 0..steps {
        assert!(!s.expand_step(a).unwrap());
    }
    s
}

fn norm_of(a: &SparseMatrixCsr) -> f64 {
    let ev = lancom::linalg::sym_eigvals(&a.to_dense()).unwrap();
    ev[0].abs().max(ev[ev.len() - 1].abs())
}

#[test]
fn compression_preserves_lanczos_sequence() {
    let a = random_sparse_symmetric(&RandomSparse::new(200, 3, 21)).unwrap();
    let anorm = norm_of(&a);
    let base = lanczos_steps(&a, 30, 4);
    let plan = plan_compression(&base.projected(), 2, 1e-6).unwrap();
    assert!(plan.ell < 30);

    let mut plain = base.clone();
    let mut comp = base;
    apply_compression(&mut comp, &plan).unwrap();
    assert_eq!(comp.basis_size(), plan.ell);
    assert_eq!(comp.compressions(), 1);
    assert_eq!(comp.matvecs(), 30);
    assert!(comp.rayleigh_defect(&a).unwrap() <= 1e-12 * anorm);

    plain.expand_step(&a).unwrap();
    comp.expand_step(&a).unwrap();
    let (x, y) = (plain.q_next().unwrap(), comp.q_next().unwrap());
    let sign = if x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let diff = x.iter().zip(y).map(|(p, q)| (p - sign * q).abs()).fold(0.0, f64::max);
    assert!(diff <= 1e-8, "next vectors differ by {diff}");
    let (pa, ca) = (plain.alpha_hist(), comp.alpha_hist());
    assert!((pa[30] - ca[30]).abs() <= 1e-8 * anorm);
    assert!(comp.rayleigh_defect(&a).unwrap() <= 1e-12 * anorm);
    assert!(comp.orthogonality_defect() <= 1e-10);
}

#[test]
fn identity_plan_leaves_state_unchanged() {
    let a = random_sparse_symmetric(&RandomSparse::new(80, 3, 2)).unwrap();
    let mut s = lanczos_steps(&a, 12, 1);
    let before = s.projected();
    let q_before = s.basis().to_dense();
    s.compress(&DenseMat::identity(12), lancom::lanczos::Continuation::Lanczos).unwrap();
    assert!(s.projected().as_mat().sub(before.as_mat()).unwrap().max_abs() <= 1e-15);
    assert!(s.basis().to_dense().sub(&q_before).unwrap().max_abs() <= 1e-15);
}

#[test]
fn restart_matches_compression_with_eigenvectors() {
    let a = random_sparse_symmetric(&RandomSparse::new(150, 3, 8)).unwrap();
    let anorm = norm_of(&a);
    let base = lanczos_steps(&a, 24, 3);
    let ell = 10;
    let eig = sym_eig(&base.projected()).unwrap().truncated(ell);

    let mut via_ks = base.clone();
    ks_restart(&mut via_ks, ell).unwrap();
    let mut via_v = base;
    via_v.compress(&eig.vectors, lancom::lanczos::Continuation::Restart).unwrap();

    let tk = via_ks.projected();
    let tv = via_v.projected();
    for i in 0..ell {
        for j in 0..ell {
            if i != j {
                assert_eq!(tk.get(i, j), 0.0);
                assert!(tv.get(i, j).abs() <= 1e-12 * anorm);
            }
        }
        assert!((tk.get(i, i) - tv.get(i, i)).abs() <= 1e-12 * anorm);
    }
    assert!(via_ks.basis().to_dense().sub(&via_v.basis().to_dense()).unwrap().max_abs() <= 1e-12);
    assert!(via_ks.rayleigh_defect(&a).unwrap() <= 1e-12 * anorm);
}

#[test]
fn restart_to_m_minus_one_drops_largest() {
    let a = random_sparse_symmetric(&RandomSparse::new(100, 3, 9)).unwrap();
    let mut s = lanczos_steps(&a, 15, 3);
    let theta = lancom::linalg::sym_eigvals(&s.projected()).unwrap();
    ks_restart(&mut s, 14).unwrap();
    let t = s.projected();
    let kept: Vec<f64> = (0..14).map(|i| t.get(i, i)).collect();
    assert_eq!(kept, theta[..14].to_vec());
    assert!(ks_restart(&mut s, 14).is_err());
}

/// Filter conditions at the Ritz values and `e_m` membership hold at every
/// compression of a full solve.
#[test]
fn every_plan_in_a_solve_is_valid() {
    let a = random_sparse_symmetric(&RandomSparse::new(300, 4, 17)).unwrap();
    let mut opts = SolveOptions::new(3, 30);
    opts.seed = 5;
    let mut plans = 0;
    lc_solve_observed(&a, &opts, |_, stage| {
        if let Stage::BeforeCompression(plan) = stage {
            plans += 1;
            let m = plan.ritz_values.len();
            assert!(plan.ell < m);
            assert_eq!(plan.v.rows(), m);
            assert!(plan.v.orthonormality_defect() <= 1e-12);
            assert!(outside(&plan.v, &unit(m, m - 1)) <= 1e-10);
            let f = &plan.filter;
            for (i, &th) in plan.ritz_values.iter().enumerate() {
                if i < opts.k {
                    assert!((f.evaluate(th) - 1.0).abs() < f.tol_ra);
                } else if i >= plan.k_star {
                    assert!(f.evaluate(th).abs() < f.tol_ra);
                }
            }
            assert_eq!(filter_poles(f).len(), f.p + 2);
        }
    })
    .unwrap();
    assert!(plans > 0);
}

#[test]
fn laplacian_plans_always_shrink_the_basis() {
    let a = gen_laplacian_l(40).unwrap();
    let mut opts = SolveOptions::new(1, 60);
    opts.seed = 1;
    opts.tol_res = 1e-10;
    let mut shrunk = 0;
    let out = lc_solve_observed(&a, &opts, |_, stage| {
        if let Stage::Compressed(plan) = stage {
            assert!(plan.ell < 60);
            shrunk += 1;
        }
    })
    .unwrap();
    assert!(out.result.converged);
    assert!(shrunk > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plans_on_random_spectra(seed in 0u64..1000, m in 20usize..50, k in 1usize..4) {
        let g = lancom::rng::gaussian_vector(m, seed);
        let mut d: Vec<f64> = g.iter().map(|x| x * 10.0).collect();
        d.sort_by(f64::total_cmp);
        let t = DenseSymmetric::diag(&d);
        if let Ok(plan) = plan_compression(&t, k, 1e-6) {
            prop_assert!(plan.ell < m);
            prop_assert!(plan.k_star >= k);
            prop_assert!(plan.v.orthonormality_defect() <= 1e-12);
            prop_assert!(outside(&plan.v, &unit(m, m - 1)) <= 1e-10);
            for i in 0..k {
                prop_assert!(outside(&plan.v, &unit(m, i)) <= 1e-10);
            }
        }
    }
}
