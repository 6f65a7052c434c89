//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by implicit QL iterations with Wilkinson shifts.

use super::dense::{DenseMat, DenseSymmetric};
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// (one per column).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DenseMat,
}

impl EigenPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Keeps only the first `k` pairs.
    pub fn truncated(mut self, k: usize) -> Self {
        self.values.truncate(k);
        self.vectors.truncate_cols(k);
        self
    }
}

/// Full spectral decomposition of a dense symmetric matrix.
pub fn sym_eig(t: &DenseSymmetric) -> Result<EigenPairs> {
    let n = t.order();
    if n == 0 {
        return Err(Error::InvalidArgument("sym_eig on an empty matrix".into()));
    }
    let mut v = t.as_mat().clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, true);
    shift_offdiag(&mut e);
    tql_implicit(&mut d, &mut e, Some(&mut v))?;
    Ok(sort_pairs(d, Some(v)))
}

/// Eigenvalues only, ascending. Cheaper than [`sym_eig`] since no
/// transformations are accumulated.
pub fn sym_eigvals(t: &DenseSymmetric) -> Result<Vec<f64>> {
    let n = t.order();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut v = t.as_mat().clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, false);
    shift_offdiag(&mut e);
    tql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder tridiagonalization (the classic EISPACK `tred2` ordering).
/// On return `d` holds the diagonal, `e[i]` the coupling between `i-1` and `i`
/// (`e[0] = 0`), and `v` the accumulated orthogonal transform if requested.
fn tred2(v: &mut DenseMat, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        // Diagonal of the reduced matrix sits on the diagonal of `v`.
        for j in 0..n {
            d[j] = v[(j, j)];
        }
        e[0] = 0.0;
        return;
    }

    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Converts `e[i] = T[i-1, i]` into `e[i] = T[i, i+1]` with `e[n-1] = 0`.
fn shift_offdiag(e: &mut [f64]) {
    let n = e.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
}

/// Implicit QL on a symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i+1`, `e[n-1] = 0`).
///
/// Every plane rotation is applied to columns `i, i+1` of `z`, which may hold
/// any number of rows: the full transform, the identity (for eigenvectors of
/// the tridiagonal itself) or just selected rows of it. Eigenvalues are
/// returned unsorted in `d`.
pub(crate) fn tql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut DenseMat>) -> Result<()> {
    let n = d.len();
    let eps = f64::EPSILON;
    let cap = 30 * n.max(1);
    let mut iterations = 0usize;
    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > cap {
                    return Err(Error::NoConvergence(cap));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let rows = z.rows();
                        for k in 0..rows {
                            let zi1 = z[(k, i + 1)];
                            let zi = z[(k, i)];
                            z[(k, i + 1)] = s * zi + c * zi1;
                            z[(k, i)] = c * zi - s * zi1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Sorts eigenvalues ascending and permutes the columns of `z` to match.
pub(crate) fn sort_pairs(d: Vec<f64>, z: Option<DenseMat>) -> EigenPairs {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = match z {
        Some(z) => z.select_cols(&order),
        None => DenseMat::zeros(0, 0),
    };
    EigenPairs { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residual(t: &DenseSymmetric, ep: &EigenPairs) -> f64 {
        let tv = t.as_mat().matmul(&ep.vectors).unwrap();
        let mut worst = 0.0_f64;
        for j in 0..ep.len() {
            for i in 0..t.order() {
                worst = worst.max((tv[(i, j)] - ep.vectors[(i, j)] * ep.values[j]).abs());
            }
        }
        worst
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let t = DenseSymmetric::diag(&[1.0; 5]);
        let ep = sym_eig(&t).unwrap();
        assert!(ep.values.iter().all(|&v| v == 1.0));
        assert!(ep.vectors.orthonormality_defect() < 1e-15);
    }

    #[test]
    fn diagonal_gives_permuted_identity() {
        let t = DenseSymmetric::diag(&[3.0, 1.0, 2.0]);
        let ep = sym_eig(&t).unwrap();
        assert_eq!(ep.values, vec![1.0, 2.0, 3.0]);
        let expect_rows = [1usize, 2, 0];
        for (j, &r) in expect_rows.iter().enumerate() {
            assert!((ep.vectors[(r, j)].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_by_two_by_hand() {
        let t = DenseSymmetric::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let ep = sym_eig(&t).unwrap();
        assert!((ep.values[0] - 1.0).abs() < 1e-15);
        assert!((ep.values[1] - 3.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = ep.vectors.col(0);
        assert!((v0[0].abs() - s).abs() < 1e-15 && (v0[0] + v0[1]).abs() < 1e-15);
        let v1 = ep.vectors.col(1);
        assert!((v1[0] - v1[1]).abs() < 1e-15);
    }

    #[test]
    fn single_entry() {
        let t = DenseSymmetric::diag(&[-4.5]);
        let ep = sym_eig(&t).unwrap();
        assert_eq!(ep.values, vec![-4.5]);
        assert_eq!(ep.vectors[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn values_only_agree_with_full() {
        let rows: Vec<Vec<f64>> = (0..7)
            .map(|i| (0..7).map(|j| ((i * 7 + j) as f64).sin() + ((j * 7 + i) as f64).sin()).collect())
            .collect();
        let t = DenseSymmetric::from_rows(&rows).unwrap();
        let full = sym_eig(&t).unwrap();
        let vals = sym_eigvals(&t).unwrap();
        for (a, b) in full.values.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    fn random_symmetric(n: usize, seed: u64) -> DenseSymmetric {
        // xorshift keeps this test self-contained.
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = DenseMat::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = next();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        DenseSymmetric::new(m).unwrap()
    }

    #[test]
    fn hundred_random_matrices() {
        for case in 0..100u64 {
            let n = 2 + (case as usize * 7) % 59;
            let t = random_symmetric(n, case + 1);
            let ep = sym_eig(&t).unwrap();
            let norm = t.frobenius_norm();
            assert!(residual(&t, &ep) <= 1e-10 * norm, "case {case}");
            assert!(ep.vectors.orthonormality_defect() <= 1e-12, "case {case}");
            assert!(ep.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    proptest! {
        #[test]
        fn trace_is_preserved(n in 2usize..40, seed in 1u64..10_000) {
            let t = random_symmetric(n, seed);
            let vals = sym_eigvals(&t).unwrap();
            let trace: f64 = (0..n).map(|i| t.get(i, i)).sum();
            prop_assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-11 * n as f64);
        }
    }
}
