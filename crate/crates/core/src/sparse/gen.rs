//! Test-matrix generators.

use rand::RngExt;
use rand_distr::StandardNormal;

use super::csr::SparseMatrixCsr;
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Five-point Laplacian on the retained points of an `nx × nx` interior grid.
/// Points are numbered column by column (row index fastest) over the points
/// for which `keep(row, col)` holds; the stencil has 4 on the diagonal and −1
/// between retained neighbours, and everything is multiplied by `scale`.
pub fn grid_laplacian(nx: usize, scale: f64, keep: impl Fn(usize, usize) -> bool) -> SparseMatrixCsr {
    let mut index = vec![usize::MAX; nx * nx];
    let mut n = 0;
    for c in 0..nx {
        for r in 0..nx {
            if keep(r, c) {
                index[c * nx + r] = n;
                n += 1;
            }
        }
    }
    let mut trip = Vec::with_capacity(5 * n);
    for c in 0..nx {
        for r in 0..nx {
            let p = index[c * nx + r];
            if p == usize::MAX {
                continue;
            }
            trip.push((p, p, 4.0 * scale));
            let neighbours = [
                (r.wrapping_sub(1), c),
                (r + 1, c),
                (r, c.wrapping_sub(1)),
                (r, c + 1),
            ];
            for (rr, cc) in neighbours {
                if rr < nx && cc < nx {
                    let q = index[cc * nx + rr];
                    if q != usize::MAX {
                        trip.push((p, q, -scale));
                    }
                }
            }
        }
    }
    SparseMatrixCsr::from_triplets(n, &trip, 0.0).expect("stencil is symmetric")
}

/// L-shaped domain Laplacian of order `3·nx²/4`: the interior `nx × nx` grid
/// with the quadrant where both grid indices exceed `nx/2` removed, scaled by
/// `3·nx²/4`.
pub fn gen_laplacian_l(nx: usize) -> Result<SparseMatrixCsr> {
    if nx == 0 || nx % 2 != 0 {
        return Err(Error::InvalidArgument(format!("nx must be even and positive, got {nx}")));
    }
    let half = nx / 2;
    let scale = 0.75 * (nx * nx) as f64;
    Ok(grid_laplacian(nx, scale, |r, c| !(r >= half && c >= half)))
}

/// Parameters for [`random_sparse_symmetric`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSparse {
    pub n: usize,
    /// Off-diagonal entries drawn per row before symmetrization.
    pub per_row: usize,
    /// Added to every diagonal entry.
    pub diag_shift: f64,
    /// Extra diagonal values placed on randomly chosen rows; they create
    /// well-separated eigenvalues at the top of the spectrum.
    pub outliers: Vec<f64>,
    pub seed: u64,
}

impl RandomSparse {
    pub fn new(n: usize, per_row: usize, seed: u64) -> Self {
        Self { n, per_row, diag_shift: 0.0, outliers: Vec::new(), seed }
    }
}

/// Random sparse symmetric matrix with standard normal entries.
pub fn random_sparse_symmetric(p: &RandomSparse) -> Result<SparseMatrixCsr> {
    if p.n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut rng = seeded(p.seed);
    let mut trip = Vec::with_capacity(p.n * (2 * p.per_row + 1));
    for i in 0..p.n {
        let d: f64 = rng.sample(StandardNormal);
        trip.push((i, i, d + p.diag_shift));
        for _ in 0..p.per_row {
            let j = rng.random_range(0..p.n);
            let v: f64 = rng.sample(StandardNormal);
            trip.push((i, j, 0.5 * v));
            trip.push((j, i, 0.5 * v));
        }
    }
    for &o in &p.outliers {
        let i = rng.random_range(0..p.n);
        trip.push((i, i, o));
    }
    SparseMatrixCsr::from_triplets(p.n, &trip, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigvals;

    #[test]
    fn nx2_by_hand() {
        let a = gen_laplacian_l(2).unwrap();
        assert_eq!(a.n(), 3);
        let d = a.to_dense();
        let expect = [[12.0, -3.0, -3.0], [-3.0, 12.0, 0.0], [-3.0, 0.0, 12.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), expect[i][j]);
            }
        }
        let ev = sym_eigvals(&d).unwrap();
        let r2 = 2f64.sqrt();
        let exact = [3.0 * (4.0 - r2), 12.0, 3.0 * (4.0 + r2)];
        for (a, b) in ev.iter().zip(exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn order_formula() {
        for nx in [2usize, 4, 10, 300] {
            assert_eq!(gen_laplacian_l(nx).unwrap().n(), 3 * nx * nx / 4);
        }
        assert_eq!(gen_laplacian_l(300).unwrap().n(), 67_500);
    }

    #[test]
    fn odd_or_zero_nx_rejected() {
        assert!(gen_laplacian_l(3).is_err());
        assert!(gen_laplacian_l(0).is_err());
    }

    #[test]
    fn stencil_structure() {
        let nx = 8;
        let s = 0.75 * 64.0;
        let a = gen_laplacian_l(nx).unwrap();
        for i in 0..a.n() {
            let mut degree = 0;
            for (j, v) in a.row(i) {
                if i == j {
                    assert_eq!(v, 3.0 * 64.0);
                } else {
                    assert_eq!(v, -s);
                    degree += 1;
                }
            }
            assert!(degree <= 4);
        }
    }

    #[test]
    fn random_generator_is_deterministic() {
        let p = RandomSparse::new(50, 3, 11);
        assert_eq!(random_sparse_symmetric(&p).unwrap(), random_sparse_symmetric(&p).unwrap());
    }
}
