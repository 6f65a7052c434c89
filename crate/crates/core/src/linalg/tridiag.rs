use super::dense::{DenseMat, DenseSymmetric};
use super::symeig::{sort_pairs, tql_implicit, EigenPairs};
use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                found: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn to_dense(&self) -> DenseSymmetric {
        let n = self.order();
        let mut m = DenseMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (i, &b) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = b;
            m[(i + 1, i)] = b;
        }
        DenseSymmetric::new(m).expect("square")
    }

    fn work_arrays(&self) -> (Vec<f64>, Vec<f64>) {
        let mut e = self.offdiag.clone();
        e.push(0.0);
        (self.diag.clone(), e)
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (mut d, mut e) = self.work_arrays();
        tql_implicit(&mut d, &mut e, None)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// The `k` smallest eigenvalues together with the last component of each
    /// normalized eigenvector. Only the last row of the eigenvector matrix is
    /// carried through the QL sweeps, so the cost is quadratic in the order.
    pub fn smallest_with_last_components(&self, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.order();
        if k > n {
            return Err(Error::NotEnoughPairs { requested: k, available: n });
        }
        let (mut d, mut e) = self.work_arrays();
        let mut last_row = DenseMat::zeros(1, n);
        last_row[(0, n - 1)] = 1.0;
        tql_implicit(&mut d, &mut e, Some(&mut last_row))?;
        let sorted = sort_pairs(d, Some(last_row));
        let values = sorted.values[..k].to_vec();
        let comps = (0..k).map(|j| sorted.vectors[(0, j)]).collect();
        Ok((values, comps))
    }
}

/// The `k` algebraically smallest eigenpairs of a symmetric tridiagonal matrix.
pub fn tridiag_eig_smallest(t: &SymTridiagonal, k: usize) -> Result<EigenPairs> {
    let n = t.order();
    if k > n {
        return Err(Error::NotEnoughPairs { requested: k, available: n });
    }
    let (mut d, mut e) = t.work_arrays();
    let mut z = DenseMat::identity(n);
    tql_implicit(&mut d, &mut e, Some(&mut z))?;
    Ok(sort_pairs(d, Some(z)).truncated(k))
}
