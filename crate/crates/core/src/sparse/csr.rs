use crate::error::{Error, Result};
use crate::linalg::{DenseMat, DenseSymmetric};

/// A symmetric linear operator `x ↦ A·x`.
pub trait LinearOperator {
    fn order(&self) -> usize;

    /// `y ← A·x`; both slices have length `order()`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Symmetric sparse matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrixCsr {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

/// Tolerance on `|a_ij − a_ji| / max(|a_ij|, |a_ji|)` accepted by
/// [`SparseMatrixCsr::from_triplets`].
pub const EXACT_SYMMETRY_TOL: f64 = 1e-15;

impl SparseMatrixCsr {
    /// Builds a matrix from `(row, col, value)` triplets (0-based). Duplicate
    /// entries are summed; explicit zeros are kept. Entries whose mirror
    /// differs by more than `sym_tol` relative are rejected; accepted pairs
    /// are averaged so the stored matrix is exactly symmetric.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)], sym_tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix order must be positive".into()));
        }
        let mut counts = vec![0usize; n + 1];
        for &(i, j, _) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
            }
            counts[i + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut raw = vec![(0usize, 0.0f64); triplets.len()];
        for &(i, j, v) in triplets {
            raw[next[i]] = (j, v);
            next[i] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        for i in 0..n {
            let row = &mut raw[counts[i]..counts[i + 1]];
            row.sort_by_key(|e| e.0);
            for &(j, v) in row.iter() {
                if col_idx.len() > row_ptr[i] && *col_idx.last().unwrap() == j {
                    *vals.last_mut().unwrap() += v;
                } else {
                    col_idx.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        let mut a = Self { n, row_ptr, col_idx, vals };
        a.symmetrize(sym_tol)?;
        Ok(a)
    }

    fn find(&self, i: usize, j: usize) -> Option<usize> {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[s..e].binary_search(&j).ok().map(|p| s + p)
    }

    fn symmetrize(&mut self, tol: f64) -> Result<()> {
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[p];
                if j <= i {
                    continue;
                }
                let a = self.vals[p];
                let b = match self.find(j, i) {
                    Some(q) => self.vals[q],
                    None if a == 0.0 => continue,
                    None => return Err(Error::NotSymmetric { row: i, col: j, diff: a.abs() }),
                };
                let diff = (a - b).abs();
                if diff > tol * a.abs().max(b.abs()) {
                    return Err(Error::NotSymmetric { row: i, col: j, diff });
                }
                let avg = 0.5 * (a + b);
                self.vals[p] = avg;
                let q = self.find(j, i).expect("checked above");
                self.vals[q] = avg;
            }
        }
        // An entry (j, i) with no partner (i, j) is caught by the pass above
        // only when it sits in the upper triangle; check the lower one too.
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[p];
                if j < i && self.vals[p] != 0.0 && self.find(j, i).is_none() {
                    return Err(Error::NotSymmetric { row: i, col: j, diff: self.vals[p].abs() });
                }
            }
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Self {
        Self { n, row_ptr: (0..=n).collect(), col_idx: (0..n).collect(), vals: vec![1.0; n] }
    }

    pub fn from_dense(a: &DenseSymmetric) -> Self {
        let n = a.order();
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = a.get(i, j);
                if v != 0.0 {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &trip, 0.0).expect("dense symmetric input")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn vals(&self) -> &[f64] {
        &self.vals
    }

    /// Iterator over the stored entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        let mut y = vec![0.0; self.n];
        self.apply(x, &mut y);
        Ok(y)
    }

    pub fn to_dense(&self) -> DenseSymmetric {
        let mut m = DenseMat::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        DenseSymmetric::new(m).expect("square")
    }

    /// Upper bound on `‖A‖₂` from the largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// The matrix `s·A`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= s;
        }
        out
    }
}

impl LinearOperator for SparseMatrixCsr {
    fn order(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut acc = 0.0;
            for p in s..e {
                acc += self.vals[p] * x[self.col_idx[p]];
            }
            *yi = acc;
        }
    }
}

impl LinearOperator for DenseSymmetric {
    fn order(&self) -> usize {
        DenseSymmetric::order(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let r = self.matvec(x).expect("dimension checked by caller");
        y.copy_from_slice(&r);
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}
