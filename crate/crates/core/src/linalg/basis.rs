//! Tall column storage for Krylov bases (`n × j`, `n` large, `j` small).

use super::dense::DenseMat;
use super::kernels::{axpy, dot};
use crate::error::{Error, Result};

/// Read access to a set of equally long columns.
pub trait ColumnSet {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn column(&self, j: usize) -> &[f64];

    /// `[q_1 … q_j]ᵀ · v`
    fn project(&self, v: &[f64]) -> Vec<f64> {
        (0..self.ncols()).map(|j| dot(self.column(j), v)).collect()
    }

    /// `v ← v − Σ_j coeffs[j]·q_j`
    fn subtract_combination(&self, coeffs: &[f64], v: &mut [f64]) {
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                axpy(-c, self.column(j), v);
            }
        }
    }
}

impl ColumnSet for DenseMat {
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn column(&self, j: usize) -> &[f64] {
        self.col(j)
    }
}

/// Column-major `n × j` matrix that grows one column at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    n: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Basis {
    pub fn new(n: usize) -> Self {
        Self { n, cols: 0, data: Vec::new() }
    }

    pub fn with_capacity(n: usize, cols: usize) -> Self {
        Self { n, cols: 0, data: Vec::with_capacity(n * cols) }
    }

    pub fn from_dense(m: &DenseMat) -> Self {
        Self { n: m.rows(), cols: m.cols(), data: m.as_slice().to_vec() }
    }

    pub fn to_dense(&self) -> DenseMat {
        DenseMat::from_col_major(self.n, self.cols, self.data.clone()).expect("consistent shape")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.cols == 0
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn push(&mut self, v: &[f64]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        self.data.extend_from_slice(v);
        self.cols += 1;
        Ok(())
    }

    /// Heap bytes held by the column data.
    pub fn bytes(&self) -> usize {
        self.data.capacity() * std::mem::size_of::<f64>()
    }

    /// `self · v` for a small `j × l` matrix `v`, returning a new `n × l`
    /// basis. Rows are processed in cache-sized blocks so every column of
    /// `self` is streamed from memory exactly once.
    pub fn times(&self, v: &DenseMat) -> Result<Basis> {
        if v.rows() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.rows() });
        }
        const BLOCK: usize = 512;
        let l = v.cols();
        let mut out = vec![0.0; self.n * l];
        let mut start = 0;
        while start < self.n {
            let end = (start + BLOCK).min(self.n);
            for c in 0..l {
                let dst = &mut out[c * self.n + start..c * self.n + end];
                for j in 0..self.cols {
                    let coef = v[(j, c)];
                    if coef != 0.0 {
                        axpy(coef, &self.col(j)[start..end], dst);
                    }
                }
            }
            start = end;
        }
        Ok(Basis { n: self.n, cols: l, data: out })
    }

    /// `self · x` for a coefficient vector of length `j`.
    pub fn combine(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (j, &c) in x.iter().enumerate() {
            axpy(c, self.col(j), &mut y);
        }
        y
    }
}

impl ColumnSet for Basis {
    fn nrows(&self) -> usize {
        self.n
    }
    fn ncols(&self) -> usize {
        self.cols
    }
    fn column(&self, j: usize) -> &[f64] {
        self.col(j)
    }
}
