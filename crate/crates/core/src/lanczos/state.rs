use crate::error::{Error, Result};
use crate::linalg::kernels::{axpy, dot, norm2, scale};
use crate::linalg::{orthonormalize_against_scaled, sym_eigvals, Basis, ColumnSet, DenseMat, DenseSymmetric};
use crate::rng::gaussian_vector;
use crate::sparse::LinearOperator;

/// Symmetric matrix that grows by one bordered row/column at a time without
/// reallocating on every step.
#[derive(Debug, Clone, PartialEq)]
struct GrowSym {
    order: usize,
    ld: usize,
    data: Vec<f64>,
}

impl GrowSym {
    fn new() -> Self {
        Self { order: 0, ld: 0, data: Vec::new() }
    }

    fn from_dense(t: &DenseSymmetric) -> Self {
        let n = t.order();
        Self { order: n, ld: n, data: t.as_mat().as_slice().to_vec() }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.ld + i]
    }

    fn push(&mut self, column: &[f64], diagonal: f64) {
        let j = self.order;
        debug_assert_eq!(column.len(), j);
        if j + 1 > self.ld {
            let ld = (2 * self.ld).max(16);
            let mut data = vec![0.0; ld * ld];
            for c in 0..j {
                data[c * ld..c * ld + j].copy_from_slice(&self.data[c * self.ld..c * self.ld + j]);
            }
            self.ld = ld;
            self.data = data;
        }
        for (i, &v) in column.iter().enumerate() {
            self.data[j * self.ld + i] = v;
            self.data[i * self.ld + j] = v;
        }
        self.data[j * self.ld + j] = diagonal;
        self.order += 1;
    }

    fn to_dense(&self) -> DenseSymmetric {
        let n = self.order;
        let mut m = DenseMat::zeros(n, n);
        for j in 0..n {
            m.col_mut(j).copy_from_slice(&self.data[j * self.ld..j * self.ld + n]);
        }
        DenseSymmetric::new(m).expect("square")
    }
}

/// What the three-term recurrence should use as its previous vector after a
/// compression `Q ← Q·V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuation {
    /// `e_m ∈ range(V)`: the recurrence carries on as if nothing happened.
    Lanczos,
    /// Thick restart: the coupling to the kept basis is left entirely to the
    /// fill-in column (or the coupling vector when fill-in is off).
    Restart,
}

/// Krylov-like decomposition `A·Q = Q·T + q_next·bᵀ + F` with `F` kept
/// implicit, together with the Lanczos coefficients of every step.
#[derive(Debug, Clone)]
pub struct KrylovLikeState {
    q: Basis,
    t: GrowSym,
    q_next: Option<Vec<f64>>,
    q_last: Option<Vec<f64>>,
    /// Norm of the last orthogonalized vector, i.e. the coupling between
    /// `q_next` and the most recent basis column.
    beta_coupling: f64,
    /// Coupling vector `b`; drives the new column of `T` when fill-in is off.
    b: Vec<f64>,
    alpha_hist: Vec<f64>,
    beta_hist: Vec<f64>,
    matvecs: usize,
    compressions: usize,
    breakdown: bool,
    fill_in: bool,
    norm_est: f64,
}

/// `q_1 = g/‖g‖` for a seeded standard normal vector `g`.
pub fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut g = gaussian_vector(n, seed);
    let s = norm2(&g);
    scale(1.0 / s, &mut g);
    g
}

pub fn init_state<A: LinearOperator + ?Sized>(a: &A, seed: u64) -> Result<KrylovLikeState> {
    KrylovLikeState::new(start_vector(a.order(), seed))
}

impl KrylovLikeState {
    /// Empty basis with `q_next = start/‖start‖`.
    pub fn new(mut start: Vec<f64>) -> Result<Self> {
        let n = start.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!("operator order must be at least 2, got {n}")));
        }
        let s = norm2(&start);
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidArgument("start vector must be finite and nonzero".into()));
        }
        scale(1.0 / s, &mut start);
        Ok(Self {
            q: Basis::new(n),
            t: GrowSym::new(),
            q_next: Some(start),
            q_last: None,
            beta_coupling: 0.0,
            b: Vec::new(),
            alpha_hist: Vec::new(),
            beta_hist: Vec::new(),
            matvecs: 0,
            compressions: 0,
            breakdown: false,
            fill_in: true,
            norm_est: 0.0,
        })
    }

    /// Disables fill-in: new columns of `T` come from the coupling vector `b`
    /// instead of an explicit projection `Qᵀ(A·q)`.
    pub fn with_fill_in(mut self, on: bool) -> Self {
        self.fill_in = on;
        self
    }

    pub fn reserve(&mut self, cols: usize) {
        if self.q.is_empty() {
            self.q = Basis::with_capacity(self.q.n(), cols);
        }
    }

    pub fn n(&self) -> usize {
        self.q.n()
    }

    /// Basis size `j`.
    pub fn basis_size(&self) -> usize {
        self.q.len()
    }

    pub fn basis(&self) -> &Basis {
        &self.q
    }

    pub fn projected(&self) -> DenseSymmetric {
        self.t.to_dense()
    }

    pub fn q_next(&self) -> Option<&[f64]> {
        self.q_next.as_deref()
    }

    pub fn alpha_hist(&self) -> &[f64] {
        &self.alpha_hist
    }

    pub fn beta_hist(&self) -> &[f64] {
        &self.beta_hist
    }

    pub fn matvecs(&self) -> usize {
        self.matvecs
    }

    pub fn compressions(&self) -> usize {
        self.compressions
    }

    pub fn is_breakdown(&self) -> bool {
        self.breakdown
    }

    pub fn fill_in(&self) -> bool {
        self.fill_in
    }

    /// `max ‖A·q‖` over all expanded vectors; a lower bound on `‖A‖₂`.
    pub fn norm_estimate(&self) -> f64 {
        self.norm_est
    }

    /// Coupling `β` between `q_next` and the latest basis vector.
    pub fn coupling(&self) -> f64 {
        self.beta_coupling
    }

    /// Bytes held by the basis.
    pub fn basis_bytes(&self) -> usize {
        self.q.bytes()
    }

    /// One Lanczos step with reorthogonalization: appends `q_next` to the
    /// basis, borders `T` with `Qᵀ(A·q)` and `qᵀA·q`, and orthonormalizes the
    /// three-term vector against the whole basis to obtain the new `q_next`.
    /// Returns `true` if the step ended in breakdown.
    pub fn expand_step<A: LinearOperator + ?Sized>(&mut self, a: &A) -> Result<bool> {
        if a.order() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: a.order() });
        }
        let q = match self.q_next.take() {
            Some(q) => q,
            None => return Err(Error::InvalidArgument("cannot expand after breakdown".into())),
        };
        let mut w = vec![0.0; q.len()];
        a.apply(&q, &mut w);
        self.matvecs += 1;
        self.norm_est = self.norm_est.max(norm2(&w));

        let column = if self.fill_in { self.q.project(&w) } else { std::mem::take(&mut self.b) };
        let alpha = dot(&q, &w);
        let mut p = w;
        axpy(-alpha, &q, &mut p);
        if let Some(prev) = &self.q_last {
            axpy(-self.beta_coupling, prev, &mut p);
        }
        let beta = norm2(&p);
        self.alpha_hist.push(alpha);
        self.beta_hist.push(beta);

        self.q.push(&q)?;
        self.t.push(&column, alpha);
        self.q_last = Some(q);

        let j = self.q.len();
        self.b = vec![0.0; j];
        match orthonormalize_against_scaled(p, &self.q, self.norm_est) {
            Ok(o) => {
                self.beta_coupling = o.norm;
                self.b[j - 1] = o.norm;
                self.q_next = Some(o.vector);
                Ok(false)
            }
            Err(Error::Breakdown { .. }) => {
                self.beta_coupling = 0.0;
                self.breakdown = true;
                Ok(true)
            }
            Err(e) => Err(e),
        }
    }

    /// `Q ← Q·V`, `T ← Vᵀ·T·V`, `b ← Vᵀ·b`; `q_next` and all counters except
    /// the compression count are unchanged.
    pub fn compress(&mut self, v: &DenseMat, mode: Continuation) -> Result<()> {
        let j = self.basis_size();
        if v.rows() != j {
            return Err(Error::DimensionMismatch { expected: j, found: v.rows() });
        }
        let t = self.t.to_dense().congruence(v)?;
        self.q = self.q.times(v)?;
        self.t = GrowSym::from_dense(&t);
        self.b = v.tr_matvec(&self.b)?;
        if mode == Continuation::Restart {
            self.q_last = None;
        }
        self.compressions += 1;
        Ok(())
    }

    /// Replaces `T` outright (used to store an exactly diagonal `T` after a
    /// thick restart).
    pub(crate) fn set_projected(&mut self, t: &DenseSymmetric) -> Result<()> {
        if t.order() != self.basis_size() {
            return Err(Error::DimensionMismatch { expected: self.basis_size(), found: t.order() });
        }
        self.t = GrowSym::from_dense(t);
        Ok(())
    }

    /// `max |[Q, q_next]ᵀ[Q, q_next] − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut full = self.q.to_dense();
        if let Some(qn) = &self.q_next {
            let mut cols: Vec<Vec<f64>> = (0..full.cols()).map(|j| full.col(j).to_vec()).collect();
            cols.push(qn.clone());
            full = DenseMat::from_columns(self.n(), &cols).expect("uniform columns");
        }
        full.orthonormality_defect()
    }

    /// `‖QᵀAQ − T‖₂`, computed with `j` extra products that are not counted.
    pub fn rayleigh_defect<A: LinearOperator + ?Sized>(&self, a: &A) -> Result<f64> {
        let j = self.basis_size();
        if j == 0 {
            return Ok(0.0);
        }
        let mut diff = DenseMat::zeros(j, j);
        let mut w = vec![0.0; self.n()];
        for c in 0..j {
            a.apply(self.q.col(c), &mut w);
            let proj = self.q.project(&w);
            for r in 0..j {
                diff[(r, c)] = proj[r] - self.t.get(r, c);
            }
        }
        let ev = sym_eigvals(&DenseSymmetric::new(diff)?)?;
        Ok(ev.iter().fold(0.0, |m, v| m.max(v.abs())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::SparseMatrixCsr;

    #[test]
    fn grow_sym_matches_bordering() {
        let mut g = GrowSym::new();
        let mut d = DenseSymmetric::zeros(0);
        for j in 0..40 {
            let col: Vec<f64> = (0..j).map(|i| (i * 7 + j) as f64).collect();
            g.push(&col, j as f64);
            d = d.bordered(&col, j as f64).unwrap();
        }
        assert_eq!(g.to_dense(), d);
    }

    #[test]
    fn start_vector_is_reproducible_unit() {
        let a = start_vector(100, 3);
        assert_eq!(a, start_vector(100, 3));
        assert!((norm2(&a) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvector_start_breaks_down_immediately() {
        let n = 6;
        let diag: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, (i + 1) as f64)).collect();
        let a = SparseMatrixCsr::from_triplets(n, &diag, 0.0).unwrap();
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        let mut s = KrylovLikeState::new(e1).unwrap();
        assert!(s.expand_step(&a).unwrap());
        assert_eq!(s.alpha_hist(), &[1.0]);
        assert_eq!(s.beta_hist(), &[0.0]);
        assert!(s.is_breakdown());
        assert!(s.expand_step(&a).is_err());
    }

    #[test]
    fn order_one_rejected() {
        assert!(KrylovLikeState::new(vec![1.0]).is_err());
    }
}
