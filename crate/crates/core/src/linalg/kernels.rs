//! Vector kernels. Sums use four interleaved accumulators so the compiler can
//! vectorize them; the summation order is fixed, so results are reproducible.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0_f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Two dot products sharing one pass over `a`: `(aᵀb, aᵀc)`.
#[inline]
pub fn dot2(a: &[f64], b: &[f64], c: &[f64]) -> (f64, f64) {
    debug_assert_eq!(a.len(), b.len());
    debug_assert_eq!(a.len(), c.len());
    let mut s = [0.0_f64; 4];
    let mut t = [0.0_f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let cc = c.chunks_exact(4);
    let (ra, rb, rc) = (ca.remainder(), cb.remainder(), cc.remainder());
    for ((x, y), z) in ca.zip(cb).zip(cc) {
        for l in 0..4 {
            s[l] += x[l] * y[l];
            t[l] += x[l] * z[l];
        }
    }
    let (mut ts, mut tt) = (0.0, 0.0);
    for ((x, y), z) in ra.iter().zip(rb).zip(rc) {
        ts += x * y;
        tt += x * z;
    }
    ((s[0] + s[1]) + (s[2] + s[3]) + ts, (t[0] + t[1]) + (t[2] + t[3]) + tt)
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha·x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn scale(alpha: f64, x: &mut [f64]) {
    for v in x {
        *v *= alpha;
    }
}
