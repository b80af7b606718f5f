//! Characteristic polynomials and small monic-polynomial helpers.
//!
//! Coefficient vectors store the non-leading coefficients of a monic
//! polynomial in ascending order: `c[k]` multiplies `t^k`, the implicit
//! leading coefficient of `t^len` is 1.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::CMatrix;

/// Non-leading coefficients of `det(tI - m)` by the Faddeev-LeVerrier recurrence.
pub fn charpoly(m: &CMatrix) -> Vec<Complex64> {
    let n = m.dim();
    let a = m.as_dmatrix();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    let mut mk: DMatrix<Complex64> = DMatrix::zeros(n, n);
    let mut c_prev = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        mk = a * &mk;
        for d in 0..n {
            mk[(d, d)] += c_prev;
        }
        let c = -(a * &mk).trace() / (k as f64);
        coeffs[n - k] = c;
        c_prev = c;
    }
    coeffs
}

/// Coefficients of `prod_j (t - roots[j])^{mults[j]}` in the same layout as [`charpoly`].
pub fn monic_from_roots(roots: &[Complex64], mults: &[usize]) -> Vec<Complex64> {
    // full[k] multiplies t^k, leading term included while building
    let mut full = vec![Complex64::new(1.0, 0.0)];
    for (&r, &m) in roots.iter().zip(mults) {
        for _ in 0..m {
            let mut next = vec![Complex64::new(0.0, 0.0); full.len() + 1];
            for (k, &c) in full.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            full = next;
        }
    }
    full.pop();
    full
}

/// Relative coefficient distance between two monic polynomials of equal degree.
///
/// Normalized by `max(1, max_k |a_k|)`; returns infinity on degree mismatch.
pub fn coefficient_residual(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Evaluates the monic polynomial `t^len + sum c_k t^k` at `t`.
pub fn eval_monic(c: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &ck in c.iter().rev() {
        acc = acc * t + ck;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c64, real};

    #[test]
    fn zero_one_by_one() {
        let m = CMatrix::zeros(1);
        assert_eq!(charpoly(&m), vec![real(0.0)]);
    }

    #[test]
    fn identity_two() {
        let c = charpoly(&CMatrix::identity(2));
        assert!((c[0] - real(1.0)).norm() < 1e-15);
        assert!((c[1] - real(-2.0)).norm() < 1e-15);
    }

    #[test]
    fn upper_triangular_two() {
        let m = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap();
        let c = charpoly(&m);
        assert!((c[0] - real(2.0)).norm() < 1e-15);
        assert!((c[1] - real(-3.0)).norm() < 1e-15);
    }

    #[test]
    fn roots_roundtrip() {
        let roots = [real(2.0), c64(0.0, 1.0)];
        let p = monic_from_roots(&roots, &[2, 1]);
        // (t-2)^2 (t-i)
        assert_eq!(p.len(), 3);
        assert!(eval_monic(&p, real(2.0)).norm() < 1e-14);
        assert!(eval_monic(&p, c64(0.0, 1.0)).norm() < 1e-14);
        assert!((p[2] - c64(-4.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn residual_detects_mismatch() {
        let a = monic_from_roots(&[real(1.0), real(2.0)], &[1, 1]);
        let b = monic_from_roots(&[real(1.5)], &[2]);
        assert!(coefficient_residual(&a, &b) > 0.01);
        assert_eq!(coefficient_residual(&a, &a), 0.0);
        assert!(coefficient_residual(&a, &[real(1.0)]).is_infinite());
    }
}
