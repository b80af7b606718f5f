//! Upper Hessenberg matrices with unit subdiagonal, the inverse of the
//! Kostant-Wallach map on them, and trivialization of generic fibers.

use num_complex::Complex64;
use serde::Serialize;

use crate::cover::{transporter, zd_act, CoverPoint, ZdElement};
use crate::decomp::generic_counts;
use crate::error::{GzError, Result};
use crate::gz::{kw_map, GzValue};
use crate::linalg::CMatrix;
use crate::Tolerances;

/// An upper Hessenberg matrix whose subdiagonal entries are all one.
#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergMatrix(CMatrix);

impl HessenbergMatrix {
    /// Checks the structure within absolute tolerance `tol`.
    pub fn new(x: CMatrix, tol: f64) -> Result<Self> {
        if !is_hessenberg(&x, tol) {
            return Err(GzError::InvalidMatrix("not unit-subdiagonal upper Hessenberg".into()));
        }
        Ok(HessenbergMatrix(x))
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.0
    }
}

pub fn is_hessenberg(x: &CMatrix, tol: f64) -> bool {
    let n = x.dim();
    (0..n).all(|r| {
        (0..r).all(|c| {
            let want = if r == c + 1 { 1.0 } else { 0.0 };
            (x.get(r, c) - want).norm() <= tol
        })
    })
}

/// The unique unit-subdiagonal Hessenberg matrix with `kw_map(x) = c`.
///
/// Column `i + 1` is determined by the previous levels through
/// `p_{i+1}(t) = (t - a) p_i(t) - sum_k b_k p_{k-1}(t)`: the polynomial
/// `t p_i - p_{i+1}` is expanded by back-substitution in the monic basis
/// `p_i, p_{i-1}, ..., p_0`, giving the diagonal entry `a` and the column
/// entries `b_k` above it.
pub fn phi_inverse(c: &GzValue) -> HessenbergMatrix {
    let n = c.n();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // p[k]: ascending coefficients of the monic level-k polynomial, p[0] = 1
    let p: Vec<Vec<Complex64>> = std::iter::once(vec![one])
        .chain(c.levels().iter().map(|lv| {
            let mut v = lv.clone();
            v.push(one);
            v
        }))
        .collect();
    let mut x = nalgebra::DMatrix::from_element(n, n, zero);
    for k in 1..n {
        x[(k, k - 1)] = one;
    }
    x[(0, 0)] = -c.level(1)[0];
    for i in 1..n {
        // r = t p_i - p_{i+1}, degree <= i
        let mut r = vec![zero; i + 1];
        for (d, coef) in p[i].iter().enumerate().take(i) {
            r[d + 1] += coef;
        }
        for d in 0..=i {
            r[d] -= p[i + 1][d];
        }
        let a = r[i];
        for d in 0..=i {
            r[d] -= a * p[i][d];
        }
        x[(i, i)] = a;
        for k in (1..=i).rev() {
            let b = r[k - 1];
            for d in 0..k {
                r[d] -= b * p[k - 1][d];
            }
            x[(k - 1, i)] = b;
        }
    }
    HessenbergMatrix(CMatrix::new(x).expect("finite input gives finite output"))
}

/// The point of the Hessenberg section in the fiber of `x`.
pub fn hessenberg_section(x: &CMatrix) -> HessenbergMatrix {
    phi_inverse(&kw_map(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct Trivialization {
    pub k: ZdElement,
    #[serde(skip)]
    pub hessenberg: HessenbergMatrix,
    /// `|mu(zd_act(k, x~)) - mu(p)|_F`.
    pub residual: f64,
}

/// Writes a generic cover point as `k . x~` with `x~` on the Hessenberg
/// section, lifted with the same eigenvalue ordering as `p`.
pub fn trivialize(p: &CoverPoint, tols: &Tolerances) -> Result<Trivialization> {
    let counts = generic_counts(p.z(), tols.cluster)?;
    if !counts.generic {
        return Err(GzError::NotGeneric { shared: counts.j });
    }
    let section = hessenberg_section(p.x());
    let base = CoverPoint::new(section.as_cmatrix().clone(), p.z().to_vec(), tols)?;
    let k = transporter(&base, p, tols)?;
    let residual = zd_act(&k, &base)?.x().distance(p.x());
    Ok(Trivialization { k, hessenberg: section, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    #[test]
    fn hessenberg_membership() {
        let a = CMatrix::from_real_rows(&[[3.0, 4.0], [1.0, 5.0]]).unwrap();
        assert!(is_hessenberg(&a, 1e-12));
        let b = CMatrix::from_real_rows(&[[3.0, 4.0], [0.0, 5.0]]).unwrap();
        assert!(!is_hessenberg(&b, 1e-12));
        let comp = CMatrix::from_real_rows(&[[0.0, 0.0, -6.0], [1.0, 0.0, 11.0], [0.0, 1.0, -6.0]]).unwrap();
        assert!(is_hessenberg(&comp, 1e-12));
    }

    #[test]
    fn inverse_examples() {
        let c = GzValue::new(vec![vec![real(-1.0)], vec![real(2.0), real(-3.0)]]).unwrap();
        let x = phi_inverse(&c);
        assert_eq!(x.as_cmatrix(), &CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 2.0]]).unwrap());

        let zeros = GzValue::new((1..=4).map(|i| vec![real(0.0); i]).collect()).unwrap();
        assert_eq!(phi_inverse(&zeros).as_cmatrix(), &CMatrix::subdiagonal_ones(4));
    }

    #[test]
    fn section_examples() {
        let x = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap();
        let h = hessenberg_section(&x);
        assert!(h.as_cmatrix().distance(&CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 2.0]]).unwrap()) < 1e-14);

        let y = CMatrix::from_real_rows(&[[0.5, 2.0, -1.0], [1.0, 0.25, 3.0], [0.0, 1.0, -0.75]]).unwrap();
        assert!(hessenberg_section(&y).as_cmatrix().distance(&y) < 1e-10);

        let d = CMatrix::real_diag(&[1.0, 2.0, 0.5]);
        let d_inv = CMatrix::real_diag(&[1.0, 0.5, 2.0]);
        let conj = y.conjugate_by(&d, &d_inv);
        assert!(hessenberg_section(&conj).as_cmatrix().distance(&y) < 1e-10);
    }
}
