//! The Gelfand-Zeitlin system on `gl(n, C)`.
//!
//! Index conventions follow the usual ones for this system: levels `i` and
//! powers `j` are 1-based with `1 <= j <= i <= n`, and `x_i` is the upper-left
//! `i x i` corner of `x`. Gradients are taken with respect to the trace form
//! `<X, Y> = Tr(XY)`, so `grad f_{i,j}(x) = j x_i^{j-1}` embedded in the corner.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GzError, Result};
use crate::linalg::{
    centralizer_basis_tol, charpoly, expm, intersection_dimension, normalized_rank, CMatrix,
};

/// A point of `C^(n+1 choose 2)`: level `i` holds the `i` non-leading
/// coefficients of a monic degree-`i` polynomial, `t^0` first.
#[derive(Clone, Debug, PartialEq)]
pub struct GzValue {
    levels: Vec<Vec<Complex64>>,
}

impl GzValue {
    pub fn new(levels: Vec<Vec<Complex64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(GzError::InvalidGzValue("no levels".into()));
        }
        for (k, level) in levels.iter().enumerate() {
            if level.len() != k + 1 {
                return Err(GzError::InvalidGzValue(format!(
                    "level {} has {} entries",
                    k + 1,
                    level.len()
                )));
            }
            if level.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(GzError::InvalidGzValue(format!("non-finite entry at level {}", k + 1)));
            }
        }
        Ok(GzValue { levels })
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<Complex64>] {
        &self.levels
    }

    /// Coefficients of level `i` (1-based).
    pub fn level(&self, i: usize) -> &[Complex64] {
        &self.levels[i - 1]
    }

    /// Largest entrywise distance; infinity when the shapes differ.
    pub fn max_abs_diff(&self, other: &GzValue) -> f64 {
        if self.n() != other.n() {
            return f64::INFINITY;
        }
        self.levels
            .iter()
            .flatten()
            .zip(other.levels.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Outcome of the strong-regularity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongRegularityCertificate {
    pub is_sreg: bool,
    pub per_level_regular: Vec<bool>,
    /// `dim z_{g_i}(x_i) ∩ z_{g_{i+1}}(x_{i+1})` for `i = 1..n-1`.
    pub intersection_ranks: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TangentSpan {
    pub fields: Vec<CMatrix>,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsotropyReport {
    /// Largest `|Tr(x [A, B])|` over pairs of gradients.
    pub max_pairing: f64,
    /// Same, each pairing divided by `|x| |A| |B|` (Frobenius norms).
    pub max_relative_pairing: f64,
    pub span_rank: usize,
    pub orbit_dim: usize,
    pub is_lagrangian: bool,
}

fn check_index(n: usize, i: usize, j: usize) -> Result<()> {
    if !(1 <= j && j <= i && i <= n) {
        return Err(GzError::IndexOutOfRange(format!(
            "(i, j) = ({i}, {j}) outside 1 <= j <= i <= {n}"
        )));
    }
    Ok(())
}

/// All index pairs `(i, j)` with `1 <= j <= i <= max_level`.
pub fn gz_indices(max_level: usize) -> Vec<(usize, usize)> {
    (1..=max_level)
        .flat_map(|i| (1..=i).map(move |j| (i, j)))
        .collect()
}

pub fn cutoff(x: &CMatrix, i: usize) -> Result<CMatrix> {
    x.corner(i)
}

/// `j x_i^{j-1}` as an `i x i` matrix.
fn corner_gradient(x: &CMatrix, i: usize, j: usize) -> Result<CMatrix> {
    check_index(x.dim(), i, j)?;
    Ok(x.corner(i)?.pow(j - 1).scale_real(j as f64))
}

/// Gradient of `f_{i,j}` at `x`, zero outside the `i x i` corner.
pub fn gz_gradient(x: &CMatrix, i: usize, j: usize) -> Result<CMatrix> {
    Ok(corner_gradient(x, i, j)?.pad_zeros(x.dim()))
}

/// `f_{i,j}(x) = Tr(x_i^j)`.
pub fn gz_function(x: &CMatrix, i: usize, j: usize) -> Result<Complex64> {
    check_index(x.dim(), i, j)?;
    Ok(x.corner(i)?.pow(j).trace())
}

/// The Kostant-Wallach map: characteristic polynomials of all cutoffs.
pub fn kw_map(x: &CMatrix) -> GzValue {
    let levels = (1..=x.dim())
        .map(|i| charpoly(&x.corner(i).expect("level within range")))
        .collect();
    GzValue { levels }
}

/// Hamiltonian vector field of `f_{i,j}` at `x`: `[j x_i^{j-1}, x]`.
pub fn gz_field(x: &CMatrix, i: usize, j: usize) -> Result<CMatrix> {
    Ok(gz_gradient(x, i, j)?.commutator(x))
}

/// Exact flow of `f_{i,j}` for complex time `t`: `Ad(exp(t j x_i^{j-1})) x`.
///
/// The cutoff `x_i` is constant along its own flow, so conjugating by the
/// exponential of the initial gradient integrates the field exactly.
pub fn gz_flow(x: &CMatrix, i: usize, j: usize, t: Complex64) -> Result<CMatrix> {
    let grad = corner_gradient(x, i, j)?;
    Ok(x.conjugate_corner(&expm(&grad.scale(t)), &expm(&grad.scale(-t))))
}

/// Lie-Poisson bracket `{f_{i,j}, f_{k,l}}(x) = Tr(x [grad f_{i,j}, grad f_{k,l}])`.
pub fn lie_poisson_bracket(fa: (usize, usize), fb: (usize, usize), x: &CMatrix) -> Result<Complex64> {
    let a = gz_gradient(x, fa.0, fa.1)?;
    let b = gz_gradient(x, fb.0, fb.1)?;
    Ok((x * &a.commutator(&b)).trace())
}

/// Natural magnitude of a bracket value: `|x| |grad f| |grad g|`.
pub fn bracket_scale(fa: (usize, usize), fb: (usize, usize), x: &CMatrix) -> Result<f64> {
    let a = gz_gradient(x, fa.0, fa.1)?;
    let b = gz_gradient(x, fb.0, fb.1)?;
    Ok(x.frobenius_norm() * a.frobenius_norm() * b.frobenius_norm())
}

/// Strong regularity via regular cutoffs with trivially intersecting
/// consecutive centralizers.
///
/// Centralizer dimensions use relative tolerance `tol`; an intersection
/// direction is counted when a principal-angle cosine exceeds `1 - tol`.
pub fn is_strongly_regular(x: &CMatrix, tol: f64) -> StrongRegularityCertificate {
    let n = x.dim();
    let bases: Vec<Vec<CMatrix>> = (1..=n)
        .map(|i| centralizer_basis_tol(&x.corner(i).expect("level within range"), tol))
        .collect();
    let per_level_regular: Vec<bool> = bases.iter().enumerate().map(|(k, b)| b.len() == k + 1).collect();
    let intersection_ranks: Vec<usize> = (1..n)
        .map(|i| {
            let lower: Vec<Vec<Complex64>> = bases[i - 1].iter().map(|b| b.pad_zeros(i + 1).flatten()).collect();
            let upper: Vec<Vec<Complex64>> = bases[i].iter().map(CMatrix::flatten).collect();
            intersection_dimension(&lower, &upper, tol).expect("same ambient dimension")
        })
        .collect();
    let is_sreg = per_level_regular.iter().all(|&r| r) && intersection_ranks.iter().all(|&r| r == 0);
    StrongRegularityCertificate { is_sreg, per_level_regular, intersection_ranks }
}

/// The Gelfand-Zeitlin fields `xi_{f_{i,j}}(x)`, `i <= n-1`, and the rank of their span.
pub fn a_tangent_span(x: &CMatrix, tol: f64) -> TangentSpan {
    let n = x.dim();
    let fields: Vec<CMatrix> = gz_indices(n.saturating_sub(1))
        .into_iter()
        .map(|(i, j)| gz_field(x, i, j).expect("valid index"))
        .collect();
    let rank = if fields.is_empty() { 0 } else { normalized_rank(&fields, tol).expect("uniform dims") };
    TangentSpan { fields, rank }
}

/// Kirillov-Kostant-Souriau pairings of the Gelfand-Zeitlin fields at `x`,
/// and whether their span is half-dimensional in the adjoint orbit.
pub fn kks_isotropy_check(x: &CMatrix, tol: f64) -> Result<IsotropyReport> {
    let cert = is_strongly_regular(x, tol);
    if !cert.is_sreg {
        return Err(GzError::NotStronglyRegular(format!("{cert:?}")));
    }
    let n = x.dim();
    let idx = gz_indices(n.saturating_sub(1));
    let grads: Vec<CMatrix> = idx.iter().map(|&(i, j)| gz_gradient(x, i, j)).collect::<Result<_>>()?;
    let xn = x.frobenius_norm();
    let mut max_pairing: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for a in 0..grads.len() {
        for b in 0..grads.len() {
            let w = (x * &grads[a].commutator(&grads[b])).trace().norm();
            max_pairing = max_pairing.max(w);
            let scale = xn * grads[a].frobenius_norm() * grads[b].frobenius_norm();
            if scale > 0.0 {
                max_rel = max_rel.max(w / scale);
            }
        }
    }
    let span = a_tangent_span(x, tol);
    let orbit_dim = n * n - centralizer_basis_tol(x, tol).len();
    Ok(IsotropyReport {
        max_pairing,
        max_relative_pairing: max_rel,
        span_rank: span.rank,
        orbit_dim,
        is_lagrangian: 2 * span.rank == orbit_dim,
    })
}

/// Rank of `{d f_{i,j}(x)}` over all `1 <= j <= i <= n`.
pub fn phi_jacobian_rank(x: &CMatrix, tol: f64) -> usize {
    let grads: Vec<CMatrix> = gz_indices(x.dim())
        .into_iter()
        .map(|(i, j)| gz_gradient(x, i, j).expect("valid index"))
        .collect();
    normalized_rank(&grads, tol).expect("uniform dims")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, real};

    fn m2() -> CMatrix {
        CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap()
    }

    #[test]
    fn cutoff_examples() {
        let x = CMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(cutoff(&x, 1).unwrap(), CMatrix::from_real_rows(&[[1.0]]).unwrap());
        assert_eq!(cutoff(&x, 2).unwrap(), x);
        let y = CMatrix::from_real_rows(&[[1.0, 2.0, 0.0], [3.0, 4.0, 0.0], [0.0, 0.0, 9.0]]).unwrap();
        assert_eq!(cutoff(&y, 2).unwrap(), x);
        assert!(matches!(cutoff(&x, 3), Err(GzError::IndexOutOfRange(_))));
        assert!(cutoff(&x, 0).is_err());
    }

    #[test]
    fn function_examples() {
        assert_eq!(gz_function(&CMatrix::identity(3), 2, 1).unwrap(), real(2.0));
        assert_eq!(gz_function(&m2(), 2, 2).unwrap(), real(5.0));
        let e = CMatrix::subdiagonal_ones(3);
        for (i, j) in gz_indices(3) {
            assert_eq!(gz_function(&e, i, j).unwrap(), real(0.0));
        }
        assert!(gz_function(&m2(), 1, 2).is_err());
    }

    #[test]
    fn kw_map_examples() {
        let c = kw_map(&m2());
        assert_eq!(c.level(1), &[real(-1.0)]);
        assert!(c.max_abs_diff(&GzValue::new(vec![vec![real(-1.0)], vec![real(2.0), real(-3.0)]]).unwrap()) < 1e-14);
        let z = kw_map(&CMatrix::zeros(2));
        assert_eq!(z.levels(), &[vec![real(0.0)], vec![real(0.0), real(0.0)]]);
        let lower = CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 2.0]]).unwrap();
        assert!(kw_map(&lower).max_abs_diff(&c) < 1e-14);
    }

    #[test]
    fn field_examples() {
        let f = gz_field(&m2(), 1, 1).unwrap();
        assert_eq!(f, CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap());
        let d = CMatrix::real_diag(&[1.0, 2.0, 3.0]);
        for (i, j) in gz_indices(3) {
            assert!(gz_field(&d, i, j).unwrap().frobenius_norm() < 1e-14);
        }
        let x = CMatrix::from_real_rows(&[[1.0, 2.0, 0.5], [-1.0, 0.3, 2.0], [0.7, 1.0, -1.0]]).unwrap();
        for j in 1..=3 {
            assert!(gz_field(&x, 3, j).unwrap().frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn flow_closed_form() {
        let t = c64(0.3, -0.2);
        let y = gz_flow(&m2(), 1, 1, t).unwrap();
        let want = CMatrix::from_rows(&[vec![real(1.0), t.exp()], vec![real(0.0), real(2.0)]]).unwrap();
        assert!(y.distance(&want) < 1e-14);
        assert!(gz_flow(&m2(), 1, 1, real(0.0)).unwrap().distance(&m2()) < 1e-15);
    }

    #[test]
    fn bracket_antisymmetry() {
        let x = CMatrix::from_real_rows(&[[1.0, 2.0, 0.5], [-1.0, 0.3, 2.0], [0.7, 1.0, -1.0]]).unwrap();
        for a in gz_indices(3) {
            assert_eq!(lie_poisson_bracket(a, a, &x).unwrap(), real(0.0));
        }
        assert!(lie_poisson_bracket((1, 1), (2, 2), &x).unwrap().norm() < 1e-12);
    }

    #[test]
    fn sreg_examples() {
        assert!(is_strongly_regular(&m2(), 1e-8).is_sreg);
        let cert = is_strongly_regular(&CMatrix::real_diag(&[1.0, 2.0]), 1e-8);
        assert!(!cert.is_sreg);
        assert_eq!(cert.per_level_regular, vec![true, true]);
        assert_eq!(cert.intersection_ranks, vec![1]);
        let mut h = CMatrix::subdiagonal_ones(4);
        h = &h + &CMatrix::from_real_rows(&[
            [1.0, 2.0, -1.0, 0.5],
            [0.0, 3.0, 1.0, 1.0],
            [0.0, 0.0, -2.0, 4.0],
            [0.0, 0.0, 0.0, 0.5],
        ])
        .unwrap();
        assert!(is_strongly_regular(&h, 1e-8).is_sreg);
    }

    #[test]
    fn ranks_at_degenerate_points() {
        assert_eq!(phi_jacobian_rank(&CMatrix::zeros(4), 1e-8), 4);
        assert_eq!(phi_jacobian_rank(&CMatrix::identity(3).scale_real(2.5), 1e-8), 3);
        assert_eq!(a_tangent_span(&CMatrix::real_diag(&[1.0, 2.0, 3.0]), 1e-8).rank, 0);
        assert!(kks_isotropy_check(&CMatrix::real_diag(&[1.0, 2.0, 3.0]), 1e-8).is_err());
    }
}
