//! Numerical ranks, nullspaces and centralizers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{GzError, Result};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Stacks equally sized vectors as the columns of a matrix.
pub fn column_matrix(vectors: &[Vec<Complex64>]) -> Result<DMatrix<Complex64>> {
    let Some(first) = vectors.first() else {
        return Err(GzError::DimensionMismatch("empty vector list".into()));
    };
    let len = first.len();
    if let Some(k) = vectors.iter().position(|v| v.len() != len) {
        return Err(GzError::DimensionMismatch(format!(
            "vector {k} has length {}, expected {len}",
            vectors[k].len()
        )));
    }
    Ok(DMatrix::from_fn(len, vectors.len(), |r, c| vectors[c][r]))
}

/// Number of singular values above `tol * sigma_max`; zero when
/// `sigma_max <= tol`.
pub fn numerical_rank_vectors(vectors: &[Vec<Complex64>], tol: f64) -> Result<usize> {
    let m = column_matrix(vectors)?;
    let sv = singular_values(&m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax <= tol {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

/// [`numerical_rank_vectors`] for matrices, flattened row-major.
pub fn numerical_rank(matrices: &[CMatrix], tol: f64) -> Result<usize> {
    if let Some(first) = matrices.first() {
        if let Some(k) = matrices.iter().position(|m| m.dim() != first.dim()) {
            return Err(GzError::DimensionMismatch(format!(
                "matrix {k} has dimension {}, expected {}",
                matrices[k].dim(),
                first.dim()
            )));
        }
    }
    let flat: Vec<Vec<Complex64>> = matrices.iter().map(CMatrix::flatten).collect();
    numerical_rank_vectors(&flat, tol)
}

/// Rank of a family after normalizing every nonzero member to unit norm.
///
/// Scaling columns does not change the exact rank; it keeps families whose
/// members differ in magnitude by powers of `|x|` well conditioned.
pub fn normalized_rank(matrices: &[CMatrix], tol: f64) -> Result<usize> {
    let scaled: Vec<CMatrix> = matrices
        .iter()
        .map(|m| {
            let nrm = m.frobenius_norm();
            if nrm > 0.0 {
                m.scale_real(1.0 / nrm)
            } else {
                m.clone()
            }
        })
        .collect();
    numerical_rank(&scaled, tol)
}

/// Orthonormal basis of the right nullspace of a square or tall matrix.
///
/// A singular direction is null when its singular value is at most
/// `tol * scale`.
pub fn nullspace(m: &DMatrix<Complex64>, tol: f64, scale: f64) -> Vec<DVector<Complex64>> {
    let cols = m.ncols();
    assert!(m.nrows() >= cols, "nullspace expects a square or tall matrix");
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let threshold = tol * scale;
    (0..cols)
        .filter(|&k| svd.singular_values[k] <= threshold)
        .map(|k| v_t.row(k).transpose().map(|z| z.conj()))
        .collect()
}

/// Matrix of `Y -> mY - Ym` acting on row-major `vec(Y)`.
pub fn commutator_operator(m: &CMatrix) -> DMatrix<Complex64> {
    let n = m.dim();
    let a = m.as_dmatrix();
    let zero = Complex64::new(0.0, 0.0);
    DMatrix::from_fn(n * n, n * n, |row, col| {
        let (r, c) = (row / n, row % n);
        let (i, j) = (col / n, col % n);
        // (m E_ij - E_ij m)_{rc} = m_{ri} [c==j] - [r==i] m_{jc}
        let mut v = zero;
        if c == j {
            v += a[(r, i)];
        }
        if r == i {
            v -= a[(j, c)];
        }
        v
    })
}

fn unflatten(v: &DVector<Complex64>, n: usize) -> CMatrix {
    CMatrix::from_dmatrix(DMatrix::from_fn(n, n, |r, c| v[r * n + c]))
}

/// Frobenius-orthonormal basis of the centralizer of `m`, at the default tolerance.
pub fn centralizer_basis(m: &CMatrix) -> Vec<CMatrix> {
    centralizer_basis_tol(m, DEFAULT_RANK_TOL)
}

/// Centralizer basis with singular values below `tol` times the norm of
/// the traceless part of `m` (at least `1e-6 |m|`) treated as zero.
pub fn centralizer_basis_tol(m: &CMatrix, tol: f64) -> Vec<CMatrix> {
    let n = m.dim();
    let shift = m.trace() / (n as f64);
    let scale = m
        .add_scalar_identity(-shift)
        .frobenius_norm()
        .max(1e-6 * m.frobenius_norm());
    let op = commutator_operator(m);
    nullspace(&op, tol, scale)
        .iter()
        .map(|v| unflatten(v, n))
        .collect()
}

/// Dimension of the intersection of two subspaces given by orthonormal
/// bases, counting principal-angle cosines above `1 - tol`.
pub fn intersection_dimension(u: &[Vec<Complex64>], v: &[Vec<Complex64>], tol: f64) -> Result<usize> {
    if u.is_empty() || v.is_empty() {
        return Ok(0);
    }
    let mu = column_matrix(u)?;
    let mv = column_matrix(v)?;
    if mu.nrows() != mv.nrows() {
        return Err(GzError::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            mu.nrows(),
            mv.nrows()
        )));
    }
    let cross = mu.adjoint() * mv;
    Ok(singular_values(&cross)
        .into_iter()
        .filter(|&c| c > 1.0 - tol)
        .count())
}
