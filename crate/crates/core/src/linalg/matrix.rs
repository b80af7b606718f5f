//! Dense square complex matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GzError, Result};

/// A dense `dim x dim` complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<Complex64>);

impl CMatrix {
    /// Wraps a nalgebra matrix, checking squareness, `dim >= 1` and finiteness.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(GzError::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(GzError::InvalidMatrix("dimension must be at least 1".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GzError::InvalidMatrix("non-finite entry".into()));
        }
        Ok(CMatrix(m))
    }

    /// Internal constructor for results of arithmetic on valid matrices.
    pub(crate) fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        CMatrix(m)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(GzError::InvalidMatrix(format!(
                "row {bad} has length {}, expected {n}",
                rows[bad].len()
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    /// Builds a matrix from real row data; convenient in tests and examples.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| Complex64::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        CMatrix(DMatrix::zeros(n, n))
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        CMatrix(DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                values[r]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// The principal nilpotent `e` with ones on the subdiagonal.
    pub fn subdiagonal_ones(n: usize) -> Self {
        CMatrix(DMatrix::from_fn(n, n, |r, c| {
            if r == c + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.0[(r, c)]).collect())
            .collect()
    }

    /// Upper-left `k x k` corner.
    pub fn corner(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim() {
            return Err(GzError::IndexOutOfRange(format!(
                "corner size {k} outside 1..={}",
                self.dim()
            )));
        }
        Ok(CMatrix(self.0.view((0, 0), (k, k)).into_owned()))
    }

    /// Embeds into the upper-left corner of an `n x n` zero matrix.
    pub fn pad_zeros(&self, n: usize) -> Self {
        assert!(n >= self.dim(), "cannot pad {} into {n}", self.dim());
        let mut out = DMatrix::zeros(n, n);
        out.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.0);
        CMatrix(out)
    }

    /// Embeds into the upper-left corner of an `n x n` identity matrix.
    pub fn pad_identity(&self, n: usize) -> Self {
        assert!(n >= self.dim(), "cannot pad {} into {n}", self.dim());
        let mut out = DMatrix::identity(n, n);
        out.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.0);
        CMatrix(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CMatrix(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add_scalar_identity(&self, c: Complex64) -> Self {
        let mut out = self.0.clone();
        for k in 0..self.dim() {
            out[(k, k)] += c;
        }
        CMatrix(out)
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &CMatrix) -> Self {
        CMatrix(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = DMatrix::identity(self.dim(), self.dim());
        for _ in 0..k {
            out = &out * &self.0;
        }
        CMatrix(out)
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(CMatrix)
    }

    /// `g * self * g^{-1}` for a supplied pair `(g, g_inv)`.
    pub fn conjugate_by(&self, g: &CMatrix, g_inv: &CMatrix) -> Self {
        CMatrix(&g.0 * &self.0 * &g_inv.0)
    }

    /// `Ad(e (+) I) self` for an `i x i` block `e` commuting with the
    /// `i x i` corner of `self`.
    ///
    /// The corner is copied unchanged; only the off-diagonal blocks are
    /// multiplied, so lower cutoffs stay bit-identical.
    pub fn conjugate_corner(&self, e: &CMatrix, e_inv: &CMatrix) -> Self {
        let n = self.dim();
        let i = e.dim();
        assert!(i <= n, "block of size {i} in dimension {n}");
        let mut out = self.0.clone();
        if i < n {
            let top = &e.0 * self.0.view((0, i), (i, n - i));
            let left = self.0.view((i, 0), (n - i, i)) * &e_inv.0;
            out.view_mut((0, i), (i, n - i)).copy_from(&top);
            out.view_mut((i, 0), (n - i, i)).copy_from(&left);
        }
        CMatrix(out)
    }

    /// Row-major flattening, used when stacking matrices into vectors.
    pub fn flatten(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut v = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                v.push(self.0[(r, c)]);
            }
        }
        v
    }

    pub fn distance(&self, other: &CMatrix) -> f64 {
        (self - other).frobenius_norm()
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})[", self.dim(), self.dim())?;
        for r in 0..self.dim() {
            write!(f, "  ")?;
            for c in 0..self.dim() {
                let z = self.0[(r, c)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
