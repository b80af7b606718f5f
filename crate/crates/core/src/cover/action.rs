//! The `Z_D` action on cover points and its inverse problem.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{level_basis, CoverPoint, LevelBasis};
use crate::error::{GzError, Result};
use crate::linalg::{exp_nilpotent, nullspace, CMatrix};
use crate::Tolerances;

/// Parameters of one level factor `Z_{D_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZdLevel {
    /// Nonzero scalars, one per block.
    pub s: Vec<Complex64>,
    /// Unipotent coordinates, one per `(block, power)` with
    /// `1 <= power < block size`, block-major.
    pub t: Vec<Complex64>,
}

/// An element of `Z_D`, levels `1..n-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZdElement {
    pub levels: Vec<ZdLevel>,
}

impl ZdElement {
    /// The identity for blocks of sizes `mults[i]` at levels `1..n-1`.
    pub fn identity(mults: &[Vec<usize>]) -> Self {
        let levels = mults
            .iter()
            .map(|m| ZdLevel {
                s: vec![Complex64::new(1.0, 0.0); m.len()],
                t: vec![Complex64::new(0.0, 0.0); m.iter().map(|&l| l - 1).sum()],
            })
            .collect();
        ZdElement { levels }
    }

    /// Identity element acting on points of the same stratum as `p`.
    pub fn identity_for(p: &CoverPoint) -> Self {
        Self::identity(&p.multiplicities()[..p.n() - 1])
    }

    /// Group law: scalars multiply and unipotent coordinates add.
    pub fn compose(&self, other: &ZdElement) -> Result<ZdElement> {
        if !self.same_shape(other) {
            return Err(GzError::InvalidGroupElement("elements have different shapes".into()));
        }
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| ZdLevel {
                s: a.s.iter().zip(&b.s).map(|(x, y)| x * y).collect(),
                t: a.t.iter().zip(&b.t).map(|(x, y)| x + y).collect(),
            })
            .collect();
        Ok(ZdElement { levels })
    }

    pub fn inverse(&self) -> Result<ZdElement> {
        let mut levels = Vec::with_capacity(self.levels.len());
        for (i, l) in self.levels.iter().enumerate() {
            if let Some(j) = l.s.iter().position(|s| *s == Complex64::new(0.0, 0.0)) {
                return Err(GzError::SingularSemisimplePart { level: i + 1, block: j + 1 });
            }
            levels.push(ZdLevel {
                s: l.s.iter().map(|s| s.inv()).collect(),
                t: l.t.iter().map(|t| -t).collect(),
            });
        }
        Ok(ZdElement { levels })
    }

    fn same_shape(&self, other: &ZdElement) -> bool {
        self.levels.len() == other.levels.len()
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.s.len() == b.s.len() && a.t.len() == b.t.len())
    }

    /// Largest coordinate difference; infinity for different shapes.
    pub fn max_abs_diff(&self, other: &ZdElement) -> f64 {
        if !self.same_shape(other) {
            return f64::INFINITY;
        }
        self.levels
            .iter()
            .zip(&other.levels)
            .flat_map(|(a, b)| {
                a.s.iter().zip(&b.s).chain(a.t.iter().zip(&b.t)).map(|(x, y)| (x - y).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Checks the shape against the blocks of `p` and that no scalar vanishes.
    pub fn validate_for(&self, p: &CoverPoint) -> Result<()> {
        let n = p.n();
        if self.levels.len() + 1 != n {
            return Err(GzError::InvalidGroupElement(format!(
                "{} levels for dimension {n}",
                self.levels.len()
            )));
        }
        for (i, (l, m)) in self.levels.iter().zip(p.multiplicities()).enumerate() {
            let unip: usize = m.iter().map(|&b| b - 1).sum();
            if l.s.len() != m.len() || l.t.len() != unip {
                return Err(GzError::InvalidGroupElement(format!(
                    "level {}: expected {} scalars and {unip} unipotent coordinates, got {} and {}",
                    i + 1,
                    m.len(),
                    l.s.len(),
                    l.t.len()
                )));
            }
            if let Some(j) = l.s.iter().position(|s| *s == Complex64::new(0.0, 0.0)) {
                return Err(GzError::SingularSemisimplePart { level: i + 1, block: j + 1 });
            }
        }
        Ok(())
    }
}

/// `h_i = (sum_j s_j P_j) exp(sum t N)` as an `i x i` matrix, and its inverse.
fn level_element(basis: &LevelBasis, level: &ZdLevel) -> (CMatrix, CMatrix) {
    let i = basis.nilpotent.dim();
    let mut semi = CMatrix::zeros(i);
    let mut semi_inv = CMatrix::zeros(i);
    for (p, s) in basis.projectors.iter().zip(&level.s) {
        semi = &semi + &p.scale(*s);
        semi_inv = &semi_inv + &p.scale(s.inv());
    }
    let mut log_u = CMatrix::zeros(i);
    for (nil, t) in basis.nilpotent_powers().iter().zip(&level.t) {
        log_u = &log_u + &nil.scale(*t);
    }
    let u = exp_nilpotent(&log_u);
    let u_inv = exp_nilpotent(&log_u.scale_real(-1.0));
    (&semi * &u, &u_inv * &semi_inv)
}

/// `x' = Ad(h_1 h_2 ... h_{n-1}) x` with every `h_i` built from the
/// generators of the original `x`; `z` is unchanged.
///
/// Applied innermost first: `h_{n-1}` centralizes `x_{n-1}`, and each later
/// `h_i` still centralizes the current `x_i`, which no earlier factor moved.
pub fn zd_act(k: &ZdElement, p: &CoverPoint) -> Result<CoverPoint> {
    k.validate_for(p)?;
    let factors = k
        .levels
        .iter()
        .enumerate()
        .map(|(idx, level)| Ok(level_element(&level_basis(p, idx + 1)?, level)))
        .collect::<Result<Vec<_>>>()?;
    let mut x = p.x().clone();
    for (h, h_inv) in factors.iter().rev() {
        x = x.conjugate_corner(h, h_inv);
    }
    Ok(p.with_x(x))
}

/// Singular-value threshold for the transporter nullspace, relative to the
/// largest singular value.
const NULL_TOL: f64 = 1e-8;
/// Smallest admissible singular value of a level factor.
const INVERTIBLE_TOL: f64 = 1e-8;

/// The unique `k` with `zd_act(k, from) = to`, solved one level at a time.
///
/// At level `i` the factor `h_i` is sought in the span of `N_i^m P_{i,j}`
/// (`0 <= m < lambda_j`) together with the unit in the corner `(i+1, i+1)`,
/// subject to the linear condition `h y = x' h` on the `(i+1)`-cutoffs of
/// `from` and of `to` pulled back by the factors already found. Because the
/// two centralizers intersect trivially the solution space is a line;
/// anything else, or a non-invertible solution, means the points lie in
/// different orbits.
pub fn transporter(from: &CoverPoint, to: &CoverPoint, tols: &Tolerances) -> Result<ZdElement> {
    if from.n() != to.n() {
        return Err(GzError::DimensionMismatch(format!(
            "dimensions {} and {}",
            from.n(),
            to.n()
        )));
    }
    if !from.same_fiber(to, tols.cluster) {
        return Err(GzError::FiberMismatch("eigenvalue data differ".into()));
    }
    let n = from.n();
    let mut g = CMatrix::identity(n);
    let mut g_inv = CMatrix::identity(n);
    let mut levels = Vec::with_capacity(n - 1);
    for i in 1..n {
        let basis = level_basis(from, i)?;
        let y = from.x().corner(i + 1)?;
        let target = to.x().conjugate_by(&g_inv, &g).corner(i + 1)?;
        let (level, h) = solve_level(&basis, &y, &target, i)?;
        let h_inv = h.inverse().ok_or(GzError::NoSolution { level: i })?;
        g = &g * &h.pad_identity(n);
        g_inv = &h_inv.pad_identity(n) * &g_inv;
        levels.push(level);
    }
    Ok(ZdElement { levels })
}

fn solve_level(basis: &LevelBasis, y: &CMatrix, target: &CMatrix, i: usize) -> Result<(ZdLevel, CMatrix)> {
    let d = i + 1;
    // unknowns: N^m P_j for each block j and 0 <= m < lambda_j, then the corner unit
    let mut columns: Vec<CMatrix> = Vec::new();
    let mut offsets = Vec::with_capacity(basis.mults.len());
    for (j, &lam) in basis.mults.iter().enumerate() {
        offsets.push(columns.len());
        let mut acc = basis.projectors[j].clone();
        for m in 0..lam {
            if m > 0 {
                acc = &basis.nilpotent * &acc;
            }
            columns.push(acc.pad_zeros(d));
        }
    }
    let mut corner = CMatrix::zeros(d).into_dmatrix();
    corner[(i, i)] = Complex64::new(1.0, 0.0);
    columns.push(CMatrix::new(corner).expect("finite"));

    let images: Vec<Vec<Complex64>> = columns
        .iter()
        .map(|b| (&(b * y) - &(target * b)).flatten())
        .collect();
    let scales: Vec<f64> = columns.iter().map(|b| b.frobenius_norm().max(f64::MIN_POSITIVE)).collect();
    let system = DMatrix::from_fn(d * d, columns.len(), |r, c| images[c][r] / scales[c]);
    let smax = system.clone().svd(false, false).singular_values.max();
    let null = nullspace(&system, NULL_TOL, smax.max(f64::MIN_POSITIVE));
    if null.len() != 1 {
        return Err(GzError::NoSolution { level: i });
    }
    let coef: Vec<Complex64> = null[0].iter().zip(&scales).map(|(v, s)| v / s).collect();
    let c = coef[coef.len() - 1];
    if c.norm() <= INVERTIBLE_TOL * coef.iter().map(|v| v.norm()).fold(0.0, f64::max) {
        return Err(GzError::NoSolution { level: i });
    }
    let coef: Vec<Complex64> = coef.iter().map(|v| v / c).collect();

    let mut block = CMatrix::zeros(i);
    for (col, a) in columns.iter().zip(&coef).take(coef.len() - 1) {
        block = &block + &col.corner(i)?.scale(*a);
    }
    let smin = block.as_dmatrix().clone().svd(false, false).singular_values.min();
    if smin <= INVERTIBLE_TOL {
        return Err(GzError::NoSolution { level: i });
    }

    let mut s = Vec::with_capacity(basis.mults.len());
    let mut t = Vec::new();
    for (j, &lam) in basis.mults.iter().enumerate() {
        let a = &coef[offsets[j]..offsets[j] + lam];
        s.push(a[0]);
        let ratios: Vec<Complex64> = a.iter().map(|v| v / a[0]).collect();
        t.extend_from_slice(&log_unipotent(&ratios)[1..]);
    }
    Ok((ZdLevel { s, t }, block.pad_identity(d)))
}

/// Coefficients of `log(u(v))` truncated at degree `len - 1`, for a
/// polynomial `u` with `u(0) = 1`, coefficients listed from degree 0.
fn log_unipotent(u: &[Complex64]) -> Vec<Complex64> {
    let len = u.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut w = u.to_vec();
    w[0] = zero;
    let mut out = vec![zero; len];
    let mut power = w.clone();
    for k in 1..len {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p * (sign / k as f64);
        }
        let mut next = vec![zero; len];
        for a in 0..len {
            for b in 0..len - a {
                next[a + b] += power[a] * w[b];
            }
        }
        power = next;
    }
    out
}
