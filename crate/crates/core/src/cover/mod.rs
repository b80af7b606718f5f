//! Points of the cover over a tower, in `(x, z)` coordinates.
//!
//! A [`CoverPoint`] pairs a strongly regular `x` with, for every level `i`,
//! the distinct eigenvalues `z_i` of the cutoff `x_i` listed in block order:
//! multiplicities are weakly decreasing along `z_i`, and the order among
//! blocks of equal size selects the sheet. The deck group permutes equal-size
//! blocks.
//!
//! Level generators are computed without choosing a conjugator: `P_{i,j}` is
//! the spectral projector of `x_i` onto the generalized eigenspace of
//! `z_{i,j}`, and `N_{i,(j,m)} = N_i^m P_{i,j}` with `N_i` the nilpotent part
//! of `x_i`. Everything downstream (the functions `q` and `p`, their flows,
//! the `Z_D` action and its transporter) is built from these.

mod action;

pub use action::{transporter, zd_act, ZdElement, ZdLevel};

use num_complex::Complex64;
use serde::Serialize;

use crate::decomp::{in_tower, Partition, RegularDecompositionData};
use crate::error::{GzError, Result};
use crate::gz::{gz_field, gz_indices, is_strongly_regular};
use crate::linalg::{
    exp_nilpotent, multiplicities_for_values, normalized_rank, spectral_projector,
    spectrum_with_partition, ClusteredSpectrum, CMatrix,
};
use crate::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverPoint {
    x: CMatrix,
    z: Vec<Vec<Complex64>>,
    mults: Vec<Vec<usize>>,
}

impl CoverPoint {
    /// Validates `x` (strongly regular) and `z` (each `z_i` the distinct
    /// eigenvalues of `x_i` in block order).
    pub fn new(x: CMatrix, z: Vec<Vec<Complex64>>, tols: &Tolerances) -> Result<Self> {
        let n = x.dim();
        if z.len() != n {
            return Err(GzError::InvalidCoverPoint(format!(
                "{} eigenvalue tuples for dimension {n}",
                z.len()
            )));
        }
        let mut mults = Vec::with_capacity(n);
        for (k, zi) in z.iter().enumerate() {
            for a in 0..zi.len() {
                for b in a + 1..zi.len() {
                    if (zi[a] - zi[b]).norm() <= tols.cluster {
                        return Err(GzError::DuplicateWithinLevel { level: k + 1 });
                    }
                }
            }
            let m = multiplicities_for_values(&x.corner(k + 1)?, zi, tols.cluster).map_err(|e| {
                GzError::InvalidCoverPoint(format!("level {}: {e}", k + 1))
            })?;
            if m.windows(2).any(|w| w[0] < w[1]) {
                return Err(GzError::InvalidCoverPoint(format!(
                    "level {}: multiplicities {m:?} are not in block order",
                    k + 1
                )));
            }
            mults.push(m);
        }
        let cert = is_strongly_regular(&x, tols.rank);
        if !cert.is_sreg {
            return Err(GzError::NotStronglyRegular(format!("{cert:?}")));
        }
        Ok(CoverPoint { x, z, mults })
    }

    pub(crate) fn from_parts(x: CMatrix, z: Vec<Vec<Complex64>>, mults: Vec<Vec<usize>>) -> Self {
        CoverPoint { x, z, mults }
    }

    pub(crate) fn with_x(&self, x: CMatrix) -> Self {
        CoverPoint { x, z: self.z.clone(), mults: self.mults.clone() }
    }

    pub fn n(&self) -> usize {
        self.x.dim()
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn z(&self) -> &[Vec<Complex64>] {
        &self.z
    }

    /// Block sizes at every level, in the order of `z`.
    pub fn multiplicities(&self) -> &[Vec<usize>] {
        &self.mults
    }

    pub fn stratum(&self) -> RegularDecompositionData {
        let strata = self
            .mults
            .iter()
            .map(|m| Partition::new(m.clone()).expect("block order is descending"))
            .collect();
        RegularDecompositionData::new(strata).expect("levels have the right totals")
    }

    /// Same eigenvalue data up to `tol`.
    pub fn same_fiber(&self, other: &CoverPoint, tol: f64) -> bool {
        self.n() == other.n()
            && self.mults == other.mults
            && self.z.iter().flatten().zip(other.z.iter().flatten()).all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// The projection to the matrix.
pub fn mu(p: &CoverPoint) -> &CMatrix {
    p.x()
}

/// The projection to the eigenvalue data.
pub fn kappa(p: &CoverPoint) -> &[Vec<Complex64>] {
    p.z()
}

/// Every cover point over `x` in the tower of `D`: one per way of ordering
/// equal-size blocks at each level.
///
/// The base ordering lists blocks by decreasing size, ties broken by real
/// and then imaginary part; points are returned in lexicographic order of
/// the permutations applied to it.
pub fn lift(x: &CMatrix, d: &RegularDecompositionData, tols: &Tolerances) -> Result<Vec<CoverPoint>> {
    if !in_tower(x, d, tols)? {
        return Err(GzError::NotInTower(format!("stratum {d}")));
    }
    let mut levels: Vec<Vec<(Vec<Complex64>, Vec<usize>)>> = Vec::with_capacity(d.n());
    for i in 1..=d.n() {
        let spectrum = spectrum_with_partition(&x.corner(i)?, d.level(i).parts(), tols.cluster)?;
        let mut blocks: Vec<(usize, Complex64)> =
            spectrum.multiplicities.iter().copied().zip(spectrum.values.iter().copied()).collect();
        blocks.sort_by(|a, b| {
            b.0.cmp(&a.0)
                .then(a.1.re.total_cmp(&b.1.re))
                .then(a.1.im.total_cmp(&b.1.im))
        });
        let mults: Vec<usize> = blocks.iter().map(|b| b.0).collect();
        let values: Vec<Complex64> = blocks.iter().map(|b| b.1).collect();
        let orders = block_permutations(&mults)
            .into_iter()
            .map(|perm| (perm.iter().map(|&k| values[k]).collect(), mults.clone()))
            .collect();
        levels.push(orders);
    }
    let mut points = vec![(Vec::new(), Vec::new())];
    for level in &levels {
        points = points
            .into_iter()
            .flat_map(|(z, m): (Vec<Vec<Complex64>>, Vec<Vec<usize>>)| {
                level.iter().map(move |(zi, mi)| {
                    let mut z = z.clone();
                    let mut m = m.clone();
                    z.push(zi.clone());
                    m.push(mi.clone());
                    (z, m)
                })
            })
            .collect();
    }
    Ok(points
        .into_iter()
        .map(|(z, m)| CoverPoint::from_parts(x.clone(), z, m))
        .collect())
}

/// Permutations of `0..mults.len()` that only exchange equal sizes,
/// in lexicographic order.
fn block_permutations(mults: &[usize]) -> Vec<Vec<usize>> {
    fn rec(mults: &[usize], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == mults.len() {
            out.push(cur.clone());
            return;
        }
        for src in 0..mults.len() {
            if !used[src] && mults[src] == mults[k] {
                used[src] = true;
                cur.push(src);
                rec(mults, cur, used, out);
                cur.pop();
                used[src] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(mults, &mut Vec::new(), &mut vec![false; mults.len()], &mut out);
    out
}

/// Deck transformation: `z_i[k]` becomes `z_i[sigma[i][k]]` at every level.
pub fn deck(sigma: &[Vec<usize>], p: &CoverPoint) -> Result<CoverPoint> {
    if sigma.len() != p.n() {
        return Err(GzError::DimensionMismatch(format!(
            "{} permutations for {} levels",
            sigma.len(),
            p.n()
        )));
    }
    let mut z = Vec::with_capacity(p.n());
    for (k, (perm, (zi, mi))) in sigma.iter().zip(p.z.iter().zip(&p.mults)).enumerate() {
        let mut seen = vec![false; zi.len()];
        if perm.len() != zi.len() || perm.iter().any(|&s| s >= zi.len() || std::mem::replace(&mut seen[s], true)) {
            return Err(GzError::IllegalPermutation(format!(
                "level {}: {perm:?} is not a permutation of {} blocks",
                k + 1,
                zi.len()
            )));
        }
        if let Some(pos) = (0..perm.len()).find(|&a| mi[perm[a]] != mi[a]) {
            return Err(GzError::IllegalPermutation(format!(
                "level {}: block {} of size {} moved to a block of size {}",
                k + 1,
                perm[pos] + 1,
                mi[perm[pos]],
                mi[pos]
            )));
        }
        z.push(perm.iter().map(|&s| zi[s]).collect());
    }
    Ok(CoverPoint::from_parts(p.x.clone(), z, p.mults.clone()))
}

/// Generators of the level-`i` centralizer directions, padded to `n x n`.
#[derive(Clone, Debug)]
pub struct LevelGenerators {
    /// `P_{i,j}`, one per block.
    pub projectors: Vec<CMatrix>,
    /// `N_{i,(j,m)}` for `1 <= m < lambda_j`, block-major.
    pub nilpotents: Vec<CMatrix>,
}

/// Unpadded level data: projectors and nilpotent part of `x_i`.
#[derive(Clone, Debug)]
pub(crate) struct LevelBasis {
    pub mults: Vec<usize>,
    pub projectors: Vec<CMatrix>,
    pub nilpotent: CMatrix,
}

impl LevelBasis {
    /// `N^m P_j` for every block and `1 <= m < lambda_j`, block-major.
    pub fn nilpotent_powers(&self) -> Vec<CMatrix> {
        let mut out = Vec::new();
        for (j, &lam) in self.mults.iter().enumerate() {
            let mut acc = self.projectors[j].clone();
            for _ in 1..lam {
                acc = &self.nilpotent * &acc;
                out.push(acc.clone());
            }
        }
        out
    }
}

fn check_level(p: &CoverPoint, i: usize) -> Result<()> {
    if i == 0 || i >= p.n() {
        return Err(GzError::IndexOutOfRange(format!("level {i} outside 1..{}", p.n())));
    }
    Ok(())
}

pub(crate) fn level_basis(p: &CoverPoint, i: usize) -> Result<LevelBasis> {
    let x_i = p.x.corner(i)?;
    let spectrum = ClusteredSpectrum::from_parts(p.z[i - 1].clone(), p.mults[i - 1].clone())?;
    let projectors = (0..spectrum.len())
        .map(|j| spectral_projector(&x_i, &spectrum, j))
        .collect::<Result<Vec<_>>>()?;
    let mut semisimple = CMatrix::zeros(i);
    for (pj, &zj) in projectors.iter().zip(&spectrum.values) {
        semisimple = &semisimple + &pj.scale(zj);
    }
    Ok(LevelBasis {
        mults: spectrum.multiplicities,
        projectors,
        nilpotent: &x_i - &semisimple,
    })
}

pub fn level_generators(p: &CoverPoint, i: usize) -> Result<LevelGenerators> {
    check_level(p, i)?;
    let n = p.n();
    let basis = level_basis(p, i)?;
    Ok(LevelGenerators {
        projectors: basis.projectors.iter().map(|m| m.pad_zeros(n)).collect(),
        nilpotents: basis.nilpotent_powers().iter().map(|m| m.pad_zeros(n)).collect(),
    })
}

fn tail_trace(p: &CoverPoint, i: usize, g: &CMatrix) -> Result<Complex64> {
    let n = p.n();
    let mut acc = Complex64::new(0.0, 0.0);
    for s in i + 1..=n {
        acc += (&p.x.corner(s)?.pad_zeros(n) * g).trace();
    }
    Ok(acc)
}

/// `q_{i,j} = sum_{s>i} Tr(x_s P_{i,j}) / lambda_{i,j}` (`j` 1-based).
pub fn q_function(p: &CoverPoint, i: usize, j: usize) -> Result<Complex64> {
    check_level(p, i)?;
    let gens = level_generators(p, i)?;
    if j == 0 || j > gens.projectors.len() {
        return Err(GzError::IndexOutOfRange(format!("block {j} at level {i}")));
    }
    let lam = p.mults[i - 1][j - 1] as f64;
    Ok(tail_trace(p, i, &gens.projectors[j - 1])? / lam)
}

/// `p_{i,k} = sum_{s>i} Tr(x_s N_{i,k})` (`k` 1-based, block-major).
pub fn p_function(p: &CoverPoint, i: usize, k: usize) -> Result<Complex64> {
    check_level(p, i)?;
    let gens = level_generators(p, i)?;
    if k == 0 || k > gens.nilpotents.len() {
        return Err(GzError::IndexOutOfRange(format!("nilpotent direction {k} at level {i}")));
    }
    tail_trace(p, i, &gens.nilpotents[k - 1])
}

/// Conjugates `x` by `exp(-t P_{i,j} / lambda_{i,j})`.
pub fn q_flow(p: &CoverPoint, i: usize, j: usize, t: Complex64) -> Result<CoverPoint> {
    check_level(p, i)?;
    let gens = level_generators(p, i)?;
    if j == 0 || j > gens.projectors.len() {
        return Err(GzError::IndexOutOfRange(format!("block {j} at level {i}")));
    }
    let lam = p.mults[i - 1][j - 1] as f64;
    let proj = &level_basis(p, i)?.projectors[j - 1];
    let g = &CMatrix::identity(i) + &proj.scale((-t / lam).exp() - 1.0);
    let g_inv = &CMatrix::identity(i) + &proj.scale((t / lam).exp() - 1.0);
    Ok(p.with_x(p.x.conjugate_corner(&g, &g_inv)))
}

/// Conjugates `x` by `exp(-t N_{i,k})`.
pub fn p_flow(p: &CoverPoint, i: usize, k: usize, t: Complex64) -> Result<CoverPoint> {
    check_level(p, i)?;
    let gens = level_generators(p, i)?;
    if k == 0 || k > gens.nilpotents.len() {
        return Err(GzError::IndexOutOfRange(format!("nilpotent direction {k} at level {i}")));
    }
    let nil = &level_basis(p, i)?.nilpotent_powers()[k - 1];
    let g = exp_nilpotent(&nil.scale(-t));
    let g_inv = exp_nilpotent(&nil.scale(t));
    Ok(p.with_x(p.x.conjugate_corner(&g, &g_inv)))
}

/// The generating fields at `p`: `[x, P_{i,j} / lambda]` and `[x, N_{i,k}]`
/// for all levels `i < n`.
pub fn lifted_fields(p: &CoverPoint) -> Result<Vec<CMatrix>> {
    let mut out = Vec::new();
    for i in 1..p.n() {
        let gens = level_generators(p, i)?;
        for (proj, &lam) in gens.projectors.iter().zip(&p.mults[i - 1]) {
            out.push(p.x.commutator(&proj.scale_real(1.0 / lam as f64)));
        }
        for nil in &gens.nilpotents {
            out.push(p.x.commutator(nil));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftSpanReport {
    pub lifted_rank: usize,
    pub base_rank: usize,
    pub union_rank: usize,
    pub passed: bool,
}

/// Compares the span of the lifted fields with the span of the
/// Gelfand-Zeitlin fields.
pub fn lift_span_check(p: &CoverPoint, tol: f64) -> Result<LiftSpanReport> {
    let lifted = lifted_fields(p)?;
    let base = gz_indices(p.n() - 1)
        .into_iter()
        .map(|(i, j)| gz_field(&p.x, i, j))
        .collect::<Result<Vec<_>>>()?;
    let rank = |v: &[CMatrix]| -> Result<usize> {
        if v.is_empty() {
            Ok(0)
        } else {
            normalized_rank(v, tol)
        }
    };
    let lifted_rank = rank(&lifted)?;
    let base_rank = rank(&base)?;
    let union: Vec<CMatrix> = lifted.iter().chain(&base).cloned().collect();
    let union_rank = rank(&union)?;
    Ok(LiftSpanReport {
        lifted_rank,
        base_rank,
        union_rank,
        passed: lifted_rank == base_rank && base_rank == union_rank,
    })
}
