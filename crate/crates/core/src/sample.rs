//! Seeded random sampling of matrices, fibers and group elements.
//!
//! All randomness flows through a `ChaCha8Rng`, so a seed fixes every
//! output bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{zd_act, CoverPoint, ZdElement, ZdLevel};
use crate::decomp::{Partition, RegularDecompositionData};
use crate::error::{GzError, Result};
use crate::gz::{gz_flow, is_strongly_regular, GzValue};
use crate::hessenberg::phi_inverse;
use crate::linalg::{min_separation, monic_from_roots, CMatrix};
use crate::Tolerances;

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const MAX_ATTEMPTS: usize = 32;
/// Smallest distance between distinct sampled eigenvalues.
const SEPARATION: f64 = 0.3;

/// Uniform in the square `[-r, r] + i[-r, r]`.
pub fn random_complex(rng: &mut SampleRng, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..=r), rng.random_range(-r..=r))
}

/// Uniform in the closed disk of radius `r`.
pub fn random_in_disk(rng: &mut SampleRng, r: f64) -> Complex64 {
    loop {
        let z = random_complex(rng, r);
        if z.norm() <= r {
            return z;
        }
    }
}

/// Matrix with independent entries uniform in `[-1, 1] + i[-1, 1]`.
pub fn random_matrix(n: usize, rng: &mut SampleRng) -> CMatrix {
    let rows: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| random_complex(rng, 1.0)).collect())
        .collect();
    CMatrix::from_rows(&rows).expect("finite entries")
}

/// Value of the Kostant-Wallach map with coefficients uniform in the unit square.
pub fn random_gz_value(n: usize, rng: &mut SampleRng) -> GzValue {
    let levels = (1..=n).map(|i| (0..i).map(|_| random_complex(rng, 1.0)).collect()).collect();
    GzValue::new(levels).expect("well-formed levels")
}

/// A regular decomposition datum chosen uniformly among those with `n` levels.
pub fn random_stratum(n: usize, rng: &mut SampleRng) -> RegularDecompositionData {
    let levels: Vec<Partition> = (1..=n)
        .map(|i| {
            let all = Partition::all(i);
            all[rng.random_range(0..all.len())].clone()
        })
        .collect();
    RegularDecompositionData::new(levels).expect("partitions of the right totals")
}

/// Which eigenvalues consecutive levels should share.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiberShape {
    /// `shared[i-1]`: number of eigenvalues of level `i` reused at level `i+1`.
    /// Missing entries mean zero.
    pub shared: Vec<usize>,
}

impl FiberShape {
    pub fn generic() -> Self {
        FiberShape::default()
    }

    fn at(&self, i: usize) -> usize {
        self.shared.get(i - 1).copied().unwrap_or(0)
    }
}

/// Distinct eigenvalues per level, in block order of `d`.
///
/// Values lie in the unit disk, pairwise at least `0.3` apart within a level
/// and from the previous level except for the requested shared values,
/// which are taken from the first blocks of the previous level.
pub fn random_eigenvalue_data(
    d: &RegularDecompositionData,
    shape: &FiberShape,
    rng: &mut SampleRng,
) -> Result<Vec<Vec<Complex64>>> {
    let mut z: Vec<Vec<Complex64>> = Vec::with_capacity(d.n());
    for i in 1..=d.n() {
        let r = d.level(i).len();
        let share = if i > 1 { shape.at(i - 1) } else { 0 };
        let prev: &[Complex64] = if i > 1 { &z[i - 2] } else { &[] };
        if share > r || share > prev.len() {
            return Err(GzError::InvalidDecompositionData(format!(
                "cannot share {share} eigenvalues between levels {} and {i}",
                i - 1
            )));
        }
        let mut level: Vec<Complex64> = prev[..share].to_vec();
        let mut tries = 0;
        while level.len() < r {
            tries += 1;
            if tries > 10_000 {
                return Err(GzError::SamplingFailure { attempts: tries });
            }
            let v = random_in_disk(rng, 1.0);
            if level.iter().chain(prev).all(|u| (u - v).norm() >= SEPARATION) {
                level.push(v);
            }
        }
        // shared values need not sit in the first blocks
        for a in (1..level.len()).rev() {
            let b = rng.random_range(0..=a);
            level.swap(a, b);
        }
        z.push(level);
    }
    debug_assert!(z.iter().all(|l| min_separation(l) >= SEPARATION));
    Ok(z)
}

/// Characteristic-polynomial data of the canonical representatives.
pub fn gz_value_for(d: &RegularDecompositionData, z: &[Vec<Complex64>]) -> Result<GzValue> {
    let levels = (1..=d.n())
        .map(|i| monic_from_roots(&z[i - 1], d.level(i).parts()))
        .collect();
    GzValue::new(levels)
}

/// Random group element with `|log s| <= bound` and `|t| <= bound` coordinatewise.
pub fn random_zd_element(mults: &[Vec<usize>], bound: f64, rng: &mut SampleRng) -> ZdElement {
    let levels = mults
        .iter()
        .map(|m| ZdLevel {
            s: m.iter().map(|_| random_complex(rng, bound).exp()).collect(),
            t: (0..m.iter().map(|&l| l - 1).sum::<usize>()).map(|_| random_complex(rng, bound)).collect(),
        })
        .collect();
    ZdElement { levels }
}

/// Like [`random_zd_element`] but at least `min_step` away from the identity
/// in some logarithmic coordinate.
pub fn random_nontrivial_zd_element(
    mults: &[Vec<usize>],
    bound: f64,
    min_step: f64,
    rng: &mut SampleRng,
) -> ZdElement {
    loop {
        let k = random_zd_element(mults, bound, rng);
        let size = k
            .levels
            .iter()
            .flat_map(|l| l.s.iter().map(|s| s.ln().norm()).chain(l.t.iter().map(|t| t.norm())))
            .fold(0.0, f64::max);
        if size >= min_step {
            return k;
        }
    }
}

/// Decorrelation strength: group coordinates and flow times up to this size.
const MIX: f64 = 0.2;

/// A strongly regular cover point in the tower of `d`, with eigenvalue
/// sharing between levels as in `shape`.
///
/// Starts from the Hessenberg section over random eigenvalue data, moves by
/// a random bounded group element and a short Gelfand-Zeitlin flow, and
/// certifies strong regularity.
pub fn sample_cover_point(
    d: &RegularDecompositionData,
    shape: &FiberShape,
    tols: &Tolerances,
    rng: &mut SampleRng,
) -> Result<CoverPoint> {
    let n = d.n();
    let mults: Vec<Vec<usize>> = d.strata().iter().map(|p| p.parts().to_vec()).collect();
    for _ in 0..MAX_ATTEMPTS {
        let z = random_eigenvalue_data(d, shape, rng)?;
        let x0 = phi_inverse(&gz_value_for(d, &z)?).into_cmatrix();
        let base = CoverPoint::from_parts(x0, z, mults.clone());
        let mut point = base;
        if n > 1 {
            let k = random_zd_element(&mults[..n - 1], MIX, rng);
            point = zd_act(&k, &point)?;
            let i = rng.random_range(1..n);
            let j = rng.random_range(1..=i);
            let x = gz_flow(point.x(), i, j, random_complex(rng, MIX))?;
            point = point.with_x(x);
        }
        if is_strongly_regular(point.x(), tols.rank).is_sreg {
            return Ok(point);
        }
    }
    Err(GzError::SamplingFailure { attempts: MAX_ATTEMPTS })
}

/// A certified strongly regular matrix, in the tower of `d` when given and
/// regular semisimple at every level otherwise.
pub fn sample_strongly_regular(
    n: usize,
    d: Option<&RegularDecompositionData>,
    seed: u64,
    tols: &Tolerances,
) -> Result<CMatrix> {
    let mut rng = rng_from_seed(seed);
    let d = match d {
        Some(d) if d.n() != n => {
            return Err(GzError::DimensionMismatch(format!("stratum has {} levels, n = {n}", d.n())))
        }
        Some(d) => d.clone(),
        None => RegularDecompositionData::regular_semisimple(n),
    };
    Ok(sample_cover_point(&d, &FiberShape::generic(), tols, &mut rng)?.x().clone())
}
