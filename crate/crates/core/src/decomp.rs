//! Regular decomposition classes as partitions, decomposition data `D`,
//! tower membership, the deck group order `|Sigma_D|`, `Z_D` dimensions and
//! the orbit-count formula.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GzError, Result};
use crate::gz::is_strongly_regular;
use crate::linalg::{centralizer_basis_tol, clustered_spectrum, CMatrix};
use crate::Tolerances;

/// A weakly decreasing list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(GzError::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(GzError::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(GzError::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts the multiplicities descending first.
    pub fn from_multiplicities(mut mults: Vec<usize>) -> Result<Self> {
        mults.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(mults)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All partitions of `total`, largest first part first.
    pub fn all(total: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if total > 0 {
            rec(total, total, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Number of orderings of the parts that only permute equal sizes.
    pub fn symmetry_order(&self) -> u64 {
        let mut order = 1u64;
        let mut k = 0;
        while k < self.0.len() {
            let run = self.0[k..].iter().take_while(|&&p| p == self.0[k]).count();
            order *= (1..=run as u64).product::<u64>();
            k += run;
        }
        order
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = GzError;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// One partition per level; level `i` (1-based) partitions `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularDecompositionData {
    strata: Vec<Partition>,
}

impl RegularDecompositionData {
    pub fn new(strata: Vec<Partition>) -> Result<Self> {
        if strata.is_empty() {
            return Err(GzError::InvalidDecompositionData("no levels".into()));
        }
        for (k, p) in strata.iter().enumerate() {
            if p.total() != k + 1 {
                return Err(GzError::InvalidDecompositionData(format!(
                    "level {} partition {p} has total {}",
                    k + 1,
                    p.total()
                )));
            }
        }
        Ok(RegularDecompositionData { strata })
    }

    pub fn from_parts(levels: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(levels.into_iter().map(Partition::new).collect::<Result<_>>()?)
    }

    pub fn n(&self) -> usize {
        self.strata.len()
    }

    pub fn strata(&self) -> &[Partition] {
        &self.strata
    }

    /// Partition at level `i` (1-based).
    pub fn level(&self, i: usize) -> &Partition {
        &self.strata[i - 1]
    }

    /// Every regular decomposition datum with `n` levels.
    pub fn all(n: usize) -> Vec<RegularDecompositionData> {
        let mut out = vec![Vec::new()];
        for i in 1..=n {
            let parts = Partition::all(i);
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Partition>| {
                    parts.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.push(p.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|strata| RegularDecompositionData { strata }).collect()
    }

    /// The regular semisimple datum, all parts equal to one.
    pub fn regular_semisimple(n: usize) -> Self {
        let strata = (1..=n).map(|i| Partition(vec![1; i])).collect();
        RegularDecompositionData { strata }
    }
}

impl fmt::Display for RegularDecompositionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.strata.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("/"))
    }
}

/// Compact notation: levels separated by `/`, parts by `,`, e.g. `1/2/2,1`.
impl FromStr for RegularDecompositionData {
    type Err = GzError;
    fn from_str(s: &str) -> Result<Self> {
        let levels = s
            .split('/')
            .map(|level| {
                level
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<usize>().map_err(|_| {
                            GzError::InvalidDecompositionData(format!("bad part {p:?} in {s:?}"))
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(levels)
    }
}

/// The partition of multiplicities of a regular matrix, clustering eigenvalues at `tol`.
pub fn class_of(x_i: &CMatrix, tol: f64) -> Result<Partition> {
    require_regular(x_i)?;
    Partition::from_multiplicities(clustered_spectrum(x_i, tol)?.multiplicities)
}

fn require_regular(x_i: &CMatrix) -> Result<()> {
    let dim = centralizer_basis_tol(x_i, Tolerances::default().rank).len();
    if dim != x_i.dim() {
        return Err(GzError::NotRegular(format!(
            "centralizer has dimension {dim}, expected {}",
            x_i.dim()
        )));
    }
    Ok(())
}

/// Block-diagonal representative: block `j` is `ev[j] I + J`, `J` the
/// upper Jordan block of size `parts[j]`.
pub fn canonical_rep(lambda: &Partition, eigenvalues: &[Complex64]) -> Result<CMatrix> {
    if eigenvalues.len() != lambda.len() {
        return Err(GzError::DimensionMismatch(format!(
            "{} eigenvalues for {} blocks",
            eigenvalues.len(),
            lambda.len()
        )));
    }
    for a in 0..eigenvalues.len() {
        for b in a + 1..eigenvalues.len() {
            if eigenvalues[a] == eigenvalues[b] {
                return Err(GzError::RepeatedEigenvalue(format!("{}", eigenvalues[a])));
            }
        }
    }
    let n = lambda.total();
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    let mut offset = 0;
    for (&size, &z) in lambda.parts().iter().zip(eigenvalues) {
        for k in 0..size {
            m[(offset + k, offset + k)] = z;
            if k + 1 < size {
                m[(offset + k, offset + k + 1)] = Complex64::new(1.0, 0.0);
            }
        }
        offset += size;
    }
    CMatrix::new(m)
}

/// `|Sigma_D|`: product over levels of the factorials of equal-part counts.
pub fn sigma_order(d: &RegularDecompositionData) -> u64 {
    d.strata().iter().map(Partition::symmetry_order).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZdDimension {
    /// Number of blocks per level, all `n` levels.
    pub r: Vec<usize>,
    /// `s_i = i - r_i`, all `n` levels.
    pub s: Vec<usize>,
    /// `dim Z_D = sum_{i<n} (r_i + s_i)`.
    pub total: usize,
}

pub fn zd_dimension(d: &RegularDecompositionData) -> ZdDimension {
    let r: Vec<usize> = d.strata().iter().map(Partition::len).collect();
    let s: Vec<usize> = r.iter().enumerate().map(|(k, &ri)| k + 1 - ri).collect();
    let total = (0..d.n().saturating_sub(1)).map(|k| r[k] + s[k]).sum();
    ZdDimension { r, s, total }
}

/// Membership in the tower `X_D`: strongly regular, and every cutoff has
/// the multiplicity pattern prescribed by `D`.
pub fn in_tower(x: &CMatrix, d: &RegularDecompositionData, tols: &Tolerances) -> Result<bool> {
    if x.dim() != d.n() {
        return Err(GzError::DimensionMismatch(format!(
            "matrix dimension {} vs {} levels",
            x.dim(),
            d.n()
        )));
    }
    if !is_strongly_regular(x, tols.rank).is_sreg {
        return Ok(false);
    }
    for i in 1..=d.n() {
        let spectrum = clustered_spectrum(&x.corner(i)?, tols.cluster)?;
        if Partition::from_multiplicities(spectrum.multiplicities)? != *d.level(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The stratum of a strongly regular matrix.
pub fn stratum_of(x: &CMatrix, tols: &Tolerances) -> Result<RegularDecompositionData> {
    let cert = is_strongly_regular(x, tols.rank);
    if !cert.is_sreg {
        return Err(GzError::NotStronglyRegular(format!("{cert:?}")));
    }
    let strata = (1..=x.dim())
        .map(|i| class_of(&x.corner(i)?, tols.cluster))
        .collect::<Result<Vec<_>>>()?;
    RegularDecompositionData::new(strata)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCount {
    /// `j_i = |sigma_i ∩ sigma_{i+1}|`, `i = 1..n-1`.
    pub j: Vec<usize>,
    pub orbit_count: u64,
    pub generic: bool,
}

/// Common-eigenvalue counts between consecutive levels and the resulting
/// number `2^{sum j_i}` of orbits in the fiber.
///
/// Values within `tol` are identified.
pub fn generic_counts(z: &[Vec<Complex64>], tol: f64) -> Result<OrbitCount> {
    for (k, level) in z.iter().enumerate() {
        for a in 0..level.len() {
            for b in a + 1..level.len() {
                if (level[a] - level[b]).norm() <= tol {
                    return Err(GzError::DuplicateWithinLevel { level: k + 1 });
                }
            }
        }
    }
    let j: Vec<usize> = z
        .windows(2)
        .map(|w| {
            w[0].iter()
                .filter(|a| w[1].iter().any(|b| (*a - b).norm() <= tol))
                .count()
        })
        .collect();
    let exponent: usize = j.iter().sum();
    Ok(OrbitCount {
        generic: exponent == 0,
        orbit_count: 1u64 << exponent,
        j,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtlasRow {
    pub stratum: String,
    /// `dim z_D = sum_{i<=n} r_i`.
    pub dim_z: usize,
    /// `dim z_D + n^2 - (n+1 choose 2)`.
    pub dim_x: usize,
    pub sigma_order: u64,
    pub dim_zd: usize,
}

pub fn atlas(n: usize) -> Vec<AtlasRow> {
    RegularDecompositionData::all(n)
        .into_iter()
        .map(|d| {
            let zd = zd_dimension(&d);
            let dim_z: usize = zd.r.iter().sum();
            AtlasRow {
                stratum: d.to_string(),
                dim_z,
                dim_x: dim_z + n * n - n * (n + 1) / 2,
                sigma_order: sigma_order(&d),
                dim_zd: zd.total,
            }
        })
        .collect()
}
