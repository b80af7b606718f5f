//! Eigenvalues and multiplicity detection.
//!
//! Eigenvalues come from a complex Schur decomposition of the matrix itself.
//! Multiplicities are decided by agglomerative merging certified against the
//! product of the raw eigenvalues, see [`clustered_spectrum`].
//! [`spectrum_with_partition`] checks a known multiplicity pattern and
//! [`multiplicities_for_values`] assigns eigenvalues to known distinct
//! values, as needed for cover points which carry their eigenvalues.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use super::poly::{coefficient_residual, monic_from_roots};
use crate::error::{GzError, Result};

/// Distinct eigenvalues with algebraic multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusteredSpectrum {
    pub values: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
    pub cluster_tol: f64,
}

impl ClusteredSpectrum {
    /// Builds a spectrum from exact data, checking distinctness.
    pub fn from_parts(values: Vec<Complex64>, multiplicities: Vec<usize>) -> Result<Self> {
        if values.len() != multiplicities.len() {
            return Err(GzError::DimensionMismatch(format!(
                "{} values vs {} multiplicities",
                values.len(),
                multiplicities.len()
            )));
        }
        if multiplicities.contains(&0) {
            return Err(GzError::InvalidPartition("zero multiplicity".into()));
        }
        for a in 0..values.len() {
            for b in a + 1..values.len() {
                if values[a] == values[b] {
                    return Err(GzError::RepeatedEigenvalue(format!("{}", values[a])));
                }
            }
        }
        Ok(ClusteredSpectrum { values, multiplicities, cluster_tol: 0.0 })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Index of the cluster nearest to `value`, if within `tol`.
    pub fn index_of(&self, value: Complex64, tol: f64) -> Option<usize> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| (k, (v - value).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k)
    }
}

/// All eigenvalues of `m` (with repetition), unordered.
///
/// Unshifted structure such as a nilpotent shift matrix can stall the QR
/// iteration; in that case the matrix is first mixed by a fixed unitary
/// similarity, which leaves the spectrum unchanged.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n == 1 {
        return Ok(vec![m.get(0, 0)]);
    }
    for attempt in 0..6 {
        let a = if attempt == 0 {
            m.as_dmatrix().clone()
        } else {
            let q = mixer(n, attempt);
            q.adjoint() * m.as_dmatrix() * q
        };
        if let Some(schur) = Schur::try_new(a, f64::EPSILON, 10_000) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|k| t[(k, k)]).collect());
        }
    }
    Err(GzError::EigenFailure)
}

fn mixer(n: usize, k: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |r, c| {
        let a = (k * 7 + r * 13 + c * 31) as f64;
        Complex64::new((a * 0.754_877_666_2).sin(), (a * 0.569_840_291).cos())
    });
    g.qr().q()
}

fn lex_cmp(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn centroid(members: &[Complex64]) -> Complex64 {
    members.iter().sum::<Complex64>() / (members.len() as f64)
}

fn finish(mut clusters: Vec<Vec<Complex64>>, tol: f64) -> ClusteredSpectrum {
    clusters.sort_by(|a, b| lex_cmp(&centroid(a), &centroid(b)));
    ClusteredSpectrum {
        values: clusters.iter().map(|c| centroid(c)).collect(),
        multiplicities: clusters.iter().map(|c| c.len()).collect(),
        cluster_tol: tol,
    }
}

/// Smallest merge-residual threshold; separations below about `3e-7`
/// cannot be told apart from the round-off scatter of a defective root.
const RESIDUAL_FLOOR: f64 = 1e-13;

/// Largest round-off allowance for the merge residual; beyond it roots
/// about `6e-5` apart would merge.
const RESIDUAL_CAP: f64 = 1e-9;

/// Merge-residual threshold: `max(tol^2, 1e-13)`, raised to the size of the
/// coefficient perturbation caused by a backward error of `n eps |m|` in
/// the eigenvalues (capped at `1e-9`).
fn residual_limit(m: &CMatrix, ev: &[Complex64], tol: f64) -> f64 {
    let n = ev.len() as i32;
    let coeffs = monic_from_roots(ev, &vec![1; ev.len()]);
    let size = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let noise = (n as f64) * 2f64.powi(n) * f64::EPSILON * m.frobenius_norm().max(1.0).powi(n) / size;
    (tol * tol).max(RESIDUAL_FLOOR).max((10.0 * noise).min(RESIDUAL_CAP))
}

/// A coarser clustering whose residual is within this factor of the
/// threshold makes the decision ambiguous.
const AMBIGUITY_FACTOR: f64 = 100.0;

/// Distinct eigenvalues of `m` with multiplicities.
///
/// Eigenvalues are merged agglomeratively (closest centroids first) into
/// the fewest clusters whose merge residual stays below
/// `max(tol^2, 1e-13)` (raised to the round-off level of `m`, at most `1e-9`). Merging two simple roots `g` apart costs about
/// `g^2 / 4`, so values within roughly `2 tol` merge, while the scattered
/// copies of a defective root (spread `eps^(1/m)`, far beyond `tol`) merge
/// at round-off cost.
///
/// Fails with `ClusterAmbiguity` when the next coarser clustering is within
/// a factor 100 of the threshold, or when two clusters end up within
/// `2 tol` of each other.
pub fn clustered_spectrum(m: &CMatrix, tol: f64) -> Result<ClusteredSpectrum> {
    if tol.is_nan() || tol < 0.0 {
        return Err(GzError::ClusterAmbiguity(format!("bad tolerance {tol}")));
    }
    let ev = eigenvalues(m)?;
    let limit = residual_limit(m, &ev, tol);
    let mut coarser = f64::INFINITY;
    for count in 1..=ev.len() {
        let spectrum = finish(agglomerate(ev.clone(), count), tol);
        let residual = merge_residual(&ev, &spectrum);
        if residual <= limit {
            if coarser <= AMBIGUITY_FACTOR * limit {
                return Err(GzError::ClusterAmbiguity(format!(
                    "{} clusters fit with residual {residual:.3e}, {} with {coarser:.3e}",
                    count,
                    count - 1
                )));
            }
            let sep = min_separation(&spectrum.values);
            if sep <= 2.0 * tol {
                return Err(GzError::ClusterAmbiguity(format!(
                    "clusters {sep:.3e} apart (tol {tol:.1e})"
                )));
            }
            return Ok(spectrum);
        }
        coarser = residual;
    }
    Err(GzError::ClusterAmbiguity(
        "eigenvalues do not reproduce their own product".into(),
    ))
}

/// Clusters the eigenvalues of `m` so that the multiplicities form the
/// multiset `parts`, or fails with `ClusterAmbiguity`.
///
/// The clustering is the one of [`clustered_spectrum`], so a pattern finer
/// than the true one is rejected as well as a coarser one.
pub fn spectrum_with_partition(
    m: &CMatrix,
    parts: &[usize],
    cluster_tol: f64,
) -> Result<ClusteredSpectrum> {
    let n = m.dim();
    if parts.iter().sum::<usize>() != n || parts.contains(&0) {
        return Err(GzError::DimensionMismatch(format!(
            "parts {parts:?} do not partition {n}"
        )));
    }
    let spectrum = clustered_spectrum(m, cluster_tol)?;
    let mut got = spectrum.multiplicities.clone();
    let mut want = parts.to_vec();
    got.sort_unstable();
    want.sort_unstable();
    if got != want {
        return Err(GzError::ClusterAmbiguity(format!(
            "eigenvalue clusters have sizes {got:?}, expected {want:?}"
        )));
    }
    Ok(spectrum)
}

/// Relative coefficient distance between `prod (t - ev_k)` over the raw
/// eigenvalues and `prod (t - value)^mult` over the clustered ones.
///
/// Merging two simple roots `g` apart costs about `g^2 / 4`; the scattered
/// copies of a defective root cost only round-off.
fn merge_residual(ev: &[Complex64], spectrum: &ClusteredSpectrum) -> f64 {
    let raw = monic_from_roots(ev, &vec![1; ev.len()]);
    coefficient_residual(&raw, &monic_from_roots(&spectrum.values, &spectrum.multiplicities))
}

/// Merges closest centroids until `count` clusters remain.
fn agglomerate(mut ev: Vec<Complex64>, count: usize) -> Vec<Vec<Complex64>> {
    ev.sort_by(lex_cmp);
    let mut clusters: Vec<Vec<Complex64>> = ev.into_iter().map(|v| vec![v]).collect();
    while clusters.len() > count.max(1) {
        let centers: Vec<Complex64> = clusters.iter().map(|c| centroid(c)).collect();
        let mut best = (0, 1, f64::INFINITY);
        for (a, ca) in centers.iter().enumerate() {
            for (b, cb) in centers.iter().enumerate().skip(a + 1) {
                let d = (ca - cb).norm();
                if d < best.2 {
                    best = (a, b, d);
                }
            }
        }
        let merged = clusters.remove(best.1);
        clusters[best.0].extend(merged);
    }
    clusters
}

/// Multiplicities of the known distinct `values` as eigenvalues of `m`.
///
/// Each computed eigenvalue is assigned to its nearest entry of `values`;
/// the assignment must pass the merge-residual test of [`clustered_spectrum`].
pub fn multiplicities_for_values(
    m: &CMatrix,
    values: &[Complex64],
    cluster_tol: f64,
) -> Result<Vec<usize>> {
    if values.is_empty() {
        return Err(GzError::DimensionMismatch("no eigenvalues supplied".into()));
    }
    let ev = eigenvalues(m)?;
    let mut mults = vec![0usize; values.len()];
    for v in &ev {
        let k = values
            .iter()
            .enumerate()
            .map(|(k, u)| (k, (u - v).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k)
            .unwrap_or(0);
        mults[k] += 1;
    }
    if let Some(k) = mults.iter().position(|&c| c == 0) {
        return Err(GzError::ClusterAmbiguity(format!(
            "value {} is not an eigenvalue",
            values[k]
        )));
    }
    let spectrum = ClusteredSpectrum { values: values.to_vec(), multiplicities: mults.clone(), cluster_tol };
    let residual = merge_residual(&ev, &spectrum);
    if residual > residual_limit(m, &ev, cluster_tol) {
        return Err(GzError::ClusterAmbiguity(format!(
            "supplied eigenvalues do not match the spectrum (residual {residual:.3e})"
        )));
    }
    Ok(mults)
}

/// Smallest pairwise distance (infinity for fewer than two values).
pub fn min_separation(values: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            best = best.min((values[a] - values[b]).norm());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::real;

    #[test]
    fn exact_repeats_merge() {
        let s = clustered_spectrum(&CMatrix::real_diag(&[1.0, 1.0, 5.0]), 1e-8).unwrap();
        assert_eq!(s.values, vec![real(1.0), real(5.0)]);
        assert_eq!(s.multiplicities, vec![2, 1]);
    }

    #[test]
    fn triangular_distinct() {
        let m = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap();
        let s = clustered_spectrum(&m, 1e-8).unwrap();
        assert_eq!(s.multiplicities, vec![1, 1]);
        assert!((s.values[0] - real(1.0)).norm() < 1e-14);
        assert!((s.values[1] - real(2.0)).norm() < 1e-14);
    }

    #[test]
    fn tiny_gap_merges() {
        let s = clustered_spectrum(&CMatrix::real_diag(&[0.0, 1e-12]), 1e-8).unwrap();
        assert_eq!(s.multiplicities, vec![2]);
        assert!(s.values[0].norm() < 1e-11);
    }

    #[test]
    fn ambiguous_gap_is_an_error() {
        // 1e-6 apart: too far to merge at 1e-8, too close to separate cleanly
        let err = clustered_spectrum(&CMatrix::real_diag(&[0.0, 1e-6]), 1e-8).unwrap_err();
        assert!(matches!(err, GzError::ClusterAmbiguity(_)));
    }

    #[test]
    fn shift_matrices_are_one_cluster() {
        for n in 2..=6 {
            let s = clustered_spectrum(&CMatrix::subdiagonal_ones(n), 1e-8).unwrap();
            assert_eq!(s.multiplicities, vec![n]);
            assert!(s.values[0].norm() < 1e-12);
        }
    }

    #[test]
    fn forced_partition_on_jordan_block() {
        // companion matrix of (t-1)^3 (t+2): eigenvalue 1 is defective
        let c = monic_from_roots(&[real(1.0), real(-2.0)], &[3, 1]);
        let n = 4;
        let m = CMatrix::new(nalgebra::DMatrix::from_fn(n, n, |r, col| {
            if r == col + 1 {
                real(1.0)
            } else if col == n - 1 {
                -c[r]
            } else {
                real(0.0)
            }
        }))
        .unwrap();
        let s = spectrum_with_partition(&m, &[3, 1], 1e-6).unwrap();
        let k = s.index_of(real(1.0), 1e-6).unwrap();
        assert_eq!(s.multiplicities[k], 3);
        assert!(spectrum_with_partition(&m, &[2, 1, 1], 1e-6).is_err());
        assert!(spectrum_with_partition(&m, &[2, 2], 1e-6).is_err());
        assert_eq!(multiplicities_for_values(&m, &[real(-2.0), real(1.0)], 1e-6).unwrap(), vec![1, 3]);
    }

    #[test]
    fn coarsest_detects_defective_root() {
        let c = monic_from_roots(&[real(0.5)], &[4]);
        let m = CMatrix::new(nalgebra::DMatrix::from_fn(4, 4, |r, col| {
            if r == col + 1 {
                real(1.0)
            } else if col == 3 {
                -c[r]
            } else {
                real(0.0)
            }
        }))
        .unwrap();
        let s = clustered_spectrum(&m, 1e-6).unwrap();
        assert_eq!(s.multiplicities, vec![4]);
        assert!((s.values[0] - real(0.5)).norm() < 1e-10);
        let d = clustered_spectrum(&CMatrix::real_diag(&[1.0, 2.0, 2.0]), 1e-6).unwrap();
        assert_eq!(d.multiplicities, vec![1, 2]);
    }

    #[test]
    fn forced_partition_rejects_wrong_merge() {
        let err = spectrum_with_partition(&CMatrix::real_diag(&[1.0, 2.0]), &[2], 1e-6);
        assert!(matches!(err, Err(GzError::ClusterAmbiguity(_))));
    }
}
