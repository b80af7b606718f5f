//! Matrix functions built from confluent Hermite interpolation on a
//! clustered spectrum: Jordan-Chevalley splitting, spectral projectors and
//! exponentials.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::CMatrix;
use super::spectrum::{clustered_spectrum, ClusteredSpectrum};
use crate::error::{GzError, Result};

/// Evaluates at `m` the polynomial `p` of degree `< dim` with
/// `p^(d)(values[g]) = derivs[g][d]` for `d < multiplicities[g]`.
///
/// `derivs[g]` must hold at least `multiplicities[g]` entries.
pub fn hermite_eval(
    m: &CMatrix,
    spectrum: &ClusteredSpectrum,
    derivs: &[Vec<Complex64>],
) -> CMatrix {
    let nodes: Vec<(usize, Complex64)> = spectrum
        .values
        .iter()
        .zip(&spectrum.multiplicities)
        .enumerate()
        .flat_map(|(g, (&v, &mult))| std::iter::repeat_n((g, v), mult))
        .collect();
    let len = nodes.len();

    // dd[a][b] = f[z_a .. z_b]; nodes of one group are contiguous
    let mut dd = vec![vec![Complex64::new(0.0, 0.0); len]; len];
    for a in 0..len {
        dd[a][a] = derivs[nodes[a].0][0];
    }
    let mut fact = vec![1.0f64; len];
    for k in 1..len {
        fact[k] = fact[k - 1] * k as f64;
    }
    for width in 1..len {
        for a in 0..len - width {
            let b = a + width;
            dd[a][b] = if nodes[a].0 == nodes[b].0 {
                derivs[nodes[a].0][width] / fact[width]
            } else {
                (dd[a + 1][b] - dd[a][b - 1]) / (nodes[b].1 - nodes[a].1)
            };
        }
    }

    // Newton form, nested from the innermost factor
    let n = m.dim();
    let a = m.as_dmatrix();
    let mut acc: DMatrix<Complex64> = DMatrix::identity(n, n) * dd[0][len - 1];
    for k in (0..len - 1).rev() {
        let mut shifted = a.clone();
        for d in 0..n {
            shifted[(d, d)] -= nodes[k].1;
        }
        acc = shifted * acc;
        for d in 0..n {
            acc[(d, d)] += dd[0][k];
        }
    }
    CMatrix::from_dmatrix(acc)
}

fn check_spectrum(m: &CMatrix, spectrum: &ClusteredSpectrum) -> Result<()> {
    if spectrum.dim() != m.dim() {
        return Err(GzError::DimensionMismatch(format!(
            "spectrum covers {} eigenvalues, matrix has dimension {}",
            spectrum.dim(),
            m.dim()
        )));
    }
    Ok(())
}

/// Semisimple part `S = p(m)` with `p = value` to order `multiplicity` at each cluster.
pub fn semisimple_part(m: &CMatrix, spectrum: &ClusteredSpectrum) -> Result<CMatrix> {
    check_spectrum(m, spectrum)?;
    if spectrum.len() == 1 {
        return Ok(CMatrix::identity(m.dim()).scale(spectrum.values[0]));
    }
    let derivs: Vec<Vec<Complex64>> = spectrum
        .values
        .iter()
        .zip(&spectrum.multiplicities)
        .map(|(&v, &mult)| {
            let mut d = vec![Complex64::new(0.0, 0.0); mult];
            d[0] = v;
            d
        })
        .collect();
    Ok(hermite_eval(m, spectrum, &derivs))
}

/// Jordan-Chevalley splitting `m = S + N` relative to a known spectrum.
pub fn jordan_chevalley_with(
    m: &CMatrix,
    spectrum: &ClusteredSpectrum,
) -> Result<(CMatrix, CMatrix)> {
    let s = semisimple_part(m, spectrum)?;
    let n = m - &s;
    Ok((s, n))
}

/// Jordan-Chevalley splitting with multiplicities detected at `tol`.
pub fn jordan_chevalley(m: &CMatrix, tol: f64) -> Result<(CMatrix, CMatrix)> {
    let spectrum = clustered_spectrum(m, tol)?;
    jordan_chevalley_with(m, &spectrum)
}

/// Projector onto the generalized eigenspace of cluster `j`.
pub fn spectral_projector(m: &CMatrix, spectrum: &ClusteredSpectrum, j: usize) -> Result<CMatrix> {
    check_spectrum(m, spectrum)?;
    if j >= spectrum.len() {
        return Err(GzError::IndexOutOfRange(format!(
            "cluster {j} of {}",
            spectrum.len()
        )));
    }
    if spectrum.len() == 1 {
        return Ok(CMatrix::identity(m.dim()));
    }
    let derivs: Vec<Vec<Complex64>> = spectrum
        .multiplicities
        .iter()
        .enumerate()
        .map(|(g, &mult)| {
            let mut d = vec![Complex64::new(0.0, 0.0); mult];
            if g == j {
                d[0] = Complex64::new(1.0, 0.0);
            }
            d
        })
        .collect();
    Ok(hermite_eval(m, spectrum, &derivs))
}

/// `exp(N)` for nilpotent `N` by the terminating series.
pub fn exp_nilpotent(nil: &CMatrix) -> CMatrix {
    let n = nil.dim();
    let mut term = CMatrix::identity(n);
    let mut acc = CMatrix::identity(n);
    for k in 1..n {
        term = (&term * nil).scale_real(1.0 / k as f64);
        acc = &acc + &term;
    }
    acc
}

/// Matrix exponential via `exp(S) exp(N)`, with `exp(S) = sum_j e^{v_j} P_j`.
pub fn expm_jordan_chevalley(m: &CMatrix, spectrum: &ClusteredSpectrum) -> Result<CMatrix> {
    let (_, nil) = jordan_chevalley_with(m, spectrum)?;
    let mut exp_s = CMatrix::zeros(m.dim());
    for j in 0..spectrum.len() {
        let p = spectral_projector(m, spectrum, j)?;
        exp_s = &exp_s + &p.scale(spectrum.values[j].exp());
    }
    Ok(&exp_s * &exp_nilpotent(&nil))
}

/// Matrix exponential by Pade approximation with scaling and squaring.
pub fn expm(m: &CMatrix) -> CMatrix {
    CMatrix::from_dmatrix(m.as_dmatrix().exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::real;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn single_jordan_block() {
        let m = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        let (s, n) = jordan_chevalley(&m, 1e-8).unwrap();
        assert!(close(&s, &CMatrix::identity(2), 1e-14));
        assert!(close(&n, &CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap(), 1e-14));
    }

    #[test]
    fn nilpotent_input() {
        let e = CMatrix::subdiagonal_ones(3);
        let (s, n) = jordan_chevalley(&e, 1e-8).unwrap();
        assert!(s.frobenius_norm() < 1e-14);
        assert!(close(&n, &e, 1e-14));
    }

    #[test]
    fn distinct_eigenvalues_are_semisimple() {
        let m = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap();
        let (s, n) = jordan_chevalley(&m, 1e-8).unwrap();
        assert!(close(&s, &m, 1e-14));
        assert!(n.frobenius_norm() < 1e-14);
    }

    #[test]
    fn projector_examples() {
        let d = CMatrix::real_diag(&[1.0, 3.0]);
        let sd = clustered_spectrum(&d, 1e-8).unwrap();
        let p = spectral_projector(&d, &sd, sd.index_of(real(1.0), 1e-9).unwrap()).unwrap();
        assert!(close(&p, &CMatrix::real_diag(&[1.0, 0.0]), 1e-14));

        let m = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 2.0]]).unwrap();
        let sm = clustered_spectrum(&m, 1e-8).unwrap();
        let p = spectral_projector(&m, &sm, sm.index_of(real(1.0), 1e-9).unwrap()).unwrap();
        let want = CMatrix::from_real_rows(&[[1.0, -1.0], [0.0, 0.0]]).unwrap();
        assert!(close(&p, &want, 1e-14));
        assert!(close(&(&p * &p), &p, 1e-14));
        assert!(spectral_projector(&m, &sm, 2).is_err());
    }

    #[test]
    fn exp_routes_agree() {
        let m = CMatrix::from_real_rows(&[[2.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]]).unwrap();
        let s = clustered_spectrum(&m, 1e-8).unwrap();
        let a = expm_jordan_chevalley(&m, &s).unwrap();
        let b = expm(&m);
        let e2 = 2.0f64.exp();
        let want = CMatrix::from_real_rows(&[[e2, e2, 0.0], [0.0, e2, 0.0], [0.0, 0.0, (-1.0f64).exp()]])
            .unwrap();
        assert!(close(&a, &want, 1e-13));
        assert!(close(&b, &want, 1e-12));
    }
}
