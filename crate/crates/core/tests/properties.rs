use proptest::prelude::*;

use gzsys::cover::{lift, p_flow, p_function, q_flow, q_function, level_generators, zd_act, CoverPoint};
use gzsys::decomp::{canonical_rep, class_of, in_tower, sigma_order, zd_dimension, Partition, RegularDecompositionData};
use gzsys::gz::{gz_flow, gz_indices, is_strongly_regular, kw_map};
use gzsys::hessenberg::{is_hessenberg, phi_inverse, trivialize};
use gzsys::linalg::{
    centralizer_basis, charpoly, clustered_spectrum, coefficient_residual, eigenvalues, jordan_chevalley, real,
    spectral_projector, CMatrix,
};
use gzsys::sample::{
    random_eigenvalue_data, random_in_disk, random_matrix, random_stratum, random_zd_element, rng_from_seed,
    sample_cover_point, FiberShape, SampleRng,
};
use gzsys::{Complex64, Tolerances};

fn invertible(n: usize, rng: &mut SampleRng) -> (CMatrix, CMatrix) {
    let g = random_matrix(n, rng).scale_real(0.3).add_scalar_identity(real(1.0));
    let inv = g.inverse().expect("diagonally dominant");
    (g, inv)
}

fn random_partition(total: usize, rng: &mut SampleRng) -> Partition {
    random_stratum(total, rng).level(total).clone()
}

/// A regular matrix with random Jordan type, eigenvalues and basis.
fn regular_matrix(n: usize, rng: &mut SampleRng) -> (CMatrix, Partition) {
    let lambda = random_partition(n, rng);
    let mut ev: Vec<Complex64> = Vec::new();
    while ev.len() < lambda.len() {
        let v = random_in_disk(rng, 1.0);
        if ev.iter().all(|u| (u - v).norm() > 0.3) {
            ev.push(v);
        }
    }
    let (g, g_inv) = invertible(n, rng);
    (canonical_rep(&lambda, &ev).unwrap().conjugate_by(&g, &g_inv), lambda)
}

fn point(n: usize, seed: u64) -> (CoverPoint, SampleRng) {
    let mut rng = rng_from_seed(seed);
    let d = random_stratum(n, &mut rng);
    let p = sample_cover_point(&d, &FiberShape::generic(), &Tolerances::default(), &mut rng).unwrap();
    (p, rng)
}

fn rel(x: &CMatrix) -> f64 {
    x.frobenius_norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x6a5e_11d3),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn charpoly_matches_eigenvalues(seed: u64, n in 1usize..=6) {
        let m = random_matrix(n, &mut rng_from_seed(seed));
        let ev = eigenvalues(&m).unwrap();
        let from_roots = gzsys::linalg::monic_from_roots(&ev, &vec![1; n]);
        prop_assert!(coefficient_residual(&charpoly(&m), &from_roots) <= 1e-8);
    }

    #[test]
    fn jordan_chevalley_split(seed: u64, n in 1usize..=5) {
        let (m, _) = regular_matrix(n, &mut rng_from_seed(seed));
        let (s, nil) = jordan_chevalley(&m, 1e-6).unwrap();
        let scale = m.frobenius_norm();
        prop_assert!(s.commutator(&nil).frobenius_norm() <= 1e-8 * scale.max(1.0));
        prop_assert!(nil.pow(n).frobenius_norm() <= 1e-8 * scale.max(1.0).powi(n as i32));
        prop_assert!((&s + &nil).distance(&m) <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn spectral_projectors_resolve_identity(seed: u64, n in 1usize..=5) {
        let (m, lambda) = regular_matrix(n, &mut rng_from_seed(seed));
        let spectrum = clustered_spectrum(&m, 1e-6).unwrap();
        let mut sum = CMatrix::zeros(n);
        for j in 0..spectrum.len() {
            let p = spectral_projector(&m, &spectrum, j).unwrap();
            prop_assert!((&p * &p).distance(&p) <= 1e-8);
            prop_assert!((p.trace().re - spectrum.multiplicities[j] as f64).abs() <= 1e-6);
            sum = &sum + &p;
        }
        prop_assert!(sum.distance(&CMatrix::identity(n)) <= 1e-8);
        let mut mults = spectrum.multiplicities.clone();
        mults.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(mults, lambda.parts().to_vec());
    }

    #[test]
    fn centralizer_dimension_detects_regularity(seed: u64, n in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let (m, _) = regular_matrix(n, &mut rng);
        prop_assert_eq!(centralizer_basis(&m).len(), n);
        // a repeated eigenvalue in two blocks is derogatory
        let a = random_in_disk(&mut rng, 1.0);
        let mut diag: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64 + 2.0, 0.0)).collect();
        diag[0] = a;
        diag[1] = a;
        let (g, g_inv) = invertible(n, &mut rng);
        prop_assert!(centralizer_basis(&CMatrix::diag(&diag).conjugate_by(&g, &g_inv)).len() > n);
    }

    #[test]
    fn class_of_canonical_rep(seed: u64, n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let lambda = random_partition(n, &mut rng);
        let mut ev: Vec<Complex64> = Vec::new();
        while ev.len() < lambda.len() {
            let v = random_in_disk(&mut rng, 1.0);
            if ev.iter().all(|u| (u - v).norm() > 0.3) {
                ev.push(v);
            }
        }
        prop_assert_eq!(class_of(&canonical_rep(&lambda, &ev).unwrap(), 1e-6).unwrap(), lambda);
    }

    #[test]
    fn flows_preserve_fibers_cutoffs_and_regularity(seed: u64, n in 2usize..=4) {
        let (p, mut rng) = point(n, seed);
        let x = p.x();
        let c = kw_map(x);
        for (i, j) in gz_indices(n - 1) {
            let t = random_in_disk(&mut rng, 1.0);
            let y = gz_flow(x, i, j, t).unwrap();
            prop_assert!(kw_map(&y).max_abs_diff(&c) <= 1e-8);
            for k in 1..=i {
                prop_assert!(y.corner(k).unwrap().distance(&x.corner(k).unwrap()) <= 1e-12 * rel(x));
            }
            prop_assert!(is_strongly_regular(&y, 1e-8).is_sreg);
        }
    }

    #[test]
    fn gz_flows_commute(seed: u64, n in 2usize..=4) {
        let (p, mut rng) = point(n, seed);
        let x = p.x();
        let idx = gz_indices(n - 1);
        for &a in &idx {
            for &b in &idx {
                let (s, t) = (random_in_disk(&mut rng, 1.0), random_in_disk(&mut rng, 1.0));
                let ab = gz_flow(&gz_flow(x, a.0, a.1, s).unwrap(), b.0, b.1, t).unwrap();
                let ba = gz_flow(&gz_flow(x, b.0, b.1, t).unwrap(), a.0, a.1, s).unwrap();
                prop_assert!(ab.distance(&ba) <= 1e-8 * rel(x));
            }
        }
    }

    #[test]
    fn fibers_are_detected_by_cutoff_spectra(seed: u64, n in 2usize..=4) {
        let (p, mut rng) = point(n, seed);
        let x = p.x();
        let same = gz_flow(x, n - 1, 1, random_in_disk(&mut rng, 1.0)).unwrap();
        let (g, g_inv) = invertible(n, &mut rng);
        let other = x.conjugate_by(&g, &g_inv);
        let spectra_agree = |a: &CMatrix, b: &CMatrix| {
            (1..=n).all(|i| {
                let sa = clustered_spectrum(&a.corner(i).unwrap(), 1e-6).unwrap();
                let sb = clustered_spectrum(&b.corner(i).unwrap(), 1e-6).unwrap();
                sa.len() == sb.len()
                    && sa.values.iter().zip(&sa.multiplicities).all(|(v, m)| {
                        sb.index_of(*v, 1e-6).is_some_and(|k| sb.multiplicities[k] == *m)
                    })
            })
        };
        prop_assert!(kw_map(&same).max_abs_diff(&kw_map(x)) <= 1e-8);
        prop_assert!(spectra_agree(x, &same));
        prop_assert!(kw_map(&other).max_abs_diff(&kw_map(x)) > 1e-6);
        prop_assert!(!spectra_agree(x, &other));
    }

    #[test]
    fn lifted_functions_are_constant_along_lifted_flows(seed: u64, n in 2usize..=4) {
        let (p, mut rng) = point(n, seed);
        let tols = Tolerances::default();
        let values = |q: &CoverPoint| -> Vec<Complex64> {
            let mut out = Vec::new();
            for i in 1..n {
                let g = level_generators(q, i).unwrap();
                out.extend((1..=g.projectors.len()).map(|j| q_function(q, i, j).unwrap()));
                out.extend((1..=g.nilpotents.len()).map(|k| p_function(q, i, k).unwrap()));
            }
            out
        };
        let before = values(&p);
        for i in 1..n {
            let g = level_generators(&p, i).unwrap();
            let mut moved = Vec::new();
            for j in 1..=g.projectors.len() {
                moved.push(q_flow(&p, i, j, random_in_disk(&mut rng, 1.0)).unwrap());
            }
            for k in 1..=g.nilpotents.len() {
                moved.push(p_flow(&p, i, k, random_in_disk(&mut rng, 1.0)).unwrap());
            }
            for q in moved {
                prop_assert!(is_strongly_regular(q.x(), tols.rank).is_sreg);
                for (a, b) in values(&q).iter().zip(&before) {
                    prop_assert!((a - b).norm() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn zd_action_is_a_group_action(seed: u64, n in 2usize..=4) {
        let (p, mut rng) = point(n, seed);
        let mults = &p.multiplicities()[..n - 1];
        let k1 = random_zd_element(mults, 0.5, &mut rng);
        let k2 = random_zd_element(mults, 0.5, &mut rng);
        let lhs = zd_act(&k1.compose(&k2).unwrap(), &p).unwrap();
        let rhs = zd_act(&k1, &zd_act(&k2, &p).unwrap()).unwrap();
        prop_assert!(lhs.x().distance(rhs.x()) <= 1e-8 * rel(p.x()));
        prop_assert!(is_strongly_regular(lhs.x(), 1e-8).is_sreg);
        prop_assert!(kw_map(lhs.x()).max_abs_diff(&kw_map(p.x())) <= 1e-8);
        let back = zd_act(&k1.inverse().unwrap(), &zd_act(&k1, &p).unwrap()).unwrap();
        prop_assert!(back.x().distance(p.x()) <= 1e-8 * rel(p.x()));
    }

    #[test]
    fn strata_partition_the_strongly_regular_set(seed: u64, n in 1usize..=4) {
        let (p, _) = point(n, seed);
        let tols = Tolerances::default();
        let hits = RegularDecompositionData::all(n)
            .iter()
            .filter(|d| in_tower(p.x(), d, &tols).unwrap())
            .count();
        prop_assert_eq!(hits, 1);
        let d = p.stratum();
        prop_assert_eq!(lift(p.x(), &d, &tols).unwrap().len() as u64, sigma_order(&d));
        prop_assert_eq!(zd_dimension(&d).total, n * (n - 1) / 2);
    }

    #[test]
    fn hessenberg_roundtrip_both_ways(seed: u64, n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let mut rows = random_matrix(n, &mut rng).rows();
        for (r, row) in rows.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate().take(r) {
                *v = real(if r == c + 1 { 1.0 } else { 0.0 });
            }
        }
        let h = CMatrix::from_rows(&rows).unwrap();
        prop_assert!(is_hessenberg(&h, 0.0));
        let back = phi_inverse(&kw_map(&h));
        prop_assert!(back.as_cmatrix().distance(&h) <= 1e-10 * rel(&h));
        prop_assert!(is_strongly_regular(back.as_cmatrix(), 1e-8).is_sreg);
    }

    #[test]
    fn trivialization_separates_fiber_points(seed: u64, n in 2usize..=4) {
        let mut rng = rng_from_seed(seed);
        let tols = Tolerances::default();
        let d = random_stratum(n, &mut rng);
        let z = random_eigenvalue_data(&d, &FiberShape::generic(), &mut rng).unwrap();
        let mults: Vec<Vec<usize>> = d.strata().iter().map(|q| q.parts().to_vec()).collect();
        let x0 = phi_inverse(&gzsys::sample::gz_value_for(&d, &z).unwrap()).into_cmatrix();
        let base = CoverPoint::new(x0, z, &tols).unwrap();
        let a = zd_act(&random_zd_element(&mults[..n - 1], 0.5, &mut rng), &base).unwrap();
        let b = zd_act(&random_zd_element(&mults[..n - 1], 0.5, &mut rng), &base).unwrap();
        let ta = trivialize(&a, &tols).unwrap();
        let tb = trivialize(&b, &tols).unwrap();
        prop_assert!(ta.residual <= 1e-8 * rel(a.x()));
        prop_assert!(ta.k.max_abs_diff(&tb.k) > 1e-6);
        prop_assert!(zd_act(&tb.k, &base).unwrap().x().distance(b.x()) <= 1e-8 * rel(b.x()));
    }
}
