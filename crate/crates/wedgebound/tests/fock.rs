use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use wedgebound::fock::*;
use wedgebound::hardy::{AnalyticFamilyMember, ClosedForm, Side};
use wedgebound::smatrix::{make_scattering, RapidityGrid, ScatteringFunction};

fn setup() -> (ScatteringFunction, RapidityGrid, SLattice) {
    let s = make_scattering(0.1, vec![]).unwrap();
    let grid = RapidityGrid::new(6.0, 64).unwrap();
    let lat = SLattice::new(&s, &grid);
    (s, grid, lat)
}

fn random_wave(n: usize, grid: &RapidityGrid, seed: u64) -> WaveFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = WaveFunction::zeros(n, grid).unwrap();
    for v in w.amplitudes.iter_mut() {
        *v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    w.s_symmetric = false;
    w
}

fn random_one(grid: &RapidityGrid, seed: u64) -> Vec<C64> {
    random_wave(1, grid, seed).amplitudes
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

#[test]
fn identity_permutation_and_involution() {
    let (_, grid, lat) = setup();
    let psi = random_wave(2, &grid, 1);
    assert_eq!(apply_dn(&lat, &psi, &[0, 1]).unwrap(), psi);
    let twice = apply_dn(&lat, &apply_dn(&lat, &psi, &[1, 0]).unwrap(), &[1, 0]).unwrap();
    assert!(twice.max_abs_diff(&psi).unwrap() < 1e-10);
    let moved = apply_dn(&lat, &psi, &[1, 0]).unwrap();
    assert!((moved.norm() - psi.norm()).abs() < 1e-10 * psi.norm());
}

#[test]
fn reduced_words_agree_for_three_particles() {
    let (_, grid, lat) = setup();
    let psi = random_wave(3, &grid, 2);
    let a = apply_word(&lat, &psi, &[0, 1, 0]).unwrap();
    let b = apply_word(&lat, &psi, &[1, 0, 1]).unwrap();
    assert!(a.max_abs_diff(&b).unwrap() < 1e-10);
    assert_eq!(reduced_word(&[2, 1, 0]).unwrap().len(), 3);
    assert!(matches!(apply_dn(&lat, &psi, &[0, 0, 1]), Err(FockError::BadPermutation(..))));
}

#[test]
fn representation_property() {
    let (_, grid, lat) = setup();
    for n in 2..=3 {
        let psi = random_wave(n, &grid, 3 + n as u64);
        for s1 in permutations(n) {
            for s2 in permutations(n) {
                let lhs = apply_dn(&lat, &apply_dn(&lat, &psi, &s2).unwrap(), &s1).unwrap();
                let rhs = apply_dn(&lat, &psi, &compose(&s1, &s2)).unwrap();
                assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10, "n={n} {s1:?} {s2:?}");
            }
        }
    }
}

#[test]
fn projector_algebra() {
    let (_, grid, lat) = setup();
    let one = random_wave(1, &grid, 7);
    assert_eq!(project_pn(&lat, &one).unwrap().amplitudes, one.amplitudes);
    for n in 2..=3 {
        let psi = random_wave(n, &grid, 8);
        let phi = random_wave(n, &grid, 9);
        let p = project_pn(&lat, &psi).unwrap();
        assert!(p.s_symmetric);
        assert!(p.s_symmetry_deviation(&lat) < 1e-9);
        let pp = project_pn(&lat, &p).unwrap();
        assert!(pp.max_abs_diff(&p).unwrap() < 1e-10);
        let lhs = project_pn(&lat, &phi).unwrap().inner(&psi).unwrap();
        let rhs = phi.inner(&p).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
    }
}

#[test]
fn vacuum_creation_and_annihilation() {
    let (_, grid, lat) = setup();
    let psi = random_one(&grid, 10);
    let omega = WaveFunction::vacuum(C64::new(1.0, 0.0), &grid);
    let one = create(&lat, &psi, &omega).unwrap();
    assert_eq!(one.n, 1);
    assert!(one.amplitudes.iter().zip(&psi).all(|(a, b)| (a - b).norm() < 1e-15));
    let gone = annihilate(&lat, &psi, &omega).unwrap();
    assert_eq!(gone.amplitudes, vec![C64::new(0.0, 0.0)]);
    let three = project_pn(&lat, &random_wave(3, &grid, 11)).unwrap();
    assert!(matches!(create(&lat, &psi, &three), Err(FockError::ParticleCap(4))));
}

#[test]
fn creation_is_adjoint_to_annihilation() {
    let (_, grid, lat) = setup();
    let psi = random_one(&grid, 12);
    for n in 0..=2 {
        let phi = project_pn(&lat, &random_wave(n, &grid, 13 + n as u64)).unwrap();
        let chi = project_pn(&lat, &random_wave(n + 1, &grid, 20 + n as u64)).unwrap();
        let lhs = create(&lat, &psi, &phi).unwrap().inner(&chi).unwrap();
        let rhs = phi.inner(&annihilate(&lat, &psi, &chi).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()), "n={n}: {lhs} vs {rhs}");
        let psi_norm = WaveFunction::one_particle(psi.clone(), &grid).unwrap().norm();
        let bound = ((n + 1) as f64).sqrt() * psi_norm * phi.norm();
        assert!(create(&lat, &psi, &phi).unwrap().norm() <= bound * (1.0 + 1e-12));
    }
}

#[test]
fn cpt_properties() {
    let (_, grid, lat) = setup();
    let psi = random_wave(2, &grid, 30);
    assert_eq!(cpt_j(&cpt_j(&psi)), psi);
    let real = WaveFunction::one_particle(grid.nodes().iter().map(|x| C64::new((-x * x).exp(), 0.0)).collect(), &grid)
        .unwrap();
    assert_eq!(cpt_j(&real), real);
    for n in 2..=3 {
        let psi = random_wave(n, &grid, 31 + n as u64);
        let a = cpt_j(&project_pn(&lat, &psi).unwrap());
        let b = project_pn(&lat, &cpt_j(&psi)).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-10);
    }
}

#[test]
fn poincare_action() {
    let grid = RapidityGrid::default();
    let member = AnalyticFamilyMember::gaussian(Side::Left, 0.2, 1.0).unwrap();
    let psi: Vec<C64> = grid.nodes().iter().map(|&x| member.under(C64::new(x, 0.0))).collect();
    let id = poincare_one(&PoincareElement::identity(), &psi, &grid).unwrap();
    assert_eq!(id.values, psi);
    let moved = poincare_one(&PoincareElement::translation([1.0, 0.0]), &psi, &grid).unwrap();
    assert!(moved.values.iter().zip(&psi).all(|(a, b)| (a.norm() - b.norm()).abs() < 1e-14));
    let ab = poincare_one(
        &PoincareElement::translation([0.3, 0.1]),
        &poincare_one(&PoincareElement::translation([0.2, -0.5]), &psi, &grid).unwrap().values,
        &grid,
    )
    .unwrap();
    let direct = poincare_one(&PoincareElement::translation([0.5, -0.4]), &psi, &grid).unwrap();
    assert!(ab.values.iter().zip(&direct.values).all(|(a, b)| (a - b).norm() < 1e-10));
    let boost = poincare_one(&PoincareElement { a: [0.2, 0.0], lambda: 0.3071 }, &psi, &grid).unwrap();
    let before = WaveFunction::one_particle(psi.clone(), &grid).unwrap().norm();
    let after = WaveFunction::one_particle(boost.values.clone(), &grid).unwrap().norm();
    assert!(boost.interpolation_error > 0.0 && boost.interpolation_error < 1e-6);
    assert!((after - before).abs() < 1e-6);
    let closed: ClosedForm = Arc::new(move |z| member.under(z));
    let exact = poincare_closed(&PoincareElement { a: [0.2, 0.0], lambda: 0.3071 }, closed);
    let worst = grid.nodes().iter().zip(&boost.values).map(|(&x, v)| (exact(C64::new(x, 0.0)) - v).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn free_field() {
    let (_, grid, lat) = setup();
    let xi = random_one(&grid, 40);
    let omega = WaveFunction::vacuum(C64::new(1.0, 0.0), &grid);
    let out = phi_free(&lat, &xi, &omega).unwrap();
    assert_eq!(out.components.len(), 1);
    assert_eq!(out.components[&1].amplitudes, xi);
    for n in 1..=2 {
        let phi = project_pn(&lat, &random_wave(n, &grid, 41)).unwrap();
        let psi = project_pn(&lat, &random_wave(n - 1, &grid, 42)).unwrap();
        let fphi = FockVector::from_components(&grid, vec![phi.clone()]).unwrap();
        let fpsi = FockVector::from_components(&grid, vec![psi.clone()]).unwrap();
        let lhs = phi_free(&lat, &xi, &phi).unwrap().inner(&fpsi).unwrap();
        let rhs = fphi.inner(&phi_free(&lat, &xi, &psi).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
    }
}

#[test]
fn number_commutator() {
    let (_, grid, lat) = setup();
    let xi = random_one(&grid, 50);
    let phi = FockVector::from_components(
        &grid,
        vec![
            WaveFunction::vacuum(C64::new(0.3, -0.2), &grid),
            project_pn(&lat, &random_wave(1, &grid, 51)).unwrap(),
            project_pn(&lat, &random_wave(2, &grid, 52)).unwrap(),
        ],
    )
    .unwrap();
    let psi = FockVector::from_components(
        &grid,
        vec![
            WaveFunction::vacuum(C64::new(-0.1, 0.7), &grid),
            project_pn(&lat, &random_wave(1, &grid, 53)).unwrap(),
            project_pn(&lat, &random_wave(2, &grid, 54)).unwrap(),
        ],
    )
    .unwrap();
    let field = |v: &FockVector| {
        let mut out = FockVector::new(&grid);
        for w in v.components.values() {
            out = out.plus(&phi_free(&lat, &xi, w).unwrap()).unwrap();
        }
        out
    };
    let lhs = phi.number().inner(&field(&psi)).unwrap() - field(&phi).inner(&psi.number()).unwrap();
    let mut diff = FockVector::new(&grid);
    for w in psi.components.values() {
        diff.add_component(create(&lat, &xi, w).unwrap()).unwrap();
        if w.n > 0 {
            diff.add_component(annihilate(&lat, &xi, w).unwrap().scale(C64::new(-1.0, 0.0))).unwrap();
        }
    }
    let rhs = phi.inner(&diff).unwrap();
    assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
}

#[test]
fn closed_products_are_s_symmetric() {
    let (s, grid, lat) = setup();
    let g = |c: f64| -> ClosedForm { Arc::new(move |z: C64| (-(z - c) * (z - c) / 2.0).exp()) };
    let w2 = ClosedWave::symmetrized_product(&s, vec![g(0.3), g(-0.5)], true).unwrap().sample(&grid).unwrap();
    assert!(w2.s_symmetry_deviation(&lat) < 1e-9 * w2.max_abs());
    let w3 = ClosedWave::symmetrized_product(&s, vec![g(0.3), g(-0.5), g(1.0)], false).unwrap().sample(&grid).unwrap();
    assert!(w3.s_symmetry_deviation(&lat) < 1e-9 * w3.max_abs());
    let j = ClosedWave::symmetrized_product(&s, vec![g(0.3), g(-0.5)], true).unwrap().cpt().sample(&grid).unwrap();
    assert!(j.max_abs_diff(&cpt_j(&w2)).unwrap() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linearity(seed in 0u64..1000, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let (_, grid, lat) = setup();
        let alpha = C64::new(re, im);
        let a = random_wave(2, &grid, seed);
        let b = random_wave(2, &grid, seed + 1);
        let psi = random_one(&grid, seed + 2);
        let combo = a.scale(alpha).axpy(C64::new(1.0, 0.0), &b).unwrap();
        let lhs = project_pn(&lat, &combo).unwrap();
        let rhs = project_pn(&lat, &a).unwrap().scale(alpha).axpy(C64::new(1.0, 0.0), &project_pn(&lat, &b).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        let lhs = annihilate(&lat, &psi, &combo).unwrap();
        let rhs = annihilate(&lat, &psi, &a).unwrap().scale(alpha).axpy(C64::new(1.0, 0.0), &annihilate(&lat, &psi, &b).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        let scaled: Vec<C64> = psi.iter().map(|v| v * alpha).collect();
        let lhs = annihilate(&lat, &scaled, &a).unwrap();
        let rhs = annihilate(&lat, &psi, &a).unwrap().scale(alpha.conj());
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        let lhs = create(&lat, &scaled, &b).unwrap();
        let rhs = create(&lat, &psi, &b).unwrap().scale(alpha);
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn permutations_are_unitary(seed in 0u64..1000, which in 0usize..6) {
        let (_, grid, lat) = setup();
        let psi = random_wave(3, &grid, seed);
        let perm = &permutations(3)[which];
        let out = apply_dn(&lat, &psi, perm).unwrap();
        prop_assert!((out.norm() - psi.norm()).abs() < 1e-10 * psi.norm());
    }
}
