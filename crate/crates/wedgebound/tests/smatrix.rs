use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::PI;
use wedgebound::analytic::{self, ComplexRect};
use wedgebound::smatrix::*;

fn ic(y: f64) -> C64 {
    C64::new(0.0, y)
}

#[test]
fn value_at_one_matches_multiprecision() {
    // mpmath, 50 digits, factor by factor
    let s = make_scattering(0.1, vec![]).unwrap();
    let v = s.eval(C64::new(1.0, 0.0)).unwrap();
    let oracle = C64::new(0.491230252133993794927, -0.871029758038365119027);
    assert!((v - oracle).norm() / oracle.norm() < 1e-12);
}

#[test]
fn epsilon_block_is_a_blaschke_product() {
    let e = 0.25;
    let s = make_scattering(e, vec![]).unwrap();
    let bare = make_scattering(0.0, vec![]).unwrap();
    let with_block = make_scattering(0.0, block_factors(e, 1)).unwrap();
    // S_ε·S_0 block relation: S(ε) = S̲·S_ε and S(0)·S_ε/S_0 = S̲·S_ε
    let z = C64::new(0.3, 0.2);
    let lhs = s.eval(z).unwrap();
    let rhs = with_block.eval(z).unwrap() / bare.eval(z).unwrap() * bare.eval(z).unwrap();
    let zero_block: C64 = block_factors(0.0, 1).iter().map(|b| b.eval(z)).product();
    assert!((lhs - rhs / zero_block).norm() < 1e-12);
}

#[test]
fn crossing_example() {
    let s = make_scattering(0.1, vec![]).unwrap();
    let z = C64::new(0.7, 0.4);
    assert!((s.eval(z).unwrap() - s.eval(ic(PI) - z).unwrap()).norm() < 1e-12);
}

#[test]
fn unimodular_with_factor() {
    let s = make_scattering(0.1, vec![BlaschkeFactor::new(C64::new(0.5, 1.2))]).unwrap();
    for k in 0..1000 {
        let t = -15.0 + 30.0 * k as f64 / 999.0;
        assert!((s.eval(C64::new(t, 0.0)).unwrap().norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn winding_on_rectangle_at_zero_epsilon() {
    let s = make_scattering(0.0, vec![]).unwrap();
    let rect = ComplexRect::new(-5.0, 5.0, 0.05, PI - 0.05).unwrap();
    let w = analytic::winding_number(|z| s.eval(z).unwrap(), &rect.boundary(64)).unwrap();
    assert_eq!(w, 2);
}

#[test]
fn zeros_closed_form() {
    let s = make_scattering(0.0, vec![]).unwrap();
    let z = strip_zeros(&s).unwrap();
    let mut ims: Vec<f64> = z.iter().map(|w| w.im).collect();
    ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let expect = [PI / 6.0, PI / 2.0, PI / 2.0, 5.0 * PI / 6.0];
    assert_eq!(ims.len(), 4);
    for (a, b) in ims.iter().zip(expect) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
    for w in &z {
        assert!(w.re.abs() < 1e-8);
    }
    let s2 = make_scattering(0.2, vec![]).unwrap();
    let mut ims: Vec<f64> = strip_zeros(&s2).unwrap().iter().map(|w| w.im).collect();
    ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let expect = [PI / 6.0 + 0.2, PI / 2.0 - 0.2, PI / 2.0 + 0.2, 5.0 * PI / 6.0 - 0.2];
    let mut expect = expect.to_vec();
    expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (a, b) in ims.iter().zip(expect) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn kappa_values() {
    for (e, k) in [(0.0, PI / 6.0), (0.2, PI / 6.0 + 0.2), (-0.1, PI / 6.0 - 0.1)] {
        let s = make_scattering(e, vec![]).unwrap();
        assert!((kappa_of(&s).unwrap() - k).abs() < 1e-9);
    }
}

#[test]
fn residue_matches_multiprecision() {
    // mpmath oracle values of Im R
    for (e, r) in [
        (0.0, 0.066641993581619263427),
        (0.1, 0.046702602851937096831),
        (-0.1, 0.085533244655833613323),
        (0.3, 0.014062614470257788348),
        (0.4, 0.0043760433117590933365),
        (-0.4, 0.080092872837174529293),
    ] {
        let s = make_scattering(e, vec![]).unwrap();
        let res = residue_r(&s).unwrap();
        assert!(res.value.re.abs() / res.modulus < 1e-8);
        assert!((res.value.im - r).abs() / r < 1e-9, "{e}: {} vs {r}", res.value.im);
    }
}

#[test]
fn residue_calibration() {
    let p = ic(2.0 * PI / 3.0);
    let r = analytic::residue_at(|z| C64::new(0.0, 1.0) / (z - p), p, 1e-2).unwrap();
    assert!((r.value - C64::new(0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn axioms_pass_minimal() {
    let g = RapidityGrid::default();
    for e in [0.0, 0.4] {
        let s = make_scattering(e, vec![]).unwrap();
        let rep = check_axioms(&s, &g, 1e-8);
        assert!(rep.all_pass(), "{:#?}", rep.entries);
    }
}

#[test]
fn squared_block_violates_only_s7() {
    let g = RapidityGrid::default();
    let s = make_scattering(0.1, block_factors(0.2, 2)).unwrap();
    let rep = check_axioms(&s, &g, 1e-8);
    for e in &rep.entries {
        match e.name.as_str() {
            "S7" => {
                assert!(!e.pass);
                assert!(e.max_residual > 1e-3);
                assert!(e.argmax.re.is_finite());
            }
            "A3" => {}
            _ => assert!(e.pass, "{e:?}"),
        }
    }
}

#[test]
fn cubed_block_violates_s7() {
    let g = RapidityGrid::default();
    let s = make_scattering(0.1, block_factors(0.2, 3)).unwrap();
    let rep = check_axioms(&s, &g, 1e-8);
    let s7 = rep.entry("S7").unwrap();
    assert!(!s7.pass && s7.argmax.re.is_finite());
    // the odd power also turns the residue negative
    assert!(!rep.entry("S5").unwrap().pass);
}

#[test]
fn inequality_k() {
    let g = RapidityGrid::default();
    let near = make_scattering(PI / 6.0 - 1e-3, vec![]).unwrap();
    assert!(check_inequality_k(&near, &g, 1e-8).unwrap().pass);
    let c = check_inequality_k(&ConstantAmplitude(C64::new(-1.0, 0.0)), &g, 1e-8).unwrap();
    assert!(c.pass && (c.min_value - 1.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn unitarity_identity(e in -0.52f64..0.52, t in -30.0f64..30.0) {
        let s = make_scattering(e, vec![]).unwrap();
        prop_assert!((s.eval(C64::new(t, 0.0)).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn periodicity(e in -0.52f64..0.52, x in -5.0f64..5.0, y in 0.05f64..3.09, zr in -2.0f64..2.0, zi in 0.1f64..3.0) {
        let s = make_scattering(e, vec![BlaschkeFactor::new(C64::new(zr, zi))]).unwrap();
        let z = C64::new(x, y);
        prop_assume!(s.pole_distance(z) > 1e-3);
        let a = s.eval(z).unwrap();
        let b = s.eval(z + ic(2.0 * PI)).unwrap();
        prop_assert!((a - b).norm() / a.norm().max(1.0) < 1e-10);
    }

    #[test]
    fn bootstrap_identity(e in -0.52f64..0.52, x in -5.0f64..5.0, y in 0.05f64..3.09) {
        let s = make_scattering(e, vec![]).unwrap();
        let z = C64::new(x, y);
        let t = ic(PI / 3.0);
        prop_assume!(s.pole_distance(z) > 1e-3 && s.pole_distance(z + t) > 1e-3 && s.pole_distance(z - t) > 1e-3);
        let a = s.eval(z).unwrap();
        let b = s.eval(z + t).unwrap() * s.eval(z - t).unwrap();
        prop_assert!((a - b).norm() / a.norm().max(1.0) < 1e-10);
    }
}

#[test]
fn verdicts_stable_under_grid_doubling() {
    for e in [0.0, -0.4] {
        let s = make_scattering(e, vec![]).unwrap();
        let a = check_axioms(&s, &RapidityGrid::new(12.0, 1024).unwrap(), 1e-8);
        let b = check_axioms(&s, &RapidityGrid::new(12.0, 2048).unwrap(), 1e-8);
        for (x, y) in a.entries.iter().zip(b.entries.iter()) {
            assert_eq!(x.pass, y.pass, "{}", x.name);
        }
    }
}
