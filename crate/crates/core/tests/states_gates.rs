use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use qnogo_core::algebra::{apply, inner_product, is_unitary, state_mismatch, tensor, StateVector};
use qnogo_core::gates::{
    cnot_computational, cnot_in_basis, hadamard_equatorial, hadamard_polar, pauli_in_basis, unequal_gate, PauliAxis,
    UnequalAmplitudes,
};
use qnogo_core::states::{
    circle_state, equatorial_frame_state, equatorial_gram, equatorial_pattern_residuals, gram_quad,
    general_pattern_residuals, polar_frame_state, polar_gram, polar_pattern_residuals, sample_bloch, Branch,
    CircleKind, GreatCircleFamily, Qubit,
};
use qnogo_core::verifier::{equatorial_grid, polar_grid, target_rules, TargetKind, TargetTransform};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn qubit() -> impl Strategy<Value = Qubit> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(a, b, d, e)| a * a + b * b + d * d + e * e > 1e-3)
        .prop_map(|(a, b, d, e)| {
            let n = (a * a + b * b + d * d + e * e).sqrt();
            Qubit::new(c(a / n, b / n), c(d / n, e / n)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn complement_is_orthogonal_involution(q in qubit()) {
        let bar = q.complement();
        prop_assert!(inner_product(&q.to_state(), &bar.to_state()).unwrap().norm() < 1e-15);
        let back = bar.complement();
        prop_assert!((back.alpha() + q.alpha()).norm() < 1e-15);
        prop_assert!((back.beta() + q.beta()).norm() < 1e-15);
    }

    #[test]
    fn general_gram_identities(q1 in qubit(), q2 in qubit()) {
        let (r1, r2) = general_pattern_residuals(&gram_quad(&q1, &q2));
        prop_assert!(r1 < 1e-14 && r2 < 1e-14);
    }

    #[test]
    fn cnot_in_own_basis_obeys_rules(q in qubit()) {
        let g = cnot_in_basis(&q);
        prop_assert!(is_unitary(&g, 1e-12));
        for (input, want) in target_rules(&TargetTransform::new(TargetKind::Cnot23), &q).unwrap() {
            prop_assert!(state_mismatch(&want, &apply(&g, &input).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn paulis_in_basis_anticommute(q in qubit()) {
        let x = pauli_in_basis(&q, PauliAxis::X);
        let z = pauli_in_basis(&q, PauliAxis::Z);
        let anti = x.matmul(&z).unwrap().add(&z.matmul(&x).unwrap()).unwrap();
        prop_assert!(anti.entries().iter().all(|e| e.norm() < 1e-12));
        prop_assert!(is_unitary(&x, 1e-12) && is_unitary(&z, 1e-12));
    }

    #[test]
    fn real_unequal_gates_are_unitary(t in 0.0f64..TAU) {
        let g = unequal_gate(UnequalAmplitudes::real(t.cos(), t.sin()).unwrap()).unwrap();
        prop_assert!(is_unitary(&g, 1e-12));
    }
}

#[test]
fn polar_and_equatorial_patterns_on_grids() {
    let mut worst = 0.0f64;
    for i in 0..100 {
        for j in 0..100 {
            let (t1, t2) = (PI * i as f64 / 99.0, PI * j as f64 / 99.0);
            let (a, b) = polar_pattern_residuals(&polar_gram(t1, t2));
            let (p1, p2) = (TAU * i as f64 / 100.0, TAU * j as f64 / 100.0);
            let (d, e) = equatorial_pattern_residuals(&equatorial_gram(p1, p2));
            worst = worst.max(a).max(b).max(d).max(e);
        }
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn patterns_fail_off_their_circle() {
    // Generic pair, neither polar nor equatorial.
    let q1 = Qubit::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
    let q2 = Qubit::new(c(0.8, 0.0), c(0.36, 0.48)).unwrap();
    let g = gram_quad(&q1, &q2);
    assert!(polar_pattern_residuals(&g).0 > 0.1);
    assert!(equatorial_pattern_residuals(&g).0 > 0.1);
    // And each circle fails the other circle's pattern.
    assert!(equatorial_pattern_residuals(&polar_gram(0.3, 2.0)).0 > 0.1);
    assert!(polar_pattern_residuals(&equatorial_gram(0.3, 2.0)).0 > 0.1);
}

#[test]
fn minus_members_are_complements_of_plus_members() {
    for k in 0..64 {
        let t = PI * k as f64 / 63.0;
        let p = TAU * k as f64 / 64.0;
        let polar = circle_state(GreatCircleFamily::new(CircleKind::PolarPlus, t).unwrap());
        let polar_bar = circle_state(GreatCircleFamily::new(CircleKind::PolarMinus, t).unwrap());
        let eq = circle_state(GreatCircleFamily::new(CircleKind::EquatorialPlus, p).unwrap());
        let eq_bar = circle_state(GreatCircleFamily::new(CircleKind::EquatorialMinus, p).unwrap());
        for (q, bar) in [(polar, polar_bar), (eq, eq_bar)] {
            let want = q.complement();
            assert!((want.alpha() - bar.alpha()).norm() < 1e-15);
            assert!((want.beta() - bar.beta()).norm() < 1e-15);
        }
    }
}

#[test]
fn literal_equatorial_image_is_the_mirrored_azimuth() {
    // H(cos(φ/2)|0> - i sin(φ/2)|1>) sent through H_E, as written out for the
    // equatorial construction, lands on the image of the state at azimuth -φ.
    for k in 0..32 {
        let phi = TAU * k as f64 / 32.0;
        let literal = StateVector::new(vec![
            c(1.0, 1.0) * Complex64::from_polar(0.5, phi / 2.0),
            c(1.0, -1.0) * Complex64::from_polar(0.5, -phi / 2.0),
        ])
        .unwrap();
        let mirrored = equatorial_frame_state(-phi, Branch::Plus).to_state();
        let image = apply(&hadamard_equatorial(), &mirrored).unwrap();
        assert!(image.max_abs_diff(&literal).unwrap() < 1e-12);
    }
}

#[test]
fn frame_states_lie_on_their_circles() {
    for k in 0..16 {
        let x = 0.4 * k as f64;
        let p = polar_frame_state(x, Branch::Plus);
        assert!(p.alpha().im == 0.0 && p.beta().im == 0.0);
        let e = equatorial_frame_state(x, Branch::Minus);
        assert!((e.alpha().norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((e.beta().norm() - FRAC_1_SQRT_2).abs() < 1e-15);
    }
}

#[test]
fn bloch_sample_is_centred() {
    let states = sample_bloch(10_000, 7).unwrap();
    let mut mean = [0.0; 3];
    for q in &states {
        for (m, v) in mean.iter_mut().zip(q.bloch_vector()) {
            *m += v / states.len() as f64;
        }
    }
    let norm = mean.iter().map(|m| m * m).sum::<f64>().sqrt();
    assert!(norm < 0.05, "{norm}");
    assert_eq!(sample_bloch(50, 7).unwrap(), sample_bloch(50, 7).unwrap());
}

#[test]
fn hadamard_variants_cross_fail() {
    let h9 = TargetTransform::new(TargetKind::Hadamard9);
    let h10 = TargetTransform::new(TargetKind::Hadamard10);
    let worst = |g, t: &TargetTransform, states: Vec<Qubit>| {
        states
            .iter()
            .flat_map(|q| target_rules(t, q).unwrap())
            .map(|(i, o)| state_mismatch(&o, &apply(g, &i).unwrap()).unwrap())
            .fold(0.0, f64::max)
    };
    let hp = hadamard_polar();
    let he = hadamard_equatorial();
    assert!(worst(&hp, &h9, polar_grid(256)) < 1e-12);
    assert!(worst(&he, &h10, equatorial_grid(256, Branch::Minus)) < 1e-12);
    assert!(worst(&hp, &h10, equatorial_grid(256, Branch::Minus)) > 0.1);
    assert!(worst(&he, &h9, polar_grid(256)) > 0.1);
}

#[test]
fn equal_unequal_gate_matches_polar_hadamard() {
    let ug = unequal_gate(UnequalAmplitudes::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap()).unwrap();
    let hp = hadamard_polar();
    let phase = ug.get(0, 0) / hp.get(0, 0);
    assert!((phase.norm() - 1.0).abs() < 1e-12);
    assert!(ug.max_abs_diff(&hp.scaled(phase)).unwrap() < 1e-12);
}

#[test]
fn cnot_on_plus_breaks_second_rule() {
    let plus = Qubit::plus();
    let bar = plus.complement().to_state();
    // Second rule: |Ψ>|Ψ̄> must stay put, but CNOT kicks the phase back.
    let input = tensor(&plus.to_state(), &bar).unwrap();
    let got = apply(&cnot_computational(), &input).unwrap();
    let kicked = tensor(&Qubit::minus().to_state(), &bar).unwrap();
    assert!(state_mismatch(&kicked, &got).unwrap() < 1e-12);
    assert!(inner_product(&input, &got).unwrap().norm_sqr() < 1e-12);
}
