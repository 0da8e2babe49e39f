use num_complex::Complex64;
use proptest::prelude::*;
use qnogo_core::algebra::{
    apply, apply_antiunitary, fidelity_pure_mixed, haar_unitary, inner_product, is_unitary, tensor, AntiUnitaryMap,
    DensityOperator, StateVector,
};
use qnogo_core::gates::{cnot_computational, hadamard, hadamard_equatorial, hadamard_polar, pauli_x, pauli_y, pauli_z};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn raw_vector(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex(), dim).prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
}

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    raw_vector(dim).prop_map(|v| StateVector::new(v).unwrap().normalized().unwrap())
}

fn any_dim() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 4, 8, 16])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn haar_unitaries_preserve_norm((dim, seed) in (any_dim(), any::<u64>()), v in raw_vector(16)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(dim, &mut rng).unwrap();
        prop_assert!(is_unitary(&u, 1e-12));
        let v = StateVector::new(v[..dim].to_vec()).unwrap();
        let out = apply(&u, &v).unwrap();
        prop_assert!((out.norm() - v.norm()).abs() < 1e-12 * v.norm().max(1.0));
    }

    #[test]
    fn fixed_gates_preserve_norm(v in state(2), w in state(4)) {
        for g in [hadamard(), hadamard_polar(), hadamard_equatorial(), pauli_x(), pauli_y(), pauli_z()] {
            prop_assert!((apply(&g, &v).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        prop_assert!((apply(&cnot_computational(), &w).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inner_product_conjugate_symmetry(u in raw_vector(8), v in raw_vector(8)) {
        let (u, v) = (StateVector::new(u).unwrap(), StateVector::new(v).unwrap());
        let uv = inner_product(&u, &v).unwrap();
        let vu = inner_product(&v, &u).unwrap();
        prop_assert!((uv - vu.conj()).norm() < 1e-15);
    }

    #[test]
    fn tensor_is_associative(u in raw_vector(2), v in raw_vector(4), w in raw_vector(2)) {
        let (u, v, w) = (StateVector::new(u).unwrap(), StateVector::new(v).unwrap(), StateVector::new(w).unwrap());
        let left = tensor(&tensor(&u, &v).unwrap(), &w).unwrap();
        let right = tensor(&u, &tensor(&v, &w).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-15);
    }

    #[test]
    fn antiunitary_is_antilinear(
        seed in any::<u64>(),
        dim in any_dim(),
        cc in complex(),
        d in complex(),
        v in raw_vector(16),
        w in raw_vector(16),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = AntiUnitaryMap::new(haar_unitary(dim, &mut rng).unwrap()).unwrap();
        let v = StateVector::new(v[..dim].to_vec()).unwrap();
        let w = StateVector::new(w[..dim].to_vec()).unwrap();
        let mixed = StateVector::combination(&[(cc, &v), (d, &w)]).unwrap();
        let lhs = apply_antiunitary(&map, &mixed).unwrap();
        let mv = apply_antiunitary(&map, &v).unwrap();
        let mw = apply_antiunitary(&map, &w).unwrap();
        let rhs = StateVector::combination(&[(cc.conj(), &mv), (d.conj(), &mw)]).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn pure_state_self_fidelity(dim in any_dim(), v in raw_vector(16)) {
        let v = StateVector::new(v[..dim].to_vec()).unwrap().normalized().unwrap();
        let rho = DensityOperator::from_pure(&v).unwrap();
        prop_assert!((fidelity_pure_mixed(&v, &rho).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn kron_order_left_is_most_significant() {
    let one = StateVector::basis(2, 1).unwrap();
    let zero = StateVector::basis(2, 0).unwrap();
    // |1>|0> has its amplitude at index 2.
    assert_eq!(tensor(&one, &zero).unwrap(), StateVector::basis(4, 2).unwrap());
}
