use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;
use proptest::prelude::*;
use qnogo_core::algebra::StateVector;
use qnogo_core::fidelity::{
    average_fidelity, hybrid_target, optimize_fidelity, sweep_lambda, FidelityMode, FidelityObjective, IsometryParam,
    OptimizerConfig, OptimizerMethod, QuadratureGrid,
};
use qnogo_core::states::Qubit;
use qnogo_core::verifier::{ideal_output, TargetTransform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const Z: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Plain-array machine on (register 1, register 2, ancilla) with a qubit
/// ancilla: `out[i][(r1 * 2 + r2) * 2 + a]` is the image of `|i>`.
type Outputs = [[Complex64; 8]; 2];

fn idx(r1: usize, r2: usize, a: usize) -> usize {
    (r1 * 2 + r2) * 2 + a
}

/// Local score evaluated from scratch: mean of register-1 fidelity with `Ψ`
/// and register-2 fidelity with `f = sqrt(λ)Ψ + sqrt(1-λ)Ψ̄`.
fn naive_local(out: &Outputs, lambda: f64, grid: &QuadratureGrid) -> f64 {
    let mut total = 0.0;
    for (q, w) in grid.nodes() {
        let (a, b) = (q.alpha(), q.beta());
        let psi = [a, b];
        let bar = [-b.conj(), a.conj()];
        let f = [
            lambda.sqrt() * psi[0] + (1.0 - lambda).sqrt() * bar[0],
            lambda.sqrt() * psi[1] + (1.0 - lambda).sqrt() * bar[1],
        ];
        let v: Vec<Complex64> = (0..8).map(|k| a * out[0][k] + b * out[1][k]).collect();
        let mut f1 = 0.0;
        for r2 in 0..2 {
            for anc in 0..2 {
                let s: Complex64 = (0..2).map(|r1| psi[r1].conj() * v[idx(r1, r2, anc)]).sum();
                f1 += s.norm_sqr();
            }
        }
        let mut f2 = 0.0;
        for r1 in 0..2 {
            for anc in 0..2 {
                let s: Complex64 = (0..2).map(|r2| f[r2].conj() * v[idx(r1, r2, anc)]).sum();
                f2 += s.norm_sqr();
            }
        }
        total += w * 0.5 * (f1 + f2);
    }
    total
}

/// Symmetric cloner family: `|0> → cos t|00>|A0> + sin t (|01>+|10>)/√2 |A1>`,
/// `|1> → s [cos t|11>|A1> + sin t (|01>+|10>)/√2 |A0>]`, with the three
/// output slots (clone A, clone B, ancilla) routed to the registers by `perm`.
fn cloner_family(t: f64, sign: f64, a0: usize, perm: [usize; 3]) -> Outputs {
    let mut out = [[Z; 8]; 2];
    let (ct, st) = (t.cos(), t.sin() * FRAC_1_SQRT_2);
    let a1 = 1 - a0;
    let mut put = |i: usize, slots: [usize; 3], amp: f64| {
        let mut regs = [0usize; 3];
        for (slot, &value) in slots.iter().enumerate() {
            regs[perm[slot]] = value;
        }
        out[i][idx(regs[0], regs[1], regs[2])] += c(amp, 0.0);
    };
    put(0, [0, 0, a0], ct);
    put(0, [0, 1, a1], st);
    put(0, [1, 0, a1], st);
    put(1, [1, 1, a1], sign * ct);
    put(1, [0, 1, a0], sign * st);
    put(1, [1, 0, a0], sign * st);
    out
}

fn family_oracle(lambda: f64, grid: &QuadratureGrid, perms: &[[usize; 3]]) -> f64 {
    let mut best = 0.0f64;
    for &perm in perms {
        for a0 in 0..2 {
            for sign in [1.0, -1.0] {
                for k in 0..=400 {
                    let t = FRAC_PI_2 * k as f64 / 400.0;
                    best = best.max(naive_local(&cloner_family(t, sign, a0, perm), lambda, grid));
                }
            }
        }
    }
    best
}

fn isometry_of(out: &Outputs) -> IsometryParam {
    let m = (0..8).flat_map(|r| [out[0][r], out[1][r]]).collect();
    IsometryParam::new(2, m).unwrap()
}

fn grid() -> QuadratureGrid {
    QuadratureGrid::fibonacci(256).unwrap()
}

#[test]
fn naive_evaluator_agrees_with_library_route() {
    let g = grid();
    let out = cloner_family(0.6, -1.0, 1, [0, 2, 1]);
    for lambda in [0.0, 0.4, 1.0] {
        let lib = average_fidelity(&isometry_of(&out), lambda, &g, FidelityMode::Local).unwrap();
        assert!((lib - naive_local(&out, lambda, &g)).abs() < 1e-12);
    }
}

#[test]
fn cloning_endpoint_reaches_symmetric_optimum() {
    let g = grid();
    let oracle = family_oracle(1.0, &g, &[[0, 1, 2]]);
    assert!((oracle - 5.0 / 6.0).abs() < 1e-3, "{oracle}");
    // The optimum sits at cos²t = 2/3.
    let t = (2.0f64 / 3.0).sqrt().acos();
    let bh = naive_local(&cloner_family(t, 1.0, 0, [0, 1, 2]), 1.0, &g);
    assert!((bh - 5.0 / 6.0).abs() < 1e-3);
    let opt = optimize_fidelity(1.0, &g, &OptimizerConfig::default()).unwrap();
    assert!(opt.record.f_opt >= oracle - 1e-6, "{} < {oracle}", opt.record.f_opt);
    assert!((opt.record.f_opt - 5.0 / 6.0).abs() < 0.01);
}

#[test]
fn complementing_endpoint_beats_family_oracle() {
    let g = grid();
    // Any routing of (clone, clone, ancilla) onto (register 1, register 2, ancilla).
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let oracle = family_oracle(0.0, &g, &perms);
    assert!(oracle >= 2.0 / 3.0 - 0.01, "{oracle}");
    let opt = optimize_fidelity(0.0, &g, &OptimizerConfig::default()).unwrap();
    assert!(opt.record.f_opt >= oracle - 1e-6, "{} < {oracle}", opt.record.f_opt);
    assert!(opt.record.f_opt < 0.999);
}

#[test]
fn single_node_machine_is_exact() {
    for lambda in [0.0, 0.3, 1.0] {
        let q = Qubit::zero();
        let f = hybrid_target(lambda, &q).unwrap().to_state();
        let col0 = qnogo_core::algebra::tensor_all(&[&q.to_state(), &f, &StateVector::basis(2, 0).unwrap()]).unwrap();
        let col1 = StateVector::basis(8, 7).unwrap();
        let col1 = col1.add_scaled(-qnogo_core::algebra::inner_product(&col0, &col1).unwrap(), &col0).unwrap().normalized().unwrap();
        let v = IsometryParam::from_columns(&col0, &col1).unwrap();
        let g = QuadratureGrid::single(q);
        for mode in [FidelityMode::Local, FidelityMode::SecondRegister, FidelityMode::Joint] {
            assert!((average_fidelity(&v, lambda, &g, mode).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn basis_cloner_extended_linearly_is_not_exact() {
    let v = IsometryParam::from_columns(&StateVector::basis(8, 0).unwrap(), &StateVector::basis(8, 6).unwrap()).unwrap();
    for mode in [FidelityMode::Local, FidelityMode::SecondRegister, FidelityMode::Joint] {
        assert!(average_fidelity(&v, 1.0, &grid(), mode).unwrap() < 1.0 - 1e-3);
    }
}

#[test]
fn second_register_alone_is_degenerate_at_cloning_endpoint() {
    // Moving the input into register 2 scores 1 on register 2.
    let v = IsometryParam::from_columns(&StateVector::basis(8, 0).unwrap(), &StateVector::basis(8, 2).unwrap()).unwrap();
    let f = average_fidelity(&v, 1.0, &grid(), FidelityMode::SecondRegister).unwrap();
    assert!((f - 1.0).abs() < 1e-12);
}

#[test]
fn joint_target_endpoints_are_clone_and_complement() {
    let clone = TargetTransform::clone_target();
    let complement = TargetTransform::new(qnogo_core::verifier::TargetKind::CloneLike(
        qnogo_core::algebra::GeneralKMap::antiunitary(qnogo_core::algebra::AntiUnitaryMap::complement()).unwrap(),
    ));
    for (q, _) in grid().nodes() {
        let psi = q.to_state();
        for (lambda, t) in [(1.0, &clone), (0.0, &complement)] {
            let f = hybrid_target(lambda, q).unwrap().to_state();
            let joint = qnogo_core::algebra::tensor_all(&[&psi, &f]).unwrap();
            assert!(joint.max_abs_diff(&ideal_output(t, q).unwrap()).unwrap() < 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quadratic_form_matches_partial_trace_route(seed in any::<u64>(), lambda in 0.0f64..=1.0, dq in prop::sample::select(vec![1usize, 2, 4])) {
        let g = QuadratureGrid::fibonacci(24).unwrap();
        let v = IsometryParam::random(dq, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for mode in [FidelityMode::Local, FidelityMode::SecondRegister, FidelityMode::Joint] {
            let slow = average_fidelity(&v, lambda, &g, mode).unwrap();
            let fast = FidelityObjective::new(lambda, &g, mode, dq).unwrap().value(&v);
            prop_assert!((slow - fast).abs() < 1e-12);
            prop_assert!((-1e-12..=1.0 + 1e-9).contains(&fast));
        }
    }
}

fn small_cfg(method: OptimizerMethod, restarts: usize) -> OptimizerConfig {
    OptimizerConfig {
        restarts,
        max_iter: if method == OptimizerMethod::Polar { 2000 } else { 3000 },
        method,
        ..OptimizerConfig::default()
    }
}

#[test]
fn optimizer_keeps_isometry_and_monotone_trace() {
    let g = QuadratureGrid::fibonacci(64).unwrap();
    for method in [OptimizerMethod::Polar, OptimizerMethod::NelderMead] {
        for lambda in [0.0, 0.5, 1.0] {
            let opt = optimize_fidelity(lambda, &g, &small_cfg(method, 3)).unwrap();
            assert!(opt.isometry.isometry_residual() < 1e-8);
            assert!(opt.trace.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{method} trace not monotone");
            assert!((0.0..=1.0).contains(&opt.record.f_opt));
        }
    }
}

#[test]
fn more_restarts_never_hurt() {
    let g = QuadratureGrid::fibonacci(64).unwrap();
    for method in [OptimizerMethod::Polar, OptimizerMethod::NelderMead] {
        let one = optimize_fidelity(0.5, &g, &small_cfg(method, 1)).unwrap();
        let many = optimize_fidelity(0.5, &g, &small_cfg(method, 6)).unwrap();
        assert!(many.record.f_opt >= one.record.f_opt);
    }
}

#[test]
fn sweep_is_deterministic_and_smooth() {
    let g = grid();
    let cfg = OptimizerConfig::default();
    let lambdas: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
    let a = sweep_lambda(&lambdas, &g, &cfg).unwrap();
    let b = sweep_lambda(&lambdas, &g, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 21);
    for w in a.windows(2) {
        assert!((w[1].f_opt - w[0].f_opt).abs() < 0.05, "{:?}", w);
    }
    let single = optimize_fidelity(1.0, &g, &cfg).unwrap();
    assert_eq!(a[20].f_opt, single.record.f_opt);
}
