//! Acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qnogo_core::algebra::{apply, inner_product, state_mismatch, tensor, StateVector};
use qnogo_core::fidelity::{optimize_fidelity, sweep_lambda, FidelityMode, OptimizerConfig, QuadratureGrid};
use qnogo_core::gates::{cnot_computational, cnot_in_basis, hadamard_equatorial, hadamard_polar, UnequalAmplitudes};
use qnogo_core::seed::derive_seed;
use qnogo_core::states::{
    equatorial_gram, equatorial_pattern_residuals, polar_frame_state, polar_gram, polar_pattern_residuals,
    sample_bloch, Branch, Qubit,
};
use qnogo_core::verifier::{
    audit_inner_product, audit_unequal, audit_unequal_raw, equatorial_grid, gate_violation, machine_deviation,
    polar_grid, random_candidate_search, target_rules, MachineSpec, TargetKind, TargetTransform,
};

struct Outcome {
    pass: bool,
    summary: String,
    info: Vec<String>,
}

fn outcome(pass: bool, summary: String) -> Outcome {
    Outcome {
        pass,
        summary,
        info: Vec::new(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform in [0, 1) from a seeded stream.
fn uniform(seed: u64, i: u64) -> f64 {
    (derive_seed(seed, i) >> 11) as f64 / (1u64 << 53) as f64
}

fn worst(g: &qnogo_core::algebra::DenseOperator, t: &TargetTransform, states: &[Qubit]) -> f64 {
    states.iter().map(|q| gate_violation(g, t, q).unwrap()).fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let h9 = TargetTransform::new(TargetKind::Hadamard9);
    let h10 = TargetTransform::new(TargetKind::Hadamard10);
    let polar = polar_grid(256);
    let equatorial = equatorial_grid(256, Branch::Minus);
    let (hp, he) = (hadamard_polar(), hadamard_equatorial());
    let hp_own = worst(&hp, &h9, &polar);
    let he_own = worst(&he, &h10, &equatorial);
    let hp_cross = worst(&hp, &h10, &equatorial);
    let he_cross = worst(&he, &h9, &polar);
    outcome(
        hp_own < 1e-12 && he_own < 1e-12 && hp_cross > 0.05 && he_cross > 0.05,
        format!("H_P on polar {hp_own:.1e}, H_E on equatorial {he_own:.1e}; cross {hp_cross:.3}, {he_cross:.3}"),
    )
}

fn criterion_2() -> Outcome {
    let (mut polar, mut equatorial, mut opposite) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        for j in 0..100 {
            let pg = polar_gram(PI * i as f64 / 99.0, PI * j as f64 / 99.0);
            let eg = equatorial_gram(TAU * i as f64 / 100.0, TAU * j as f64 / 100.0);
            let (a, b) = polar_pattern_residuals(&pg);
            let (d, e) = equatorial_pattern_residuals(&eg);
            polar = polar.max(a).max(b);
            equatorial = equatorial.max(d).max(e);
            opposite = opposite.max(polar_pattern_residuals(&eg).0.min(equatorial_pattern_residuals(&pg).0));
        }
    }
    outcome(
        polar < 1e-12 && equatorial < 1e-12 && opposite > 0.1,
        format!("polar {polar:.1e}, equatorial {equatorial:.1e}, opposite pattern {opposite:.3}"),
    )
}

/// Straight from the definitions: the machine sends α|0> + β|1> to
/// α|00> + β|11>, and the ideal output is (α|0> + β|1>)^⊗2.
fn naive_clone_deviation(q: &Qubit) -> f64 {
    let (a, b) = (q.alpha(), q.beta());
    let actual = [a, c(0.0, 0.0), c(0.0, 0.0), b];
    let ideal = [a * a, a * b, b * a, b * b];
    let overlap: Complex64 = ideal.iter().zip(&actual).map(|(x, y)| x.conj() * y).sum();
    1.0 - overlap.norm_sqr()
}

fn criterion_3() -> Outcome {
    let trivial = StateVector::basis(1, 0).unwrap();
    let machine = MachineSpec::cloning(trivial.clone(), trivial).unwrap();
    let target = TargetTransform::clone_target();
    let states = sample_bloch(1000, 42).unwrap();
    let agreement = states
        .iter()
        .map(|q| (machine_deviation(&machine, &target, q).unwrap() - naive_clone_deviation(q)).abs())
        .fold(0.0, f64::max);
    let plus = machine_deviation(&machine, &target, &Qubit::plus()).unwrap();
    // With a two-dimensional ancilla left in |0> the deviation is the same.
    let zero = StateVector::basis(2, 0).unwrap();
    let with_ancilla = MachineSpec::cloning(zero.clone(), zero.clone()).unwrap();
    let plus_ancilla = machine_deviation(
        &with_ancilla,
        &TargetTransform::with_ancilla(target.kind.clone(), zero),
        &Qubit::plus(),
    )
    .unwrap();
    // 1/√2 is not a double, so "exactly 0.5" is checked to one ulp-scale bound.
    outcome(
        agreement < 1e-12 && (plus - 0.5).abs() <= 1e-15 && (plus_ancilla - 0.5).abs() <= 1e-15,
        format!("naive agreement {agreement:.1e} on 1000 states; d(|+>) = {plus:.17} (|d - 0.5| <= 1e-15)"),
    )
}

fn criterion_4() -> Outcome {
    let states = sample_bloch(500, 42).unwrap();
    let t = TargetTransform::new(TargetKind::Hadamard9);
    let s = random_candidate_search(&t, &states, 10_000, 42, 1e-3).unwrap();
    outcome(
        s.realizable == 0 && s.min_violation > 0.01,
        format!(
            "{} Haar candidates, {} realizable, min worst-violation {:.4} (candidate #{})",
            s.candidates, s.realizable, s.min_violation, s.best_index
        ),
    )
}

fn criterion_5() -> Outcome {
    let plus = Qubit::plus();
    let bar = plus.complement().to_state();
    let required = tensor(&plus.to_state(), &bar).unwrap();
    let got = apply(&cnot_computational(), &required).unwrap();
    let kicked = tensor(&Qubit::minus().to_state(), &bar).unwrap();
    let lands_on_minus = state_mismatch(&kicked, &got).unwrap();
    let fidelity = inner_product(&required, &got).unwrap().norm_sqr();

    let cnot = TargetTransform::new(TargetKind::Cnot23);
    let mut own = 0.0f64;
    for q in sample_bloch(50, 5).unwrap() {
        let g = cnot_in_basis(&q);
        for (input, want) in target_rules(&cnot, &q).unwrap() {
            own = own.max(state_mismatch(&want, &apply(&g, &input).unwrap()).unwrap());
        }
    }
    outcome(
        lands_on_minus < 1e-12 && fidelity < 1e-12 && own < 1e-12,
        format!("CNOT|+>|+bar> = |->|+bar> (mismatch {lands_on_minus:.1e}), fidelity {fidelity:.1e}; own-basis CNOT worst {own:.1e} over 50 states"),
    )
}

fn criterion_6() -> Outcome {
    let mut real_worst = 0.0f64;
    let mut real_pairs_worst = 0.0f64;
    for i in 0..100u64 {
        let t = TAU * uniform(6, 4 * i);
        let (t1, t2) = (PI * uniform(6, 4 * i + 1), PI * uniform(6, 4 * i + 2));
        let amps = UnequalAmplitudes::real(t.cos(), t.sin()).unwrap();
        real_worst = real_worst.max(audit_unequal(&amps, t1, t2));
        let target = TargetTransform::new(TargetKind::Unequal(amps));
        let (q1, q2) = (polar_frame_state(t1, Branch::Plus), polar_frame_state(t2, Branch::Plus));
        real_pairs_worst = real_pairs_worst.max(audit_inner_product(&target, (&q1, &q2)).unwrap());
    }
    let mut complex_err = 0.0f64;
    for i in 0..100u64 {
        let r = uniform(7, 5 * i).sqrt();
        let (pa, pb) = (TAU * uniform(7, 5 * i + 1), TAU * uniform(7, 5 * i + 2));
        let a = Complex64::from_polar(r, pa);
        let b = Complex64::from_polar((1.0 - r * r).sqrt(), pb);
        let (t1, t2) = (PI * uniform(7, 5 * i + 3), PI * uniform(7, 5 * i + 4));
        let closed = (a.conj() * b - a * b.conj()).norm() * ((t1 - t2) / 2.0).sin().abs();
        complex_err = complex_err.max((audit_unequal_raw(a, b, t1, t2).unwrap() - closed).abs());
    }
    outcome(
        real_worst < 1e-14 && real_pairs_worst < 1e-14 && complex_err < 1e-12,
        format!(
            "real term {real_worst:.1e} (inner-product route {real_pairs_worst:.1e}); complex closed-form error {complex_err:.1e}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let grid = QuadratureGrid::fibonacci(256).unwrap();
    let local = OptimizerConfig::default();
    let lambdas: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let sweep = sweep_lambda(&lambdas, &grid, &local).unwrap();
    let f0 = sweep[0].f_opt;
    let f1 = sweep[10].f_opt;
    let max = sweep.iter().map(|r| r.f_opt).fold(0.0, f64::max);
    let mut o = outcome(
        (f1 - 5.0 / 6.0).abs() <= 0.01 && f0 >= 0.657 && max < 0.999,
        format!(
            "local mode, 256 Fibonacci nodes: f(1) = {f1:.6}, f(0) = {f0:.6}, max over 11 lambdas {max:.6} < 0.999"
        ),
    );
    let second = OptimizerConfig {
        mode: FidelityMode::SecondRegister,
        ..local.clone()
    };
    let s1 = optimize_fidelity(1.0, &grid, &second).unwrap().record.f_opt;
    let s0 = optimize_fidelity(0.0, &grid, &second).unwrap().record.f_opt;
    let joint = OptimizerConfig {
        mode: FidelityMode::Joint,
        ..local
    };
    let j1 = optimize_fidelity(1.0, &grid, &joint).unwrap().record.f_opt;
    o.info.push(format!(
        "second-register mode taken literally: f(1) = {s1:.6}, f(0) = {s0:.6}; at lambda = 1 moving the input into register 2 is exact, so this mode cannot reproduce 5/6"
    ));
    o.info.push(format!("joint mode: f(1) = {j1:.6}"));
    o
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn criterion_8() -> Outcome {
    let expected = [
        ("clone", 2),
        ("complement", 2),
        ("conjugate", 2),
        ("hybrid_0", 2),
        ("hybrid_05", 2),
        ("hybrid_1", 2),
        ("hp_polar", 0),
        ("he_equatorial", 0),
        ("cnot", 2),
        ("hp_equatorial", 2),
        ("identity", 0),
        ("unequal_polar", 0),
        ("list_states", 0),
        ("invalid_syntax", 3),
        ("invalid_missing_extension", 3),
        ("invalid_duplicate_rule", 3),
        ("invalid_unknown_ket", 3),
        ("invalid_unnormalized", 3),
    ];
    let on_disk = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "qmachine"))
        .count();
    let mut failures = Vec::new();
    for (name, code) in expected {
        let path = corpus_dir().join(format!("{name}.qmachine"));
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_qnogo"))
                .args(["dsl-check", "--format", "json", "--seed", "42"])
                .arg(&path)
                .env_remove("QNOGO_SEED")
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        if a.status.code() != Some(code) {
            failures.push(format!("{name}: exit {:?}, expected {code}", a.status.code()));
        }
        if a.stdout != b.stdout || a.stdout.is_empty() {
            failures.push(format!("{name}: JSON differs between runs"));
        }
    }
    let invalid = expected.iter().filter(|(_, c)| *c == 3).count();
    let pass = failures.is_empty() && on_disk >= 12 && on_disk == expected.len() && invalid >= 3;
    outcome(
        pass,
        if failures.is_empty() {
            format!("{} files ({invalid} invalid): exit codes match, JSON byte-identical across runs", expected.len())
        } else {
            failures.join("; ")
        },
    )
}

/// Number, name, check and time budget.
type Criterion = (u8, &'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "exact gates on their circles", criterion_1, Duration::from_secs(1)),
        (2, "gram identities", criterion_2, Duration::from_secs(1)),
        (3, "cloning deviation vs naive evaluator", criterion_3, Duration::MAX),
        (4, "no universal Hadamard among random unitaries", criterion_4, Duration::from_secs(60)),
        (5, "CNOT witness", criterion_5, Duration::from_secs(1)),
        (6, "unequal-superposition audit", criterion_6, Duration::MAX),
        (7, "hybrid fidelity sweep", criterion_7, Duration::from_secs(600)),
        (8, "DSL corpus", criterion_8, Duration::MAX),
    ];
    let mut failed = 0;
    for (n, name, f, budget) in criteria {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = o.pass && in_time;
        let budget_note = if budget == Duration::MAX {
            String::new()
        } else if in_time {
            format!(", budget {budget:?}")
        } else {
            format!(", OVER budget {budget:?}")
        };
        println!(
            "criterion {n}: {} {name}: {} [{:.3}s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            o.summary,
            elapsed.as_secs_f64()
        );
        for line in o.info {
            println!("  INFO criterion {n}: {line}");
        }
        if !pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
