use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::Path;

use qnogo_core::dsl::{check_source, CheckOptions, MachineReport, SourceUnit};
use qnogo_core::fidelity::{sweep_lambda, FidelityMode, FidelitySweepRecord, OptimizerConfig, OptimizerMethod, QuadratureGrid};
use qnogo_core::states::{equatorial_gram, equatorial_pattern_residuals, polar_gram, polar_pattern_residuals};
use qnogo_core::verifier::{check_universal_gate, witness_search_in, StateSet, TargetKind, Verdict};
use serde_json::{json, Value};

use crate::args::{
    CircleCheckArgs, Common, DslCheckArgs, FidelitySweepArgs, Format, GateVerifyArgs, MethodArg, ModeArg,
    QuadratureArg, SetArg, WitnessArgs,
};
use crate::inputs::{parse_gate, parse_lambdas, parse_target};
use crate::report::{qubit_json, Outcome};
use crate::CliError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IMPOSSIBLE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;

fn core(e: qnogo_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn validate(common: &Common, csv_allowed: bool) -> Result<(), CliError> {
    if !(common.tol.is_finite() && common.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", common.tol)));
    }
    if common.grid_n < 2 {
        return Err(CliError::Usage(format!("--grid-n must be at least 2, got {}", common.grid_n)));
    }
    if common.format == Format::Csv && !csv_allowed {
        return Err(CliError::Usage("--format csv is only available for fidelity-sweep".into()));
    }
    Ok(())
}

fn state_set(set: SetArg) -> StateSet {
    match set {
        SetArg::Bloch => StateSet::Bloch,
        SetArg::Polar => StateSet::Polar,
        SetArg::Equatorial => StateSet::Equatorial,
    }
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "realizable": v.realizable,
        "verdict": v.label(),
        "violation": v.violation,
        "condition": v.condition.as_str(),
        "condition_explanation": v.condition.explanation(),
        "witness": v.witness.map(|(q, bar)| json!({"psi": qubit_json(&q), "psi_bar": qubit_json(&bar)})),
        "detail": v.detail,
    })
}

fn verdict_lines(out: &mut String, v: &Verdict) {
    let _ = writeln!(out, "  condition: {} ({})", v.condition.as_str(), v.condition.explanation());
    let _ = writeln!(out, "  violation: {:.6e}", v.violation);
    match v.witness {
        Some((q, bar)) => {
            let _ = writeln!(out, "  witness: |Psi> = {q}, |Psi-bar> = {bar}");
        }
        None => {
            let _ = writeln!(out, "  witness: none");
        }
    }
    let _ = writeln!(out, "  detail: {}", v.detail);
}

fn impossible_code(realizable: bool) -> (&'static str, u8) {
    if realizable {
        ("realizable", EXIT_OK)
    } else {
        ("impossible", EXIT_IMPOSSIBLE)
    }
}

pub fn gate_verify(a: &GateVerifyArgs) -> Result<Outcome, CliError> {
    let c = &a.common;
    validate(c, false)?;
    let (gate, op) = parse_gate(&a.gate)?;
    let target = parse_target(&a.target, a.a.as_deref(), a.b.as_deref())?;
    let need = if matches!(target.kind, TargetKind::Cnot23) { 4 } else { 2 };
    if op.dim() != need {
        return Err(CliError::Usage(format!(
            "gate {gate} is {0}x{0} but target {1} needs a {2}x{2} gate",
            op.dim(),
            target.name(),
            need
        )));
    }
    let states = state_set(a.set).states(c.grid_n, c.seed).map_err(core)?;
    let verdict = check_universal_gate(&op, &target, &states, c.tol).map_err(core)?;
    let (status, exit_code) = impossible_code(verdict.realizable);

    let mut human = String::new();
    let _ = writeln!(
        human,
        "gate {gate} vs {} on {} ({} states): {}",
        target.name(),
        a.set.name(),
        states.len(),
        verdict.label()
    );
    verdict_lines(&mut human, &verdict);
    let mut result = json!({
        "gate": gate,
        "target": target.name(),
        "set": a.set.name(),
        "states_checked": states.len(),
        "tol": c.tol,
        "seed": c.seed,
    });
    merge(&mut result, verdict_json(&verdict));
    Ok(Outcome {
        command: "gate-verify",
        status,
        exit_code,
        result,
        human,
        csv: None,
    })
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

pub fn witness(a: &WitnessArgs) -> Result<Outcome, CliError> {
    let c = &a.common;
    validate(c, false)?;
    let target = parse_target(&a.target, a.a.as_deref(), a.b.as_deref())?;
    let states = state_set(a.set).states(c.grid_n, c.seed).map_err(core)?;
    let w = witness_search_in(&target, &states).map_err(core)?;
    let condition = target.condition();
    let consistent = w.violation <= c.tol;
    let (status, exit_code) = if consistent { ("consistent", EXIT_OK) } else { ("impossible", EXIT_IMPOSSIBLE) };

    let mut human = String::new();
    let _ = writeln!(
        human,
        "witness search for {} on {} ({} states): {}",
        target.name(),
        a.set.name(),
        w.states_examined,
        if consistent { "CONSISTENT" } else { "IMPOSSIBLE" }
    );
    let _ = writeln!(human, "  worst pair: #{} {}", w.indices.0, w.pair.0);
    let _ = writeln!(human, "              #{} {}", w.indices.1, w.pair.1);
    let _ = writeln!(human, "  violation: {:.6e}", w.violation);
    let _ = writeln!(human, "  condition: {} ({})", condition.as_str(), condition.explanation());
    let result = json!({
        "target": target.name(),
        "set": a.set.name(),
        "states_examined": w.states_examined,
        "tol": c.tol,
        "seed": c.seed,
        "pair": [qubit_json(&w.pair.0), qubit_json(&w.pair.1)],
        "indices": [w.indices.0, w.indices.1],
        "violation": w.violation,
        "condition": condition.as_str(),
        "condition_explanation": condition.explanation(),
        "consistent": consistent,
    });
    Ok(Outcome {
        command: "witness",
        status,
        exit_code,
        result,
        human,
        csv: None,
    })
}

/// Max residuals of both identities of each circle, plus each circle's
/// pattern applied to the other circle's states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleResiduals {
    pub polar_cross: f64,
    pub polar_diagonal: f64,
    pub equatorial_cross: f64,
    pub equatorial_diagonal: f64,
    pub polar_pattern_on_equatorial: f64,
    pub equatorial_pattern_on_polar: f64,
}

pub fn circle_residuals(n: usize) -> CircleResiduals {
    let theta = |i: usize| std::f64::consts::PI * i as f64 / (n - 1) as f64;
    let phi = |i: usize| std::f64::consts::TAU * i as f64 / n as f64;
    let mut r = CircleResiduals {
        polar_cross: 0.0,
        polar_diagonal: 0.0,
        equatorial_cross: 0.0,
        equatorial_diagonal: 0.0,
        polar_pattern_on_equatorial: 0.0,
        equatorial_pattern_on_polar: 0.0,
    };
    for i in 0..n {
        for j in 0..n {
            let pg = polar_gram(theta(i), theta(j));
            let eg = equatorial_gram(phi(i), phi(j));
            let (a, b) = polar_pattern_residuals(&pg);
            let (d, e) = equatorial_pattern_residuals(&eg);
            r.polar_cross = r.polar_cross.max(a);
            r.polar_diagonal = r.polar_diagonal.max(b);
            r.equatorial_cross = r.equatorial_cross.max(d);
            r.equatorial_diagonal = r.equatorial_diagonal.max(e);
            r.polar_pattern_on_equatorial = r.polar_pattern_on_equatorial.max(polar_pattern_residuals(&eg).0);
            r.equatorial_pattern_on_polar = r.equatorial_pattern_on_polar.max(equatorial_pattern_residuals(&pg).0);
        }
    }
    r
}

/// Residual above which a cross-applied pattern counts as failing.
const CROSS_FAIL: f64 = 0.1;

pub fn circle_check(a: &CircleCheckArgs) -> Result<Outcome, CliError> {
    let c = &a.common;
    validate(c, false)?;
    let r = circle_residuals(c.grid_n);
    let identities = [
        ("polar", "cross", "<Psi1|Psi2-bar> + <Psi1-bar|Psi2> = 0", r.polar_cross),
        ("polar", "diagonal", "<Psi1|Psi2> - <Psi1-bar|Psi2-bar> = 0", r.polar_diagonal),
        ("equatorial", "cross", "<Psi1|Psi2-bar> - <Psi1-bar|Psi2> = 0", r.equatorial_cross),
        ("equatorial", "diagonal", "<Psi1|Psi2> - <Psi1-bar|Psi2-bar> = 0", r.equatorial_diagonal),
    ];
    let cross = [
        ("polar pattern on equatorial states", r.polar_pattern_on_equatorial),
        ("equatorial pattern on polar states", r.equatorial_pattern_on_polar),
    ];
    let holds = identities.iter().all(|i| i.3 <= c.tol);
    let (status, exit_code) = if holds { ("ok", EXIT_OK) } else { ("violated", EXIT_IMPOSSIBLE) };

    let mut human = String::new();
    let _ = writeln!(human, "gram identities on {0}x{0} grids: {1}", c.grid_n, if holds { "OK" } else { "VIOLATED" });
    for (circle, name, formula, v) in identities {
        let mark = if v <= c.tol { "ok" } else { "FAIL" };
        let _ = writeln!(human, "  {circle:<10} {name:<8} {formula:<40} max residual {v:.3e}  {mark}");
    }
    for (name, v) in cross {
        let mark = if v > CROSS_FAIL { "fails as expected" } else { "does not fail" };
        let _ = writeln!(human, "  cross-check: {name}: max residual {v:.3e}  {mark}");
    }
    let result = json!({
        "grid_n": c.grid_n,
        "tol": c.tol,
        "identities": identities.iter().map(|(circle, name, formula, v)| json!({
            "circle": circle,
            "identity": name,
            "formula": formula,
            "max_residual": v,
            "holds": *v <= c.tol,
        })).collect::<Vec<_>>(),
        "cross_checks": cross.iter().map(|(name, v)| json!({
            "name": name,
            "max_residual": v,
            "expected_failure": *v > CROSS_FAIL,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        command: "circle-check",
        status,
        exit_code,
        result,
        human,
        csv: None,
    })
}

pub fn fidelity_sweep(a: &FidelitySweepArgs) -> Result<Outcome, CliError> {
    let c = &a.common;
    validate(c, true)?;
    let lambdas = parse_lambdas(&a.lambda)?;
    if a.ancilla_dim.is_empty() {
        return Err(CliError::Usage("--ancilla-dim needs at least one value".into()));
    }
    let mode = match a.mode {
        ModeArg::Local => FidelityMode::Local,
        ModeArg::SecondRegister => FidelityMode::SecondRegister,
        ModeArg::Joint => FidelityMode::Joint,
    };
    let method = match a.method {
        MethodArg::Polar => OptimizerMethod::Polar,
        MethodArg::NelderMead => OptimizerMethod::NelderMead,
    };
    let (grid, quadrature) = match a.quadrature {
        QuadratureArg::Fibonacci => (QuadratureGrid::fibonacci(c.grid_n), "fibonacci"),
        QuadratureArg::MonteCarlo => (QuadratureGrid::monte_carlo(c.grid_n, c.seed), "monte-carlo"),
    };
    let grid = grid.map_err(core)?;
    let mut best: Vec<Option<FidelitySweepRecord>> = vec![None; lambdas.len()];
    for &dim in &a.ancilla_dim {
        let cfg = OptimizerConfig {
            ancilla_dim: dim,
            restarts: a.restarts,
            max_iter: a.max_iter,
            seed: c.seed,
            method,
            mode,
            ..OptimizerConfig::default()
        };
        let records = sweep_lambda(&lambdas, &grid, &cfg).map_err(core)?;
        for (slot, rec) in best.iter_mut().zip(records) {
            if slot.as_ref().is_none_or(|b| rec.f_opt > b.f_opt) {
                *slot = Some(rec);
            }
        }
    }
    let records: Vec<FidelitySweepRecord> = best.into_iter().map(|r| r.expect("one dim at least")).collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &records {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?).expect("csv is utf-8");

    let mut human = String::new();
    let _ = writeln!(
        human,
        "fidelity sweep: mode {mode}, method {method}, {} restarts, {} {quadrature} nodes",
        a.restarts,
        grid.len()
    );
    let _ = writeln!(human, "  {:>8}  {:>10}  {:>7}  {:>9}  {:>10}", "lambda", "f_opt", "ancilla", "converged", "iterations");
    for r in &records {
        let _ = writeln!(
            human,
            "  {:>8.4}  {:>10.6}  {:>7}  {:>9}  {:>10}",
            r.lambda, r.f_opt, r.ancilla_dim, r.converged, r.iterations
        );
    }
    let result = json!({
        "mode": mode.as_str(),
        "method": method.as_str(),
        "restarts": a.restarts,
        "max_iter": a.max_iter,
        "quadrature": quadrature,
        "grid_n": c.grid_n,
        "seed": c.seed,
        "ancilla_dims": a.ancilla_dim,
        "records": records,
    });
    Ok(Outcome {
        command: "fidelity-sweep",
        status: "ok",
        exit_code: EXIT_OK,
        result,
        human,
        csv: Some(csv),
    })
}

fn read_source(path: &Path) -> Result<SourceUnit, CliError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(format!("<stdin>: {e}")))?;
        return Ok(SourceUnit::new(text, "<stdin>"));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(SourceUnit::new(text, path.display().to_string()))
}

fn machine_json(r: &MachineReport) -> Value {
    let mut v = json!({
        "name": r.name,
        "set": r.set,
        "target": r.target,
        "states_checked": r.states_checked,
    });
    merge(&mut v, verdict_json(&r.verdict));
    v
}

pub fn dsl_check(a: &DslCheckArgs) -> Result<Outcome, CliError> {
    let c = &a.common;
    validate(c, false)?;
    let src = read_source(&a.file)?;
    let opts = CheckOptions {
        samples: c.grid_n,
        seed: c.seed,
        tol: c.tol,
    };
    match check_source(&src, &opts) {
        Err(diags) => {
            // Human reports on stdout already list the diagnostics.
            let echo = c.format != Format::Human || c.output.is_some();
            let mut human = String::new();
            for d in &diags {
                let line = d.render(&src.origin);
                if echo {
                    eprintln!("{line}");
                }
                let _ = writeln!(human, "{line}");
            }
            let errors = diags.iter().filter(|d| d.is_error()).count();
            let _ = writeln!(human, "{}: {errors} error(s)", src.origin);
            let result = json!({
                "file": src.origin,
                "diagnostics": diags.iter().map(|d| json!({
                    "line": d.line(),
                    "column": d.column(),
                    "severity": d.severity.to_string(),
                    "message": d.message,
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                command: "dsl-check",
                status: "error",
                exit_code: EXIT_PARSE,
                result,
                human,
                csv: None,
            })
        }
        Ok(reports) => {
            let realizable = reports.iter().all(|r| r.verdict.realizable);
            let (status, exit_code) = impossible_code(realizable);
            let human: String = reports.iter().map(|r| r.text.as_str()).collect();
            let result = json!({
                "file": src.origin,
                "samples": c.grid_n,
                "seed": c.seed,
                "tol": c.tol,
                "machines": reports.iter().map(machine_json).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                command: "dsl-check",
                status,
                exit_code,
                result,
                human,
                csv: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_on_small_grids() {
        let r = circle_residuals(64);
        assert!(r.polar_cross < 1e-12 && r.polar_diagonal < 1e-12);
        assert!(r.equatorial_cross < 1e-12 && r.equatorial_diagonal < 1e-12);
        assert!(r.polar_pattern_on_equatorial > CROSS_FAIL);
        assert!(r.equatorial_pattern_on_polar > CROSS_FAIL);
        // Two points per circle is degenerate but well defined.
        let r = circle_residuals(2);
        assert!(r.polar_cross.is_finite() && r.equatorial_cross.is_finite());
    }
}
