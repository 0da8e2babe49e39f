use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write;

use num_complex::Complex64;

use crate::algebra::{
    apply_antiunitary, c, factor_product, inner_product, orthonormalize_columns, AntiUnitaryMap,
    DenseOperator, GeneralKMap, StateVector, ZERO,
};
use crate::error::{Error, Result};
use crate::gates::{cnot_computational, hadamard, hadamard_equatorial, hadamard_polar, unequal_gate, UnequalAmplitudes};
use crate::states::Qubit;
use crate::verifier::{
    check_basis, check_machine, check_universal_gate, AncillaMode, Extension, MachineSpec, StateSet, TargetKind,
    TargetTransform, Verdict,
};

use super::ast::*;
use super::{Diagnostic, Pos};

/// How far a written state may be from unit norm before it is rejected;
/// accepted states are renormalized.
pub const DSL_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Requirement {
    /// Only the basis rules themselves.
    Basis,
    Universal { set: StateSet, target: TargetTransform },
}

/// A machine ready to check. Clone-like and basis requirements carry a
/// [`MachineSpec`]; gate targets carry a candidate operator.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledMachine {
    pub name: String,
    pub pos: Pos,
    pub machine: Option<MachineSpec>,
    pub candidate: Option<DenseOperator>,
    pub requirement: Requirement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// States drawn from `bloch`, `polar` and `equatorial` sets.
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            samples: 256,
            seed: 42,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineReport {
    pub name: String,
    pub set: Option<String>,
    pub target: String,
    pub states_checked: usize,
    pub verdict: Verdict,
    pub text: String,
}

struct Ctx {
    diagnostics: Vec<Diagnostic>,
}

impl Ctx {
    fn error<T>(&mut self, pos: Pos, message: impl Into<String>) -> Option<T> {
        self.diagnostics.push(Diagnostic::error(pos, message));
        None
    }
}

fn label_state(ch: char) -> [Complex64; 2] {
    match ch {
        '0' => [c(1.0, 0.0), ZERO],
        '1' => [ZERO, c(1.0, 0.0)],
        '+' => [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        _ => [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
    }
}

/// Evaluates a ket expression without normalizing it.
fn eval_raw(ctx: &mut Ctx, e: &KetExpr) -> Option<StateVector> {
    let mut total: Option<Vec<Complex64>> = None;
    for t in &e.terms {
        let labels: Vec<char> = t.kets.iter().flat_map(|k| k.chars()).collect();
        if labels.len() > 4 {
            return ctx.error(e.pos, format!("ket expression has {} qubits; at most 4 are supported", labels.len()));
        }
        let mut amps = vec![t.coeff];
        for ch in labels {
            let s = label_state(ch);
            amps = amps.iter().flat_map(|a| [a * s[0], a * s[1]]).collect();
        }
        match &mut total {
            None => total = Some(amps),
            Some(acc) if acc.len() == amps.len() => acc.iter_mut().zip(&amps).for_each(|(x, y)| *x += y),
            Some(acc) => {
                let (l, r) = (acc.len(), amps.len());
                return ctx.error(e.pos, format!("terms of a ket expression differ in dimension ({l} vs {r})"));
            }
        }
    }
    let amps = total?;
    match StateVector::new(amps) {
        Ok(v) => Some(v),
        Err(err) => ctx.error(e.pos, format!("invalid ket expression: {err}")),
    }
}

/// Evaluates and renormalizes a ket expression whose norm is within
/// [`DSL_NORM_TOL`] of one.
fn eval_state(ctx: &mut Ctx, e: &KetExpr, what: &str) -> Option<StateVector> {
    let v = eval_raw(ctx, e)?;
    let n = v.norm_sqr();
    if (n - 1.0).abs() > DSL_NORM_TOL {
        return ctx.error(e.pos, format!("{what} not normalized (norm squared {n})"));
    }
    v.normalized().ok()
}

fn eval_qubit(ctx: &mut Ctx, e: &KetExpr, what: &str) -> Option<Qubit> {
    let v = eval_state(ctx, e, what)?;
    if v.dim() != 2 {
        return ctx.error(e.pos, format!("{what} must be a single qubit, found dimension {}", v.dim()));
    }
    Qubit::from_state(&v).ok()
}

fn amplitudes(ctx: &mut Ctx, pos: Pos, a: Complex64, b: Complex64) -> Option<UnequalAmplitudes> {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    match UnequalAmplitudes::with_tolerance(a, b, DSL_NORM_TOL) {
        Ok(_) => UnequalAmplitudes::new(a / n, b / n).ok(),
        Err(err) => ctx.error(pos, format!("amplitudes a, b: {err}")),
    }
}

fn anti_map(kind: AntiKind) -> AntiUnitaryMap {
    match kind {
        AntiKind::Complement => AntiUnitaryMap::complement(),
        AntiKind::Conjugate => AntiUnitaryMap::conjugation(2).expect("dim 2"),
    }
}

fn target_transform(ctx: &mut Ctx, pos: Pos, t: &TargetClause) -> Option<TargetTransform> {
    let kmap = |k: Result<GeneralKMap>| TargetKind::CloneLike(k.expect("valid map"));
    let kind = match t {
        TargetClause::Clone => return Some(TargetTransform::clone_target()),
        TargetClause::Complement => kmap(GeneralKMap::antiunitary(anti_map(AntiKind::Complement))),
        TargetClause::Conjugate => kmap(GeneralKMap::antiunitary(anti_map(AntiKind::Conjugate))),
        TargetClause::Hybrid { lambda } => match GeneralKMap::clone_complement(*lambda) {
            Ok(k) => TargetKind::CloneLike(k),
            Err(err) => return ctx.error(pos, format!("hybrid target: {err}")),
        },
        TargetClause::Hadamard9 => TargetKind::Hadamard9,
        TargetClause::Hadamard10 => TargetKind::Hadamard10,
        TargetClause::Unequal { a, b } => TargetKind::Unequal(amplitudes(ctx, pos, *a, *b)?),
        TargetClause::Cnot => TargetKind::Cnot23,
    };
    Some(TargetTransform::new(kind))
}

fn state_set(ctx: &mut Ctx, s: &SetClause) -> Option<StateSet> {
    Some(match s {
        SetClause::Bloch => StateSet::Bloch,
        SetClause::Polar => StateSet::Polar,
        SetClause::Equatorial => StateSet::Equatorial,
        SetClause::List(items) => {
            let mut states = Vec::with_capacity(items.len());
            let mut ok = true;
            for e in items {
                match eval_qubit(ctx, e, "listed state") {
                    Some(q) => states.push(q),
                    None => ok = false,
                }
            }
            if !ok {
                return None;
            }
            StateSet::List(states)
        }
    })
}

fn candidate_operator(ctx: &mut Ctx, pos: Pos, c: &CandidateClause) -> Option<DenseOperator> {
    Some(match c {
        CandidateClause::H => hadamard(),
        CandidateClause::HP => hadamard_polar(),
        CandidateClause::HE => hadamard_equatorial(),
        CandidateClause::Cnot => cnot_computational(),
        CandidateClause::UG { a, b } => {
            let amps = amplitudes(ctx, pos, *a, *b)?;
            match unequal_gate(amps) {
                Ok(g) => g,
                Err(err) => return ctx.error(pos, format!("candidate UG: {err}")),
            }
        }
    })
}

/// Column `i` of the gate is the output of rule `i`.
fn gate_from_rules(out0: &StateVector, out1: &StateVector) -> Option<DenseOperator> {
    let (a, b) = (out0.amplitudes(), out1.amplitudes());
    DenseOperator::from_rows(&[vec![a[0], b[0]], vec![a[1], b[1]]]).ok()
}

/// Splits `out_i = |i> ⊗ u_i ⊗ q_i`, with the phase kept on `u_i`.
fn split_hybrid_output(ctx: &mut Ctx, pos: Pos, i: usize, out: &StateVector) -> Option<(StateVector, StateVector)> {
    let dq = out.dim() / 4;
    let fail = |ctx: &mut Ctx| {
        ctx.error(
            pos,
            format!("hybrid machines need product outputs |{i}> (x) u (x) q; rule for |{i}> is not of that form"),
        )
    };
    let Some((first, rest)) = factor_product(out, 2, 2 * dq, DSL_NORM_TOL) else {
        return fail(ctx);
    };
    if first.amplitudes()[1 - i].norm() > DSL_NORM_TOL {
        return fail(ctx);
    }
    let rest = rest.scaled(first.amplitudes()[i]);
    let Some((u, q)) = factor_product(&rest, 2, dq, DSL_NORM_TOL) else {
        return fail(ctx);
    };
    // Ancilla phase convention: largest component real and positive.
    let big = q
        .amplitudes()
        .iter()
        .copied()
        .fold(ZERO, |acc, z| if z.norm() > acc.norm() { z } else { acc });
    let phase = big / big.norm();
    Some((u.scaled(phase), q.scaled(phase.conj())))
}

/// Recovers `K = sqrt(λ) U + sqrt(1-λ) A` from the images `K|0>`, `K|1>`.
fn hybrid_kmap(ctx: &mut Ctx, pos: Pos, lambda: f64, anti: AntiKind, u: [&StateVector; 2]) -> Option<GeneralKMap> {
    let a = anti_map(anti);
    let basis = [StateVector::basis(2, 0).ok()?, StateVector::basis(2, 1).ok()?];
    let anti_images = [
        apply_antiunitary(&a, &basis[0]).ok()?,
        apply_antiunitary(&a, &basis[1]).ok()?,
    ];
    let unitary = if lambda == 0.0 {
        for i in 0..2 {
            if u[i].max_abs_diff(&anti_images[i]).unwrap_or(f64::INFINITY) > DSL_NORM_TOL {
                return ctx.error(pos, format!("hybrid(lambda=0) rule for |{i}> does not match the antiunitary part"));
            }
        }
        DenseOperator::identity(2).ok()?
    } else {
        let (sl, sa) = (lambda.sqrt(), (1.0 - lambda).sqrt());
        let cols: Vec<StateVector> = (0..2)
            .map(|i| u[i].add_scaled(c(-sa, 0.0), &anti_images[i]).map(|v| v.scaled(c(1.0 / sl, 0.0))))
            .collect::<Result<_>>()
            .ok()?;
        let mut m = vec![cols[0].amplitudes()[0], cols[1].amplitudes()[0], cols[0].amplitudes()[1], cols[1].amplitudes()[1]];
        let raw = DenseOperator::new(2, m.clone()).ok()?;
        let residual = raw.unitarity_residual();
        if residual > DSL_NORM_TOL || !orthonormalize_columns(2, 2, &mut m) {
            return ctx.error(
                pos,
                format!("hybrid rules imply a non-unitary linear part (residual {residual:.3e})"),
            );
        }
        DenseOperator::new(2, m).ok()?
    };
    match GeneralKMap::new(lambda, unitary, a) {
        Ok(k) => Some(k),
        Err(err) => ctx.error(pos, format!("hybrid extension: {err}")),
    }
}

fn compile_machine(ctx: &mut Ctx, m: &MachineDecl) -> Option<CompiledMachine> {
    let start = ctx.diagnostics.len();
    let ext = m.extension()?.clone();
    let req = m.requirement()?.clone();

    let mut outs: [Option<(Pos, StateVector)>; 2] = [None, None];
    for (s, input, e) in m.rules() {
        if let Some(v) = eval_state(ctx, e, "output") {
            outs[input as usize] = Some((s.pos, v));
        }
    }
    let candidate = m
        .candidate()
        .and_then(|(s, c)| candidate_operator(ctx, s.pos, c).map(|op| (s.pos, op)));

    let requirement = match &req {
        RequirementClause::Basis => Requirement::Basis,
        RequirementClause::Universal { set, target } => {
            let set = state_set(ctx, set);
            let target = target_transform(ctx, m.pos, target);
            match (set, target) {
                (Some(set), Some(target)) => Requirement::Universal { set, target },
                _ => return None,
            }
        }
    };
    let gate_target = matches!(&requirement, Requirement::Universal { target, .. } if target.is_gate_target());

    if gate_target {
        if ext != ExtensionClause::Linear {
            return ctx.error(m.pos, "gate targets need 'extend linear'");
        }
        let want = match &requirement {
            Requirement::Universal { target, .. } if matches!(target.kind, TargetKind::Cnot23) => 4,
            _ => 2,
        };
        let from_rules = match (&outs[0], &outs[1]) {
            (Some((p0, o0)), Some((_, o1))) => {
                if o0.dim() != 2 || o1.dim() != 2 {
                    return ctx.error(*p0, "rules of a gate machine must map to single-qubit states");
                }
                gate_from_rules(o0, o1)
            }
            (None, None) => None,
            (Some((p, _)), None) | (None, Some((p, _))) => {
                return ctx.error(*p, "a gate machine needs rules for both |0> and |1>")
            }
        };
        let candidate = match (candidate, from_rules) {
            (Some((p, op)), Some(rules)) => {
                let gap = op.max_abs_diff(&rules).unwrap_or(f64::INFINITY);
                if gap > DSL_NORM_TOL {
                    return ctx.error(p, format!("candidate disagrees with the basis rules (max entry gap {gap:.3e})"));
                }
                op
            }
            (Some((_, op)), None) => op,
            (None, Some(rules)) => rules,
            (None, None) => return ctx.error(m.pos, "a gate target needs a candidate clause or basis rules"),
        };
        if candidate.dim() != want {
            return ctx.error(
                m.pos,
                format!("candidate acts on dimension {} but the target needs {want}", candidate.dim()),
            );
        }
        let residual = candidate.unitarity_residual();
        if residual > DSL_NORM_TOL {
            return ctx.error(m.pos, format!("candidate is not unitary (residual {residual:.3e})"));
        }
        if ctx.diagnostics.len() > start {
            return None;
        }
        return Some(CompiledMachine {
            name: m.name.clone(),
            pos: m.pos,
            machine: None,
            candidate: Some(candidate),
            requirement,
        });
    }

    if let Some((p, _)) = candidate {
        return ctx.error(p, "candidate clauses only apply to gate targets");
    }
    let (Some((p0, out0)), Some((p1, out1))) = (outs[0].clone(), outs[1].clone()) else {
        if ctx.diagnostics.len() == start {
            let missing = if outs[0].is_none() { 0 } else { 1 };
            ctx.error::<()>(m.pos, format!("missing basis rule for |{missing}>"));
        }
        return None;
    };
    if out0.dim() != out1.dim() {
        return ctx.error(
            p1,
            format!("basis rules differ in dimension ({} vs {})", out0.dim(), out1.dim()),
        );
    }
    if !matches!(out0.dim(), 4 | 8 | 16) {
        return ctx.error(p0, format!("machine outputs must have dimension 4, 8 or 16, found {}", out0.dim()));
    }
    let dq = out0.dim() / 4;
    let overlap = inner_product(&out0, &out1).ok()?;
    if overlap.norm() > DSL_NORM_TOL {
        return ctx.error(p1, format!("basis outputs are not orthogonal (|<out0|out1>| = {:.3e})", overlap.norm()));
    }
    // Gram–Schmidt the second output against the first.
    let out1 = out1.add_scaled(-overlap, &out0).ok()?.normalized().ok()?;

    let blank = match m.blank() {
        Some(e) => eval_qubit(ctx, e, "blank state")?.to_state(),
        None => StateVector::basis(2, 0).ok()?,
    };
    let ancilla = match m.ancilla() {
        Some(e) => {
            let v = eval_state(ctx, e, "ancilla state")?;
            if v.dim() != dq {
                return ctx.error(e.pos, format!("ancilla has dimension {} but the outputs imply {dq}", v.dim()));
            }
            v
        }
        None => StateVector::basis(dq, 0).ok()?,
    };

    let built = match ext {
        ExtensionClause::Linear => MachineSpec::new(out0, out1, blank, ancilla, Extension::Linear),
        ExtensionClause::Antilinear => MachineSpec::new(out0, out1, blank, ancilla, Extension::Antilinear),
        ExtensionClause::Hybrid { lambda, anti } => {
            let (u0, q0) = split_hybrid_output(ctx, p0, 0, &out0)?;
            let (u1, q1) = split_hybrid_output(ctx, p1, 1, &out1)?;
            let kmap = hybrid_kmap(ctx, m.pos, lambda, anti.unwrap_or(AntiKind::Complement), [&u0, &u1])?;
            MachineSpec::hybrid(kmap, q0, q1).and_then(|spec| {
                MachineSpec::new(
                    spec.out0().clone(),
                    spec.out1().clone(),
                    blank,
                    ancilla,
                    spec.extension().clone(),
                )
            })
        }
    };
    match built {
        Ok(spec) => Some(CompiledMachine {
            name: m.name.clone(),
            pos: m.pos,
            machine: Some(spec),
            candidate: None,
            requirement,
        }),
        Err(err) => ctx.error(m.pos, format!("invalid machine: {err}")),
    }
}

/// Compiles every machine; machines with errors are dropped and reported.
pub fn compile(ast: &Ast) -> (Vec<CompiledMachine>, Vec<Diagnostic>) {
    let mut ctx = Ctx { diagnostics: Vec::new() };
    let mut out = Vec::new();
    for m in &ast.machines {
        if m.extension().is_none() || m.requirement().is_none() {
            ctx.error::<()>(m.pos, "machine is missing its extension or requirement clause");
            continue;
        }
        if let Some(cm) = compile_machine(&mut ctx, m) {
            out.push(cm);
        }
    }
    (out, ctx.diagnostics)
}

fn witness_line(v: &Verdict) -> String {
    match &v.witness {
        Some((q, bar)) => format!("witness: |Psi> = {q}, |Psi-bar> = {bar}"),
        None => "witness: none".into(),
    }
}

/// Delegates to the verifier and renders a plain-text report.
pub fn check_compiled(m: &CompiledMachine, opts: &CheckOptions) -> Result<MachineReport> {
    let (verdict, set, target, states_checked) = match &m.requirement {
        Requirement::Basis => {
            let spec = m.machine.as_ref().ok_or_else(|| Error::InvalidArgument("basis check needs a machine".into()))?;
            (check_basis(spec, opts.tol)?, None, "basis".to_string(), 2)
        }
        Requirement::Universal { set, target } => {
            let states = set.states(opts.samples, opts.seed)?;
            let verdict = match (&m.machine, &m.candidate) {
                (Some(spec), _) => check_machine(spec, target, &states, opts.tol, AncillaMode::Fixed)?,
                (None, Some(op)) => check_universal_gate(op, target, &states, opts.tol)?,
                (None, None) => return Err(Error::InvalidArgument("nothing to check".into())),
            };
            (verdict, Some(set.name().to_string()), target.name(), states.len())
        }
    };
    let mut text = String::new();
    let _ = writeln!(text, "machine {}: {}", m.name, verdict.label());
    match &set {
        Some(s) => {
            let _ = writeln!(text, "  requirement: universal {target} on {s} ({states_checked} states)");
        }
        None => {
            let _ = writeln!(text, "  requirement: basis rules only");
        }
    }
    let _ = writeln!(text, "  condition: {} ({})", verdict.condition.as_str(), verdict.condition.explanation());
    let _ = writeln!(text, "  violation: {:.6e}", verdict.violation);
    let _ = writeln!(text, "  {}", witness_line(&verdict));
    let _ = writeln!(text, "  detail: {}", verdict.detail);
    Ok(MachineReport {
        name: m.name.clone(),
        set,
        target,
        states_checked,
        verdict,
        text,
    })
}
