use std::fmt::Write;

use num_complex::Complex64;

use super::ast::*;

/// Complex literal: `re`, `re+imi` or `re-imi`.
fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn ket_expr(e: &KetExpr) -> String {
    let mut out = String::new();
    for (n, t) in e.terms.iter().enumerate() {
        let z = t.coeff;
        let negative_real = z.im == 0.0 && z.re.is_sign_negative();
        let mag = if negative_real { -z.re } else { z.re };
        if negative_real {
            out.push_str(if n == 0 { "-" } else { " - " });
        } else if n > 0 {
            out.push_str(" + ");
        }
        if z.im != 0.0 {
            let _ = write!(out, "({})", complex(z));
        } else if mag != 1.0 {
            let _ = write!(out, "{mag}");
        }
        for k in &t.kets {
            let _ = write!(out, "|{k}>");
        }
    }
    out
}

fn extension(e: &ExtensionClause) -> String {
    match e {
        ExtensionClause::Linear => "linear".into(),
        ExtensionClause::Antilinear => "antilinear".into(),
        ExtensionClause::Hybrid { lambda, anti } => match anti {
            None => format!("hybrid(lambda={lambda})"),
            Some(AntiKind::Complement) => format!("hybrid(lambda={lambda}, anti=complement)"),
            Some(AntiKind::Conjugate) => format!("hybrid(lambda={lambda}, anti=conjugate)"),
        },
    }
}

fn target(t: &TargetClause) -> String {
    match t {
        TargetClause::Clone => "clone".into(),
        TargetClause::Complement => "complement".into(),
        TargetClause::Conjugate => "conjugate".into(),
        TargetClause::Hybrid { lambda } => format!("hybrid(lambda={lambda})"),
        TargetClause::Hadamard9 => "hadamard9".into(),
        TargetClause::Hadamard10 => "hadamard10".into(),
        TargetClause::Unequal { a, b } => format!("unequal(a={}, b={})", complex(*a), complex(*b)),
        TargetClause::Cnot => "cnot".into(),
    }
}

fn requirement(r: &RequirementClause) -> String {
    match r {
        RequirementClause::Basis => "basis".into(),
        RequirementClause::Universal { set, target: t } => {
            let set = match set {
                SetClause::Bloch => "bloch".into(),
                SetClause::Polar => "polar".into(),
                SetClause::Equatorial => "equatorial".into(),
                SetClause::List(items) => format!(
                    "list({})",
                    items.iter().map(ket_expr).collect::<Vec<_>>().join(", ")
                ),
            };
            format!("universal on {set} target {}", target(t))
        }
    }
}

fn candidate(c: &CandidateClause) -> String {
    match c {
        CandidateClause::H => "H".into(),
        CandidateClause::HP => "HP".into(),
        CandidateClause::HE => "HE".into(),
        CandidateClause::Cnot => "CNOT".into(),
        CandidateClause::UG { a, b } => format!("UG(a={}, b={})", complex(*a), complex(*b)),
    }
}

/// Canonical source text; parsing it yields the same AST up to positions.
pub fn pretty_print(ast: &Ast) -> String {
    let mut out = String::new();
    for (n, m) in ast.machines.iter().enumerate() {
        if n > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "machine {} {{", m.name);
        for s in &m.statements {
            let line = match &s.kind {
                StatementKind::Rule { input, output } => format!("on |{input}> -> {}", ket_expr(output)),
                StatementKind::Extend(e) => format!("extend {}", extension(e)),
                StatementKind::Require(r) => format!("require {}", requirement(r)),
                StatementKind::Candidate(c) => format!("candidate {}", candidate(c)),
                StatementKind::Blank(e) => format!("blank {}", ket_expr(e)),
                StatementKind::Ancilla(e) => format!("ancilla {}", ket_expr(e)),
            };
            let _ = writeln!(out, "    {line};");
        }
        out.push_str("}\n");
    }
    out
}
