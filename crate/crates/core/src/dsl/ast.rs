use num_complex::Complex64;

use super::Pos;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ast {
    pub machines: Vec<MachineDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineDecl {
    pub name: String,
    pub pos: Pos,
    /// Statements in source order.
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub pos: Pos,
    pub kind: StatementKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    /// `on |i> -> expr;`
    Rule { input: u8, output: KetExpr },
    Extend(ExtensionClause),
    Require(RequirementClause),
    Candidate(CandidateClause),
    Blank(KetExpr),
    Ancilla(KetExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntiKind {
    Complement,
    Conjugate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionClause {
    Linear,
    Antilinear,
    Hybrid { lambda: f64, anti: Option<AntiKind> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RequirementClause {
    Basis,
    Universal { set: SetClause, target: TargetClause },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetClause {
    Bloch,
    Polar,
    Equatorial,
    List(Vec<KetExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetClause {
    Clone,
    Complement,
    Conjugate,
    Hybrid { lambda: f64 },
    Hadamard9,
    Hadamard10,
    Unequal { a: Complex64, b: Complex64 },
    Cnot,
}

impl TargetClause {
    pub fn is_gate_target(&self) -> bool {
        matches!(
            self,
            TargetClause::Hadamard9 | TargetClause::Hadamard10 | TargetClause::Unequal { .. } | TargetClause::Cnot
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateClause {
    H,
    HP,
    HE,
    Cnot,
    UG { a: Complex64, b: Complex64 },
}

/// `Σ coeff · |k₁>|k₂>...`.
#[derive(Debug, Clone, PartialEq)]
pub struct KetExpr {
    pub pos: Pos,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    /// Ket labels, juxtaposed (tensor product), e.g. `["0", "+"]`.
    pub kets: Vec<String>,
}

impl Ast {
    /// Copy with every position reset, for structural comparison.
    pub fn without_positions(&self) -> Ast {
        let mut ast = self.clone();
        for m in &mut ast.machines {
            m.pos = Pos::default();
            for s in &mut m.statements {
                s.pos = Pos::default();
                match &mut s.kind {
                    StatementKind::Rule { output, .. } => output.pos = Pos::default(),
                    StatementKind::Blank(e) | StatementKind::Ancilla(e) => e.pos = Pos::default(),
                    StatementKind::Require(RequirementClause::Universal {
                        set: SetClause::List(list),
                        ..
                    }) => list.iter_mut().for_each(|e| e.pos = Pos::default()),
                    _ => {}
                }
            }
        }
        ast
    }
}

impl MachineDecl {
    pub fn rules(&self) -> impl Iterator<Item = (&Statement, u8, &KetExpr)> {
        self.statements.iter().filter_map(|s| match &s.kind {
            StatementKind::Rule { input, output } => Some((s, *input, output)),
            _ => None,
        })
    }

    pub fn extension(&self) -> Option<&ExtensionClause> {
        self.statements.iter().find_map(|s| match &s.kind {
            StatementKind::Extend(e) => Some(e),
            _ => None,
        })
    }

    pub fn requirement(&self) -> Option<&RequirementClause> {
        self.statements.iter().find_map(|s| match &s.kind {
            StatementKind::Require(r) => Some(r),
            _ => None,
        })
    }

    pub fn candidate(&self) -> Option<(&Statement, &CandidateClause)> {
        self.statements.iter().find_map(|s| match &s.kind {
            StatementKind::Candidate(c) => Some((s, c)),
            _ => None,
        })
    }

    pub fn blank(&self) -> Option<&KetExpr> {
        self.statements.iter().find_map(|s| match &s.kind {
            StatementKind::Blank(e) => Some(e),
            _ => None,
        })
    }

    pub fn ancilla(&self) -> Option<&KetExpr> {
        self.statements.iter().find_map(|s| match &s.kind {
            StatementKind::Ancilla(e) => Some(e),
            _ => None,
        })
    }
}
