use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{c, inner_product, tensor_all, GeneralKMap, StateVector, I};
use crate::error::{Error, Result};
use crate::gates::UnequalAmplitudes;
use crate::states::{polar_gram, Qubit};

/// The transformation a machine or gate is required to perform.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetKind {
    /// `|Ψ> → |Ψ> ⊗ K|Ψ> ⊗ |Q_Ψ>`.
    CloneLike(GeneralKMap),
    /// `Ψ → (Ψ + Ψ̄)/√2`, `Ψ̄ → (Ψ - Ψ̄)/√2`.
    Hadamard9,
    /// `Ψ → (Ψ + iΨ̄)/√2`, `Ψ̄ → (iΨ + Ψ̄)/√2`.
    Hadamard10,
    /// `Ψ → aΨ + bΨ̄`, `Ψ̄ → b*Ψ - a*Ψ̄`.
    Unequal(UnequalAmplitudes),
    /// The four controlled-not rules on `{Ψ, Ψ̄}` products.
    Cnot23,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetTransform {
    pub kind: TargetKind,
    /// `|Q_Ψ>`; when absent, machine checks use the machine's `|Q₀>`.
    pub ancilla_final: Option<StateVector>,
}

impl TargetTransform {
    pub fn new(kind: TargetKind) -> Self {
        Self {
            kind,
            ancilla_final: None,
        }
    }

    pub fn with_ancilla(kind: TargetKind, ancilla_final: StateVector) -> Self {
        Self {
            kind,
            ancilla_final: Some(ancilla_final),
        }
    }

    pub fn clone_target() -> Self {
        Self::new(TargetKind::CloneLike(
            GeneralKMap::unitary(crate::algebra::DenseOperator::identity(2).expect("dim 2"))
                .expect("identity is unitary"),
        ))
    }

    pub fn is_gate_target(&self) -> bool {
        !matches!(self.kind, TargetKind::CloneLike(_))
    }

    /// Short name used in reports.
    pub fn name(&self) -> String {
        match &self.kind {
            TargetKind::CloneLike(k) => format!("clone-like(lambda={})", k.lambda()),
            TargetKind::Hadamard9 => "hadamard9".into(),
            TargetKind::Hadamard10 => "hadamard10".into(),
            TargetKind::Unequal(a) => format!("unequal(a={},b={})", fmt_c(a.a()), fmt_c(a.b())),
            TargetKind::Cnot23 => "cnot23".into(),
        }
    }

    /// Consistency condition a failure of this target is reported under.
    pub fn condition(&self) -> ConsistencyCondition {
        match self.kind {
            TargetKind::CloneLike(_) => ConsistencyCondition::LinearExtensionVsIdeal,
            TargetKind::Hadamard9 => ConsistencyCondition::HadamardSumInnerProduct,
            TargetKind::Hadamard10 => ConsistencyCondition::HadamardIInnerProduct,
            TargetKind::Unequal(_) => ConsistencyCondition::UnequalSuperpositionInnerProduct,
            TargetKind::Cnot23 => ConsistencyCondition::ControlledNotRules,
        }
    }
}

fn fmt_c(z: Complex64) -> String {
    crate::states::format_complex(z)
}

/// The fixed set of consistency conditions a report can cite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsistencyCondition {
    /// Linear extension of the basis rules vs. the ideal output.
    LinearExtensionVsIdeal,
    /// Antilinear extension of the basis rules vs. the ideal output.
    AntilinearExtensionVsIdeal,
    /// Hybrid extension vs. the ideal output.
    HybridExtensionVsIdeal,
    /// Inner products under `Ψ → (Ψ ± Ψ̄)/√2`.
    HadamardSumInnerProduct,
    /// Inner products under `Ψ → (Ψ + iΨ̄)/√2`.
    HadamardIInnerProduct,
    /// Inner products under `Ψ → aΨ + bΨ̄`.
    UnequalSuperpositionInnerProduct,
    /// The four controlled-not rules.
    ControlledNotRules,
    /// Basis outputs normalized and orthogonal.
    BasisRules,
    /// Gram identities of the polar circle.
    PolarGramPattern,
    /// Gram identities of the equatorial circle.
    EquatorialGramPattern,
}

impl ConsistencyCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::LinearExtensionVsIdeal => "linear-extension-vs-ideal",
            Self::AntilinearExtensionVsIdeal => "antilinear-extension-vs-ideal",
            Self::HybridExtensionVsIdeal => "hybrid-extension-vs-ideal",
            Self::HadamardSumInnerProduct => "hadamard-sum-inner-product",
            Self::HadamardIInnerProduct => "hadamard-i-inner-product",
            Self::UnequalSuperpositionInnerProduct => "unequal-superposition-inner-product",
            Self::ControlledNotRules => "controlled-not-rules",
            Self::BasisRules => "basis-rules",
            Self::PolarGramPattern => "polar-gram-pattern",
            Self::EquatorialGramPattern => "equatorial-gram-pattern",
        }
    }

    /// One-line explanation of what failing this condition means.
    pub fn explanation(&self) -> &'static str {
        match self {
            Self::LinearExtensionVsIdeal => {
                "the linear extension of the basis rules differs from the required output"
            }
            Self::AntilinearExtensionVsIdeal => {
                "the antilinear extension of the basis rules differs from the required output"
            }
            Self::HybridExtensionVsIdeal => {
                "the unitary-plus-antiunitary extension differs from the required output"
            }
            Self::HadamardSumInnerProduct => {
                "superposing with the complement does not preserve inner products"
            }
            Self::HadamardIInnerProduct => {
                "superposing with i times the complement does not preserve inner products"
            }
            Self::UnequalSuperpositionInnerProduct => {
                "the term (a*b - ab*)<Ψ1|Ψ̄2> spoils the inner product"
            }
            Self::ControlledNotRules => {
                "no fixed operator flips the target exactly when the control is the complement"
            }
            Self::BasisRules => "basis outputs must be normalized and orthogonal",
            Self::PolarGramPattern => "<Ψ1|Ψ̄2> = -<Ψ̄1|Ψ2> and <Ψ1|Ψ2> = <Ψ̄1|Ψ̄2>",
            Self::EquatorialGramPattern => "<Ψ1|Ψ̄2> = <Ψ̄1|Ψ2> and <Ψ1|Ψ2> = <Ψ̄1|Ψ̄2>",
        }
    }
}

impl fmt::Display for ConsistencyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn kron2(a: &StateVector, b: &StateVector) -> StateVector {
    tensor_all(&[a, b]).expect("dim 4")
}

/// The `(input, required output)` rules of a gate target for the state `q`.
/// Clone-like targets have a single rule on the principal registers.
pub fn target_rules(t: &TargetTransform, q: &Qubit) -> Result<Vec<(StateVector, StateVector)>> {
    let psi = q.to_state();
    let bar = q.complement().to_state();
    let comb = |x: Complex64, y: Complex64| {
        StateVector::combination(&[(x, &psi), (y, &bar)]).expect("dim 2")
    };
    let h = c(FRAC_1_SQRT_2, 0.0);
    Ok(match &t.kind {
        TargetKind::CloneLike(_) => vec![(psi.clone(), ideal_output(t, q)?)],
        TargetKind::Hadamard9 => vec![(psi.clone(), comb(h, h)), (bar.clone(), comb(h, -h))],
        TargetKind::Hadamard10 => vec![(psi.clone(), comb(h, h * I)), (bar.clone(), comb(h * I, h))],
        TargetKind::Unequal(amps) => {
            let (a, b) = (amps.a(), amps.b());
            vec![(psi.clone(), comb(a, b)), (bar.clone(), comb(b.conj(), -a.conj()))]
        }
        TargetKind::Cnot23 => vec![
            (kron2(&psi, &psi), kron2(&psi, &psi)),
            (kron2(&psi, &bar), kron2(&psi, &bar)),
            (kron2(&bar, &psi), kron2(&bar, &bar)),
            (kron2(&bar, &bar), kron2(&bar, &psi)),
        ],
    })
}

/// Required output for input `q`.
///
/// Clone-like targets give `|Ψ> ⊗ K|Ψ> ⊗ |Q_Ψ>` (no ancilla factor when
/// `ancilla_final` is unset). Gate targets give the image of `|Ψ>`; for the
/// controlled-not target, the image of `|Ψ>|Ψ>`.
pub fn ideal_output(t: &TargetTransform, q: &Qubit) -> Result<StateVector> {
    match &t.kind {
        TargetKind::CloneLike(k) => {
            let psi = q.to_state();
            let principal = kron2(&psi, &k.apply(&psi)?);
            match &t.ancilla_final {
                Some(anc) => tensor_all(&[&principal, anc]),
                None => Ok(principal),
            }
        }
        _ => Ok(target_rules(t, q)?.swap_remove(0).1),
    }
}

/// Largest discrepancy between input and required-output inner products for
/// a pair of states.
///
/// Gate targets compare same-rule pairs only (`Ψ1` with `Ψ2`, `Ψ̄1` with
/// `Ψ̄2`), because the second rule of each Hadamard-type target holds only up
/// to an overall sign. The controlled-not target compares all 16 rule pairs.
pub fn audit_inner_product(t: &TargetTransform, pair: (&Qubit, &Qubit)) -> Result<f64> {
    let r1 = target_rules(t, pair.0)?;
    let r2 = target_rules(t, pair.1)?;
    let all_pairs = matches!(t.kind, TargetKind::Cnot23);
    let mut worst = 0.0f64;
    for (i, (in1, out1)) in r1.iter().enumerate() {
        for (j, (in2, out2)) in r2.iter().enumerate() {
            if !all_pairs && i != j {
                continue;
            }
            let d = (inner_product(in1, in2)? - inner_product(out1, out2)?).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// `|(a*b - ab*) <Ψ(θ1)|Ψ̄(θ2)>|` for polar states.
pub fn audit_unequal(amps: &UnequalAmplitudes, theta1: f64, theta2: f64) -> f64 {
    (amps.phase_term() * polar_gram(theta1, theta2)[1]).norm()
}

/// Unequal-amplitude audit accepting raw amplitudes; rejects non-normalized input.
pub fn audit_unequal_raw(a: Complex64, b: Complex64, theta1: f64, theta2: f64) -> Result<f64> {
    let amps = UnequalAmplitudes::new(a, b)?;
    Ok(audit_unequal(&amps, theta1, theta2))
}

pub(crate) fn require_gate_target(t: &TargetTransform) -> Result<()> {
    if t.is_gate_target() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "clone-like targets describe machines, not gates".into(),
        ))
    }
}
