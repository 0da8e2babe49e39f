use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{
    apply, haar_unitary, inner_product, state_mismatch, tensor_all, DenseOperator, StateVector, ZERO,
};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::states::Qubit;

use super::machine::{extend, Extension, MachineSpec};
use super::target::{require_gate_target, target_rules, ConsistencyCondition, TargetKind, TargetTransform};

/// Outcome of a realizability check.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub realizable: bool,
    pub realizing_operator: Option<DenseOperator>,
    /// Worst state and its complement.
    pub witness: Option<(Qubit, Qubit)>,
    pub violation: f64,
    pub condition: ConsistencyCondition,
    pub detail: String,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        if self.realizable {
            "REALIZABLE"
        } else {
            "IMPOSSIBLE"
        }
    }
}

/// Choice of `|Q_Ψ>` when comparing a machine's output with the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AncillaMode {
    /// `|Q_Ψ>` from the target, else the machine's `|Q₀>`; ancillas of
    /// different dimension are zero-padded to the larger one.
    #[default]
    Fixed,
    /// Best `|Q_Ψ>` for each input: `1 - ||(<ideal|⊗I) actual||²`.
    Aligned,
}

fn pad_ancilla(v: &StateVector, principal: usize, from: usize, to: usize) -> Result<StateVector> {
    if from == to {
        return Ok(v.clone());
    }
    let mut amps = vec![ZERO; principal * to];
    for p in 0..principal {
        for a in 0..from {
            amps[p * to + a] = v.amplitudes()[p * from + a];
        }
    }
    StateVector::new(amps)
}

fn kmap_of(t: &TargetTransform) -> Result<&crate::algebra::GeneralKMap> {
    match &t.kind {
        TargetKind::CloneLike(k) => Ok(k),
        _ => Err(Error::InvalidArgument(format!(
            "target {} is a gate target; machine deviation needs a clone-like target",
            t.name()
        ))),
    }
}

/// `1 - |<ideal|actual>|²` with `|Q_Ψ>` chosen by [`AncillaMode::Fixed`].
pub fn machine_deviation(m: &MachineSpec, t: &TargetTransform, q: &Qubit) -> Result<f64> {
    machine_deviation_with(m, t, q, AncillaMode::Fixed)
}

pub fn machine_deviation_with(
    m: &MachineSpec,
    t: &TargetTransform,
    q: &Qubit,
    mode: AncillaMode,
) -> Result<f64> {
    let k = kmap_of(t)?;
    let psi = q.to_state();
    let principal = tensor_all(&[&psi, &k.apply(&psi)?])?;
    let actual = extend(m, q)?;
    let dq = m.ancilla_dim();
    let dev = match mode {
        AncillaMode::Fixed => {
            let anc = t.ancilla_final.clone().unwrap_or_else(|| m.ancilla_final(0));
            let d = dq.max(anc.dim());
            let ideal = pad_ancilla(&tensor_all(&[&principal, &anc])?, 4, anc.dim(), d)?;
            let actual = pad_ancilla(&actual, 4, dq, d)?;
            1.0 - inner_product(&ideal, &actual)?.norm_sqr()
        }
        AncillaMode::Aligned => {
            let amps = actual.amplitudes();
            let weight: f64 = (0..dq)
                .map(|a| {
                    (0..4)
                        .map(|p| principal.amplitudes()[p].conj() * amps[p * dq + a])
                        .sum::<num_complex::Complex64>()
                        .norm_sqr()
                })
                .sum();
            1.0 - weight
        }
    };
    Ok(dev.clamp(0.0, 1.0))
}

/// First index attaining the maximum; NaN never wins.
fn first_max(values: &[f64]) -> Option<(usize, f64)> {
    values.iter().copied().enumerate().fold(None, |best, (i, v)| match best {
        Some((_, b)) if v <= b => best,
        _ if v.is_nan() => best,
        _ => Some((i, v)),
    })
}

fn condition_for(ext: &Extension) -> ConsistencyCondition {
    match ext {
        Extension::Linear => ConsistencyCondition::LinearExtensionVsIdeal,
        Extension::Antilinear => ConsistencyCondition::AntilinearExtensionVsIdeal,
        Extension::Hybrid { .. } => ConsistencyCondition::HybridExtensionVsIdeal,
    }
}

fn nonempty(states: &[Qubit]) -> Result<()> {
    if states.is_empty() {
        Err(Error::InvalidArgument("state set is empty".into()))
    } else {
        Ok(())
    }
}

/// Checks a machine's extension against a clone-like target on every state.
pub fn check_machine(
    m: &MachineSpec,
    t: &TargetTransform,
    states: &[Qubit],
    tol: f64,
    mode: AncillaMode,
) -> Result<Verdict> {
    nonempty(states)?;
    kmap_of(t)?;
    let devs: Vec<f64> = states
        .par_iter()
        .map(|q| machine_deviation_with(m, t, q, mode))
        .collect::<Result<_>>()?;
    let (idx, worst) = first_max(&devs).expect("nonempty");
    let condition = condition_for(m.extension());
    let realizable = worst <= tol;
    let q = states[idx];
    let detail = if realizable {
        format!(
            "{} extension matches {} on all {} states (max deviation {:.3e})",
            m.extension().label(),
            t.name(),
            states.len(),
            worst
        )
    } else {
        format!(
            "{}: deviation {:.6} at {}",
            condition.explanation(),
            worst,
            q
        )
    };
    Ok(Verdict {
        realizable,
        realizing_operator: None,
        witness: (!realizable).then(|| (q, q.complement())),
        violation: worst,
        condition,
        detail,
    })
}

/// A machine with no universality requirement only needs orthonormal basis outputs.
pub fn check_basis(m: &MachineSpec, tol: f64) -> Result<Verdict> {
    let violation = [
        (m.out0().norm_sqr() - 1.0).abs(),
        (m.out1().norm_sqr() - 1.0).abs(),
        inner_product(m.out0(), m.out1())?.norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let realizable = violation <= tol;
    Ok(Verdict {
        realizable,
        realizing_operator: None,
        witness: (!realizable).then(|| (Qubit::zero(), Qubit::one())),
        violation,
        condition: ConsistencyCondition::BasisRules,
        detail: if realizable {
            "basis outputs are orthonormal; an isometry realizes them".into()
        } else {
            format!("basis outputs are not orthonormal (residual {violation:.3e})")
        },
    })
}

/// Worst mismatch `1 - |<required|candidate·input>|²` over the target's rules for `q`.
pub fn gate_violation(candidate: &DenseOperator, t: &TargetTransform, q: &Qubit) -> Result<f64> {
    let mut worst = 0.0f64;
    for (input, want) in target_rules(t, q)? {
        let got = apply(candidate, &input)?;
        worst = worst.max(state_mismatch(&want, &got)?);
    }
    Ok(worst)
}

fn gate_verdict(
    candidate: &DenseOperator,
    t: &TargetTransform,
    states: &[Qubit],
    tol: f64,
) -> Result<Verdict> {
    nonempty(states)?;
    let violations: Vec<f64> = states
        .par_iter()
        .map(|q| gate_violation(candidate, t, q))
        .collect::<Result<_>>()?;
    let (idx, worst) = first_max(&violations).expect("nonempty");
    let realizable = worst <= tol;
    let q = states[idx];
    let condition = t.condition();
    let detail = if realizable {
        format!(
            "candidate implements {} on all {} states (max mismatch {:.3e})",
            t.name(),
            states.len(),
            worst
        )
    } else {
        format!(
            "candidate fails {} at {}: mismatch {:.6}; {}",
            t.name(),
            q,
            worst,
            condition.explanation()
        )
    };
    Ok(Verdict {
        realizable,
        realizing_operator: realizable.then(|| candidate.clone()),
        witness: (!realizable).then(|| (q, q.complement())),
        violation: worst,
        condition,
        detail,
    })
}

/// Does the single-qubit `candidate` implement `t` (up to a global phase per
/// rule) on every state?
pub fn check_universal_gate(
    candidate: &DenseOperator,
    t: &TargetTransform,
    states: &[Qubit],
    tol: f64,
) -> Result<Verdict> {
    require_gate_target(t)?;
    let want = if matches!(t.kind, TargetKind::Cnot23) { 4 } else { 2 };
    if candidate.dim() != want {
        return Err(Error::DimensionMismatch {
            left: candidate.dim(),
            right: want,
        });
    }
    gate_verdict(candidate, t, states, tol)
}

/// Checks the four controlled-not rules for each state.
pub fn check_cnot_universal(candidate: &DenseOperator, states: &[Qubit], tol: f64) -> Result<Verdict> {
    check_universal_gate(candidate, &TargetTransform::new(TargetKind::Cnot23), states, tol)
}

/// Summary of a Haar-random candidate search.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSearch {
    pub candidates: usize,
    pub realizable: usize,
    /// Smallest worst-case violation over all candidates.
    pub min_violation: f64,
    pub best_index: usize,
    pub best_candidate: DenseOperator,
}

/// Draws `n` Haar-random unitaries (candidate `i` uses its own seeded stream)
/// and checks each against `t` on `states`.
pub fn random_candidate_search(
    t: &TargetTransform,
    states: &[Qubit],
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<CandidateSearch> {
    require_gate_target(t)?;
    nonempty(states)?;
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one candidate".into()));
    }
    let dim = if matches!(t.kind, TargetKind::Cnot23) { 4 } else { 2 };
    let results: Vec<(DenseOperator, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
            let u = haar_unitary(dim, &mut rng)?;
            let mut worst = 0.0f64;
            for q in states {
                worst = worst.max(gate_violation(&u, t, q)?);
            }
            Ok((u, worst))
        })
        .collect::<Result<_>>()?;
    let (best_index, min_violation) = results
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, (_, v))| if *v < acc.1 { (i, *v) } else { acc });
    Ok(CandidateSearch {
        candidates: n,
        realizable: results.iter().filter(|(_, v)| *v <= tol).count(),
        min_violation,
        best_index,
        best_candidate: results[best_index].0.clone(),
    })
}
