use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::algebra::inner_product;
use crate::error::{Error, Result};
use crate::states::{equatorial_frame_state, polar_frame_state, sample_bloch, Branch, Qubit, DEFAULT_EQUATORIAL_BRANCH};

use super::target::{target_rules, TargetKind, TargetTransform};

/// Which inputs a universality requirement ranges over.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSet {
    /// The six axis states followed by a seeded uniform sample.
    Bloch,
    /// Real-amplitude states `cos(θ/2)|0> + sin(θ/2)|1>`, θ on a uniform grid in `[0, π]`.
    Polar,
    /// Equatorial states in the default frame, φ on a uniform grid in `[0, 2π)`.
    Equatorial,
    List(Vec<Qubit>),
}

impl StateSet {
    pub fn name(&self) -> &'static str {
        match self {
            StateSet::Bloch => "bloch",
            StateSet::Polar => "polar",
            StateSet::Equatorial => "equatorial",
            StateSet::List(_) => "list",
        }
    }

    /// `n` states of the set (lists are returned whole).
    pub fn states(&self, n: usize, seed: u64) -> Result<Vec<Qubit>> {
        if n == 0 {
            return Err(Error::InvalidArgument("state count must be positive".into()));
        }
        Ok(match self {
            StateSet::Bloch => bloch_states(n, seed)?,
            StateSet::Polar => polar_grid(n),
            StateSet::Equatorial => equatorial_grid(n, DEFAULT_EQUATORIAL_BRANCH),
            StateSet::List(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidArgument("state list is empty".into()));
                }
                list.clone()
            }
        })
    }
}

/// `|0>, |+>, |+i>, |1>, |->, |-i>`.
pub fn axis_states() -> [Qubit; 6] {
    [
        Qubit::zero(),
        Qubit::plus(),
        Qubit::plus_i(),
        Qubit::one(),
        Qubit::minus(),
        Qubit::minus_i(),
    ]
}

pub fn bloch_states(n: usize, seed: u64) -> Result<Vec<Qubit>> {
    let mut out: Vec<Qubit> = axis_states().into_iter().take(n).collect();
    if n > out.len() {
        out.extend(sample_bloch(n - out.len(), seed)?);
    }
    Ok(out)
}

/// θ_k = πk/(n-1), endpoints included (a single point gives θ = 0).
pub fn polar_grid(n: usize) -> Vec<Qubit> {
    let step = if n > 1 { PI / (n - 1) as f64 } else { 0.0 };
    (0..n)
        .map(|k| polar_frame_state((k as f64 * step).min(PI), Branch::Plus))
        .collect()
}

/// φ_k = 2πk/n.
pub fn equatorial_grid(n: usize, branch: Branch) -> Vec<Qubit> {
    (0..n)
        .map(|k| equatorial_frame_state(TAU * k as f64 / n as f64, branch))
        .collect()
}

/// Pair of sampled states with the largest inner-product discrepancy.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub pair: (Qubit, Qubit),
    pub indices: (usize, usize),
    pub violation: f64,
    pub states_examined: usize,
}

struct RuleVectors {
    inputs: Vec<Vec<num_complex::Complex64>>,
    outputs: Vec<Vec<num_complex::Complex64>>,
}

fn dot(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> num_complex::Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn pair_violation(t: &TargetTransform, a: &RuleVectors, b: &RuleVectors) -> f64 {
    let all = matches!(t.kind, TargetKind::Cnot23);
    let mut worst = 0.0f64;
    for i in 0..a.inputs.len() {
        for j in 0..b.inputs.len() {
            if !all && i != j {
                continue;
            }
            let d = dot(&a.inputs[i], &b.inputs[j]) - dot(&a.outputs[i], &b.outputs[j]);
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// Searches all pairs `i < j` of `states` for the largest
/// [`audit_inner_product`](super::audit_inner_product) value. Ties keep the
/// first pair in `(i, j)` order, independent of thread scheduling.
pub fn witness_search_in(t: &TargetTransform, states: &[Qubit]) -> Result<Witness> {
    if states.len() < 2 {
        return Err(Error::InvalidArgument("witness search needs at least two states".into()));
    }
    let vectors: Vec<RuleVectors> = states
        .iter()
        .map(|q| {
            let rules = target_rules(t, q)?;
            Ok(RuleVectors {
                inputs: rules.iter().map(|r| r.0.amplitudes().to_vec()).collect(),
                outputs: rules.iter().map(|r| r.1.amplitudes().to_vec()).collect(),
            })
        })
        .collect::<Result<_>>()?;
    let n = states.len();
    // Per-row maxima in parallel, then a sequential reduction in row order.
    let rows: Vec<(usize, f64)> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut best = (i + 1, f64::NEG_INFINITY);
            for j in i + 1..n {
                let v = pair_violation(t, &vectors[i], &vectors[j]);
                if v > best.1 {
                    best = (j, v);
                }
            }
            best
        })
        .collect();
    let (i, (j, violation)) = rows
        .into_iter()
        .enumerate()
        .fold((0, (1, f64::NEG_INFINITY)), |acc, (i, row)| {
            if row.1 > acc.1 .1 {
                (i, row)
            } else {
                acc
            }
        });
    Ok(Witness {
        pair: (states[i], states[j]),
        indices: (i, j),
        violation: violation.max(0.0),
        states_examined: n,
    })
}

/// Witness search over `n_samples` states drawn from `set`.
pub fn witness_search(t: &TargetTransform, set: &StateSet, n_samples: usize, seed: u64) -> Result<Witness> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("n_samples must be at least 2".into()));
    }
    witness_search_in(t, &set.states(n_samples, seed)?)
}

/// Inner-product audit written directly against [`inner_product`]; used to
/// cross-check the flattened fast path in tests.
pub fn audit_pair_slow(t: &TargetTransform, a: &Qubit, b: &Qubit) -> Result<f64> {
    let (ra, rb) = (target_rules(t, a)?, target_rules(t, b)?);
    let all = matches!(t.kind, TargetKind::Cnot23);
    let mut worst = 0.0f64;
    for (i, x) in ra.iter().enumerate() {
        for (j, y) in rb.iter().enumerate() {
            if all || i == j {
                worst = worst.max((inner_product(&x.0, &y.0)? - inner_product(&x.1, &y.1)?).norm());
            }
        }
    }
    Ok(worst)
}
