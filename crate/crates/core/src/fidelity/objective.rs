use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{c, fidelity_pure_mixed, partial_trace, tensor_all, DensityOperator, StateVector, ZERO};
use crate::error::{Error, Result};
use crate::states::Qubit;

use super::grid::QuadratureGrid;
use super::isometry::{IsometryParam, ISOMETRY_TOL};

/// Which part of the machine output is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityMode {
    /// Mean of the register-1 fidelity with `|Ψ>` and the register-2 fidelity
    /// with `|ℱ(Ψ)>`.
    #[default]
    Local,
    /// Register-2 fidelity with `|ℱ(Ψ)>` alone. Degenerate at λ = 1: a map
    /// that moves the input into register 2 scores 1.
    SecondRegister,
    /// Fidelity of registers 1 and 2 jointly with `|Ψ> ⊗ |ℱ(Ψ)>`.
    Joint,
}

impl FidelityMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FidelityMode::Local => "local",
            FidelityMode::SecondRegister => "second-register",
            FidelityMode::Joint => "joint",
        }
    }
}

impl fmt::Display for FidelityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FidelityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(FidelityMode::Local),
            "second-register" => Ok(FidelityMode::SecondRegister),
            "joint" => Ok(FidelityMode::Joint),
            _ => Err(Error::InvalidArgument(format!("unknown fidelity mode '{s}'"))),
        }
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

/// `|ℱ(Ψ)> = sqrt(λ)|Ψ> + sqrt(1-λ)|Ψ̄>`, already normalized since `Ψ ⟂ Ψ̄`.
///
/// The complement is antilinear, so this depends on the phase of the
/// representative `q`; grids use the convention with `α` real and nonnegative.
pub fn hybrid_target(lambda: f64, q: &Qubit) -> Result<Qubit> {
    check_lambda(lambda)?;
    let bar = q.complement();
    let (a, b) = (lambda.sqrt(), (1.0 - lambda).sqrt());
    Qubit::new(a * q.alpha() + b * bar.alpha(), a * q.beta() + b * bar.beta())
}

/// Average fidelity computed literally: reduced density operators via
/// partial trace, then `<ideal|ρ|ideal>` per node.
pub fn average_fidelity(v: &IsometryParam, lambda: f64, grid: &QuadratureGrid, mode: FidelityMode) -> Result<f64> {
    check_lambda(lambda)?;
    let residual = v.isometry_residual();
    if residual > ISOMETRY_TOL {
        return Err(Error::NotIsometric { residual });
    }
    let dims = [2, 2, v.ancilla_dim()];
    let mut total = 0.0;
    for (q, w) in grid.nodes() {
        let f = hybrid_target(lambda, q)?.to_state();
        let psi = q.to_state();
        let rho = DensityOperator::from_pure(&v.apply(q).normalized()?)?;
        let value = match mode {
            FidelityMode::Local => {
                let r1 = partial_trace(&rho, &[0], &dims)?;
                let r2 = partial_trace(&rho, &[1], &dims)?;
                0.5 * (fidelity_pure_mixed(&psi, &r1)? + fidelity_pure_mixed(&f, &r2)?)
            }
            FidelityMode::SecondRegister => fidelity_pure_mixed(&f, &partial_trace(&rho, &[1], &dims)?)?,
            FidelityMode::Joint => {
                let r12 = partial_trace(&rho, &[0, 1], &dims)?;
                fidelity_pure_mixed(&tensor_all(&[&psi, &f])?, &r12)?
            }
        };
        total += w * value;
    }
    Ok(total)
}

/// The average fidelity as a Hermitian form `x† M x` in `x = vec(V)`
/// (index `row * 2 + col`). `M` is positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityObjective {
    ancilla_dim: usize,
    size: usize,
    m: Vec<Complex64>,
}

/// Projector `|u><u|` embedded on the register(s) selected by `mode`, as an
/// `n × n` matrix on register 1 ⊗ register 2 ⊗ ancilla.
fn node_operator(psi: &StateVector, f: &StateVector, dq: usize, mode: FidelityMode) -> Vec<Complex64> {
    let n = 4 * dq;
    let mut o = vec![ZERO; n * n];
    let idx = |r1: usize, r2: usize, a: usize| (r1 * 2 + r2) * dq + a;
    let p = |v: &StateVector, i: usize, j: usize| v.amplitudes()[i] * v.amplitudes()[j].conj();
    for r1 in 0..2 {
        for r2 in 0..2 {
            for s1 in 0..2 {
                for s2 in 0..2 {
                    let value = match mode {
                        FidelityMode::Local => {
                            let on1 = if r2 == s2 { p(psi, r1, s1) } else { ZERO };
                            let on2 = if r1 == s1 { p(f, r2, s2) } else { ZERO };
                            (on1 + on2) * 0.5
                        }
                        FidelityMode::SecondRegister => {
                            if r1 == s1 {
                                p(f, r2, s2)
                            } else {
                                ZERO
                            }
                        }
                        FidelityMode::Joint => p(psi, r1, s1) * p(f, r2, s2),
                    };
                    if value == ZERO {
                        continue;
                    }
                    for a in 0..dq {
                        o[idx(r1, r2, a) * n + idx(s1, s2, a)] = value;
                    }
                }
            }
        }
    }
    o
}

impl FidelityObjective {
    pub fn new(lambda: f64, grid: &QuadratureGrid, mode: FidelityMode, ancilla_dim: usize) -> Result<Self> {
        check_lambda(lambda)?;
        if !matches!(ancilla_dim, 1 | 2 | 4) {
            return Err(Error::InvalidArgument(format!(
                "ancilla dimension {ancilla_dim} not supported (use 1, 2 or 4)"
            )));
        }
        let n = 4 * ancilla_dim;
        let size = 2 * n;
        let mut m = vec![ZERO; size * size];
        for (q, w) in grid.nodes() {
            let psi = q.to_state();
            let f = hybrid_target(lambda, q)?.to_state();
            let o = node_operator(&psi, &f, ancilla_dim, mode);
            let amp = psi.amplitudes();
            for a in 0..n {
                for b in 0..n {
                    let oab = o[a * n + b];
                    if oab == ZERO {
                        continue;
                    }
                    for i in 0..2 {
                        for j in 0..2 {
                            m[(a * 2 + i) * size + b * 2 + j] += c(*w, 0.0) * oab * amp[i].conj() * amp[j];
                        }
                    }
                }
            }
        }
        Ok(Self { ancilla_dim, size, m })
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    /// `x† M x`.
    pub fn value(&self, v: &IsometryParam) -> f64 {
        let x = v.matrix();
        let mx = self.gradient_raw(x);
        x.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
    }

    /// `M x`, the derivative of `x† M x` with respect to `x*`.
    pub fn gradient_raw(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.size)
            .map(|r| {
                self.m[r * self.size..(r + 1) * self.size]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}
