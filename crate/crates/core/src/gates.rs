//! Constructors for the concrete gates: Hadamard variants, the unequal
//! superposition gate, and CNOT / Pauli operators in a chosen basis.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{c, tensor, DenseOperator, ALGEBRA_TOL, ONE, ZERO};
use crate::error::{Error, Result};
use crate::states::Qubit;

/// Amplitudes `(a, b)` of `a|Ψ> + b|Ψ̄>`, `|a|² + |b|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnequalAmplitudes {
    a: Complex64,
    b: Complex64,
}

impl UnequalAmplitudes {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        Self::with_tolerance(a, b, ALGEBRA_TOL)
    }

    pub fn with_tolerance(a: Complex64, b: Complex64, tol: f64) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if !norm_sqr.is_finite() {
            return Err(Error::NonFinite);
        }
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { a, b })
    }

    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(c(a, 0.0), c(b, 0.0))
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// `a* b - a b*`, the term that spoils inner products for complex amplitudes.
    pub fn phase_term(&self) -> Complex64 {
        self.a.conj() * self.b - self.a * self.b.conj()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.a.im.abs() < tol && self.b.im.abs() < tol
    }
}

fn from_rows(rows: [[Complex64; 2]; 2]) -> DenseOperator {
    DenseOperator::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).expect("2x2")
}

pub fn pauli_x() -> DenseOperator {
    from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> DenseOperator {
    from_rows([[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> DenseOperator {
    from_rows([[ONE, ZERO], [ZERO, -ONE]])
}

/// `(1/√2)[[1, 1], [1, -1]]`.
pub fn hadamard() -> DenseOperator {
    let h = c(FRAC_1_SQRT_2, 0.0);
    from_rows([[h, h], [h, -h]])
}

/// `H_P = σ_x H = (1/√2)[[1, -1], [1, 1]]`: equal superposition with the
/// complement for states with real amplitudes.
pub fn hadamard_polar() -> DenseOperator {
    let h = c(FRAC_1_SQRT_2, 0.0);
    from_rows([[h, -h], [h, h]])
}

/// `H_E = (1/√2) diag(1 + i, 1 - i)`: equal superposition with the
/// complement (with relative phase `i`) for equatorial states.
pub fn hadamard_equatorial() -> DenseOperator {
    let h = FRAC_1_SQRT_2;
    from_rows([[c(h, h), ZERO], [ZERO, c(h, -h)]])
}

/// `U_G = [[a, -b], [b, a]]`.
///
/// Only real amplitudes are accepted; for complex ones no single gate can
/// produce `a|Ψ> + b|Ψ̄>` on every polar state.
pub fn unequal_gate(amps: UnequalAmplitudes) -> Result<DenseOperator> {
    if !amps.is_real(ALGEBRA_TOL) {
        return Err(Error::NonRealAmplitudes {
            a: amps.a,
            b: amps.b,
            term: amps.phase_term(),
        });
    }
    let (a, b) = (c(amps.a.re, 0.0), c(amps.b.re, 0.0));
    Ok(from_rows([[a, -b], [b, a]]))
}

/// `|0><0| ⊗ I + |1><1| ⊗ σ_x`.
pub fn cnot_computational() -> DenseOperator {
    let mut entries = vec![ZERO; 16];
    for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        entries[row * 4 + col] = ONE;
    }
    DenseOperator::new(4, entries).expect("4x4")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Pauli operator in the basis `{|Ψ>, |Ψ̄>}`:
///
/// * `X → |Ψ><Ψ̄| + |Ψ̄><Ψ|`
/// * `Y → -i(|Ψ><Ψ̄| - |Ψ̄><Ψ|)`
/// * `Z → |Ψ><Ψ| - |Ψ̄><Ψ̄|`
///
/// Building it requires the amplitudes of `q`.
pub fn pauli_in_basis(q: &Qubit, axis: PauliAxis) -> DenseOperator {
    let psi = q.to_state();
    let bar = q.complement().to_state();
    let outer = |u, v| DenseOperator::outer(u, v).expect("dim 2");
    let up = outer(&psi, &bar);
    let down = outer(&bar, &psi);
    match axis {
        PauliAxis::X => up.add(&down).expect("dim 2"),
        PauliAxis::Y => up
            .add(&down.scaled(c(-1.0, 0.0)))
            .expect("dim 2")
            .scaled(c(0.0, -1.0)),
        PauliAxis::Z => outer(&psi, &psi)
            .add(&outer(&bar, &bar).scaled(c(-1.0, 0.0)))
            .expect("dim 2"),
    }
}

/// `|Ψ><Ψ| ⊗ I + |Ψ̄><Ψ̄| ⊗ σ_x(α, β)`: CNOT controlled in the basis of `q`.
pub fn cnot_in_basis(q: &Qubit) -> DenseOperator {
    let psi = q.to_state();
    let bar = q.complement().to_state();
    let p_psi = DenseOperator::outer(&psi, &psi).expect("dim 2");
    let p_bar = DenseOperator::outer(&bar, &bar).expect("dim 2");
    let id = DenseOperator::identity(2).expect("dim 2");
    let flip = pauli_in_basis(q, PauliAxis::X);
    tensor(&p_psi, &id)
        .and_then(|a| a.add(&tensor(&p_bar, &flip)?))
        .expect("dim 4")
}
