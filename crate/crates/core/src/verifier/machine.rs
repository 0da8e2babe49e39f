use num_complex::Complex64;

use crate::algebra::{c, factor_product, inner_product, tensor_all, GeneralKMap, StateVector, VERDICT_TOL};
use crate::error::{Error, Result};
use crate::states::Qubit;

/// How a machine defined on `|0>` and `|1>` is extended to arbitrary inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Extension {
    Linear,
    Antilinear,
    /// `K = sqrt(λ) U + sqrt(1-λ) A` acting on the second register, with final
    /// ancilla states `|Q₀>`, `|Q₁>` for the two basis inputs.
    Hybrid {
        kmap: GeneralKMap,
        ancilla0: StateVector,
        ancilla1: StateVector,
    },
}

impl Extension {
    pub fn label(&self) -> &'static str {
        match self {
            Extension::Linear => "linear",
            Extension::Antilinear => "antilinear",
            Extension::Hybrid { .. } => "hybrid",
        }
    }
}

/// A candidate machine `|i>⊗|Σ>⊗|Q> → out_i` for `i ∈ {0, 1}`.
///
/// Outputs live on register 1 ⊗ register 2 ⊗ ancilla, so their dimension is
/// `4 · d_Q` where `d_Q` is the ancilla dimension (1 for no ancilla).
#[derive(Debug, Clone, PartialEq)]
pub struct MachineSpec {
    out0: StateVector,
    out1: StateVector,
    blank: StateVector,
    ancilla_init: StateVector,
    extension: Extension,
}

impl MachineSpec {
    pub fn new(
        out0: StateVector,
        out1: StateVector,
        blank: StateVector,
        ancilla_init: StateVector,
        extension: Extension,
    ) -> Result<Self> {
        Self::with_tolerance(out0, out1, blank, ancilla_init, extension, VERDICT_TOL)
    }

    pub fn with_tolerance(
        out0: StateVector,
        out1: StateVector,
        blank: StateVector,
        ancilla_init: StateVector,
        extension: Extension,
        tol: f64,
    ) -> Result<Self> {
        if blank.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: blank.dim(),
                right: 2,
            });
        }
        blank.require_normalized(tol)?;
        ancilla_init.require_normalized(tol)?;
        let expected = 4 * ancilla_init.dim();
        for out in [&out0, &out1] {
            if out.dim() != expected {
                return Err(Error::DimensionMismatch {
                    left: out.dim(),
                    right: expected,
                });
            }
            out.require_normalized(tol)?;
        }
        let overlap = inner_product(&out0, &out1)?.norm();
        if overlap > tol {
            return Err(Error::NotIsometric { residual: overlap });
        }
        if let Extension::Hybrid { ancilla0, ancilla1, .. } = &extension {
            for q in [ancilla0, ancilla1] {
                if q.dim() != ancilla_init.dim() {
                    return Err(Error::DimensionMismatch {
                        left: q.dim(),
                        right: ancilla_init.dim(),
                    });
                }
                q.require_normalized(tol)?;
            }
        }
        Ok(Self {
            out0,
            out1,
            blank,
            ancilla_init,
            extension,
        })
    }

    /// Machine `|i>|Σ>|Q> → |i> ⊗ |i> ⊗ |Q_i>` extended linearly.
    pub fn cloning(ancilla0: StateVector, ancilla1: StateVector) -> Result<Self> {
        let k0 = StateVector::basis(2, 0)?;
        let k1 = StateVector::basis(2, 1)?;
        let out0 = tensor_all(&[&k0, &k0, &ancilla0])?;
        let out1 = tensor_all(&[&k1, &k1, &ancilla1])?;
        let init = StateVector::basis(ancilla0.dim(), 0)?;
        Self::new(out0, out1, k0, init, Extension::Linear)
    }

    /// Hybrid machine with `out_i = |i> ⊗ K|i> ⊗ |Q_i>`.
    pub fn hybrid(kmap: GeneralKMap, ancilla0: StateVector, ancilla1: StateVector) -> Result<Self> {
        let k0 = StateVector::basis(2, 0)?;
        let k1 = StateVector::basis(2, 1)?;
        let out0 = tensor_all(&[&k0, &kmap.apply(&k0)?, &ancilla0])?;
        let out1 = tensor_all(&[&k1, &kmap.apply(&k1)?, &ancilla1])?;
        let init = StateVector::basis(ancilla0.dim(), 0)?;
        Self::new(
            out0,
            out1,
            k0,
            init,
            Extension::Hybrid {
                kmap,
                ancilla0,
                ancilla1,
            },
        )
    }

    pub fn out0(&self) -> &StateVector {
        &self.out0
    }

    pub fn out1(&self) -> &StateVector {
        &self.out1
    }

    pub fn blank(&self) -> &StateVector {
        &self.blank
    }

    pub fn ancilla_init(&self) -> &StateVector {
        &self.ancilla_init
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_init.dim()
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    /// Final ancilla state for basis input `i`: stored for hybrid machines,
    /// otherwise read off `out_i` when it is a product across the ancilla
    /// cut. Falls back to the initial ancilla for entangled outputs.
    pub fn ancilla_final(&self, i: usize) -> StateVector {
        if let Extension::Hybrid { ancilla0, ancilla1, .. } = &self.extension {
            return if i == 0 { ancilla0.clone() } else { ancilla1.clone() };
        }
        let out = if i == 0 { &self.out0 } else { &self.out1 };
        factor_product(out, 4, self.ancilla_dim(), 1e-9)
            .map(|(_, q)| q)
            .unwrap_or_else(|| self.ancilla_init.clone())
    }
}

fn mismatch(expected: &'static str, m: &MachineSpec) -> Error {
    Error::ExtensionMismatch {
        expected,
        found: m.extension.label(),
    }
}

/// `α out0 + β out1`.
pub fn extend_linear(m: &MachineSpec, q: &Qubit) -> Result<StateVector> {
    if m.extension != Extension::Linear {
        return Err(mismatch("linear", m));
    }
    StateVector::combination(&[(q.alpha(), &m.out0), (q.beta(), &m.out1)])
}

/// `α* out0 + β* out1`.
pub fn extend_antilinear(m: &MachineSpec, q: &Qubit) -> Result<StateVector> {
    if m.extension != Extension::Antilinear {
        return Err(mismatch("antilinear", m));
    }
    StateVector::combination(&[(q.alpha().conj(), &m.out0), (q.beta().conj(), &m.out1)])
}

/// `sqrt(λ) Σ_i c_i |i>⊗U|i>⊗|Q_i> + sqrt(1-λ) Σ_i c_i* |i>⊗A|i>⊗|Q_i>`
/// with `(c_0, c_1) = (α, β)`.
pub fn extend_hybrid(m: &MachineSpec, q: &Qubit) -> Result<StateVector> {
    let Extension::Hybrid {
        kmap,
        ancilla0,
        ancilla1,
    } = &m.extension
    else {
        return Err(mismatch("hybrid", m));
    };
    let lambda = kmap.lambda();
    let (sl, sa) = (c(lambda.sqrt(), 0.0), c((1.0 - lambda).sqrt(), 0.0));
    let coeffs = [q.alpha(), q.beta()];
    let ancillas = [ancilla0, ancilla1];
    let mut terms: Vec<(Complex64, StateVector)> = Vec::with_capacity(4);
    for i in 0..2 {
        let ki = StateVector::basis(2, i)?;
        let u_i = crate::algebra::apply(kmap.unitary_part(), &ki)?;
        let a_i = crate::algebra::apply_antiunitary(kmap.antiunitary_part(), &ki)?;
        terms.push((sl * coeffs[i], tensor_all(&[&ki, &u_i, ancillas[i]])?));
        terms.push((sa * coeffs[i].conj(), tensor_all(&[&ki, &a_i, ancillas[i]])?));
    }
    let refs: Vec<(Complex64, &StateVector)> = terms.iter().map(|(w, v)| (*w, v)).collect();
    StateVector::combination(&refs)
}

/// Dispatches on the machine's declared extension.
pub fn extend(m: &MachineSpec, q: &Qubit) -> Result<StateVector> {
    match m.extension {
        Extension::Linear => extend_linear(m, q),
        Extension::Antilinear => extend_antilinear(m, q),
        Extension::Hybrid { .. } => extend_hybrid(m, q),
    }
}
