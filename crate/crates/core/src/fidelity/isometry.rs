use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{c, haar_unitary, orthonormalize_columns, StateVector, ZERO};
use crate::error::{Error, Result};
use crate::states::Qubit;

/// Isometry `V` from the input qubit into register 1 ⊗ register 2 ⊗ ancilla.
///
/// Stored row-major as a `(4·d_Q) × 2` matrix; column `j` is `V|j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryParam {
    ancilla_dim: usize,
    matrix: Vec<Complex64>,
}

pub const ISOMETRY_TOL: f64 = 1e-9;

fn check_ancilla_dim(d: usize) -> Result<()> {
    if matches!(d, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "ancilla dimension {d} not supported (use 1, 2 or 4)"
        )))
    }
}

impl IsometryParam {
    pub fn new(ancilla_dim: usize, matrix: Vec<Complex64>) -> Result<Self> {
        check_ancilla_dim(ancilla_dim)?;
        let rows = 4 * ancilla_dim;
        if matrix.len() != rows * 2 {
            return Err(Error::DimensionMismatch {
                left: matrix.len(),
                right: rows * 2,
            });
        }
        if matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        let v = Self { ancilla_dim, matrix };
        let residual = v.isometry_residual();
        if residual > ISOMETRY_TOL {
            return Err(Error::NotIsometric { residual });
        }
        Ok(v)
    }

    /// `V|0> = col0`, `V|1> = col1`.
    pub fn from_columns(col0: &StateVector, col1: &StateVector) -> Result<Self> {
        if col0.dim() != col1.dim() || !col0.dim().is_multiple_of(4) {
            return Err(Error::DimensionMismatch {
                left: col0.dim(),
                right: col1.dim(),
            });
        }
        let rows = col0.dim();
        let mut m = vec![ZERO; rows * 2];
        for r in 0..rows {
            m[r * 2] = col0.amplitudes()[r];
            m[r * 2 + 1] = col1.amplitudes()[r];
        }
        Self::new(rows / 4, m)
    }

    /// Orthonormalizes an unconstrained parameter vector (`re, im` pairs,
    /// row-major) into an isometry. Degenerate inputs get a fixed fallback.
    pub fn from_unconstrained(ancilla_dim: usize, params: &[f64]) -> Result<Self> {
        check_ancilla_dim(ancilla_dim)?;
        let rows = 4 * ancilla_dim;
        if params.len() != rows * 4 {
            return Err(Error::DimensionMismatch {
                left: params.len(),
                right: rows * 4,
            });
        }
        let mut m: Vec<Complex64> = params.chunks(2).map(|p| c(p[0], p[1])).collect();
        if !orthonormalize_columns(rows, 2, &mut m) {
            m = vec![ZERO; rows * 2];
            m[0] = c(1.0, 0.0);
            m[3] = c(1.0, 0.0);
        }
        Self::new(ancilla_dim, m)
    }

    /// First two columns of a Haar unitary.
    pub fn random<R: Rng + ?Sized>(ancilla_dim: usize, rng: &mut R) -> Result<Self> {
        check_ancilla_dim(ancilla_dim)?;
        let rows = 4 * ancilla_dim;
        let u = haar_unitary(rows, rng)?;
        let m = (0..rows)
            .flat_map(|r| [u.get(r, 0), u.get(r, 1)])
            .collect();
        Self::new(ancilla_dim, m)
    }

    pub(crate) fn from_raw_unchecked(ancilla_dim: usize, matrix: Vec<Complex64>) -> Self {
        Self { ancilla_dim, matrix }
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn rows(&self) -> usize {
        4 * self.ancilla_dim
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    /// Max entry of `|V†V - I₂|`.
    pub fn isometry_residual(&self) -> f64 {
        let rows = self.rows();
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let g: Complex64 = (0..rows)
                    .map(|r| self.matrix[r * 2 + i].conj() * self.matrix[r * 2 + j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - c(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn apply(&self, q: &Qubit) -> StateVector {
        let amps = (0..self.rows())
            .map(|r| self.matrix[r * 2] * q.alpha() + self.matrix[r * 2 + 1] * q.beta())
            .collect();
        StateVector::new(amps).expect("supported dimension")
    }
}
