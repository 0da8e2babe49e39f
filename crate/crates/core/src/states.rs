//! Single-qubit states: Bloch parametrization, complement and conjugate, and
//! the polar and equatorial great circles.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{c, inner_product, StateVector, ALGEBRA_TOL, ONE, ZERO};
use crate::error::{Error, Result};

/// `α|0> + β|1>` with `|α|² + |β|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    alpha: Complex64,
    beta: Complex64,
}

impl Qubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::with_tolerance(alpha, beta, ALGEBRA_TOL)
    }

    pub fn with_tolerance(alpha: Complex64, beta: Complex64, tol: f64) -> Result<Self> {
        if ![alpha.re, alpha.im, beta.re, beta.im].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { alpha, beta })
    }

    pub fn from_state(v: &StateVector) -> Result<Self> {
        if v.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: v.dim(),
                right: 2,
            });
        }
        Self::new(v.amplitudes()[0], v.amplitudes()[1])
    }

    pub fn zero() -> Self {
        Self { alpha: ONE, beta: ZERO }
    }

    pub fn one() -> Self {
        Self { alpha: ZERO, beta: ONE }
    }

    pub fn plus() -> Self {
        Self {
            alpha: c(FRAC_1_SQRT_2, 0.0),
            beta: c(FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn minus() -> Self {
        Self {
            alpha: c(FRAC_1_SQRT_2, 0.0),
            beta: c(-FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn plus_i() -> Self {
        Self {
            alpha: c(FRAC_1_SQRT_2, 0.0),
            beta: c(0.0, FRAC_1_SQRT_2),
        }
    }

    pub fn minus_i() -> Self {
        Self {
            alpha: c(FRAC_1_SQRT_2, 0.0),
            beta: c(0.0, -FRAC_1_SQRT_2),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn to_state(&self) -> StateVector {
        StateVector::new(vec![self.alpha, self.beta]).expect("two finite amplitudes")
    }

    /// The antipodal state `α*|1> - β*|0>`.
    pub fn complement(&self) -> Self {
        Self {
            alpha: -self.beta.conj(),
            beta: self.alpha.conj(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            alpha: self.alpha.conj(),
            beta: self.beta.conj(),
        }
    }

    pub fn scaled(&self, phase: Complex64) -> Self {
        Self {
            alpha: self.alpha * phase,
            beta: self.beta * phase,
        }
    }

    /// `(x, y, z)` with `x + iy = 2 α* β` and `z = |α|² - |β|²`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let cross = 2.0 * self.alpha.conj() * self.beta;
        [cross.re, cross.im, self.alpha.norm_sqr() - self.beta.norm_sqr()]
    }
}

/// Ket notation with six significant decimals, e.g. `(0.707107)|0> + (0.707107i)|1>`.
impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})|0> + ({})|1>",
            format_complex(self.alpha),
            format_complex(self.beta)
        )
    }
}

pub fn format_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.6}"),
        (true, false) => format!("{im:.6}i"),
        (false, false) if im < 0.0 => format!("{re:.6}-{:.6}i", -im),
        (false, false) => format!("{re:.6}+{im:.6}i"),
    }
}

pub fn complement(q: &Qubit) -> Qubit {
    q.complement()
}

pub fn conjugate(q: &Qubit) -> Qubit {
    q.conjugate()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// `theta ∈ [0, π]`, `phi ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidArgument(format!(
                "Bloch angles out of range: theta = {theta}, phi = {phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `cos(θ/2)|0> + sin(θ/2) e^{iφ}|1>`.
pub fn qubit_from_bloch(angles: BlochAngles) -> Qubit {
    let half = angles.theta / 2.0;
    Qubit {
        alpha: c(half.cos(), 0.0),
        beta: Complex64::from_polar(half.sin(), angles.phi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CircleKind {
    PolarPlus,
    PolarMinus,
    EquatorialPlus,
    EquatorialMinus,
}

/// A point on one of the four half-sets making up the polar and equatorial
/// great circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreatCircleFamily {
    kind: CircleKind,
    parameter: f64,
}

impl GreatCircleFamily {
    pub fn new(kind: CircleKind, parameter: f64) -> Result<Self> {
        let ok = match kind {
            CircleKind::PolarPlus | CircleKind::PolarMinus => (0.0..=PI).contains(&parameter),
            CircleKind::EquatorialPlus | CircleKind::EquatorialMinus => {
                (0.0..TAU).contains(&parameter)
            }
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "parameter {parameter} out of range for {kind:?}"
            )));
        }
        Ok(Self { kind, parameter })
    }

    pub fn kind(&self) -> CircleKind {
        self.kind
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }
}

/// The set members as written in the set definitions:
///
/// * `PolarPlus(θ)  = cos(θ/2)|0> + sin(θ/2)|1>`
/// * `PolarMinus(θ) = cos(θ/2)|1> - sin(θ/2)|0>`
/// * `EquatorialPlus(φ)  = (|0> + e^{iφ}|1>)/√2`
/// * `EquatorialMinus(φ) = (|1> - e^{-iφ}|0>)/√2`
///
/// With the complement convention `α*|1> - β*|0>` each minus member is exactly
/// the complement of the plus member with the same parameter.
pub fn circle_state(family: GreatCircleFamily) -> Qubit {
    let p = family.parameter;
    match family.kind {
        CircleKind::PolarPlus => Qubit {
            alpha: c((p / 2.0).cos(), 0.0),
            beta: c((p / 2.0).sin(), 0.0),
        },
        CircleKind::PolarMinus => Qubit {
            alpha: c(-(p / 2.0).sin(), 0.0),
            beta: c((p / 2.0).cos(), 0.0),
        },
        CircleKind::EquatorialPlus => Qubit {
            alpha: c(FRAC_1_SQRT_2, 0.0),
            beta: Complex64::from_polar(FRAC_1_SQRT_2, p),
        },
        CircleKind::EquatorialMinus => Qubit {
            alpha: -Complex64::from_polar(FRAC_1_SQRT_2, -p),
            beta: c(FRAC_1_SQRT_2, 0.0),
        },
    }
}

/// Which half of a great circle plays the role of `|Ψ>` (the other half is `|Ψ̄>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

/// Polar representative used for gate checks: `PolarPlus(θ)` or `PolarMinus(θ)`.
pub fn polar_frame_state(theta: f64, branch: Branch) -> Qubit {
    let (s, co) = (theta / 2.0).sin_cos();
    match branch {
        Branch::Plus => Qubit {
            alpha: c(co, 0.0),
            beta: c(s, 0.0),
        },
        Branch::Minus => Qubit {
            alpha: c(-s, 0.0),
            beta: c(co, 0.0),
        },
    }
}

/// Phase-symmetric equatorial representative:
///
/// * `Plus`:  `(e^{-iφ/2}|0> + e^{iφ/2}|1>)/√2`, i.e. `H(cos(φ/2)|0> - i sin(φ/2)|1>)`
/// * `Minus`: `(e^{-iφ/2}|0> - e^{iφ/2}|1>)/√2`, minus the complement of `Plus`
///
/// Because the complement is antilinear, the equal-superposition rule
/// `Ψ → (Ψ + iΨ̄)/√2` depends on the phase of the representative. `H_E`
/// realizes it for the `Minus` branch; on the `Plus` branch it realizes
/// `Ψ → (Ψ - iΨ̄)/√2` instead. Both branches satisfy the same Gram identities.
pub fn equatorial_frame_state(phi: f64, branch: Branch) -> Qubit {
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    Qubit {
        alpha: Complex64::from_polar(FRAC_1_SQRT_2, -phi / 2.0),
        beta: Complex64::from_polar(sign * FRAC_1_SQRT_2, phi / 2.0),
    }
}

/// Branch used for equatorial gate checks unless the caller picks one.
pub const DEFAULT_EQUATORIAL_BRANCH: Branch = Branch::Minus;

/// `(<Ψ1|Ψ2>, <Ψ1|Ψ̄2>, <Ψ̄1|Ψ2>, <Ψ̄1|Ψ̄2>)`.
pub fn gram_quad(q1: &Qubit, q2: &Qubit) -> [Complex64; 4] {
    let ip = |a: &Qubit, b: &Qubit| a.alpha.conj() * b.alpha + a.beta.conj() * b.beta;
    let (b1, b2) = (q1.complement(), q2.complement());
    [ip(q1, q2), ip(q1, &b2), ip(&b1, q2), ip(&b1, &b2)]
}

/// Gram quadruple for two polar-circle states `PolarPlus(θ1)`, `PolarPlus(θ2)`.
pub fn polar_gram(theta1: f64, theta2: f64) -> [Complex64; 4] {
    gram_quad(
        &polar_frame_state(theta1, Branch::Plus),
        &polar_frame_state(theta2, Branch::Plus),
    )
}

/// Gram quadruple for two equatorial states in the phase-symmetric frame.
pub fn equatorial_gram(phi1: f64, phi2: f64) -> [Complex64; 4] {
    gram_quad(
        &equatorial_frame_state(phi1, DEFAULT_EQUATORIAL_BRANCH),
        &equatorial_frame_state(phi2, DEFAULT_EQUATORIAL_BRANCH),
    )
}

/// Residuals of the polar sign pattern: `(|g12 + g21|, |g11 - g22|)`.
pub fn polar_pattern_residuals(g: &[Complex64; 4]) -> (f64, f64) {
    ((g[1] + g[2]).norm(), (g[0] - g[3]).norm())
}

/// Residuals of the equatorial sign pattern: `(|g12 - g21|, |g11 - g22|)`.
pub fn equatorial_pattern_residuals(g: &[Complex64; 4]) -> (f64, f64) {
    ((g[1] - g[2]).norm(), (g[0] - g[3]).norm())
}

/// Residuals of the identities valid for every pair of qubits:
/// `(|g12 + g21*|, |g11 - g22*|)`.
pub fn general_pattern_residuals(g: &[Complex64; 4]) -> (f64, f64) {
    ((g[1] + g[2].conj()).norm(), (g[0] - g[3].conj()).norm())
}

/// `n` states with uniform azimuth and uniform `cos θ`, reproducible for a seed.
pub fn sample_bloch(n: usize, seed: u64) -> Result<Vec<Qubit>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..=1.0);
            let phi: f64 = rng.random_range(0.0..TAU);
            let theta = z.clamp(-1.0, 1.0).acos();
            qubit_from_bloch(BlochAngles { theta, phi })
        })
        .collect())
}

/// `|<a|b>|` close to one.
pub fn same_ray(a: &Qubit, b: &Qubit, tol: f64) -> bool {
    inner_product(&a.to_state(), &b.to_state())
        .map(|z| (1.0 - z.norm()).abs() <= tol)
        .unwrap_or(false)
}
