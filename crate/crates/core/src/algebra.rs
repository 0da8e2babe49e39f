//! Dense complex linear algebra for registers of up to four qubits.
//!
//! Vectors and operators are stored densely in row-major order. Tensor
//! products use the convention that the left factor is the most significant
//! index, so `|a> ⊗ |b>` has amplitude `a[i] * b[j]` at index `i * dim(b) + j`.
//!
//! Nothing here renormalizes silently: `apply` returns exactly `op · v`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Default tolerance for algebraic self-checks (normalization, hermiticity).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Default tolerance for realizability verdicts.
pub const VERDICT_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dimension 1 is the trivial factor (an absent ancilla); the rest are qubit registers.
pub fn is_supported_dim(dim: usize) -> bool {
    matches!(dim, 1 | 2 | 4 | 8 | 16)
}

fn check_dim(dim: usize) -> Result<()> {
    if is_supported_dim(dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        check_dim(amps.len())?;
        check_finite(&amps)?;
        Ok(Self { amps })
    }

    /// Like [`StateVector::new`] but additionally requires unit norm within `tol`.
    pub fn normalized_new(amps: Vec<Complex64>, tol: f64) -> Result<Self> {
        let v = Self::new(amps)?;
        v.require_normalized(tol)?;
        Ok(v)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| c(x, 0.0)).collect())
    }

    /// Computational basis vector `|index>` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            amps: vec![ZERO; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn require_normalized(&self, tol: f64) -> Result<()> {
        if self.is_normalized(tol) {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr(),
            })
        }
    }

    /// Returns `v / |v|`. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: n * n });
        }
        Ok(self.scaled(c(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|z| z * factor).collect(),
        }
    }

    /// Entrywise complex conjugate (the conjugation map in the computational basis).
    pub fn conj(&self) -> Self {
        Self {
            amps: self.amps.iter().map(|z| z.conj()).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: Complex64, other: &StateVector) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + factor * b)
                .collect(),
        })
    }

    /// Sum of `coeff * vector` terms; all vectors must share a dimension.
    pub fn combination(terms: &[(Complex64, &StateVector)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let mut acc = Self::zeros(first.1.dim())?;
        for (coeff, v) in terms {
            acc = acc.add_scaled(*coeff, v)?;
        }
        Ok(acc)
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Equality up to a global phase: `|<self|other>| = 1` within `tol`,
    /// for normalized inputs.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> Result<bool> {
        Ok((1.0 - inner_product(self, other)?.norm()).abs() <= tol)
    }
}

/// `<u|v>`: conjugate-linear in `u`, linear in `v`.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Result<Complex64> {
    same_dim(u.dim(), v.dim())?;
    Ok(u.amps
        .iter()
        .zip(&v.amps)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `1 - |<u|v>|^2` for normalized `u`, `v`: zero iff equal up to global phase.
pub fn state_mismatch(u: &StateVector, v: &StateVector) -> Result<f64> {
    Ok((1.0 - inner_product(u, v)?.norm_sqr()).max(0.0))
}

/// Square dense operator, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: dim * dim,
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: bad.len(),
                right: dim,
            });
        }
        Self::new(dim, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![ZERO; dim * dim],
        })
    }

    /// `|u><v|`.
    pub fn outer(u: &StateVector, v: &StateVector) -> Result<Self> {
        same_dim(u.dim(), v.dim())?;
        let dim = u.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in &u.amps {
            for b in &v.amps {
                entries.push(a * b.conj());
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for col in 0..n {
                entries[col * n + r] = self.entries[r * n + col].conj();
            }
        }
        Self { dim: n, entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for col in 0..n {
                entries[col * n + r] = self.entries[r * n + col];
            }
        }
        Self { dim: n, entries }
    }

    pub fn matmul(&self, other: &DenseOperator) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                for col in 0..n {
                    entries[r * n + col] += a * other.entries[k * n + col];
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn add(&self, other: &DenseOperator) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> Result<f64> {
        same_dim(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max entry of `|op† op - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("square operator");
        let id = Self::identity(self.dim).expect("supported dim");
        gram.max_abs_diff(&id).expect("same dim")
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()).expect("same dim") <= tol
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }
}

pub fn is_unitary(op: &DenseOperator, tol: f64) -> bool {
    op.unitarity_residual() <= tol
}

/// Matrix-vector product; the result is not renormalized.
pub fn apply(op: &DenseOperator, v: &StateVector) -> Result<StateVector> {
    same_dim(op.dim, v.dim())?;
    let n = op.dim;
    let amps = (0..n)
        .map(|r| {
            op.entries[r * n..(r + 1) * n]
                .iter()
                .zip(&v.amps)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    Ok(StateVector { amps })
}

/// Kronecker product with the left factor as the most significant index.
pub trait Kron: Sized {
    fn kron(&self, other: &Self) -> Result<Self>;
}

impl Kron for StateVector {
    fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        check_dim(dim)?;
        let mut amps = Vec::with_capacity(dim);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { amps })
    }
}

impl Kron for DenseOperator {
    fn kron(&self, other: &Self) -> Result<Self> {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        check_dim(dim)?;
        let mut entries = vec![ZERO; dim * dim];
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.entries[r1 * n + c1];
                for r2 in 0..m {
                    for c2 in 0..m {
                        entries[(r1 * m + r2) * dim + c1 * m + c2] = a * other.entries[r2 * m + c2];
                    }
                }
            }
        }
        Ok(Self { dim, entries })
    }
}

pub fn tensor<T: Kron>(left: &T, right: &T) -> Result<T> {
    left.kron(right)
}

/// Tensor product of several factors, left to right.
pub fn tensor_all(factors: &[&StateVector]) -> Result<StateVector> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, f| acc.kron(f))
}

/// `v ↦ U · conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiUnitaryMap {
    unitary_part: DenseOperator,
}

impl AntiUnitaryMap {
    pub fn new(unitary_part: DenseOperator) -> Result<Self> {
        let residual = unitary_part.unitarity_residual();
        if residual > VERDICT_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { unitary_part })
    }

    /// Plain complex conjugation in the computational basis.
    pub fn conjugation(dim: usize) -> Result<Self> {
        Ok(Self {
            unitary_part: DenseOperator::identity(dim)?,
        })
    }

    /// Qubit complement `(-iσ_y) 𝒞`: `α|0> + β|1> ↦ α*|1> - β*|0>`.
    pub fn complement() -> Self {
        let minus_i_sigma_y =
            DenseOperator::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).expect("2x2");
        Self {
            unitary_part: minus_i_sigma_y,
        }
    }

    pub fn unitary_part(&self) -> &DenseOperator {
        &self.unitary_part
    }

    pub fn dim(&self) -> usize {
        self.unitary_part.dim()
    }
}

pub fn apply_antiunitary(map: &AntiUnitaryMap, v: &StateVector) -> Result<StateVector> {
    apply(&map.unitary_part, &v.conj())
}

/// `K = sqrt(λ) U + sqrt(1 - λ) A` acting on a single qubit.
///
/// For `0 < λ < 1` the sum only preserves norms when `U† A'` is antisymmetric
/// (`A = A' 𝒞`); other combinations are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralKMap {
    lambda: f64,
    unitary_part: DenseOperator,
    antiunitary_part: AntiUnitaryMap,
}

impl GeneralKMap {
    pub fn new(lambda: f64, unitary_part: DenseOperator, antiunitary_part: AntiUnitaryMap) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
            return Err(Error::LambdaOutOfRange(lambda));
        }
        same_dim(unitary_part.dim(), 2)?;
        same_dim(antiunitary_part.dim(), 2)?;
        let residual = unitary_part.unitarity_residual();
        if residual > VERDICT_TOL {
            return Err(Error::NotUnitary { residual });
        }
        if lambda > 0.0 && lambda < 1.0 {
            let m = unitary_part.adjoint().matmul(antiunitary_part.unitary_part())?;
            let sym = m.add(&m.transpose())?;
            let residual = sym.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
            if residual > VERDICT_TOL {
                return Err(Error::NonIsometricKMap { residual });
            }
        }
        Ok(Self {
            lambda,
            unitary_part,
            antiunitary_part,
        })
    }

    /// Pure unitary `K = U`.
    pub fn unitary(u: DenseOperator) -> Result<Self> {
        Self::new(1.0, u, AntiUnitaryMap::conjugation(2)?)
    }

    /// Pure antiunitary `K = A`.
    pub fn antiunitary(a: AntiUnitaryMap) -> Result<Self> {
        Self::new(0.0, DenseOperator::identity(2)?, a)
    }

    /// The cloning-cum-complementing map `sqrt(λ) I + sqrt(1-λ) (-iσ_y)𝒞`.
    pub fn clone_complement(lambda: f64) -> Result<Self> {
        Self::new(lambda, DenseOperator::identity(2)?, AntiUnitaryMap::complement())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn unitary_part(&self) -> &DenseOperator {
        &self.unitary_part
    }

    pub fn antiunitary_part(&self) -> &AntiUnitaryMap {
        &self.antiunitary_part
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        let u = apply(&self.unitary_part, v)?;
        let a = apply_antiunitary(&self.antiunitary_part, v)?;
        u.scaled(c(self.lambda.sqrt(), 0.0))
            .add_scaled(c((1.0 - self.lambda).sqrt(), 0.0), &a)
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: DenseOperator,
}

impl DensityOperator {
    pub fn new(op: DenseOperator) -> Result<Self> {
        if !op.is_hermitian(ALGEBRA_TOL) {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        if (op.trace() - ONE).norm() > ALGEBRA_TOL {
            return Err(Error::InvalidDensity("trace is not 1"));
        }
        if !is_positive_semidefinite(&op, 1e-10) {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(Self { op })
    }

    pub fn from_pure(v: &StateVector) -> Result<Self> {
        v.require_normalized(ALGEBRA_TOL)?;
        Ok(Self {
            op: DenseOperator::outer(v, v)?,
        })
    }

    /// Weighted mixture of normalized pure states; weights must sum to one.
    pub fn mixture(terms: &[(f64, &StateVector)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut acc = DenseOperator::zeros(first.1.dim())?;
        for (w, v) in terms {
            if *w < 0.0 {
                return Err(Error::InvalidArgument("negative mixture weight".into()));
            }
            acc = acc.add(&DenseOperator::outer(v, v)?.scaled(c(*w, 0.0)))?;
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &DenseOperator {
        &self.op
    }
}

/// PSD test via Cholesky of `op + shift·I`.
fn is_positive_semidefinite(op: &DenseOperator, shift: f64) -> bool {
    let n = op.dim();
    let mut l = vec![ZERO; n * n];
    for j in 0..n {
        let mut d = op.get(j, j).re + shift;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = c(d, 0.0);
        for i in j + 1..n {
            let mut s = op.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

/// `<ideal| ρ |ideal>`.
pub fn fidelity_pure_mixed(ideal: &StateVector, actual: &DensityOperator) -> Result<f64> {
    ideal.require_normalized(VERDICT_TOL)?;
    let rho_v = apply(actual.as_operator(), ideal)?;
    Ok(inner_product(ideal, &rho_v)?.re)
}

/// Traces out every factor not listed in `keep`. `dims` is the factorization of
/// `rho`, most significant factor first; kept factors retain their order.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize], dims: &[usize]) -> Result<DensityOperator> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::Factorization(format!(
            "factors {dims:?} multiply to {total}, operator has dimension {}",
            rho.dim()
        )));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() || sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Factorization(format!("invalid keep list {keep:?}")));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !sorted.contains(i)).collect();
    let kept_dim: usize = sorted.iter().map(|&i| dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();

    // Place the per-factor digits of (kept index, traced index) into a full index.
    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut digits = vec![0usize; dims.len()];
        let mut rem = kept_idx;
        for &f in sorted.iter().rev() {
            digits[f] = rem % dims[f];
            rem /= dims[f];
        }
        let mut rem = traced_idx;
        for &f in traced.iter().rev() {
            digits[f] = rem % dims[f];
            rem /= dims[f];
        }
        digits
            .iter()
            .zip(dims)
            .fold(0, |acc, (&d, &size)| acc * size + d)
    };

    let op = rho.as_operator();
    let mut entries = vec![ZERO; kept_dim * kept_dim];
    for r in 0..kept_dim {
        for col in 0..kept_dim {
            entries[r * kept_dim + col] = (0..traced_dim)
                .map(|t| op.get(compose(r, t), compose(col, t)))
                .sum();
        }
    }
    DensityOperator::new(DenseOperator::new(kept_dim, entries)?)
}

/// Splits `v` of dimension `left_dim * right_dim` as `l ⊗ r` when it is a
/// product state. `r` is normalized; `l` carries the norm and phase.
pub fn factor_product(
    v: &StateVector,
    left_dim: usize,
    right_dim: usize,
    tol: f64,
) -> Option<(StateVector, StateVector)> {
    if left_dim * right_dim != v.dim() || !is_supported_dim(left_dim) || !is_supported_dim(right_dim) {
        return None;
    }
    let row = |i: usize| &v.amps[i * right_dim..(i + 1) * right_dim];
    let best = (0..left_dim)
        .map(|i| (i, row(i).iter().map(|z| z.norm_sqr()).sum::<f64>()))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if best.1 <= 0.0 {
        return None;
    }
    let norm = best.1.sqrt();
    let right: Vec<Complex64> = row(best.0).iter().map(|z| z / norm).collect();
    let left: Vec<Complex64> = (0..left_dim)
        .map(|i| row(i).iter().zip(&right).map(|(a, r)| r.conj() * a).sum())
        .collect();
    let (left, right) = (StateVector { amps: left }, StateVector { amps: right });
    let rebuilt = left.kron(&right).ok()?;
    (rebuilt.max_abs_diff(v).ok()? <= tol).then_some((left, right))
}

/// Gram–Schmidt on the columns of a row-major `rows × cols` matrix, in place.
/// Returns `false` if the columns are (numerically) linearly dependent.
pub fn orthonormalize_columns(rows: usize, cols: usize, m: &mut [Complex64]) -> bool {
    debug_assert_eq!(m.len(), rows * cols);
    for j in 0..cols {
        // Two passes keep the columns orthogonal to working precision.
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..rows).map(|r| m[r * cols + k].conj() * m[r * cols + j]).sum();
                for r in 0..rows {
                    let sub = proj * m[r * cols + k];
                    m[r * cols + j] -= sub;
                }
            }
        }
        let norm: f64 = (0..rows).map(|r| m[r * cols + j].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return false;
        }
        for r in 0..rows {
            m[r * cols + j] /= norm;
        }
    }
    true
}

/// Haar-distributed unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DenseOperator> {
    check_dim(dim)?;
    loop {
        let mut m: Vec<Complex64> = (0..dim * dim)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if orthonormalize_columns(dim, dim, &mut m) {
            return DenseOperator::new(dim, m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn ket0() -> StateVector {
        StateVector::basis(2, 0).unwrap()
    }
    fn ket1() -> StateVector {
        StateVector::basis(2, 1).unwrap()
    }
    fn plus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }
    fn hadamard() -> DenseOperator {
        DenseOperator::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
            .unwrap()
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&ket0(), &ket0()).unwrap(), ONE);
        assert_eq!(inner_product(&ket0(), &ket1()).unwrap(), ZERO);
        // |Ψ(θ)> = cos(θ/2)|0> + sin(θ/2)|1>, θ1 = 0, θ2 = π/2
        let t2 = PI / 2.0;
        let psi2 = StateVector::from_real(&[(t2 / 2.0).cos(), (t2 / 2.0).sin()]).unwrap();
        let ip = inner_product(&ket0(), &psi2).unwrap();
        assert!((ip.re - (PI / 4.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let big = StateVector::basis(4, 0).unwrap();
        assert!(matches!(
            inner_product(&ket0(), &big),
            Err(Error::DimensionMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn tensor_examples() {
        let v = tensor(&ket0(), &ket1()).unwrap();
        assert_eq!(v, StateVector::basis(4, 1).unwrap());
        let id2 = DenseOperator::identity(2).unwrap();
        assert_eq!(tensor(&id2, &id2).unwrap(), DenseOperator::identity(4).unwrap());
        let pp = tensor(&plus(), &plus()).unwrap();
        for a in pp.amplitudes() {
            assert!((a - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_oversized_products() {
        let v16 = StateVector::basis(16, 0).unwrap();
        assert_eq!(tensor(&v16, &ket0()), Err(Error::UnsupportedDimension(32)));
    }

    #[test]
    fn apply_examples() {
        let h0 = apply(&hadamard(), &ket0()).unwrap();
        assert!(h0.max_abs_diff(&plus()).unwrap() < 1e-15);
        let x = DenseOperator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(apply(&x, &ket0()).unwrap(), ket1());
        // H_P |Ψ(π/2)> = |1>
        let hp = DenseOperator::from_real_rows(&[&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]])
            .unwrap();
        let out = apply(&hp, &plus()).unwrap();
        assert!(out.max_abs_diff(&ket1()).unwrap() < 1e-15);
    }

    #[test]
    fn apply_does_not_renormalize() {
        let two = DenseOperator::identity(2).unwrap().scaled(c(2.0, 0.0));
        assert!((apply(&two, &ket0()).unwrap().norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn antiunitary_examples() {
        let conj = AntiUnitaryMap::conjugation(2).unwrap();
        let v = StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let w = apply_antiunitary(&conj, &v).unwrap();
        assert_eq!(w.amplitudes()[1], c(0.0, -FRAC_1_SQRT_2));
        assert_eq!(apply_antiunitary(&conj, &w).unwrap(), v);

        // (-iσ_y)𝒞 (α|0> + β|1>) = α*|1> - β*|0>
        let alpha = c(0.6, 0.0);
        let beta = c(0.0, 0.8);
        let psi = StateVector::new(vec![alpha, beta]).unwrap();
        let bar = apply_antiunitary(&AntiUnitaryMap::complement(), &psi).unwrap();
        assert!((bar.amplitudes()[0] + beta.conj()).norm() < 1e-15);
        assert!((bar.amplitudes()[1] - alpha.conj()).norm() < 1e-15);
    }

    #[test]
    fn unitary_checks() {
        assert!(is_unitary(&hadamard(), 1e-12));
        let hp = DenseOperator::from_real_rows(&[&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]])
            .unwrap();
        assert!(is_unitary(&hp, 1e-12));
        assert!(!is_unitary(&DenseOperator::zeros(2).unwrap(), 1e-12));
    }

    #[test]
    fn fidelity_examples() {
        let rho0 = DensityOperator::from_pure(&ket0()).unwrap();
        let rho1 = DensityOperator::from_pure(&ket1()).unwrap();
        assert!((fidelity_pure_mixed(&ket0(), &rho0).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity_pure_mixed(&ket0(), &rho1).unwrap().abs() < 1e-15);
        let mixed = DensityOperator::mixture(&[(0.5, &ket0()), (0.5, &ket1())]).unwrap();
        assert!((fidelity_pure_mixed(&plus(), &mixed).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let k00 = StateVector::basis(4, 0).unwrap();
        let rho = DensityOperator::from_pure(&k00).unwrap();
        let red = partial_trace(&rho, &[0], &[2, 2]).unwrap();
        assert_eq!(red, DensityOperator::from_pure(&ket0()).unwrap());

        let bell = StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        let red = partial_trace(&DensityOperator::from_pure(&bell).unwrap(), &[1], &[2, 2]).unwrap();
        let half_id = DenseOperator::identity(2).unwrap().scaled(c(0.5, 0.0));
        assert!(red.as_operator().max_abs_diff(&half_id).unwrap() < 1e-15);

        let rho = DensityOperator::from_pure(&bell).unwrap();
        assert_eq!(partial_trace(&rho, &[0, 1], &[2, 2]).unwrap(), rho);
    }

    #[test]
    fn partial_trace_rejects_bad_factorization() {
        let rho = DensityOperator::from_pure(&StateVector::basis(4, 0).unwrap()).unwrap();
        assert!(matches!(partial_trace(&rho, &[0], &[2, 4]), Err(Error::Factorization(_))));
        assert!(matches!(partial_trace(&rho, &[2], &[2, 2]), Err(Error::Factorization(_))));
    }

    #[test]
    fn density_validation() {
        let not_psd = DenseOperator::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]).unwrap();
        assert!(DensityOperator::new(not_psd).is_err());
        let not_herm = DenseOperator::new(2, vec![c(0.5, 0.0), c(0.1, 0.0), ZERO, c(0.5, 0.0)]).unwrap();
        assert!(DensityOperator::new(not_herm).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(StateVector::new(vec![c(f64::NAN, 0.0), ZERO]), Err(Error::NonFinite));
    }

    #[test]
    fn factor_product_examples() {
        let v = tensor(&plus(), &ket1()).unwrap();
        let (l, r) = factor_product(&v, 2, 2, 1e-12).unwrap();
        assert!(l.max_abs_diff(&plus()).unwrap() < 1e-15);
        assert_eq!(r, ket1());
        let bell = StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        assert!(factor_product(&bell, 2, 2, 1e-9).is_none());
        let (l, r) = factor_product(&ket0(), 2, 1, 1e-12).unwrap();
        assert_eq!((l, r.dim()), (ket0(), 1));
    }

    #[test]
    fn kmap_isometry_condition() {
        // U = I with plain conjugation is not norm preserving for 0 < λ < 1.
        let bad = GeneralKMap::new(
            0.5,
            DenseOperator::identity(2).unwrap(),
            AntiUnitaryMap::conjugation(2).unwrap(),
        );
        assert!(matches!(bad, Err(Error::NonIsometricKMap { .. })));
        assert!(GeneralKMap::clone_complement(0.5).is_ok());
        assert_eq!(
            GeneralKMap::clone_complement(1.5),
            Err(Error::LambdaOutOfRange(1.5))
        );
    }
}
