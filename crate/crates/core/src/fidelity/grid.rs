use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::states::{qubit_from_bloch, sample_bloch, BlochAngles, Qubit};

/// Weighted nodes on the Bloch sphere approximating the uniform average.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<(Qubit, f64)>,
}

impl QuadratureGrid {
    /// Weights must be nonnegative and sum to one within 1e-12.
    pub fn new(nodes: Vec<(Qubit, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("quadrature grid is empty".into()));
        }
        if nodes.iter().any(|(_, w)| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument("quadrature weights must be finite and nonnegative".into()));
        }
        let total: f64 = nodes.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("quadrature weights sum to {total}, not 1")));
        }
        Ok(Self { nodes })
    }

    /// Spherical Fibonacci lattice: `z_i = 1 - (2i+1)/n`, azimuth advancing by
    /// the golden angle. Equal-area cells, so equal weights.
    pub fn fibonacci(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid size must be positive".into()));
        }
        let golden = PI * (3.0 - 5f64.sqrt());
        let w = 1.0 / n as f64;
        let nodes = (0..n)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / n as f64;
                let phi = (golden * i as f64).rem_euclid(TAU);
                let angles = BlochAngles::new(z.clamp(-1.0, 1.0).acos(), if phi < TAU { phi } else { 0.0 })
                    .expect("angles in range");
                (qubit_from_bloch(angles), w)
            })
            .collect();
        Self::new(nodes)
    }

    /// Equal-weight Monte Carlo sample.
    pub fn monte_carlo(n: usize, seed: u64) -> Result<Self> {
        let w = 1.0 / n.max(1) as f64;
        Self::new(sample_bloch(n, seed)?.into_iter().map(|q| (q, w)).collect())
    }

    pub fn single(q: Qubit) -> Self {
        Self { nodes: vec![(q, 1.0)] }
    }

    pub fn nodes(&self) -> &[(Qubit, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
