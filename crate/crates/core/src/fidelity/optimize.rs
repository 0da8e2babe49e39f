use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{c, orthonormalize_columns, ZERO};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

use super::grid::QuadratureGrid;
use super::isometry::IsometryParam;
use super::objective::{check_lambda, FidelityMode, FidelityObjective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerMethod {
    /// Fixed-point ascent `V ← polar(M·V)`; monotone for the convex objective.
    #[default]
    Polar,
    /// Gradient-free simplex search over unconstrained matrices, orthonormalized into `V`.
    NelderMead,
}

impl OptimizerMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            OptimizerMethod::Polar => "polar",
            OptimizerMethod::NelderMead => "nelder-mead",
        }
    }
}

impl fmt::Display for OptimizerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptimizerMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(OptimizerMethod::Polar),
            "nelder-mead" => Ok(OptimizerMethod::NelderMead),
            _ => Err(Error::InvalidArgument(format!("unknown optimizer method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub ancilla_dim: usize,
    pub restarts: usize,
    /// Iterations (polar) or objective evaluations (Nelder–Mead) per restart.
    pub max_iter: usize,
    pub seed: u64,
    pub tol: f64,
    pub method: OptimizerMethod,
    pub mode: FidelityMode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            ancilla_dim: 2,
            restarts: 20,
            max_iter: 5000,
            seed: 42,
            tol: 1e-12,
            method: OptimizerMethod::Polar,
            mode: FidelityMode::Local,
        }
    }
}

/// One row of a λ sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySweepRecord {
    pub lambda: f64,
    pub f_opt: f64,
    pub mode: FidelityMode,
    pub ancilla_dim: usize,
    pub converged: bool,
    pub iterations: usize,
    pub seed: u64,
}

/// Best restart: its record, isometry and objective trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub record: FidelitySweepRecord,
    pub isometry: IsometryParam,
    /// Objective after each accepted step of the best restart.
    pub trace: Vec<f64>,
    pub restart: usize,
}

struct RunResult {
    isometry: IsometryParam,
    value: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

/// `G (G†G)^{-1/2}` for an `n × 2` matrix, or `None` when `G` is rank deficient.
pub(crate) fn polar_factor(g: &[Complex64], rows: usize) -> Option<Vec<Complex64>> {
    let entry = |i: usize, j: usize| -> Complex64 { (0..rows).map(|r| g[r * 2 + i].conj() * g[r * 2 + j]).sum() };
    let (h00, h01, h11) = (entry(0, 0).re, entry(0, 1), entry(1, 1).re);
    let det = h00 * h11 - h01.norm_sqr();
    let tr = h00 + h11;
    if det.is_nan() || det <= 1e-24 * tr * tr || !tr.is_finite() {
        return None;
    }
    // For 2×2 positive definite H: sqrt(H) = (H + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
    let sd = det.sqrt();
    let s = (tr + 2.0 * sd).sqrt();
    let (a, b, d) = ((h00 + sd) / s, h01 / s, (h11 + sd) / s);
    let det_root = a * d - b.norm_sqr();
    // inverse of [[a, b], [b*, d]]
    let inv = [
        c(d / det_root, 0.0),
        -b / det_root,
        -b.conj() / det_root,
        c(a / det_root, 0.0),
    ];
    let mut out = vec![ZERO; rows * 2];
    for r in 0..rows {
        let (g0, g1) = (g[r * 2], g[r * 2 + 1]);
        out[r * 2] = g0 * inv[0] + g1 * inv[2];
        out[r * 2 + 1] = g0 * inv[1] + g1 * inv[3];
    }
    Some(out)
}

fn polar_ascent(obj: &FidelityObjective, start: IsometryParam, cfg: &OptimizerConfig) -> RunResult {
    let rows = start.rows();
    let mut v = start;
    let mut value = obj.value(&v);
    let mut trace = vec![value];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        let g = obj.gradient_raw(v.matrix());
        let Some(mut next) = polar_factor(&g, rows) else {
            converged = true;
            break;
        };
        if !orthonormalize_columns(rows, 2, &mut next) {
            converged = true;
            break;
        }
        let candidate = IsometryParam::from_raw_unchecked(v.ancilla_dim(), next);
        let next_value = obj.value(&candidate);
        if next_value < value {
            // Only rounding can make a step go down; stop at the last good point.
            converged = true;
            break;
        }
        let gain = next_value - value;
        v = candidate;
        value = next_value;
        trace.push(value);
        if gain <= cfg.tol {
            converged = true;
            break;
        }
    }
    RunResult {
        isometry: v,
        value,
        iterations,
        converged,
        trace,
    }
}

/// Minimizes `f` with the Nelder–Mead simplex method.
/// Returns `(x, f(x), evaluations, converged)`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    tol: f64,
) -> (Vec<f64>, f64, usize, bool, Vec<f64>) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut evals = n + 1;
    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    sort(&mut simplex);
    let mut best_trace = vec![simplex[0].1];
    let mut converged = false;
    while evals < max_evals {
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c0, w)| c0 + t * (c0 - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(0.5);
                let fx = f(&x);
                (x, fx)
            } else {
                let x = along(-0.5);
                let fx = f(&x);
                (x, fx)
            };
            evals += 1;
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *fx = f(x);
                }
                evals += n;
            }
        }
        sort(&mut simplex);
        best_trace.push(simplex[0].1);
    }
    let (x, fx) = simplex.swap_remove(0);
    (x, fx, evals, converged, best_trace)
}

fn nelder_mead_run(obj: &FidelityObjective, start: IsometryParam, cfg: &OptimizerConfig) -> RunResult {
    let dq = start.ancilla_dim();
    let x0: Vec<f64> = start.matrix().iter().flat_map(|z| [z.re, z.im]).collect();
    let eval = |p: &[f64]| -> f64 {
        IsometryParam::from_unconstrained(dq, p)
            .map(|v| -obj.value(&v))
            .unwrap_or(f64::INFINITY)
    };
    let (x, fx, evals, converged, trace) = nelder_mead(eval, &x0, 0.25, cfg.max_iter, cfg.tol);
    RunResult {
        isometry: IsometryParam::from_unconstrained(dq, &x).expect("valid parameters"),
        value: -fx,
        iterations: evals,
        converged,
        trace: trace.into_iter().map(|v| -v).collect(),
    }
}

fn validate(cfg: &OptimizerConfig) -> Result<()> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    if cfg.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be positive".into()));
    }
    if !(cfg.tol.is_finite() && cfg.tol >= 0.0) {
        return Err(Error::InvalidArgument("tolerance must be finite and nonnegative".into()));
    }
    Ok(())
}

/// Best-of-restarts maximization of the average fidelity over isometries.
/// Restart `r` starts from a Haar-random isometry seeded by `(seed, r)`; the
/// winner is the largest value, ties going to the lowest restart index.
pub fn optimize_fidelity(lambda: f64, grid: &QuadratureGrid, cfg: &OptimizerConfig) -> Result<Optimum> {
    check_lambda(lambda)?;
    validate(cfg)?;
    let obj = FidelityObjective::new(lambda, grid, cfg.mode, cfg.ancilla_dim)?;
    let runs: Vec<RunResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, r as u64));
            let start = IsometryParam::random(cfg.ancilla_dim, &mut rng)?;
            Ok(match cfg.method {
                OptimizerMethod::Polar => polar_ascent(&obj, start, cfg),
                OptimizerMethod::NelderMead => nelder_mead_run(&obj, start, cfg),
            })
        })
        .collect::<Result<_>>()?;
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.value > runs[b].value { i } else { b });
    let run = &runs[best];
    Ok(Optimum {
        record: FidelitySweepRecord {
            lambda,
            f_opt: run.value.clamp(0.0, 1.0),
            mode: cfg.mode,
            ancilla_dim: cfg.ancilla_dim,
            converged: run.converged,
            iterations: run.iterations,
            seed: cfg.seed,
        },
        isometry: run.isometry.clone(),
        trace: run.trace.clone(),
        restart: best,
    })
}

/// One record per λ, in input order.
pub fn sweep_lambda(lambdas: &[f64], grid: &QuadratureGrid, cfg: &OptimizerConfig) -> Result<Vec<FidelitySweepRecord>> {
    for &l in lambdas {
        check_lambda(l)?;
    }
    lambdas
        .par_iter()
        .map(|&l| optimize_fidelity(l, grid, cfg).map(|o| o.record))
        .collect()
}

/// Evenly spaced λ values `start, start + step, ...` up to `end` inclusive.
pub fn lambda_range(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !end.is_finite() || end < start {
        return Err(Error::InvalidArgument(format!(
            "invalid lambda range {start}:{end}:{step}"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    let values: Vec<f64> = (0..count)
        .map(|k| {
            let v = start + step * k as f64;
            // Snap values that are within rounding of a short decimal.
            let r = (v * 1e9).round() / 1e9;
            r.min(end)
        })
        .collect();
    for &v in &values {
        check_lambda(v)?;
    }
    Ok(values)
}
