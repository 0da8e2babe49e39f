//! Optimal average fidelity of approximate cloning-cum-complementing machines
//! `|Ψ> → |Ψ> ⊗ (sqrt(λ)|Ψ> + sqrt(1-λ)|Ψ̄>)`, found by optimizing over
//! isometries into two registers and an ancilla.

mod grid;
mod isometry;
mod objective;
mod optimize;

pub use grid::QuadratureGrid;
pub use isometry::{IsometryParam, ISOMETRY_TOL};
pub use objective::{average_fidelity, hybrid_target, FidelityMode, FidelityObjective};
pub use optimize::{
    lambda_range, nelder_mead, optimize_fidelity, sweep_lambda, FidelitySweepRecord, OptimizerConfig,
    OptimizerMethod, Optimum,
};
