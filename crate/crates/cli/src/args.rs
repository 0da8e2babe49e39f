use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qnogo", version, about = "Verify gates and machines on unknown qubits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a gate implements a target on a state set.
    GateVerify(GateVerifyArgs),
    /// Find the pair of states whose inner products a target distorts most.
    Witness(WitnessArgs),
    /// Check the gram identities of the polar and equatorial circles.
    CircleCheck(CircleCheckArgs),
    /// Optimize the hybrid cloning-complementing fidelity over a range of lambda.
    FidelitySweep(FidelitySweepArgs),
    /// Parse, compile and check a .qmachine file.
    DslCheck(DslCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    Bloch,
    Polar,
    Equatorial,
}

impl SetArg {
    pub fn name(self) -> &'static str {
        match self {
            SetArg::Bloch => "bloch",
            SetArg::Polar => "polar",
            SetArg::Equatorial => "equatorial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Local,
    SecondRegister,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Polar,
    NelderMead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadratureArg {
    Fibonacci,
    MonteCarlo,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Largest violation still counted as satisfied.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Number of states or grid points.
    #[arg(long = "grid-n", default_value_t = 256)]
    pub grid_n: usize,
    #[arg(long, env = "QNOGO_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateVerifyArgs {
    /// H, HP, HE, CNOT, UG(a,b) or a path to a matrix file.
    #[arg(long)]
    pub gate: String,
    /// hadamard9, hadamard10, unequal or cnot23.
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum, default_value_t = SetArg::Bloch)]
    pub set: SetArg,
    /// First amplitude of the unequal target.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second amplitude of the unequal target.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum, default_value_t = SetArg::Bloch)]
    pub set: SetArg,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CircleCheckArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FidelitySweepArgs {
    /// A single value or start:end:step.
    #[arg(long, default_value = "0:1:0.25")]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Local)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Polar)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long = "max-iter", default_value_t = 5000)]
    pub max_iter: usize,
    /// Ancilla dimensions to try, comma separated; each row keeps the best.
    #[arg(long = "ancilla-dim", value_delimiter = ',', default_value = "2")]
    pub ancilla_dim: Vec<usize>,
    #[arg(long, value_enum, default_value_t = QuadratureArg::Fibonacci)]
    pub quadrature: QuadratureArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DslCheckArgs {
    /// Machine file, or - for stdin.
    pub file: PathBuf,
    #[command(flatten)]
    pub common: Common,
}
