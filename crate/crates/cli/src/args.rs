use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsl_core::figures::Figure;
use qsl_core::models::ModelKind;
use qsl_core::qmath::DEFAULT_CLIP;

#[derive(Parser, Debug)]
#[command(
    name = "qsl",
    version,
    about = "Speed limits on entropy, information and coherence for Lindblad dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate a trajectory and write S, I, C and populations per grid point.
    Simulate(RunArgs),
    /// Evaluate every bound over one trajectory.
    Bounds(RunArgs),
    /// Regenerate the data and plot of a reference figure.
    Reproduce(ReproduceArgs),
    /// Evaluate all bounds over a cartesian parameter grid.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// How the dynamics and the initial state are specified.
#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Built-in model.
    #[arg(long, conflicts_with = "lindbladian")]
    pub model: Option<ModelKind>,
    /// JSON generator `{dim, hamiltonian, jumps: [{matrix, rate}], rho0?}`.
    #[arg(long)]
    pub lindbladian: Option<PathBuf>,
    /// JSON model parameters `{model, gamma0, N, gamma, theta}`; flags override.
    #[arg(long, conflicts_with = "lindbladian")]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub gamma0: Option<f64>,
    #[arg(long = "N")]
    pub n: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Initial Bloch angle; also picks the qubit start state for `--lindbladian`.
    #[arg(long)]
    pub theta: Option<f64>,
    /// RK4 steps (even, at least 16).
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
    /// Eigenvalue floor for logarithms, in (0, 1e-6].
    #[arg(long, default_value_t = DEFAULT_CLIP)]
    pub clip: f64,
    /// `computational` or a JSON matrix whose columns are the basis vectors.
    #[arg(long, default_value = "computational")]
    pub basis: String,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Time horizon.
    #[arg(long = "T")]
    pub horizon: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to csv for `simulate` and json for `bounds`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(value_parser = parse_figure)]
    pub figure: Figure,
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
    /// Lower end of the figure 1 horizon range (default 0.5).
    #[arg(long = "t-min")]
    pub t_min: Option<f64>,
    /// Output directory for `<figure>.csv` and `<figure>.svg`.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Horizon for points whose grid has no `T` axis.
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    /// Axis `name=v1,v2,...` or `name=start:stop:count`; names are
    /// gamma0, N, gamma, theta, T. Repeat for a cartesian product.
    #[arg(long = "grid")]
    pub grid: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_figure(s: &str) -> Result<Figure, String> {
    s.parse().map_err(|e: qsl_core::Error| e.to_string())
}
