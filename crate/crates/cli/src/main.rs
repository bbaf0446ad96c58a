//! `hamstat`: reproducible experiments on Lagrangian gradient graphs.
//!
//! Every run prints (or writes with `--output`) one JSON report with a
//! top-level `"schema": 1`, the resolved configuration and an `error`
//! field. Exit codes: 0 success, 1 bad input, 2 numerical failure.

mod commands;
mod error;
mod spec;

use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hamstat", version, about = "Experiments on Hamiltonian stationary gradient graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write the command's tabular data as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Disable data-parallel sweeps.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Up,
    Down,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase, metric and phase class at a point.
    Phase(PhaseArgs),
    /// Rotate a gradient graph up or down and sample the result.
    Rotate(RotateArgs),
    /// Sample the rotated singular graph of the model potential.
    Construct(ConstructArgs),
    /// Hölder exponent of the rotated singular graph at the origin.
    Holder(HolderArgs),
    /// Shell probe for (|x'|^{2k} + x_n^2)^{-q} near the origin.
    Integrability(IntegrabilityArgs),
    /// Second-derivative integrability of the rotated singular potential.
    Sobolev(SobolevArgs),
    /// Weak-form pairing against a bump centered on the graph.
    WeakResidual(WeakArgs),
    /// Exact rational jet of the axisymmetric Cauchy problem.
    Jet(JetArgs),
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// model:n=3,k=1 | quadratic:c=1 | harmonic-cubic | jet:n=3,k=1,order=8
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated coordinates; defaults to the origin.
    #[arg(long)]
    pub point: Option<String>,
    /// Supercritical margin.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct RotateArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Rotation angle in radians.
    #[arg(long)]
    pub angle: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Up)]
    pub direction: DirectionArg,
    /// Random sample size.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    /// Grid points per axis for the Hessian bounds.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Ball radius; defaults to the validated radius capped at 0.2.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct HolderArgs {
    /// Must be a model potential.
    #[arg(long)]
    pub potential: String,
    /// Dyadic scale range a:b.
    #[arg(long, default_value = "4:12")]
    pub scales: String,
    #[arg(long, default_value_t = 8)]
    pub per_scale: usize,
}

#[derive(Debug, Args)]
pub struct IntegrabilityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct SobolevArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct WeakArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Support radius of the bump.
    #[arg(long)]
    pub rho: f64,
    /// Base point x0 of the bump center (x0, Du(x0)); defaults to the origin.
    #[arg(long)]
    pub point: Option<String>,
    /// Midpoint cells per axis.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Bump power, at least 3.
    #[arg(long, default_value_t = 3)]
    pub power: u32,
}

#[derive(Debug, Args)]
pub struct JetArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Radius for the pointwise residual sup.
    #[arg(long, default_value_t = 0.1)]
    pub rho: f64,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = commands::run(&cli);
    if code == 1 {
        let name = commands::name(&cli.command);
        let mut root = Cli::command();
        root.build();
        if let Some(sub) = root.find_subcommand_mut(name) {
            eprintln!("{}", sub.render_usage());
        }
    }
    std::process::exit(code);
}
