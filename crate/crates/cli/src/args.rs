use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hardy",
    version,
    about = "Numerical verification of fractional Hardy inequalities on convex sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Table of C1, C2, C3, A, B, the Hardy constant and the asymptotic constants.
    Constants,
    /// Random sampling of the pointwise inequalities.
    VerifyInequalities,
    /// Hardy quotient campaign over test functions and (s, p) grids.
    VerifyHardy,
    /// Truncated operator of d^s at interior points (harmonic on half-spaces).
    Superharmonicity,
    /// Lower bound on the restricted kernel integral of the distance function.
    Expedient,
    /// Limits of the scaled seminorm as s -> 1 and s -> 0.
    Asymptotics,
    /// Nelder-Mead search for the smallest Hardy quotient in a bump family.
    SharpSearch,
    /// Lower and Rayleigh upper bounds on the first eigenvalue.
    EigenBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    MonteCarlo,
    TensorGrid,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Space dimension N.
    #[arg(long, global = true)]
    pub dim: Option<usize>,

    /// Exponents p, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Vec<f64>,

    /// Fractional orders s, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub s: Vec<f64>,

    /// C3 for 1 < p <= 2.
    #[arg(long, global = true)]
    pub c3: Option<f64>,

    /// Samples per integral (tuples per inequality for verify-inequalities).
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Master seed; required whenever Monte Carlo is used.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Campaign file, JSON or TOML (by extension).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Also write gnuplot-ready two-column data here.
    #[arg(long, global = true)]
    pub plot_data: Option<PathBuf>,

    /// Record wall-clock time in reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,

    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,

    /// Nodes per axis for the tensor-grid method.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
}
