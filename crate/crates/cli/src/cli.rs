use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "feign",
    version,
    about = "Solve, verify and simulate optimal feigned ignorance"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    Exhaustive,
    Dp,
    Vi,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Allow --out to replace an existing file.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct PriorArgs {
    #[arg(long)]
    pub alpha: u64,
    #[arg(long)]
    pub beta: u64,
}

#[derive(Debug, Args)]
pub struct RationalThreshold {
    #[arg(long)]
    pub c_num: u64,
    #[arg(long)]
    pub c_den: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal strategy set for c = 1/(m+1) at one discount factor.
    Solve {
        #[command(flatten)]
        prior: PriorArgs,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = feign_core::DEFAULT_TIE_TOL)]
        tie_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List h^1..h^N and h^inf for a rational threshold.
    Enumerate {
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        threshold: RationalThreshold,
        #[arg(long, default_value_t = 3)]
        max_index: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Discounted payoff of a strategy string such as "ssfs(fs)*".
    Evaluate {
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        delta: f64,
        /// With --beta, --c-num and --c-den, also report feasibility.
        #[arg(long, requires_all = ["beta", "c_num", "c_den"])]
        alpha: Option<u64>,
        #[arg(long, requires = "alpha")]
        beta: Option<u64>,
        #[arg(long, requires = "alpha")]
        c_num: Option<u64>,
        #[arg(long, requires = "alpha")]
        c_den: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Brute-force optimum: tree search, dynamic program or value iteration.
    Oracle {
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        threshold: RationalThreshold,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 200)]
        horizon: usize,
        #[arg(long, value_enum, default_value_t = OracleMode::Dp)]
        mode: OracleMode,
        /// Value-iteration tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Roots z_1..z_N of x^n + x^(n+1) = 1.
    Thresholds {
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = feign_core::DEFAULT_ROOT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Play a strategy or a seeded random guesser against the observer.
    Simulate {
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        threshold: RationalThreshold,
        #[arg(long, conflicts_with_all = ["guesser_p", "seed"], required_unless_present = "guesser_p")]
        strategy: Option<String>,
        #[arg(long, requires = "seed")]
        guesser_p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        max_periods: u64,
        #[arg(long, default_value_t = 0.9)]
        delta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify a grid of discount factors.
    Sweep {
        #[command(flatten)]
        prior: PriorArgs,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        delta_min: f64,
        #[arg(long)]
        delta_max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, default_value_t = feign_core::DEFAULT_TIE_TOL)]
        tie_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Enumerate { .. } => "enumerate",
            Command::Evaluate { .. } => "evaluate",
            Command::Oracle { .. } => "oracle",
            Command::Thresholds { .. } => "thresholds",
            Command::Simulate { .. } => "simulate",
            Command::Sweep { .. } => "sweep",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Solve { output, .. }
            | Command::Enumerate { output, .. }
            | Command::Evaluate { output, .. }
            | Command::Oracle { output, .. }
            | Command::Thresholds { output, .. }
            | Command::Simulate { output, .. }
            | Command::Sweep { output, .. } => output,
        }
    }
}
