use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Secrecy and reliability metrics for D2D-enabled cellular uplinks.
#[derive(Debug, Parser)]
#[command(name = "d2dsec", version, about)]
pub struct Cli {
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, env = "D2DSEC_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic SOP/ASC of every CUE and OP/AC of every D2D pair.
    Metrics {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Use the single-CUE, single-pair closed forms.
        #[arg(long)]
        closed_form: bool,
    },
    /// Monte Carlo estimates with standard errors.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Also write every batch mean to this file.
        #[arg(long, value_name = "PATH")]
        batch_csv: Option<PathBuf>,
    },
    /// Optimal mode-selection probability and spectrum partition.
    Optimize {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value_t = ProblemArg::P1)]
        problem: ProblemArg,
        /// Grid points per axis.
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        /// `w_c,w_d`, overriding the scenario.
        #[arg(long, value_name = "W_C,W_D")]
        weights: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Regenerate a validation table or figure as CSV files.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Output directory [default: out/<target>].
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        gnuplot_script: bool,
        #[arg(long)]
        digits: Option<usize>,
        /// Add Monte Carlo columns to the tables.
        #[arg(long)]
        simulate: bool,
        #[command(flatten)]
        plan: PlanArgs,
        /// Points per axis of the objective surfaces.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// List the embedded scenarios, or print one.
    Scenarios { name: Option<String> },
    /// Re-run the invocation recorded in a manifest.
    Replay { manifest: PathBuf },
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario file, or `builtin:NAME`.
    pub scenario: String,
    /// Override a field, e.g. `--set scheme.r_s=0.2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Shorthand for `--set scheme.p=P`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Shorthand for `--set scheme.beta=BETA`.
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write CSV files and a manifest here instead of printing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit a gnuplot script next to each CSV file.
    #[arg(long, requires = "out")]
    pub gnuplot_script: bool,
    /// Significant figures in numeric output (default: round-trip precision).
    #[arg(long)]
    pub digits: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 100)]
    pub batches: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    /// Rate fairness.
    P1,
    /// Outage fairness.
    P2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed form for one CUE and one pair, grid search otherwise.
    Auto,
    ClosedForm,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table2,
    Table3,
    Fig2,
    Fig3,
    Fig5,
    Fig6,
}
