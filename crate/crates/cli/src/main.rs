//! `d2dsec` command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 too many D2D pairs for exact
//! evaluation, 4 numerical failure.

mod args;
mod builtin;
mod commands;
mod error;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, Result};
use output::{RunManifest, Sink};

fn manifest(command: &str, args: &[String], scenario: Option<String>, overrides: Vec<String>, seed: Option<u64>) -> RunManifest {
    RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        scenario,
        overrides,
        seed,
        out_dir: PathBuf::new(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        args: args.to_vec(),
        outputs: Vec::new(),
    }
}

fn run(argv: Vec<String>) -> Result<()> {
    // Help and version exit 0, parse errors exit 2.
    let cli = Cli::try_parse_from(&argv).unwrap_or_else(|e| e.exit());
    if let Some(k) = cli.workers {
        if k == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        // Fails only if a pool exists already, e.g. on replay.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    match cli.command {
        Command::Metrics { scenario, output, closed_form } => {
            let loaded = scenario.load()?;
            let tables = commands::metrics(&loaded, &output, closed_form)?;
            let m = manifest("metrics", &argv, Some(loaded.origin), scenario.set.clone(), None);
            sink(&output).emit(&tables, m)
        }
        Command::Simulate { scenario, output, plan, batch_csv } => {
            let loaded = scenario.load()?;
            let tables = commands::simulate(&loaded, &output, &plan, batch_csv.as_deref())?;
            let m = manifest("simulate", &argv, Some(loaded.origin), scenario.set.clone(), Some(plan.seed));
            sink(&output).emit(&tables, m)
        }
        Command::Optimize { scenario, output, problem, grid, weights, method } => {
            let loaded = scenario.load()?;
            let tables = commands::optimize(&loaded, &output, problem, grid, weights.as_deref(), method)?;
            let m = manifest("optimize", &argv, Some(loaded.origin), scenario.set.clone(), None);
            sink(&output).emit(&tables, m)
        }
        Command::Reproduce { target, out, gnuplot_script, digits, simulate, plan, points } => {
            if points == 0 {
                return Err(CliError::Usage("--points must be at least 1".into()));
            }
            let opts = reproduce::Options {
                digits,
                plan: simulate.then(|| plan.plan()),
                points,
            };
            let tables = reproduce::run(target, &opts)?;
            let name = format!("{target:?}").to_lowercase();
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(&name));
            let m = manifest("reproduce", &argv, None, Vec::new(), simulate.then_some(plan.seed));
            Sink { out_dir: Some(out), gnuplot: gnuplot_script }.emit(&tables, m)
        }
        Command::Scenarios { name } => commands::scenarios(name.as_deref()),
        Command::Replay { manifest } => {
            let recorded = RunManifest::load(&manifest)?;
            if recorded.args.get(1).is_some_and(|a| a == "replay") {
                return Err(CliError::Usage("manifest records a replay".into()));
            }
            run(recorded.args)
        }
    }
}

fn sink(output: &args::OutputArgs) -> Sink {
    Sink {
        out_dir: output.out.clone(),
        gnuplot: output.gnuplot_script,
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
