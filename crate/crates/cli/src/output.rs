//! CSV tables, run manifests and gnuplot scripts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Formats `x` with `digits` significant figures, or the shortest
/// round-trip representation when `digits` is `None`.
pub fn num(x: f64, digits: Option<usize>) -> String {
    match digits {
        Some(d) if x.is_finite() && x != 0.0 => {
            let rounded: f64 = format!("{:.*e}", d.saturating_sub(1), x).parse().expect("formatted float");
            rounded.to_string()
        }
        _ => x.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plot {
    None,
    /// Every column after the first against the first.
    Lines { xlabel: &'static str, ylabel: &'static str, log_x: bool },
    /// Third column over the first two.
    Surface,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub plot: Plot,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str], plot: Plot) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            plot,
        }
    }

    pub fn with_header(name: impl Into<String>, header: Vec<String>, plot: Plot) -> Self {
        Table {
            name: name.into(),
            header,
            rows: Vec::new(),
            plot,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| CliError::io("<csv>", e))?;
        Ok(())
    }

    fn gnuplot(&self, csv_name: &str) -> Option<String> {
        let head = format!("set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\nset output '{}.png'\n", self.name);
        match self.plot {
            Plot::None => None,
            Plot::Lines { xlabel, ylabel, log_x } => {
                let scale = if log_x { "set logscale x\n" } else { "" };
                let n = self.header.len();
                let series: Vec<String> = (2..=n).map(|c| format!("'{csv_name}' using 1:{c} with lines")).collect();
                Some(format!("{head}{scale}set xlabel '{xlabel}'\nset ylabel '{ylabel}'\nplot {}\n", series.join(", \\\n     ")))
            }
            Plot::Surface => {
                let side = (self.rows.len() as f64).sqrt().round() as usize;
                Some(format!(
                    "{head}set xlabel '{}'\nset ylabel '{}'\nset dgrid3d {side},{side}\nset pm3d\nsplot '{csv_name}' using 1:2:3 with pm3d notitle\n",
                    self.header[0], self.header[1]
                ))
            }
        }
    }
}

/// Record of one invocation, written next to its outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub scenario: Option<String>,
    pub overrides: Vec<String>,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub timestamp: String,
    /// Full argument vector; `d2dsec replay` re-runs it.
    pub args: Vec<String>,
    pub outputs: Vec<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Where tables go: standard output, or one file per table plus a manifest.
pub struct Sink {
    pub out_dir: Option<PathBuf>,
    pub gnuplot: bool,
}

impl Sink {
    pub fn emit(&self, tables: &[Table], mut manifest: RunManifest) -> Result<()> {
        let Some(dir) = &self.out_dir else {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for (k, t) in tables.iter().enumerate() {
                if k > 0 {
                    writeln!(lock).map_err(|e| CliError::io("<stdout>", e))?;
                }
                t.write_to(&mut lock)?;
            }
            return Ok(());
        };
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for t in tables {
            let csv_name = format!("{}.csv", t.name);
            let path = dir.join(&csv_name);
            let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
            t.write_to(std::io::BufWriter::new(file))?;
            manifest.outputs.push(csv_name.clone());
            if self.gnuplot {
                if let Some(script) = t.gnuplot(&csv_name) {
                    let gp = format!("{}.gp", t.name);
                    let path = dir.join(&gp);
                    fs::write(&path, script).map_err(|e| CliError::io(&path, e))?;
                    manifest.outputs.push(gp);
                }
            }
        }
        manifest.out_dir = dir.clone();
        let path = dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&path, json).map_err(|e| CliError::io(&path, e))
    }
}
