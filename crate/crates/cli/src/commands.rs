use std::fs;
use std::io::Write;
use std::path::Path;

use d2dsec::analytic::{case_study_metrics, evaluate, MetricReport};
use d2dsec::montecarlo::{simulate_budget, SimulationPlan};
use d2dsec::optimizer::{solve_p1, solve_p1_case_study, solve_p2, solve_p2_case_study, GridSpec, Optimum};
use d2dsec::scenario::Scenario;
use d2dsec::{LinkBudget, SchemeConfig};

use crate::args::{Method, OutputArgs, PlanArgs, ProblemArg, ScenarioArgs};
use crate::builtin;
use crate::error::{CliError, Result};
use crate::output::{num, Plot, Table};

/// A parsed scenario with the label it was loaded from.
pub struct Loaded {
    pub origin: String,
    pub scenario: Scenario,
}

impl ScenarioArgs {
    pub fn overrides(&self) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        for item in &self.set {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{item}`")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        if let Some(p) = self.p {
            out.push(("scheme.p".into(), p.to_string()));
        }
        if let Some(beta) = self.beta {
            out.push(("scheme.beta".into(), beta.to_string()));
        }
        Ok(out)
    }

    pub fn load(&self) -> Result<Loaded> {
        let origin = self.scenario.clone();
        let text = match origin.strip_prefix(builtin::PREFIX) {
            Some(name) => builtin::get(name)
                .ok_or_else(|| CliError::Usage(format!("no embedded scenario `{name}`; see `d2dsec scenarios`")))?
                .to_string(),
            None => fs::read_to_string(&origin).map_err(|e| CliError::io(&origin, e))?,
        };
        let scenario = Scenario::parse_with_overrides(&text, &self.overrides()?)
            .map_err(|source| CliError::Scenario { origin: origin.clone(), source })?;
        Ok(Loaded { origin, scenario })
    }
}

impl Loaded {
    pub fn budget(&self) -> Result<LinkBudget> {
        self.scenario
            .link_budget()
            .map_err(|source| CliError::Scenario { origin: self.origin.clone(), source })
    }

    fn is_case_study(&self) -> bool {
        self.scenario.topology.cues.len() == 1 && self.scenario.topology.d2d_pairs.len() == 1
    }
}

pub fn metric_table(report: &MetricReport, digits: Option<usize>) -> Table {
    let with_err = report.stderr.is_some();
    let header: &[&str] = if with_err {
        &["entity_type", "index", "metric", "value", "stderr"]
    } else {
        &["entity_type", "index", "metric", "value"]
    };
    let mut t = Table::new("metrics", header, Plot::None);
    let mut row = |kind: &str, idx: usize, metric: &str, v: f64, e: Option<f64>| {
        let mut r = vec![kind.to_string(), idx.to_string(), metric.to_string(), num(v, digits)];
        if let Some(e) = e {
            r.push(num(e, digits));
        }
        t.push(r);
    };
    let se = report.stderr.as_ref();
    for (i, c) in report.per_cue.iter().enumerate() {
        let e = se.map(|s| s.per_cue[i]);
        row("cue", i, "sop", c.sop, e.map(|e| e.sop));
        row("cue", i, "asc", c.asc, e.map(|e| e.asc));
    }
    for (j, d) in report.per_pair.iter().enumerate() {
        let e = se.map(|s| s.per_pair[j]);
        row("pair", j, "op", d.op, e.map(|e| e.op));
        row("pair", j, "ac", d.ac, e.map(|e| e.ac));
    }
    t
}

pub fn metrics(loaded: &Loaded, output: &OutputArgs, closed_form: bool) -> Result<Vec<Table>> {
    let budget = loaded.budget()?;
    let scheme = loaded.scenario.scheme_config();
    let report = if closed_form {
        if !loaded.is_case_study() {
            return Err(CliError::Usage("--closed-form needs exactly one CUE and one D2D pair".into()));
        }
        case_study_metrics(&budget, &scheme)?.0
    } else {
        evaluate(&budget, &scheme)?
    };
    Ok(vec![metric_table(&report, output.digits)])
}

impl PlanArgs {
    pub fn plan(&self) -> SimulationPlan {
        SimulationPlan {
            samples_per_batch: self.samples,
            batches: self.batches,
            seed: self.seed,
            parallelism: None,
        }
    }
}

pub fn simulate(loaded: &Loaded, output: &OutputArgs, plan: &PlanArgs, batch_csv: Option<&Path>) -> Result<Vec<Table>> {
    let budget = loaded.budget()?;
    let sim = simulate_budget(&budget, &loaded.scenario.scheme_config(), &plan.plan())?;
    if let Some(path) = batch_csv {
        let mut t = Table::new("batch_means", &["batch", "metric", "entity_index", "value"], Plot::None);
        for r in sim.batch_rows() {
            t.push(vec![r.batch.to_string(), r.metric.to_string(), r.entity_index.to_string(), num(r.value, output.digits)]);
        }
        let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        t.write_to(std::io::BufWriter::new(file))?;
    }
    Ok(vec![metric_table(&sim.report(), output.digits)])
}

fn parse_weights(text: &str) -> Result<(f64, f64)> {
    let bad = || CliError::Usage(format!("--weights expects W_C,W_D, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn solve(
    budget: &LinkBudget,
    scheme: &SchemeConfig,
    problem: ProblemArg,
    method: Method,
    grid: usize,
) -> Result<Optimum> {
    scheme.validate_weights()?;
    let single = budget.num_cues() == 1 && budget.num_pairs() == 1;
    let closed = match method {
        Method::Auto => single,
        Method::ClosedForm if !single => {
            return Err(CliError::Usage("closed-form solutions need exactly one CUE and one D2D pair".into()))
        }
        Method::ClosedForm => true,
        Method::Grid => false,
    };
    let (w_c, w_d) = (scheme.w_c, scheme.w_d);
    let spec = GridSpec::square(grid);
    Ok(match (problem, closed) {
        (ProblemArg::P1, true) => solve_p1_case_study(budget, w_c, w_d)?,
        (ProblemArg::P1, false) => solve_p1(budget, scheme, &spec)?,
        (ProblemArg::P2, true) => solve_p2_case_study(budget, scheme.r_s, scheme.r_t, w_c, w_d)?,
        (ProblemArg::P2, false) => solve_p2(budget, scheme, &spec)?,
    })
}

pub const OPTIMUM_HEADER: [&str; 5] = ["p_star", "beta_star", "beta_any", "objective", "case"];

pub fn optimum_cells(o: &Optimum, digits: Option<usize>) -> Vec<String> {
    vec![
        num(o.p_star, digits),
        num(o.beta_star, digits),
        o.beta_any.to_string(),
        num(o.objective, digits),
        o.case.to_string(),
    ]
}

pub fn optimize(
    loaded: &Loaded,
    output: &OutputArgs,
    problem: ProblemArg,
    grid: usize,
    weights: Option<&str>,
    method: Method,
) -> Result<Vec<Table>> {
    let budget = loaded.budget()?;
    let mut scheme = loaded.scenario.scheme_config();
    if let Some(w) = weights {
        let (w_c, w_d) = parse_weights(w)?;
        scheme = scheme.with_weights(w_c, w_d);
    }
    let opt = solve(&budget, &scheme, problem, method, grid)?;
    let mut t = Table::new("optimum", &OPTIMUM_HEADER, Plot::None);
    t.push(optimum_cells(&opt, output.digits));
    Ok(vec![t])
}

pub fn scenarios(name: Option<&str>) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let io = |e| CliError::io("<stdout>", e);
    match name {
        Some(name) => {
            let text = builtin::get(name).ok_or_else(|| CliError::Usage(format!("no embedded scenario `{name}`")))?;
            write!(out, "{text}").map_err(io)?;
        }
        None => {
            for (name, _) in builtin::SCENARIOS {
                let note = builtin::scenario(name).note.unwrap_or_default();
                writeln!(out, "{name}\t{note}").map_err(io)?;
            }
        }
    }
    Ok(())
}
