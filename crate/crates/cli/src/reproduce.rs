//! Regeneration of the validation tables and sweep figures.

use d2dsec::analytic::{evaluate, CaseStudy};
use d2dsec::montecarlo::{simulate_budget, SimulationPlan};
use d2dsec::network::{dbm_to_mw, D2dPair, Point};
use d2dsec::optimizer::{fairness_objective, solve_p1, solve_p1_case_study, solve_p2, solve_p2_case_study, GridSpec, Problem};
use d2dsec::scenario::Scenario;

use crate::args::Target;
use crate::builtin;
use crate::commands::{optimum_cells, OPTIMUM_HEADER};
use crate::error::Result;
use crate::output::{num, Plot, Table};

pub struct Options {
    pub digits: Option<usize>,
    pub plan: Option<SimulationPlan>,
    pub points: usize,
}

pub fn run(target: Target, opts: &Options) -> Result<Vec<Table>> {
    match target {
        Target::Table2 => validation_table("table2", true, opts),
        Target::Table3 => validation_table("table3", false, opts),
        Target::Fig2 => transmitter_sweep(opts),
        Target::Fig3 => ratio_sweep(opts),
        Target::Fig5 => rate_fairness(opts),
        Target::Fig6 => outage_fairness(opts),
    }
}

fn xy(p: &Point) -> [f64; 2] {
    [p.x, p.y]
}

/// Nine single-pair rows; CUE metrics when `cue`, pair metrics otherwise.
fn validation_table(name: &str, cue: bool, opts: &Options) -> Result<Vec<Table>> {
    let d = opts.digits;
    let (m1, m2) = if cue { ("sop", "asc") } else { ("op", "ac") };
    let mut header: Vec<String> = ["row", "eve_x", "eve_y", "tx_x", "tx_y", "rx_x", "rx_y", m1, m2]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if opts.plan.is_some() {
        for m in [m1, m2] {
            header.push(format!("sim_{m}"));
            header.push(format!("sim_{m}_stderr"));
        }
    }
    let mut t = Table::with_header(name, header, Plot::None);
    for row in 1..=9 {
        let s = builtin::scenario(&format!("{name}-{row}"));
        let budget = s.link_budget()?;
        let scheme = s.scheme_config();
        let r = evaluate(&budget, &scheme)?;
        let pair = &s.topology.d2d_pairs[0];
        let [ex, ey] = xy(&s.topology.eavesdropper);
        let [tx, ty] = xy(&pair.tx);
        let [rx, ry] = xy(&pair.rx);
        let (v1, v2) = if cue { (r.per_cue[0].sop, r.per_cue[0].asc) } else { (r.per_pair[0].op, r.per_pair[0].ac) };
        let mut cells = vec![row.to_string()];
        cells.extend([ex, ey, tx, ty, rx, ry].iter().map(|v| v.to_string()));
        cells.extend([num(v1, d), num(v2, d)]);
        if let Some(plan) = &opts.plan {
            let sim = simulate_budget(&budget, &scheme, plan)?;
            let (e1, e2) = if cue { (&sim.sop[0], &sim.asc[0]) } else { (&sim.op[0], &sim.ac[0]) };
            for e in [e1, e2] {
                cells.push(num(e.mean, d));
                cells.push(num(e.stderr, d));
            }
        }
        t.push(cells);
    }
    Ok(vec![t])
}

const SWEEP_SETTINGS_CUE: [(f64, f64); 4] = [(0.1, 0.0), (0.1, 0.5), (0.5, 0.0), (0.5, 0.5)];
const SWEEP_SETTINGS_PAIR: [(f64, f64); 4] = [(0.1, 0.5), (0.1, 1.0), (0.5, 0.5), (0.5, 1.0)];

fn sweep_header(x: &str, metric: &str, settings: &[(f64, f64)]) -> Vec<String> {
    std::iter::once(x.to_string())
        .chain(settings.iter().map(|(p, b)| format!("{metric}_p{p}_beta{b}")))
        .collect()
}

fn with_pair(s: &Scenario, tx: Point, rx: Point) -> Scenario {
    let mut s = s.clone();
    s.topology.d2d_pairs = vec![D2dPair { tx, rx }];
    s
}

/// CUE metrics as the D2D transmitter moves up the y axis from 1 m to 199 m.
fn transmitter_sweep(opts: &Options) -> Result<Vec<Table>> {
    let base = builtin::scenario("fig2");
    let offset = base.topology.d2d_pairs[0].rx.x - base.topology.d2d_pairs[0].tx.x;
    let r_s = base.scheme_config().r_s;
    let lines = |ylabel| Plot::Lines { xlabel: "transmitter y (m)", ylabel, log_x: false };
    let mut sop = Table::with_header("fig2a_sop", sweep_header("y", "sop", &SWEEP_SETTINGS_CUE), lines("SOP"));
    let mut asc = Table::with_header("fig2b_asc", sweep_header("y", "asc", &SWEEP_SETTINGS_CUE), lines("ASC (bit/s/Hz)"));
    for y in 1..=199 {
        let y = y as f64;
        let s = with_pair(&base, Point::new(0.0, y), Point::new(offset, y));
        let cs = CaseStudy::new(&s.link_budget()?, r_s, 0.0)?;
        let mut a = vec![y.to_string()];
        let mut b = a.clone();
        for &(p, beta) in &SWEEP_SETTINGS_CUE {
            a.push(num(cs.sop(p, beta), opts.digits));
            b.push(num(cs.asc(p, beta), opts.digits));
        }
        sop.push(a);
        asc.push(b);
    }
    Ok(vec![sop, asc])
}

/// Pair metrics against the ratio of the CUE-to-receiver and
/// transmitter-to-receiver mean SNRs. The receiver moves along the +x ray
/// from the CUE; the transmitter stays a fixed distance below it.
fn ratio_sweep(opts: &Options) -> Result<Vec<Table>> {
    const POINTS: usize = 201;
    let base = builtin::scenario("fig3");
    let cue = base.topology.cues[0];
    let pair = base.topology.d2d_pairs[0];
    let link = pair.tx.distance(&pair.rx);
    let radio = base.radio;
    let power_ratio = dbm_to_mw(radio.p_cue_dbm) / dbm_to_mw(radio.p_d2d_dbm);
    let r_t = base.scheme_config().r_t;
    let lines = |ylabel| Plot::Lines { xlabel: "CUE-to-receiver over link SNR", ylabel, log_x: true };
    let mut op = Table::with_header("fig3a_op", sweep_header("ratio", "op", &SWEEP_SETTINGS_PAIR), lines("OP"));
    let mut ac = Table::with_header("fig3b_ac", sweep_header("ratio", "ac", &SWEEP_SETTINGS_PAIR), lines("AC (bit/s/Hz)"));
    for k in 0..POINTS {
        // Log-uniform over [0.1, 10].
        let ratio = 10f64.powf(-1.0 + 2.0 * k as f64 / (POINTS - 1) as f64);
        let reach = link * (power_ratio / ratio).powf(1.0 / radio.alpha);
        let rx = Point::new(cue.x + reach, cue.y);
        let tx = Point::new(rx.x, rx.y - link);
        let budget = with_pair(&base, tx, rx).link_budget()?;
        let cs = CaseStudy::new(&budget, 0.0, r_t)?;
        let mut a = vec![num(budget.cue_rx(0, 0) / budget.d2d_direct(0), opts.digits)];
        let mut b = a.clone();
        for &(p, beta) in &SWEEP_SETTINGS_PAIR {
            a.push(num(cs.op(p, beta), opts.digits));
            b.push(num(cs.ac(p, beta), opts.digits));
        }
        op.push(a);
        ac.push(b);
    }
    Ok(vec![op, ac])
}

fn axis(points: usize) -> Vec<f64> {
    GridSpec::square(points).p_values()
}

fn optima_header(extra: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = ["panel", "w_c", "w_d"].iter().chain(extra).map(|s| s.to_string()).collect();
    h.extend(OPTIMUM_HEADER.iter().map(|s| s.to_string()));
    h.extend(["grid_p_star", "grid_beta_star", "grid_objective"].iter().map(|s| s.to_string()));
    h
}

/// Rate-fairness objective surfaces and optima for four weight/geometry panels.
fn rate_fairness(opts: &Options) -> Result<Vec<Table>> {
    let d = opts.digits;
    let mut tables = Vec::new();
    let mut optima = Table::with_header("fig5_optima", optima_header(&["mu", "nu"]), Plot::None);
    for panel in ["a", "b", "c", "d"] {
        let s = builtin::scenario(&format!("fig5{panel}"));
        let budget = s.link_budget()?;
        let scheme = s.scheme_config();
        let cs = CaseStudy::new(&budget, scheme.r_s, scheme.r_t)?;
        let mut surf = Table::new(format!("fig5{panel}"), &["p", "beta", "objective"], Plot::Surface);
        for &p in &axis(opts.points) {
            for &beta in &axis(opts.points) {
                let v = fairness_objective(&cs.report(p, beta), scheme.w_c, scheme.w_d, Problem::P1).value();
                surf.push(vec![num(p, d), num(beta, d), num(v, d)]);
            }
        }
        tables.push(surf);
        let k = cs.constants();
        let closed = solve_p1_case_study(&budget, scheme.w_c, scheme.w_d)?;
        let grid = solve_p1(&budget, &scheme, &GridSpec::default())?;
        let mut row = vec![panel.to_string(), scheme.w_c.to_string(), scheme.w_d.to_string(), num(k.mu, d), num(k.nu, d)];
        row.extend(optimum_cells(&closed, d));
        row.extend([num(grid.p_star, d), num(grid.beta_star, d), num(grid.objective, d)]);
        optima.push(row);
    }
    tables.push(optima);
    Ok(tables)
}

/// Outage-fairness objective surfaces and optima for two weight settings.
fn outage_fairness(opts: &Options) -> Result<Vec<Table>> {
    let d = opts.digits;
    let mut tables = Vec::new();
    let mut optima = Table::with_header("fig6_optima", optima_header(&[]), Plot::None);
    for panel in ["a", "b"] {
        let s = builtin::scenario(&format!("fig6{panel}"));
        let budget = s.link_budget()?;
        let scheme = s.scheme_config();
        let cs = CaseStudy::new(&budget, scheme.r_s, scheme.r_t)?;
        let mut surf = Table::new(format!("fig6{panel}"), &["p", "beta", "objective"], Plot::Surface);
        for &p in &axis(opts.points) {
            for &beta in &axis(opts.points) {
                let v = fairness_objective(&cs.report(p, beta), scheme.w_c, scheme.w_d, Problem::P2).value();
                surf.push(vec![num(p, d), num(beta, d), num(v, d)]);
            }
        }
        tables.push(surf);
        let closed = solve_p2_case_study(&budget, scheme.r_s, scheme.r_t, scheme.w_c, scheme.w_d)?;
        let grid = solve_p2(&budget, &scheme, &GridSpec::default())?;
        let mut row = vec![panel.to_string(), scheme.w_c.to_string(), scheme.w_d.to_string()];
        row.extend(optimum_cells(&closed, d));
        row.extend([num(grid.p_star, d), num(grid.beta_star, d), num(grid.objective, d)]);
        optima.push(row);
    }
    tables.push(optima);
    Ok(tables)
}
