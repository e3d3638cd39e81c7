use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn d2dsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d2dsec"))
        .args(args)
        .env_remove("D2DSEC_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scenario_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn builtin_text(name: &str) -> String {
    stdout(&d2dsec(&["scenarios", name]))
}

/// Agreement to five significant figures.
fn sig5(cell: &str, reference: f64) -> bool {
    let v: f64 = cell.parse().unwrap();
    (v - reference).abs() <= 1e-5 * reference.abs()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn metrics_reports_golden_sop() {
    let out = stdout(&d2dsec(&["metrics", "builtin:table2-1", "--digits", "6"]));
    assert!(out.starts_with("entity_type,index,metric,value\n"), "{out}");
    assert!(out.contains("cue,0,sop,0.851236\n"), "{out}");
    assert!(out.contains("cue,0,asc,0.1614\n"), "{out}");
}

#[test]
fn metrics_from_file_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(dir.path(), "row.toml", &builtin_text("table2-1"));
    assert_eq!(stdout(&d2dsec(&["metrics", &path])), stdout(&d2dsec(&["metrics", "builtin:table2-1"])));
}

#[test]
fn p_zero_flag_gives_overlay_only_values() {
    let s = d2dsec::scenario::Scenario::parse(&builtin_text("table3-1")).unwrap();
    let budget = s.link_budget().unwrap();
    // One overlay pair owns the whole (1 - beta) share.
    let expected = 1.0 - (-(2f64.powf(0.5 / 0.5) - 1.0) / budget.d2d_direct(0)).exp();
    let out = stdout(&d2dsec(&["metrics", "builtin:table3-1", "--p", "0"]));
    let op: f64 = rows(&out).iter().find(|r| r[2] == "op").unwrap()[3].parse().unwrap();
    assert!((op - expected).abs() < 1e-12, "{op} vs {expected}");
}

#[test]
fn closed_form_agrees_with_theorem() {
    let a = rows(&stdout(&d2dsec(&["metrics", "builtin:table2-4"])));
    let b = rows(&stdout(&d2dsec(&["metrics", "builtin:table2-4", "--closed-form"])));
    for (x, y) in a.iter().zip(&b).skip(1) {
        let (x, y): (f64, f64) = (x[3].parse().unwrap(), y[3].parse().unwrap());
        assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn malformed_rate_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = builtin_text("table2-1").replace("r_t = 0.5", "r_t = \"fast\"");
    let path = scenario_file(dir.path(), "bad.toml", &text);
    let out = d2dsec(&["metrics", &path]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("r_t") && msg.contains("line"), "{msg}");
}

#[test]
fn unknown_override_and_missing_file_exit_2() {
    assert_eq!(d2dsec(&["metrics", "builtin:table2-1", "--set", "scheme.gamma=1"]).status.code(), Some(2));
    assert_eq!(d2dsec(&["metrics", "/nonexistent/scenario.toml"]).status.code(), Some(2));
    assert_eq!(d2dsec(&["metrics", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(d2dsec(&["reproduce", "fig4"]).status.code(), Some(2));
}

#[test]
fn too_many_pairs_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let pairs: Vec<String> = (0..13).map(|k| format!("{{ tx = [{}.0, 5.0], rx = [{}.0, 30.0] }}", 10 * k + 5, 10 * k + 5)).collect();
    let text = format!(
        "[topology]\nbase_station = [0.0, 0.0]\neavesdropper = [0.0, 100.0]\ncues = [[100.0, 100.0]]\nd2d_pairs = [{}]\n[scheme]\np = 0.5\nbeta = 0.5\nr_s = 0.1\nr_t = 0.5\n",
        pairs.join(", ")
    );
    let path = scenario_file(dir.path(), "big.toml", &text);
    let out = d2dsec(&["metrics", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("Monte Carlo"));
    // Simulation has no such limit.
    stdout(&d2dsec(&["simulate", &path, "--samples", "100", "--batches", "2"]));
}

#[test]
fn zero_utility_exits_4() {
    // With r_s = r_t = 0 the summed outage probabilities vanish.
    let args = ["optimize", "builtin:fig6a", "--problem", "p2", "--set", "scheme.r_s=0", "--set", "scheme.r_t=0"];
    for method in ["grid", "closed-form"] {
        let mut a = args.to_vec();
        a.extend(["--method", method, "--grid", "21"]);
        let out = d2dsec(&a);
        assert_eq!(out.status.code(), Some(4), "{method}: {}", stderr(&out));
    }
}

#[test]
fn single_draw_gives_indicators() {
    let out = stdout(&d2dsec(&["simulate", "builtin:table2-5", "--samples", "1", "--batches", "1"]));
    let rows = rows(&out);
    assert_eq!(rows[0], ["entity_type", "index", "metric", "value", "stderr"]);
    for r in &rows[1..] {
        if r[2] == "sop" || r[2] == "op" {
            assert!(r[3] == "0" || r[3] == "1", "{r:?}");
        }
        assert_eq!(r[4], "0");
    }
}

#[test]
fn simulation_is_byte_identical_for_a_seed() {
    let args = ["simulate", "builtin:table3-5", "--samples", "20000", "--batches", "8", "--seed", "11"];
    let a = stdout(&d2dsec(&args));
    let b = stdout(&d2dsec(&args));
    assert_eq!(a, b);
    let c = Command::new(env!("CARGO_BIN_EXE_d2dsec")).args(args).env("D2DSEC_WORKERS", "3").output().unwrap();
    assert_eq!(a, stdout(&c));
    let mut other = args.to_vec();
    other[7] = "12";
    assert_ne!(a, stdout(&d2dsec(&other)));
}

#[test]
fn batch_csv_has_one_row_per_batch_metric_entity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("batches.csv");
    let p = path.to_str().unwrap();
    stdout(&d2dsec(&["simulate", "builtin:table2-1", "--samples", "1000", "--batches", "5", "--batch-csv", p]));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "batch,metric,entity_index,value");
    assert_eq!(lines.len(), 1 + 5 * 4);
}

#[test]
fn optimize_rate_fairness_closed_form() {
    let out = stdout(&d2dsec(&["optimize", "builtin:fig5a", "--digits", "6"]));
    assert_eq!(out, "p_star,beta_star,beta_any,objective,case\n0.492404,0,false,1.69782,case1\n");
}

#[test]
fn optimize_outage_fairness_any_beta() {
    let out = stdout(&d2dsec(&["optimize", "builtin:fig6b", "--problem", "p2", "--digits", "6"]));
    let r = &rows(&out)[1];
    assert_eq!((r[0].as_str(), r[1].as_str(), r[2].as_str(), r[4].as_str()), ("1", "1", "true", "rho-empty"));
}

#[test]
fn weights_flag_overrides_scenario() {
    // Same geometry as the case-1 panel, weights of the any-beta panel.
    let out = stdout(&d2dsec(&["optimize", "builtin:fig5a", "--weights", "0.9,0.1"]));
    let r = &rows(&out)[1];
    assert_eq!((r[0].as_str(), r[2].as_str()), ("1", "true"));
    assert_eq!(d2dsec(&["optimize", "builtin:fig5a", "--weights", "0.9,0.2"]).status.code(), Some(2));
}

#[test]
fn coarse_grid_still_reaches_refined_optimum() {
    let out = stdout(&d2dsec(&["optimize", "builtin:fig5a", "--method", "grid", "--grid", "11"]));
    let r = &rows(&out)[1];
    let p: f64 = r[0].parse().unwrap();
    assert!((p - 0.492404).abs() < 1e-4, "{p}");
    assert_eq!(r[4], "grid");
}

#[test]
fn out_dir_gets_manifest_and_replay_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = out.to_str().unwrap();
    stdout(&d2dsec(&["simulate", "builtin:table2-2", "--samples", "5000", "--batches", "4", "--seed", "3", "--out", o]));
    let first = fs::read(out.join("metrics.csv")).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["scenario"], "builtin:table2-2");
    fs::remove_file(out.join("metrics.csv")).unwrap();
    stdout(&d2dsec(&["replay", out.join("manifest.json").to_str().unwrap()]));
    assert_eq!(fs::read(out.join("metrics.csv")).unwrap(), first);
}

fn reproduce(target: &str, extra: &[&str]) -> (tempfile::TempDir, std::path::PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join(target);
    let mut args = vec!["reproduce", target, "--out", out.to_str().unwrap(), "--digits", "6"];
    args.extend(extra);
    stdout(&d2dsec(&args));
    (dir, out)
}

#[test]
fn reproduce_table2_matches_reference_values() {
    let (_d, out) = reproduce("table2", &[]);
    let rows = rows(&fs::read_to_string(out.join("table2.csv")).unwrap());
    assert_eq!(rows.len(), 10);
    let expected = [
        (0.851236, 0.1614),
        (0.559389, 1.03242),
        (0.55475, 0.58243),
        (0.290804, 2.51353),
        (0.279718, 1.95986),
        (0.320976, 1.79134),
        (0.421194, 0.91561),
        (0.101194, 2.28545),
        (0.0829538, 3.43743),
    ];
    for (r, (sop, asc)) in rows[1..].iter().zip(expected) {
        assert!(sig5(&r[7], sop) && sig5(&r[8], asc), "{r:?}");
    }
}

#[test]
fn reproduce_table3_golden_rows() {
    let (_d, out) = reproduce("table3", &[]);
    let rows = rows(&fs::read_to_string(out.join("table3.csv")).unwrap());
    let op = [0.226541, 0.226542, 0.0160373, 0.0160373, 0.476973, 0.00243919, 0.00142934, 0.0246167, 0.000492216];
    let ac = [5.77642, 5.27642, 7.25675, 7.25675, 4.17307, 8.51502, 8.8886, 5.99048];
    assert_eq!(rows.len(), 10);
    for (k, r) in rows[1..].iter().enumerate() {
        assert!(sig5(&r[7], op[k]), "{r:?}");
        if let Some(&ac) = ac.get(k) {
            assert!(sig5(&r[8], ac), "{r:?}");
        }
    }
}

#[test]
fn reproduce_table_with_simulation_columns() {
    let (_d, out) = reproduce("table2", &["--simulate", "--samples", "2000", "--batches", "4"]);
    let text = fs::read_to_string(out.join("table2.csv")).unwrap();
    assert!(text.starts_with("row,eve_x,eve_y,tx_x,tx_y,rx_x,rx_y,sop,asc,sim_sop,sim_sop_stderr,sim_asc,sim_asc_stderr\n"));
}

#[test]
fn reproduce_fig2_sweep_endpoints_and_script() {
    let (_d, out) = reproduce("fig2", &["--gnuplot-script"]);
    for name in ["fig2a_sop", "fig2b_asc"] {
        let rows = rows(&fs::read_to_string(out.join(format!("{name}.csv"))).unwrap());
        assert_eq!(rows.len(), 200);
        assert_eq!((rows[1][0].as_str(), rows[199][0].as_str()), ("1", "199"));
        let script = fs::read_to_string(out.join(format!("{name}.gp"))).unwrap();
        assert!(script.contains(&format!("'{name}.csv' using 1:5")));
    }
    let manifest = fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("fig2a_sop.gp"));
}

#[test]
fn reproduce_fig3_ratio_axis() {
    let (_d, out) = reproduce("fig3", &[]);
    let rows = rows(&fs::read_to_string(out.join("fig3a_op.csv")).unwrap());
    assert_eq!(rows[0][0], "ratio");
    let first: f64 = rows[1][0].parse().unwrap();
    let last: f64 = rows.last().unwrap()[0].parse().unwrap();
    assert!((first - 0.1).abs() < 1e-6 && (last - 10.0).abs() < 1e-5, "{first} {last}");
}

#[test]
fn reproduce_optimization_panels() {
    let (_d, out) = reproduce("fig5", &["--points", "11"]);
    let optima = fs::read_to_string(out.join("fig5_optima.csv")).unwrap();
    assert!(optima.contains("a,0.4,0.6,1.09974,0.187658,0.492404,0,false,"), "{optima}");
    assert!(optima.contains("b,0.9,0.1,0.770184,0.28467,0.435131,1,false,"), "{optima}");
    assert!(optima.contains(",1,1,true,"), "{optima}");
    assert!(optima.contains("d,0.4,0.6,0.552902,0.126527,0,0.4,false,"), "{optima}");
    let surface = rows(&fs::read_to_string(out.join("fig5a.csv")).unwrap());
    assert_eq!(surface.len(), 1 + 121);

    let (_d, out) = reproduce("fig6", &["--points", "11"]);
    let optima = rows(&fs::read_to_string(out.join("fig6_optima.csv")).unwrap());
    assert_eq!((optima[1][3].as_str(), optima[1][7].as_str()), ("0", "rho-nonempty"));
    assert_eq!((optima[2][3].as_str(), optima[2][5].as_str()), ("1", "true"));
}

#[test]
fn help_exits_zero_and_scenarios_are_listed() {
    assert!(d2dsec(&["--help"]).status.success());
    let list = stdout(&d2dsec(&["scenarios"]));
    assert_eq!(list.lines().count(), 26);
    assert!(list.lines().any(|l| l.starts_with("fig6b\t")));
}

#[test]
fn closed_stdout_is_not_an_error() {
    // The reader goes away before the first write.
    let mut child = Command::new(env!("CARGO_BIN_EXE_d2dsec"))
        .args(["optimize", "builtin:fig5a", "--problem", "p2", "--grid", "3"])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
