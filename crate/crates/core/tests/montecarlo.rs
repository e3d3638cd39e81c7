mod common;

use common::{radio, random_topology, rng, scheme, single};
use d2dsec::analytic::CaseStudy;
use d2dsec::montecarlo::{batch_seed, empirical_cdf_probe, simulate_budget, Probe, SimulationPlan};
use d2dsec::{link_budget, Error};

fn plan(samples: u64, batches: u32, seed: u64) -> SimulationPlan {
    SimulationPlan {
        samples_per_batch: samples,
        batches,
        seed,
        parallelism: None,
    }
}

fn budget() -> d2dsec::LinkBudget {
    single([0.0, 300.0], [-50.0, 0.0], [-50.0, 50.0])
}

#[test]
fn stderr_shrinks_with_batches() {
    let s = scheme(0.5, 0.5, 0.1, 0.1);
    let few = simulate_budget(&budget(), &s, &plan(1000, 100, 5)).unwrap();
    let many = simulate_budget(&budget(), &s, &plan(1000, 400, 5)).unwrap();
    let ratio = few.sop[0].stderr / many.sop[0].stderr;
    assert!((1.6..2.5).contains(&ratio), "ratio {ratio}");
    let ratio = few.ac[0].stderr / many.ac[0].stderr;
    assert!((1.6..2.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn always_underlay_matches_closed_form() {
    let b = budget();
    let s = scheme(1.0, 0.5, 0.1, 0.1);
    let sim = simulate_budget(&b, &s, &plan(20_000, 50, 6)).unwrap();
    let cs = CaseStudy::new(&b, s.r_s, s.r_t).unwrap();
    let want = 1.0 - cs.theta_underlay();
    let e = &sim.sop[0];
    assert!((e.mean - want).abs() <= 3.0 * e.stderr, "{} +- {} vs {want}", e.mean, e.stderr);
    let want = 1.0 - cs.omega_underlay();
    let e = &sim.op[0];
    assert!((e.mean - want).abs() <= 3.0 * e.stderr, "{} +- {} vs {want}", e.mean, e.stderr);
}

#[test]
fn pairs_without_band_always_fail() {
    let s = scheme(0.0, 1.0, 0.1, 0.1);
    let sim = simulate_budget(&budget(), &s, &plan(1000, 4, 7)).unwrap();
    assert_eq!(sim.op[0].mean, 1.0);
    assert_eq!(sim.ac[0].mean, 0.0);
}

#[test]
fn sinr_at_base_station_under_interference() {
    let b = budget();
    let (ga, gd) = (b.cue_bs(0), b.d2d_bs(0));
    // P(SINR > t) = exp(-t / ga) ga / (ga + t gd) with unit noise.
    let cdf = |t: f64| 1.0 - (-t / ga).exp() * ga / (ga + t * gd);
    let emp = empirical_cdf_probe(Probe::SinrCueB(0), &b, &scheme(1.0, 0.5, 0.1, 0.1), 200_000, 8).unwrap();
    let ks = emp.ks_distance(cdf);
    assert!(ks < 0.006, "KS {ks}");
}

#[test]
fn overlay_sinrs_are_exponential() {
    let b = budget();
    let s = scheme(0.0, 0.5, 0.1, 0.1);
    for (probe, mean) in [(Probe::SinrCueE(0), b.cue_eve(0)), (Probe::SinrD2d(0), b.d2d_direct(0))] {
        let emp = empirical_cdf_probe(probe, &b, &s, 200_000, 9).unwrap();
        let ks = emp.ks_distance(|x| 1.0 - (-x / mean).exp());
        assert!(ks < 0.006, "{probe:?} KS {ks}");
    }
}

#[test]
fn seeds_decide_the_stream() {
    let b = link_budget(&random_topology(&mut rng(30), 2, 2), &radio()).unwrap();
    let s = scheme(0.4, 0.6, 0.2, 0.2);
    let a = simulate_budget(&b, &s, &plan(500, 8, 10)).unwrap();
    let same = simulate_budget(&b, &s, &SimulationPlan { parallelism: Some(2), ..plan(500, 8, 10) }).unwrap();
    let other = simulate_budget(&b, &s, &plan(500, 8, 11)).unwrap();
    assert_eq!(a, same);
    assert_ne!(a, other);
    let seeds: std::collections::HashSet<u64> = (0..1000).map(|k| batch_seed(10, k)).collect();
    assert_eq!(seeds.len(), 1000);
}

#[test]
fn batch_rows_cover_every_metric() {
    let b = link_budget(&random_topology(&mut rng(31), 2, 3), &radio()).unwrap();
    let sim = simulate_budget(&b, &scheme(0.5, 0.5, 0.1, 0.1), &plan(100, 3, 1)).unwrap();
    let rows = sim.batch_rows();
    assert_eq!(rows.len(), 3 * (2 * 2 + 2 * 3));
    let rep = sim.report();
    assert!(rep.stderr.is_some());
    assert_eq!(rep.per_pair.len(), 3);
}

#[test]
fn invalid_requests() {
    let b = budget();
    let s = scheme(0.5, 0.5, 0.1, 0.1);
    assert!(simulate_budget(&b, &s, &plan(0, 1, 1)).is_err());
    assert!(simulate_budget(&b, &s, &plan(1, 0, 1)).is_err());
    assert!(simulate_budget(&b, &s, &SimulationPlan { parallelism: Some(0), ..plan(1, 1, 1) }).is_err());
    assert!(simulate_budget(&b, &scheme(1.5, 0.5, 0.1, 0.1), &plan(1, 1, 1)).is_err());
    assert!(empirical_cdf_probe(Probe::SinrD2d(1), &b, &s, 10, 1).is_err());
    assert!(empirical_cdf_probe(Probe::SinrCueB(0), &b, &s, 0, 1).is_err());
    assert!(matches!(Probe::parse("snr", 0), Err(Error::UnknownProbe(_))));
    assert_eq!(Probe::parse("sinr_cue_e", 2).unwrap(), Probe::SinrCueE(2));
}
