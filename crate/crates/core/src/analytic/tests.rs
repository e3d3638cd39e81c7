use super::*;
use crate::network::{link_budget, D2dPair, Point, RadioParams, Topology};

fn radio() -> RadioParams {
    RadioParams {
        p_cue_dbm: 10.0 * 200f64.log10(),
        ..RadioParams::default()
    }
}

fn single(e: [f64; 2], tx: [f64; 2], rx: [f64; 2]) -> LinkBudget {
    let topo = Topology {
        base_station: Point::new(0.0, 0.0),
        eavesdropper: e.into(),
        cues: vec![Point::new(100.0, 100.0)],
        d2d_pairs: vec![D2dPair { tx: tx.into(), rx: rx.into() }],
    };
    link_budget(&topo, &radio()).unwrap()
}

fn scheme() -> SchemeConfig {
    SchemeConfig {
        p: 0.5,
        beta: 0.5,
        r_s: 0.1,
        r_t: 0.5,
        w_c: 0.5,
        w_d: 0.5,
    }
}

fn sig5(actual: f64, expected: f64) -> bool {
    ((actual - expected) / expected).abs() < 5e-6
}

#[test]
fn quadrature_matches_closed_forms() {
    let b = single([0.0, 300.0], [0.0, 200.0], [50.0, 200.0]);
    let cs = CaseStudy::new(&b, 0.1, 0.5).unwrap();
    let an = Analyzer::new(&b).unwrap();
    let d = UnderlaySet::new(vec![0]);
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    assert!(rel(an.theta(0, &d, 1.0, 0.1).unwrap(), cs.theta_underlay()) < 1e-8);
    assert!(rel(an.lambda(0, &d).unwrap(), cs.lambda_underlay()) < 1e-8);
    let e = UnderlaySet::excluding(vec![], 0).unwrap();
    assert!(rel(an.underlay_log_rate(0, 0, &e).unwrap(), cs.underlay_log_rate()) < 1e-10);
    assert!(rel(an.omega(0, 0, &e, 1.0, 0.5).unwrap(), cs.omega_underlay()) < 1e-10);
}

#[test]
fn reference_rows() {
    let s = scheme();
    let r = evaluate(&single([0.0, 100.0], [100.0, 0.0], [150.0, 0.0]), &s).unwrap();
    assert!(sig5(r.per_cue[0].sop, 0.851236), "{:?}", r);
    assert!(sig5(r.per_cue[0].asc, 0.1614), "{:?}", r);
    let r = evaluate(&single([0.0, 300.0], [100.0, 300.0], [150.0, 300.0]), &s).unwrap();
    assert!(sig5(r.per_cue[0].sop, 0.0829538), "{:?}", r);
    assert!(sig5(r.per_cue[0].asc, 3.43743), "{:?}", r);
    let r = evaluate(&single([0.0, 300.0], [100.0, 0.0], [100.0, 50.0]), &s).unwrap();
    assert!(sig5(r.per_pair[0].op, 0.226541), "{:?}", r);
    assert!(sig5(r.per_pair[0].ac, 5.77642), "{:?}", r);
}

#[test]
fn gain_constants() {
    let b = single([0.0, 300.0], [0.0, 200.0], [50.0, 200.0]);
    let c = CaseStudy::new(&b, 0.1, 0.5).unwrap().constants();
    assert!(sig5(c.mu, 1.09974) && sig5(c.nu, 0.187658), "{c:?}");
}

#[test]
fn p_zero_leaves_only_the_empty_set() {
    let b = single([0.0, 200.0], [0.0, 300.0], [50.0, 300.0]);
    let s = scheme().with_p(0.0);
    let an = Analyzer::new(&b).unwrap();
    let th = an.theta(0, &UnderlaySet::empty(), s.beta, s.r_s).unwrap();
    assert_eq!(an.sop_cue(0, &s).unwrap(), 1.0 - th);
}

#[test]
fn symmetric_eavesdropper_at_zero_rate() {
    let b = LinkBudget::from_gammas(vec![7.0], vec![7.0], vec![], vec![], vec![], vec![]).unwrap();
    let an = Analyzer::new(&b).unwrap();
    assert_eq!(an.theta(0, &UnderlaySet::empty(), 1.0, 0.0).unwrap(), 0.5);
}

#[test]
fn vanishing_share_limits() {
    let b = single([0.0, 100.0], [100.0, 0.0], [150.0, 0.0]);
    let an = Analyzer::new(&b).unwrap();
    assert_eq!(an.theta(0, &UnderlaySet::empty(), 0.0, 0.1).unwrap(), 0.0);
    assert_eq!(an.theta(0, &UnderlaySet::empty(), 1e-4, 0.1).unwrap(), 0.0);
    let s = scheme().with_p(0.0).with_beta(1.0);
    assert_eq!(an.op_pair(0, &s).unwrap(), 1.0);
    assert_eq!(an.ac_pair(0, &s).unwrap(), 0.0);
}

#[test]
fn guard_rejects_large_networks() {
    let m = POWER_SET_LIMIT + 1;
    let b = LinkBudget::from_gammas(vec![1.0], vec![1.0], vec![1.0; m], vec![1.0; m], vec![1.0; m], vec![1.0; m * m]).unwrap();
    assert!(matches!(Analyzer::new(&b), Err(Error::CapacityGuard { .. })));
}

#[test]
fn singular_ratio_is_straddled() {
    let b = single([0.0, 300.0], [0.0, 200.0], [50.0, 200.0]);
    let g = b.d2d_direct(0);
    let near = b.with_gamma(NodeId::Cue(0), NodeId::D2dRx(0), g * (1.0 + 1e-9));
    let off = b.with_gamma(NodeId::Cue(0), NodeId::D2dRx(0), g * (1.0 + 1e-4));
    let e = UnderlaySet::excluding(vec![], 0).unwrap();
    let a = Analyzer::new(&near).unwrap().underlay_log_rate(0, 0, &e).unwrap();
    let c = Analyzer::new(&off).unwrap().underlay_log_rate(0, 0, &e).unwrap();
    assert!(a.is_finite() && ((a - c) / c).abs() < 1e-4, "{a} {c}");
    let cs = CaseStudy::new(&near, 0.1, 0.5).unwrap();
    assert!(((cs.underlay_log_rate() - a) / a).abs() < 1e-8);
}
