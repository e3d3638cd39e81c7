#![allow(dead_code)]

use d2dsec::network::D2dPair;
use d2dsec::{link_budget, LinkBudget, Point, RadioParams, SchemeConfig, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CUE: [f64; 2] = [100.0, 100.0];

/// Reference radio: 200 mW CUEs, 100 mW D2D transmitters, -114 dBm noise.
pub fn radio() -> RadioParams {
    RadioParams {
        p_cue_dbm: 10.0 * 200f64.log10(),
        ..RadioParams::default()
    }
}

pub fn topology(eve: [f64; 2], cues: &[[f64; 2]], pairs: &[([f64; 2], [f64; 2])]) -> Topology {
    Topology {
        base_station: Point::new(0.0, 0.0),
        eavesdropper: eve.into(),
        cues: cues.iter().map(|&c| c.into()).collect(),
        d2d_pairs: pairs.iter().map(|&(tx, rx)| D2dPair { tx: tx.into(), rx: rx.into() }).collect(),
    }
}

/// One CUE at [`CUE`], one pair.
pub fn single(eve: [f64; 2], tx: [f64; 2], rx: [f64; 2]) -> LinkBudget {
    link_budget(&topology(eve, &[CUE], &[(tx, rx)]), &radio()).unwrap()
}

pub fn scheme(p: f64, beta: f64, r_s: f64, r_t: f64) -> SchemeConfig {
    SchemeConfig { p, beta, r_s, r_t, w_c: 0.5, w_d: 0.5 }
}

/// `x` agrees with the printed `reference` to `digits` significant figures.
pub fn sig_figs(x: f64, reference: f64, digits: i32) -> bool {
    let unit = 10f64.powi(reference.abs().log10().floor() as i32 - digits + 1);
    (x - reference).abs() <= 0.5 * unit * (1.0 + 1e-9)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn random_point(rng: &mut ChaCha8Rng) -> [f64; 2] {
    [rng.gen_range(-300.0..300.0), rng.gen_range(-300.0..300.0)]
}

/// Random topology with `n` CUEs and `m` pairs; every node at least 20 m
/// from every other, pair links 20 to 120 m long.
pub fn random_topology(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Topology {
    loop {
        let eve = random_point(rng);
        let cues: Vec<[f64; 2]> = (0..n).map(|_| random_point(rng)).collect();
        let pairs: Vec<([f64; 2], [f64; 2])> = (0..m)
            .map(|_| {
                let tx = random_point(rng);
                let len = rng.gen_range(20.0..120.0);
                let angle = rng.gen_range(0.0..std::f64::consts::TAU);
                (tx, [tx[0] + len * angle.cos(), tx[1] + len * angle.sin()])
            })
            .collect();
        let mut nodes = vec![[0.0, 0.0], eve];
        nodes.extend(&cues);
        nodes.extend(pairs.iter().flat_map(|&(t, r)| [t, r]));
        let spread = nodes
            .iter()
            .enumerate()
            .all(|(a, p)| nodes[a + 1..].iter().all(|q| (p[0] - q[0]).hypot(p[1] - q[1]) >= 20.0));
        if spread {
            return topology(eve, &cues, &pairs);
        }
    }
}

pub fn random_scheme(rng: &mut ChaCha8Rng) -> SchemeConfig {
    scheme(
        rng.gen_range(0.1..0.9),
        rng.gen_range(0.1..0.9),
        rng.gen_range(0.05..1.0),
        rng.gen_range(0.05..1.0),
    )
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
