//! Cell geometry, radio parameters, the mode-selection/spectrum-partition
//! scheme, and the mean-SNR link budget derived from them.
//!
//! Every link is quasi-static Rayleigh: the instantaneous SNR from node `a`
//! to node `b` is exponential with mean `gamma(a, b) = P_a d^-alpha / noise`.
//! Noise power is the spectral density times the full bandwidth and does not
//! change with the sub-band a transmitter ends up using.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct D2dPair {
    pub tx: Point,
    pub rx: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Topology {
    pub base_station: Point,
    pub eavesdropper: Point,
    pub cues: Vec<Point>,
    #[serde(default)]
    pub d2d_pairs: Vec<D2dPair>,
}

/// Node labels used to address links in a [`LinkBudget`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeId {
    BaseStation,
    Eavesdropper,
    Cue(usize),
    D2dTx(usize),
    D2dRx(usize),
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeId::BaseStation => write!(f, "B"),
            NodeId::Eavesdropper => write!(f, "E"),
            NodeId::Cue(i) => write!(f, "A{}", i + 1),
            NodeId::D2dTx(j) => write!(f, "D{}t", j + 1),
            NodeId::D2dRx(j) => write!(f, "D{}r", j + 1),
        }
    }
}

impl Topology {
    pub fn num_cues(&self) -> usize {
        self.cues.len()
    }

    pub fn num_pairs(&self) -> usize {
        self.d2d_pairs.len()
    }

    pub fn position(&self, node: NodeId) -> Option<Point> {
        match node {
            NodeId::BaseStation => Some(self.base_station),
            NodeId::Eavesdropper => Some(self.eavesdropper),
            NodeId::Cue(i) => self.cues.get(i).copied(),
            NodeId::D2dTx(j) => self.d2d_pairs.get(j).map(|p| p.tx),
            NodeId::D2dRx(j) => self.d2d_pairs.get(j).map(|p| p.rx),
        }
    }

    /// Every (transmitter, receiver) link the model uses.
    pub fn modeled_links(&self) -> Vec<(NodeId, NodeId)> {
        let n = self.num_cues();
        let m = self.num_pairs();
        let mut links = Vec::with_capacity(2 * n + n * m + 2 * m + m * m);
        for i in 0..n {
            links.push((NodeId::Cue(i), NodeId::BaseStation));
            links.push((NodeId::Cue(i), NodeId::Eavesdropper));
            for j in 0..m {
                links.push((NodeId::Cue(i), NodeId::D2dRx(j)));
            }
        }
        for k in 0..m {
            links.push((NodeId::D2dTx(k), NodeId::BaseStation));
            links.push((NodeId::D2dTx(k), NodeId::Eavesdropper));
            for j in 0..m {
                links.push((NodeId::D2dTx(k), NodeId::D2dRx(j)));
            }
        }
        links
    }

    pub fn validate(&self) -> Result<()> {
        if self.cues.is_empty() {
            return Err(Error::invalid("topology.cues", "at least one CUE is required"));
        }
        for (from, to) in self.modeled_links() {
            let a = self.position(from).expect("link endpoints exist");
            let b = self.position(to).expect("link endpoints exist");
            if !a.x.is_finite() || !a.y.is_finite() || !b.x.is_finite() || !b.y.is_finite() {
                return Err(Error::invalid("topology", format!("non-finite position on {from} -> {to}")));
            }
            if a.distance(&b) <= 0.0 {
                return Err(Error::Geometry {
                    from: from.to_string(),
                    to: to.to_string(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioParams {
    pub p_cue_dbm: f64,
    pub p_d2d_dbm: f64,
    pub noise_psd_dbm_hz: f64,
    pub bandwidth_mhz: f64,
    pub alpha: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            p_cue_dbm: 23.0,
            p_d2d_dbm: 20.0,
            noise_psd_dbm_hz: -174.0,
            bandwidth_mhz: 1.0,
            alpha: 4.0,
        }
    }
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("radio.p_cue_dbm", self.p_cue_dbm),
            ("radio.p_d2d_dbm", self.p_d2d_dbm),
            ("radio.noise_psd_dbm_hz", self.noise_psd_dbm_hz),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(field, "must be finite"));
            }
        }
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            return Err(Error::invalid("radio.alpha", "path-loss exponent must exceed 2"));
        }
        if !(self.bandwidth_mhz > 0.0) || !self.bandwidth_mhz.is_finite() {
            return Err(Error::invalid("radio.bandwidth_mhz", "bandwidth must be positive"));
        }
        Ok(())
    }

    /// Noise power over the full band, in mW.
    pub fn noise_mw(&self) -> f64 {
        dbm_to_mw(self.noise_psd_dbm_hz) * self.bandwidth_mhz * 1e6
    }
}

/// Converts a rate in Mbit/s to bit/s/Hz of the total band.
pub fn rate_normalize(rate_mbps: f64, radio: &RadioParams) -> f64 {
    rate_mbps / radio.bandwidth_mhz
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    /// Probability that a D2D pair picks the underlay mode in a slot.
    pub p: f64,
    /// Fraction of the band reserved for the CUEs.
    pub beta: f64,
    /// Target secrecy rate, bit/s/Hz.
    pub r_s: f64,
    /// Target D2D rate, bit/s/Hz.
    pub r_t: f64,
    pub w_c: f64,
    pub w_d: f64,
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [("scheme.p", self.p), ("scheme.beta", self.beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(field, "must lie in [0, 1]"));
            }
        }
        for (field, v) in [("scheme.r_s", self.r_s), ("scheme.r_t", self.r_t)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(field, "rate must be finite and non-negative"));
            }
        }
        self.validate_weights()
    }

    pub fn validate_weights(&self) -> Result<()> {
        if !(self.w_c > 0.0 && self.w_c < 1.0) {
            return Err(Error::invalid("scheme.w_c", "must lie in (0, 1)"));
        }
        if !(self.w_d > 0.0 && self.w_d < 1.0) {
            return Err(Error::invalid("scheme.w_d", "must lie in (0, 1)"));
        }
        if (self.w_c + self.w_d - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("scheme.w_d", "w_c + w_d must equal 1"));
        }
        Ok(())
    }

    pub fn with_p(self, p: f64) -> Self {
        SchemeConfig { p, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        SchemeConfig { beta, ..self }
    }

    pub fn with_weights(self, w_c: f64, w_d: f64) -> Self {
        SchemeConfig { w_c, w_d, ..self }
    }

    /// Probability that an underlay pair reuses one particular CUE.
    pub fn epsilon(&self, n: usize) -> f64 {
        self.p / n as f64
    }

    /// Probability that an underlay pair reuses some other CUE.
    pub fn vartheta(&self, n: usize) -> f64 {
        self.p * (1.0 - 1.0 / n as f64)
    }
}

/// Mean SNRs of every modeled link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    n: usize,
    m: usize,
    cue_bs: Vec<f64>,
    cue_eve: Vec<f64>,
    /// `cue_rx[i * m + j]`: CUE i to receiver of pair j.
    cue_rx: Vec<f64>,
    d2d_bs: Vec<f64>,
    d2d_eve: Vec<f64>,
    /// `d2d_rx[k * m + j]`: transmitter of pair k to receiver of pair j.
    d2d_rx: Vec<f64>,
}

fn mean_snr(power_mw: f64, distance: f64, alpha: f64, noise_mw: f64) -> f64 {
    power_mw * distance.powf(-alpha) / noise_mw
}

/// Builds the mean-SNR table for `topology` under `radio`.
pub fn link_budget(topology: &Topology, radio: &RadioParams) -> Result<LinkBudget> {
    topology.validate()?;
    radio.validate()?;
    let n = topology.num_cues();
    let m = topology.num_pairs();
    let noise = radio.noise_mw();
    let p_cue = dbm_to_mw(radio.p_cue_dbm);
    let p_d2d = dbm_to_mw(radio.p_d2d_dbm);
    let g = |power: f64, a: &Point, b: &Point| mean_snr(power, a.distance(b), radio.alpha, noise);

    let bs = &topology.base_station;
    let eve = &topology.eavesdropper;
    let cue_bs = topology.cues.iter().map(|a| g(p_cue, a, bs)).collect();
    let cue_eve = topology.cues.iter().map(|a| g(p_cue, a, eve)).collect();
    let cue_rx = topology
        .cues
        .iter()
        .flat_map(|a| topology.d2d_pairs.iter().map(move |d| (a, d)))
        .map(|(a, d)| g(p_cue, a, &d.rx))
        .collect();
    let d2d_bs = topology.d2d_pairs.iter().map(|d| g(p_d2d, &d.tx, bs)).collect();
    let d2d_eve = topology.d2d_pairs.iter().map(|d| g(p_d2d, &d.tx, eve)).collect();
    let d2d_rx = topology
        .d2d_pairs
        .iter()
        .flat_map(|k| topology.d2d_pairs.iter().map(move |j| (k, j)))
        .map(|(k, j)| g(p_d2d, &k.tx, &j.rx))
        .collect();

    let budget = LinkBudget {
        n,
        m,
        cue_bs,
        cue_eve,
        cue_rx,
        d2d_bs,
        d2d_eve,
        d2d_rx,
    };
    for (from, to) in topology.modeled_links() {
        let v = budget.gamma(from, to).expect("modeled link");
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(
                "topology",
                format!("mean SNR on {from} -> {to} is {v}; it must be positive and finite"),
            ));
        }
    }
    Ok(budget)
}

impl LinkBudget {
    /// Builds a budget directly from mean-SNR tables. `cue_rx` and `d2d_rx`
    /// are row-major `n x m` and `m x m`.
    pub fn from_gammas(
        cue_bs: Vec<f64>,
        cue_eve: Vec<f64>,
        cue_rx: Vec<f64>,
        d2d_bs: Vec<f64>,
        d2d_eve: Vec<f64>,
        d2d_rx: Vec<f64>,
    ) -> Result<Self> {
        let n = cue_bs.len();
        let m = d2d_bs.len();
        if n == 0 {
            return Err(Error::invalid("gamma", "at least one CUE is required"));
        }
        if cue_eve.len() != n || cue_rx.len() != n * m || d2d_eve.len() != m || d2d_rx.len() != m * m {
            return Err(Error::invalid("gamma", "table dimensions do not match n and m"));
        }
        let all = cue_bs.iter().chain(&cue_eve).chain(&cue_rx).chain(&d2d_bs).chain(&d2d_eve).chain(&d2d_rx);
        if all.clone().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::invalid("gamma", "every mean SNR must be positive and finite"));
        }
        Ok(LinkBudget {
            n,
            m,
            cue_bs,
            cue_eve,
            cue_rx,
            d2d_bs,
            d2d_eve,
            d2d_rx,
        })
    }

    pub fn num_cues(&self) -> usize {
        self.n
    }

    pub fn num_pairs(&self) -> usize {
        self.m
    }

    pub fn cue_bs(&self, i: usize) -> f64 {
        self.cue_bs[i]
    }

    pub fn cue_eve(&self, i: usize) -> f64 {
        self.cue_eve[i]
    }

    pub fn cue_rx(&self, i: usize, j: usize) -> f64 {
        self.cue_rx[i * self.m + j]
    }

    pub fn d2d_bs(&self, k: usize) -> f64 {
        self.d2d_bs[k]
    }

    pub fn d2d_eve(&self, k: usize) -> f64 {
        self.d2d_eve[k]
    }

    /// Transmitter of pair `k` to receiver of pair `j`.
    pub fn d2d_rx(&self, k: usize, j: usize) -> f64 {
        self.d2d_rx[k * self.m + j]
    }

    /// Direct link of pair `j`.
    pub fn d2d_direct(&self, j: usize) -> f64 {
        self.d2d_rx(j, j)
    }

    /// Mean SNR of a modeled link, `None` for links the model never uses.
    pub fn gamma(&self, from: NodeId, to: NodeId) -> Option<f64> {
        use NodeId::*;
        match (from, to) {
            (Cue(i), BaseStation) if i < self.n => Some(self.cue_bs(i)),
            (Cue(i), Eavesdropper) if i < self.n => Some(self.cue_eve(i)),
            (Cue(i), D2dRx(j)) if i < self.n && j < self.m => Some(self.cue_rx(i, j)),
            (D2dTx(k), BaseStation) if k < self.m => Some(self.d2d_bs(k)),
            (D2dTx(k), Eavesdropper) if k < self.m => Some(self.d2d_eve(k)),
            (D2dTx(k), D2dRx(j)) if k < self.m && j < self.m => Some(self.d2d_rx(k, j)),
            _ => None,
        }
    }

    /// Returns a copy with one mean SNR replaced. Used to step off removable
    /// singularities.
    pub(crate) fn with_gamma(&self, from: NodeId, to: NodeId, value: f64) -> Self {
        use NodeId::*;
        let mut out = self.clone();
        let m = self.m;
        match (from, to) {
            (Cue(i), BaseStation) => out.cue_bs[i] = value,
            (Cue(i), Eavesdropper) => out.cue_eve[i] = value,
            (Cue(i), D2dRx(j)) => out.cue_rx[i * m + j] = value,
            (D2dTx(k), BaseStation) => out.d2d_bs[k] = value,
            (D2dTx(k), Eavesdropper) => out.d2d_eve[k] = value,
            (D2dTx(k), D2dRx(j)) => out.d2d_rx[k * m + j] = value,
            _ => panic!("{from} -> {to} is not a modeled link"),
        }
        out
    }
}
