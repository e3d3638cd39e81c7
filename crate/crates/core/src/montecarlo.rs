//! Slot-level Monte Carlo simulation of the uplink with D2D pairs.
//!
//! In every slot each pair independently picks the underlay mode with
//! probability `p` and then a uniformly random CUE to reuse (several pairs may
//! pick the same CUE). CUEs share `beta` of the band equally, overlay pairs
//! share the rest equally, and when no pair is in overlay the CUEs take the
//! whole band. All channel gains are drawn afresh each slot.
//!
//! Batches are independent: batch `b` draws from a ChaCha8 stream seeded with
//! [`batch_seed`]`(seed, b)`, so results do not depend on how batches are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{CueMetrics, MetricReport, PairMetrics, Source, StdErrors};
use crate::error::{Error, Result};
use crate::network::{link_budget, LinkBudget, RadioParams, SchemeConfig, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationPlan {
    pub samples_per_batch: u64,
    pub batches: u32,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub parallelism: Option<usize>,
}

impl Default for SimulationPlan {
    fn default() -> Self {
        SimulationPlan {
            samples_per_batch: 1_000_000,
            batches: 100,
            seed: 1,
            parallelism: None,
        }
    }
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_batch == 0 {
            return Err(Error::invalid("samples_per_batch", "must be at least 1"));
        }
        if self.batches == 0 {
            return Err(Error::invalid("batches", "must be at least 1"));
        }
        if self.parallelism == Some(0) {
            return Err(Error::invalid("parallelism", "must be at least 1"));
        }
        Ok(())
    }
}

/// Mean over batches with the standard error of that mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub batch_means: Vec<f64>,
}

impl SimEstimate {
    pub fn from_batches(batch_means: Vec<f64>) -> Self {
        let b = batch_means.len() as f64;
        let mean = batch_means.iter().sum::<f64>() / b;
        let stderr = if batch_means.len() < 2 {
            0.0
        } else {
            let var = batch_means.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (b - 1.0);
            (var / b).sqrt()
        };
        SimEstimate {
            mean,
            stderr,
            batch_means,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub sop: Vec<SimEstimate>,
    pub asc: Vec<SimEstimate>,
    pub op: Vec<SimEstimate>,
    pub ac: Vec<SimEstimate>,
}

/// One raw batch mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchRow {
    pub batch: usize,
    pub metric: &'static str,
    pub entity_index: usize,
    pub value: f64,
}

impl Simulation {
    pub fn report(&self) -> MetricReport {
        let cues = |f: fn(&SimEstimate) -> f64| -> Vec<CueMetrics> {
            self.sop
                .iter()
                .zip(&self.asc)
                .map(|(s, a)| CueMetrics { sop: f(s), asc: f(a) })
                .collect()
        };
        let pairs = |f: fn(&SimEstimate) -> f64| -> Vec<PairMetrics> {
            self.op
                .iter()
                .zip(&self.ac)
                .map(|(o, a)| PairMetrics { op: f(o), ac: f(a) })
                .collect()
        };
        MetricReport {
            per_cue: cues(|e| e.mean),
            per_pair: pairs(|e| e.mean),
            source: Source::Simulated,
            stderr: Some(StdErrors {
                per_cue: cues(|e| e.stderr),
                per_pair: pairs(|e| e.stderr),
            }),
        }
    }

    /// Every batch mean, ordered by metric, entity, then batch.
    pub fn batch_rows(&self) -> Vec<BatchRow> {
        let mut rows = Vec::new();
        for (metric, estimates) in [("sop", &self.sop), ("asc", &self.asc), ("op", &self.op), ("ac", &self.ac)] {
            for (entity_index, e) in estimates.iter().enumerate() {
                rows.extend(e.batch_means.iter().enumerate().map(|(batch, &value)| BatchRow {
                    batch,
                    metric,
                    entity_index,
                    value,
                }));
            }
        }
        rows
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of batch `batch`: SplitMix64 of the run seed, mixed with the batch
/// index and hashed again.
pub fn batch_seed(seed: u64, batch: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ batch)
}

/// Unit-mean exponential by inversion.
#[inline]
fn exp1(rng: &mut ChaCha8Rng) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Reused CUE of each pair in one slot, `None` for overlay.
struct SlotModes {
    reuse: Vec<Option<usize>>,
    overlay: usize,
}

/// Per-slot draws shared by the estimator and the CDF probe.
struct SlotModel<'a> {
    budget: &'a LinkBudget,
    scheme: SchemeConfig,
    n: usize,
    m: usize,
}

impl<'a> SlotModel<'a> {
    fn new(budget: &'a LinkBudget, scheme: &SchemeConfig) -> Self {
        SlotModel {
            budget,
            scheme: *scheme,
            n: budget.num_cues(),
            m: budget.num_pairs(),
        }
    }

    fn draw_modes(&self, rng: &mut ChaCha8Rng, modes: &mut SlotModes) {
        modes.overlay = 0;
        for r in modes.reuse.iter_mut() {
            *r = if rng.gen::<f64>() < self.scheme.p {
                Some(rng.gen_range(0..self.n))
            } else {
                modes.overlay += 1;
                None
            };
        }
    }

    fn beta_eff(&self, modes: &SlotModes) -> f64 {
        if modes.overlay == 0 {
            1.0
        } else {
            self.scheme.beta
        }
    }

    /// SINRs of CUE `i` at the base station and at the eavesdropper.
    fn cue_sinrs(&self, i: usize, modes: &SlotModes, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let b = self.budget;
        let s_b = b.cue_bs(i) * exp1(rng);
        let s_e = b.cue_eve(i) * exp1(rng);
        let (mut i_b, mut i_e) = (0.0, 0.0);
        for (k, r) in modes.reuse.iter().enumerate() {
            if *r == Some(i) {
                i_b += b.d2d_bs(k) * exp1(rng);
                i_e += b.d2d_eve(k) * exp1(rng);
            }
        }
        (s_b / (1.0 + i_b), s_e / (1.0 + i_e))
    }

    /// SINR of pair `j` and its share of the band.
    fn pair_sinr(&self, j: usize, modes: &SlotModes, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let b = self.budget;
        let signal = b.d2d_direct(j) * exp1(rng);
        match modes.reuse[j] {
            Some(c) => {
                let mut interference = b.cue_rx(c, j) * exp1(rng);
                for (k, r) in modes.reuse.iter().enumerate() {
                    if k != j && *r == Some(c) {
                        interference += b.d2d_rx(k, j) * exp1(rng);
                    }
                }
                (signal / (1.0 + interference), self.beta_eff(modes) / self.n as f64)
            }
            None => (signal, (1.0 - self.scheme.beta) / modes.overlay as f64),
        }
    }

    fn run_batch(&self, seed: u64, samples: u64) -> BatchSums {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut modes = SlotModes {
            reuse: vec![None; self.m],
            overlay: 0,
        };
        let mut sums = BatchSums::new(self.n, self.m);
        let (r_s, r_t) = (self.scheme.r_s, self.scheme.r_t);
        for _ in 0..samples {
            self.draw_modes(&mut rng, &mut modes);
            let share = self.beta_eff(&modes) / self.n as f64;
            // Outage on the unclamped log-ratio; capacity on the clamped one.
            let exponent = if r_s == 0.0 {
                0.0
            } else if share == 0.0 {
                f64::INFINITY
            } else {
                r_s / share
            };
            for i in 0..self.n {
                let (b, e) = self.cue_sinrs(i, &modes, &mut rng);
                let lr = ((1.0 + b) / (1.0 + e)).log2();
                if lr < exponent {
                    sums.sop[i] += 1;
                }
                sums.asc[i] += share * lr.max(0.0);
            }
            for j in 0..self.m {
                let (sinr, share) = self.pair_sinr(j, &modes, &mut rng);
                let rate = share * (1.0 + sinr).log2();
                if rate < r_t {
                    sums.op[j] += 1;
                }
                sums.ac[j] += rate;
            }
        }
        sums
    }
}

struct BatchSums {
    sop: Vec<u64>,
    asc: Vec<f64>,
    op: Vec<u64>,
    ac: Vec<f64>,
}

impl BatchSums {
    fn new(n: usize, m: usize) -> Self {
        BatchSums {
            sop: vec![0; n],
            asc: vec![0.0; n],
            op: vec![0; m],
            ac: vec![0.0; m],
        }
    }
}

fn in_pool<T: Send>(parallelism: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match parallelism {
        None => Ok(job()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::invalid("parallelism", e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Simulates the system described by a mean-SNR table.
pub fn simulate_budget(budget: &LinkBudget, scheme: &SchemeConfig, plan: &SimulationPlan) -> Result<Simulation> {
    plan.validate()?;
    scheme.validate()?;
    let model = SlotModel::new(budget, scheme);
    let batches: Vec<BatchSums> = in_pool(plan.parallelism, || {
        (0..plan.batches as u64)
            .into_par_iter()
            .map(|b| model.run_batch(batch_seed(plan.seed, b), plan.samples_per_batch))
            .collect()
    })?;
    let s = plan.samples_per_batch as f64;
    let collect = |count: usize, get: &dyn Fn(&BatchSums, usize) -> f64| -> Vec<SimEstimate> {
        (0..count)
            .map(|e| SimEstimate::from_batches(batches.iter().map(|b| get(b, e) / s).collect()))
            .collect()
    };
    Ok(Simulation {
        sop: collect(model.n, &|b, i| b.sop[i] as f64),
        asc: collect(model.n, &|b, i| b.asc[i]),
        op: collect(model.m, &|b, j| b.op[j] as f64),
        ac: collect(model.m, &|b, j| b.ac[j]),
    })
}

/// Simulated metrics with standard errors.
pub fn simulate(topology: &Topology, radio: &RadioParams, scheme: &SchemeConfig, plan: &SimulationPlan) -> Result<MetricReport> {
    let budget = link_budget(topology, radio)?;
    Ok(simulate_budget(&budget, scheme, plan)?.report())
}

/// Per-slot quantity sampled by [`empirical_cdf_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    /// SINR of a CUE at the base station.
    SinrCueB(usize),
    /// SINR of a CUE at the eavesdropper.
    SinrCueE(usize),
    /// SINR of a D2D pair in whichever mode it picked.
    SinrD2d(usize),
}

impl Probe {
    pub fn parse(tag: &str, index: usize) -> Result<Self> {
        match tag {
            "sinr_cue_b" => Ok(Probe::SinrCueB(index)),
            "sinr_cue_e" => Ok(Probe::SinrCueE(index)),
            "sinr_d2d" => Ok(Probe::SinrD2d(index)),
            other => Err(Error::UnknownProbe(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// `(x, F(x))` at every sample.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.sorted.len() as f64;
        self.sorted.iter().enumerate().map(move |(k, &x)| (x, (k + 1) as f64 / n))
    }

    /// Kolmogorov-Smirnov distance to a continuous reference CDF.
    pub fn ks_distance(&self, reference: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let f = reference(x);
                (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Samples `probe` over `samples` independent slots.
pub fn empirical_cdf_probe(
    probe: Probe,
    budget: &LinkBudget,
    scheme: &SchemeConfig,
    samples: usize,
    seed: u64,
) -> Result<EmpiricalCdf> {
    scheme.validate()?;
    if samples == 0 {
        return Err(Error::invalid("samples", "must be at least 1"));
    }
    let model = SlotModel::new(budget, scheme);
    match probe {
        Probe::SinrCueB(i) | Probe::SinrCueE(i) if i >= model.n => {
            return Err(Error::invalid("probe", format!("CUE index {i} out of range")));
        }
        Probe::SinrD2d(j) if j >= model.m => {
            return Err(Error::invalid("probe", format!("pair index {j} out of range")));
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(batch_seed(seed, 0));
    let mut modes = SlotModes {
        reuse: vec![None; model.m],
        overlay: 0,
    };
    let mut sorted: Vec<f64> = (0..samples)
        .map(|_| {
            model.draw_modes(&mut rng, &mut modes);
            match probe {
                Probe::SinrCueB(i) => model.cue_sinrs(i, &modes, &mut rng).0,
                Probe::SinrCueE(i) => model.cue_sinrs(i, &modes, &mut rng).1,
                Probe::SinrD2d(j) => model.pair_sinr(j, &modes, &mut rng).0,
            }
        })
        .collect();
    sorted.sort_by(f64::total_cmp);
    Ok(EmpiricalCdf { sorted })
}
