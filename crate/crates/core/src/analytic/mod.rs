//! Exact performance expressions.
//!
//! For every CUE the secrecy outage probability (SOP) and average secrecy
//! capacity (ASC) are sums over all realizations of the set of underlay pairs
//! reusing that CUE's spectrum; for every D2D pair the outage probability (OP)
//! and average capacity (AC) sum over the realizations of the other pairs
//! sharing its CUE, plus a binomial term over the number of overlay pairs.
//! Conditional kernels are integrals against the interference densities of
//! [`crate::density`].

mod case_study;

pub use case_study::{case_study_metrics, CaseStudy, CaseStudyConstants};

use std::f64::consts::LN_2;

use crate::density::{sum_density, Receiver, SumDensity, UnderlaySet};
use crate::error::{Error, Result};
use crate::network::{LinkBudget, NodeId, SchemeConfig};
use crate::special::{psi_kernel, QuadratureSpec};
use crate::subsets::{members, subset_weights, POWER_SET_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Simulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CueMetrics {
    pub sop: f64,
    pub asc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairMetrics {
    pub op: f64,
    pub ac: f64,
}

/// Per-entity standard errors, laid out like the metrics themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct StdErrors {
    pub per_cue: Vec<CueMetrics>,
    pub per_pair: Vec<PairMetrics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub per_cue: Vec<CueMetrics>,
    pub per_pair: Vec<PairMetrics>,
    pub source: Source,
    pub stderr: Option<StdErrors>,
}

impl MetricReport {
    pub fn sum_asc(&self) -> f64 {
        self.per_cue.iter().map(|c| c.asc).sum()
    }

    pub fn sum_sop(&self) -> f64 {
        self.per_cue.iter().map(|c| c.sop).sum()
    }

    pub fn sum_ac(&self) -> f64 {
        self.per_pair.iter().map(|d| d.ac).sum()
    }

    pub fn sum_op(&self) -> f64 {
        self.per_pair.iter().map(|d| d.op).sum()
    }
}

/// Exponent above which `2^x` is treated as infinite (natural-log units).
const LOG_OVERFLOW: f64 = 700.0;
/// Relative distance to a removable singularity that triggers perturbation.
pub(crate) const SINGULAR_PIVOT: f64 = 1e-7;
/// Relative perturbation applied to step off a removable singularity.
pub(crate) const SINGULAR_STEP: f64 = 1e-5;

/// `log2` of the SINR-ratio threshold when `n` users share a fraction
/// `share` of the band at target `rate`. `None` means the threshold is
/// infinite (no bandwidth, positive target).
pub(crate) fn threshold_bits(rate: f64, n: usize, share: f64) -> Option<f64> {
    if rate == 0.0 {
        return Some(0.0);
    }
    if share <= 0.0 {
        return None;
    }
    let bits = n as f64 * rate / share;
    (bits * LN_2 <= LOG_OVERFLOW).then_some(bits)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exact evaluator for an arbitrary topology, bounded by the power-set limit.
#[derive(Debug, Clone)]
pub struct Analyzer<'a> {
    budget: &'a LinkBudget,
    spec: QuadratureSpec,
}

impl<'a> Analyzer<'a> {
    pub fn new(budget: &'a LinkBudget) -> Result<Self> {
        Self::with_spec(budget, QuadratureSpec::default())
    }

    pub fn with_spec(budget: &'a LinkBudget, spec: QuadratureSpec) -> Result<Self> {
        if budget.num_pairs() > POWER_SET_LIMIT {
            return Err(Error::CapacityGuard {
                pairs: budget.num_pairs(),
                limit: POWER_SET_LIMIT,
            });
        }
        Ok(Analyzer { budget, spec })
    }

    pub fn budget(&self) -> &LinkBudget {
        self.budget
    }

    fn check_cue(&self, i: usize) -> Result<()> {
        if i >= self.budget.num_cues() {
            return Err(Error::invalid("cue", format!("index {i} out of range")));
        }
        Ok(())
    }

    fn check_pair(&self, j: usize) -> Result<()> {
        if j >= self.budget.num_pairs() {
            return Err(Error::invalid("pair", format!("index {j} out of range")));
        }
        Ok(())
    }

    fn cue_densities(&self, set: &UnderlaySet) -> Result<(SumDensity, SumDensity)> {
        Ok((
            sum_density(set, Receiver::BaseStation, self.budget)?,
            sum_density(set, Receiver::Eavesdropper, self.budget)?,
        ))
    }

    /// Probability that CUE `i` is *not* in secrecy outage given that exactly
    /// the pairs in `set` reuse its spectrum and the CUEs share `beta_eff` of
    /// the band.
    pub fn theta(&self, i: usize, set: &UnderlaySet, beta_eff: f64, r_s: f64) -> Result<f64> {
        self.check_cue(i)?;
        let (f, g) = self.cue_densities(set)?;
        self.theta_with(i, &f, &g, beta_eff, r_s)
    }

    fn theta_with(&self, i: usize, f: &SumDensity, g: &SumDensity, beta_eff: f64, r_s: f64) -> Result<f64> {
        let n = self.budget.num_cues();
        let Some(bits) = threshold_bits(r_s, n, beta_eff) else {
            return Ok(0.0);
        };
        let ratio = bits.exp2();
        let g_ab = self.budget.cue_bs(i);
        let g_ae = self.budget.cue_eve(i);
        let c = (ratio - 1.0) / g_ab;
        let k = g_ae / g_ab * ratio;
        let v = f.expect(
            |x| {
                let a = k * (x + 1.0);
                let inner = g.expect(|y| Ok((y + 1.0) / (a + y + 1.0)), &self.spec)?;
                Ok((-c * (x + 1.0)).exp() * inner)
            },
            &self.spec,
        )?;
        Ok(v.clamp(0.0, 1.0))
    }

    /// Expected natural-log secrecy rate of CUE `i` (before spectrum scaling)
    /// given the interferers in `set`.
    pub fn lambda(&self, i: usize, set: &UnderlaySet) -> Result<f64> {
        self.check_cue(i)?;
        let (f, g) = self.cue_densities(set)?;
        self.lambda_with(i, &f, &g)
    }

    fn lambda_with(&self, i: usize, f: &SumDensity, g: &SumDensity) -> Result<f64> {
        let g_ab = self.budget.cue_bs(i);
        let g_ae = self.budget.cue_eve(i);
        let v = f.expect(
            |x| {
                let a = (x + 1.0) / g_ab;
                let inner = g.expect(|y| Ok(psi_kernel(a + (y + 1.0) / g_ae)), &self.spec)?;
                Ok(inner - psi_kernel(a))
            },
            &self.spec,
        )?;
        Ok(v.max(0.0))
    }

    /// Non-outage probability of pair `j` while reusing CUE `i`'s spectrum
    /// with the other pairs in `set` on the same CUE.
    pub fn omega(&self, i: usize, j: usize, set: &UnderlaySet, beta_eff: f64, r_t: f64) -> Result<f64> {
        self.check_cue(i)?;
        self.check_pair(j)?;
        let h = sum_density(set, Receiver::D2dRx(j), self.budget)?;
        self.omega_with(i, j, &h, beta_eff, r_t)
    }

    fn omega_with(&self, i: usize, j: usize, h: &SumDensity, beta_eff: f64, r_t: f64) -> Result<f64> {
        let n = self.budget.num_cues();
        let Some(bits) = threshold_bits(r_t, n, beta_eff) else {
            return Ok(0.0);
        };
        let t = bits.exp2() - 1.0;
        let g_d = self.budget.d2d_direct(j);
        let rho = self.budget.cue_rx(i, j) / g_d;
        let num = h.expect(|x| Ok((-t * (x + 1.0) / g_d).exp()), &self.spec)?;
        Ok((num / (rho * t + 1.0)).clamp(0.0, 1.0))
    }

    /// Difference of `Psi` kernels behind the underlay capacity of pair `j`
    /// on CUE `i`. Divide by `gamma(A_i, D_j^r) / gamma(D_j) - 1` to get the
    /// expected natural-log rate; see [`Analyzer::underlay_log_rate`].
    pub fn delta(&self, i: usize, j: usize, set: &UnderlaySet) -> Result<f64> {
        self.check_cue(i)?;
        self.check_pair(j)?;
        let h = sum_density(set, Receiver::D2dRx(j), self.budget)?;
        Self::delta_with(self.budget, i, j, &h, &self.spec)
    }

    fn delta_with(budget: &LinkBudget, i: usize, j: usize, h: &SumDensity, spec: &QuadratureSpec) -> Result<f64> {
        let g_d = budget.d2d_direct(j);
        let g_a = budget.cue_rx(i, j);
        h.expect(|x| Ok(psi_kernel((x + 1.0) / g_d) - psi_kernel((x + 1.0) / g_a)), spec)
    }

    /// `Delta / (gamma(A_i, D_j^r) / gamma(D_j) - 1)`: the expected
    /// natural-log rate of pair `j` in the underlay mode on CUE `i`.
    pub fn underlay_log_rate(&self, i: usize, j: usize, set: &UnderlaySet) -> Result<f64> {
        self.check_cue(i)?;
        self.check_pair(j)?;
        let h = sum_density(set, Receiver::D2dRx(j), self.budget)?;
        self.underlay_log_rate_with(i, j, &h)
    }

    fn underlay_log_rate_with(&self, i: usize, j: usize, h: &SumDensity) -> Result<f64> {
        let eval = |budget: &LinkBudget| -> Result<f64> {
            let rho = budget.cue_rx(i, j) / budget.d2d_direct(j);
            Ok(Self::delta_with(budget, i, j, h, &self.spec)? / (rho - 1.0))
        };
        let rho = self.budget.cue_rx(i, j) / self.budget.d2d_direct(j);
        let v = if (rho - 1.0).abs() < SINGULAR_PIVOT {
            let g = self.budget.cue_rx(i, j);
            let (from, to) = (NodeId::Cue(i), NodeId::D2dRx(j));
            let up = eval(&self.budget.with_gamma(from, to, g * (1.0 + SINGULAR_STEP)))?;
            let down = eval(&self.budget.with_gamma(from, to, g * (1.0 - SINGULAR_STEP)))?;
            0.5 * (up + down)
        } else {
            eval(self.budget)?
        };
        Ok(v.max(0.0))
    }

    /// Tables of every `beta`-independent kernel for the given target rates.
    pub fn precompute(&self, r_s: f64, r_t: f64) -> Result<Precomputed> {
        let n = self.budget.num_cues();
        let m = self.budget.num_pairs();
        let all: Vec<usize> = (0..m).collect();
        let mut cues = Vec::with_capacity(n);
        let cue_dens: Vec<(SumDensity, SumDensity)> = (0..1u32 << m)
            .map(|mask| self.cue_densities(&UnderlaySet::new(members(mask, &all))))
            .collect::<Result<_>>()?;
        for i in 0..n {
            let mut subsets = Vec::with_capacity(cue_dens.len());
            for (mask, (f, g)) in cue_dens.iter().enumerate() {
                subsets.push(CueSubset {
                    size: (mask as u32).count_ones() as usize,
                    lambda: self.lambda_with(i, f, g)?,
                    theta_full: self.theta_with(i, f, g, 1.0, r_s)?,
                });
            }
            cues.push(subsets);
        }
        let mut pairs = Vec::with_capacity(m);
        for j in 0..m {
            let others: Vec<usize> = (0..m).filter(|&k| k != j).collect();
            let dens: Vec<SumDensity> = (0..1u32 << others.len())
                .map(|mask| {
                    let set = UnderlaySet::excluding(members(mask, &others), j)?;
                    sum_density(&set, Receiver::D2dRx(j), self.budget)
                })
                .collect::<Result<_>>()?;
            let mut per_cue = Vec::with_capacity(n);
            for i in 0..n {
                let mut subsets = Vec::with_capacity(dens.len());
                for (mask, h) in dens.iter().enumerate() {
                    subsets.push(PairSubset {
                        size: (mask as u32).count_ones() as usize,
                        log_rate: self.underlay_log_rate_with(i, j, h)?,
                        omega_full: self.omega_with(i, j, h, 1.0, r_t)?,
                    });
                }
                per_cue.push(subsets);
            }
            pairs.push(PairTables {
                per_cue,
                densities: dens,
            });
        }
        Ok(Precomputed {
            n,
            m,
            r_s,
            r_t,
            cues,
            cue_densities: cue_dens,
            pairs,
            budget: self.budget.clone(),
            spec: self.spec,
        })
    }

    pub fn sop_cue(&self, i: usize, scheme: &SchemeConfig) -> Result<f64> {
        self.check_cue(i)?;
        let pre = self.precompute_cue(i, scheme.r_s)?;
        let slice = pre.beta_slice(scheme.beta)?;
        Ok(pre.sop(i, scheme.p, &slice))
    }

    pub fn asc_cue(&self, i: usize, scheme: &SchemeConfig) -> Result<f64> {
        self.check_cue(i)?;
        let pre = self.precompute_cue(i, scheme.r_s)?;
        Ok(pre.asc(i, scheme.p, scheme.beta))
    }

    pub fn op_pair(&self, j: usize, scheme: &SchemeConfig) -> Result<f64> {
        self.check_pair(j)?;
        let pre = self.precompute(scheme.r_s, scheme.r_t)?;
        let slice = pre.beta_slice(scheme.beta)?;
        Ok(pre.op(j, scheme.p, scheme.beta, &slice))
    }

    pub fn ac_pair(&self, j: usize, scheme: &SchemeConfig) -> Result<f64> {
        self.check_pair(j)?;
        let pre = self.precompute(scheme.r_s, scheme.r_t)?;
        Ok(pre.ac(j, scheme.p, scheme.beta))
    }

    /// Every metric of every entity.
    pub fn report(&self, scheme: &SchemeConfig) -> Result<MetricReport> {
        let pre = self.precompute(scheme.r_s, scheme.r_t)?;
        let slice = pre.beta_slice(scheme.beta)?;
        Ok(pre.report(scheme.p, scheme.beta, &slice))
    }

    // Only CUE `i`'s tables; D2D tables are left empty.
    fn precompute_cue(&self, i: usize, r_s: f64) -> Result<Precomputed> {
        let m = self.budget.num_pairs();
        let all: Vec<usize> = (0..m).collect();
        let cue_dens: Vec<(SumDensity, SumDensity)> = (0..1u32 << m)
            .map(|mask| self.cue_densities(&UnderlaySet::new(members(mask, &all))))
            .collect::<Result<_>>()?;
        let mut cues = vec![Vec::new(); self.budget.num_cues()];
        cues[i] = cue_dens
            .iter()
            .enumerate()
            .map(|(mask, (f, g))| {
                Ok(CueSubset {
                    size: (mask as u32).count_ones() as usize,
                    lambda: self.lambda_with(i, f, g)?,
                    theta_full: self.theta_with(i, f, g, 1.0, r_s)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Precomputed {
            n: self.budget.num_cues(),
            m,
            r_s,
            r_t: 0.0,
            cues,
            cue_densities: cue_dens,
            pairs: Vec::new(),
            budget: self.budget.clone(),
            spec: self.spec,
        })
    }
}

#[derive(Debug, Clone)]
struct CueSubset {
    size: usize,
    lambda: f64,
    theta_full: f64,
}

#[derive(Debug, Clone)]
struct PairSubset {
    size: usize,
    log_rate: f64,
    omega_full: f64,
}

#[derive(Debug, Clone)]
struct PairTables {
    /// `per_cue[i][mask]` over subsets of the other pairs.
    per_cue: Vec<Vec<PairSubset>>,
    densities: Vec<SumDensity>,
}

/// All kernels that depend on neither `p` nor `beta`, for fixed target rates.
/// Metric evaluation at any `(p, beta)` then only needs a [`BetaSlice`].
#[derive(Debug, Clone)]
pub struct Precomputed {
    n: usize,
    m: usize,
    r_s: f64,
    r_t: f64,
    /// `cues[i][mask]` over subsets of all pairs.
    cues: Vec<Vec<CueSubset>>,
    cue_densities: Vec<(SumDensity, SumDensity)>,
    pairs: Vec<PairTables>,
    budget: LinkBudget,
    spec: QuadratureSpec,
}

/// `beta`-dependent conditional non-outage probabilities.
#[derive(Debug, Clone)]
pub struct BetaSlice {
    beta: f64,
    /// `theta[i][mask]`
    theta: Vec<Vec<f64>>,
    /// `omega[j][i][mask]`
    omega: Vec<Vec<Vec<f64>>>,
}

impl BetaSlice {
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Precomputed {
    pub fn num_cues(&self) -> usize {
        self.n
    }

    pub fn num_pairs(&self) -> usize {
        self.m
    }

    pub fn beta_slice(&self, beta: f64) -> Result<BetaSlice> {
        let analyzer = Analyzer {
            budget: &self.budget,
            spec: self.spec,
        };
        let theta = self
            .cues
            .iter()
            .enumerate()
            .map(|(i, subsets)| {
                if subsets.is_empty() {
                    return Ok(Vec::new());
                }
                self.cue_densities
                    .iter()
                    .zip(subsets)
                    .map(|((f, g), s)| {
                        // With every pair reusing CUE i the partitioned
                        // weight vanishes, so the kernel is never needed.
                        if s.size == self.m {
                            Ok(0.0)
                        } else {
                            analyzer.theta_with(i, f, g, beta, self.r_s)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let omega = self
            .pairs
            .iter()
            .enumerate()
            .map(|(j, tables)| {
                (0..self.n)
                    .map(|i| {
                        tables
                            .densities
                            .iter()
                            .zip(&tables.per_cue[i])
                            .map(|(h, s)| {
                                if s.size + 1 == self.m {
                                    Ok(0.0)
                                } else {
                                    analyzer.omega_with(i, j, h, beta, self.r_t)
                                }
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BetaSlice { beta, theta, omega })
    }

    pub fn sop(&self, i: usize, p: f64, slice: &BetaSlice) -> f64 {
        let eps = p / self.n as f64;
        let vt = p * (1.0 - 1.0 / self.n as f64);
        let mut non_outage = 0.0;
        for (s, theta_beta) in self.cues[i].iter().zip(&slice.theta[i]) {
            let w = subset_weights(eps, vt, s.size, self.m);
            non_outage += w.full_band * s.theta_full + w.partitioned * theta_beta;
        }
        (1.0 - non_outage).clamp(0.0, 1.0)
    }

    pub fn asc(&self, i: usize, p: f64, beta: f64) -> f64 {
        let eps = p / self.n as f64;
        let vt = p * (1.0 - 1.0 / self.n as f64);
        let mut acc = 0.0;
        for s in &self.cues[i] {
            let rest = (self.m - s.size) as i32;
            let share = beta * (1.0 - eps).powi(rest) + (1.0 - beta) * vt.powi(rest);
            acc += eps.powi(s.size as i32) * s.lambda * share;
        }
        (acc / (self.n as f64 * LN_2)).max(0.0)
    }

    /// Probability weights over the number `l` of overlay pairs, pair `j`
    /// included, scaled by the overlay probability `1 - p`.
    fn overlay_weights(&self, p: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
        let m = self.m;
        (1..=m).map(move |l| (l, binomial(m - 1, l - 1) * p.powi((m - l) as i32) * (1.0 - p).powi(l as i32)))
    }

    pub fn op(&self, j: usize, p: f64, beta: f64, slice: &BetaSlice) -> f64 {
        let eps = p / self.n as f64;
        let vt = p * (1.0 - 1.0 / self.n as f64);
        let g_d = self.budget.d2d_direct(j);
        let mut success = 0.0;
        for (l, w) in self.overlay_weights(p) {
            if w == 0.0 {
                continue;
            }
            if let Some(bits) = threshold_bits(self.r_t, l, 1.0 - beta) {
                success += w * (-(bits.exp2() - 1.0) / g_d).exp();
            }
        }
        for (i, subsets) in self.pairs[j].per_cue.iter().enumerate() {
            for (s, omega_beta) in subsets.iter().zip(&slice.omega[j][i]) {
                let w = subset_weights(eps, vt, s.size, self.m - 1);
                success += eps * (w.full_band * s.omega_full + w.partitioned * omega_beta);
            }
        }
        (1.0 - success).clamp(0.0, 1.0)
    }

    pub fn ac(&self, j: usize, p: f64, beta: f64) -> f64 {
        let eps = p / self.n as f64;
        let vt = p * (1.0 - 1.0 / self.n as f64);
        let mut underlay = 0.0;
        for subsets in &self.pairs[j].per_cue {
            for s in subsets {
                let rest = (self.m - 1 - s.size) as i32;
                let share = beta * (1.0 - eps).powi(rest) + (1.0 - beta) * vt.powi(rest);
                underlay += eps.powi(s.size as i32 + 1) * s.log_rate * share;
            }
        }
        underlay /= self.n as f64;
        let overlay_share: f64 = self.overlay_weights(p).map(|(l, w)| w / l as f64).sum();
        let overlay = -(1.0 - beta) * psi_kernel(1.0 / self.budget.d2d_direct(j)) * overlay_share;
        ((underlay + overlay) / LN_2).max(0.0)
    }

    pub fn report(&self, p: f64, beta: f64, slice: &BetaSlice) -> MetricReport {
        MetricReport {
            per_cue: (0..self.n)
                .map(|i| CueMetrics {
                    sop: self.sop(i, p, slice),
                    asc: self.asc(i, p, beta),
                })
                .collect(),
            per_pair: (0..self.m)
                .map(|j| PairMetrics {
                    op: self.op(j, p, beta, slice),
                    ac: self.ac(j, p, beta),
                })
                .collect(),
            source: Source::Analytic,
            stderr: None,
        }
    }

    /// Lambda of CUE `i` for every subset, in canonical subset order.
    pub fn lambdas(&self, i: usize) -> Vec<f64> {
        self.cues[i].iter().map(|s| s.lambda).collect()
    }

    /// `(subset size, underlay log-rate)` for pair `j` on CUE `i`.
    pub(crate) fn pair_log_rates(&self, j: usize, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.pairs[j].per_cue[i].iter().map(|s| (s.size, s.log_rate))
    }

    pub(crate) fn cue_lambdas(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.cues[i].iter().map(|s| (s.size, s.lambda))
    }

    pub(crate) fn overlay_share(&self, p: f64) -> f64 {
        self.overlay_weights(p).map(|(l, w)| w / l as f64).sum()
    }

    pub(crate) fn budget(&self) -> &LinkBudget {
        &self.budget
    }
}

/// Conditional non-outage probability of CUE `i`; see [`Analyzer::theta`].
pub fn theta(i: usize, set: &UnderlaySet, beta_eff: f64, budget: &LinkBudget, scheme: &SchemeConfig) -> Result<f64> {
    Analyzer::new(budget)?.theta(i, set, beta_eff, scheme.r_s)
}

pub fn sop_cue(i: usize, budget: &LinkBudget, scheme: &SchemeConfig) -> Result<f64> {
    Analyzer::new(budget)?.sop_cue(i, scheme)
}

pub fn asc_cue(i: usize, budget: &LinkBudget, scheme: &SchemeConfig) -> Result<f64> {
    Analyzer::new(budget)?.asc_cue(i, scheme)
}

pub fn op_pair(j: usize, budget: &LinkBudget, scheme: &SchemeConfig) -> Result<f64> {
    Analyzer::new(budget)?.op_pair(j, scheme)
}

pub fn ac_pair(j: usize, budget: &LinkBudget, scheme: &SchemeConfig) -> Result<f64> {
    Analyzer::new(budget)?.ac_pair(j, scheme)
}

/// Every metric of every entity from the exact expressions.
pub fn evaluate(budget: &LinkBudget, scheme: &SchemeConfig) -> Result<MetricReport> {
    Analyzer::new(budget)?.report(scheme)
}

#[cfg(test)]
mod tests;
