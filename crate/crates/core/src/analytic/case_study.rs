//! Closed forms for one CUE and one D2D pair.

use std::f64::consts::LN_2;

use super::{threshold_bits, CueMetrics, MetricReport, PairMetrics, Source, SINGULAR_PIVOT, SINGULAR_STEP};
use crate::error::{Error, Result};
use crate::network::{LinkBudget, SchemeConfig};
use crate::special::psi_kernel;

/// Derived constants of the single-CUE, single-pair system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseStudyConstants {
    pub tau: f64,
    pub kappa: f64,
    pub eta: f64,
    /// Underlay-to-overlay ratio of the CUE's expected secrecy log-rate.
    pub mu: f64,
    /// Underlay-to-overlay ratio of the pair's expected log-rate.
    pub nu: f64,
}

/// Mean SNRs and target rates of the single-CUE, single-pair system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseStudy {
    g_ab: f64,
    g_ae: f64,
    g_db: f64,
    g_de: f64,
    g_dd: f64,
    g_adr: f64,
    r_s: f64,
    r_t: f64,
}

fn near_one(r: f64) -> bool {
    (r - 1.0).abs() < SINGULAR_PIVOT
}

fn nudged(v: f64, sign: f64) -> f64 {
    v * (1.0 + sign * SINGULAR_STEP)
}

impl CaseStudy {
    pub fn new(budget: &LinkBudget, r_s: f64, r_t: f64) -> Result<Self> {
        if budget.num_cues() != 1 || budget.num_pairs() != 1 {
            return Err(Error::invalid(
                "topology",
                format!(
                    "closed forms need one CUE and one D2D pair, got {} and {}",
                    budget.num_cues(),
                    budget.num_pairs()
                ),
            ));
        }
        Ok(CaseStudy {
            g_ab: budget.cue_bs(0),
            g_ae: budget.cue_eve(0),
            g_db: budget.d2d_bs(0),
            g_de: budget.d2d_eve(0),
            g_dd: budget.d2d_direct(0),
            g_adr: budget.cue_rx(0, 0),
            r_s,
            r_t,
        })
    }

    /// Average of `f` over the two copies of `self` with one SNR nudged up
    /// and down.
    fn straddle(&self, field: fn(&mut Self) -> &mut f64, f: impl Fn(&Self) -> f64) -> f64 {
        let mut up = *self;
        let mut down = *self;
        let v = *field(&mut up);
        *field(&mut up) = nudged(v, 1.0);
        *field(&mut down) = nudged(v, -1.0);
        0.5 * (f(&up) + f(&down))
    }

    fn tau(&self) -> f64 {
        (self.r_s.exp2() - 1.0) / self.g_ab
    }

    fn kappa(&self) -> f64 {
        self.r_s.exp2() * self.g_ae / self.g_ab
    }

    fn eta(&self) -> f64 {
        self.tau() + 1.0 / self.g_db - self.kappa() / self.g_de
    }

    fn ratio(&self) -> f64 {
        self.g_adr / self.g_dd
    }

    /// Secrecy non-outage probability with the pair in overlay mode and the
    /// CUE holding a `beta` share of the band.
    pub fn theta_overlay(&self, beta: f64) -> f64 {
        match threshold_bits(self.r_s, 1, beta) {
            None => 0.0,
            Some(bits) => {
                let t = bits.exp2();
                (-(t - 1.0) / self.g_ab).exp() / (self.g_ae / self.g_ab * t + 1.0)
            }
        }
    }

    /// Secrecy non-outage probability with the pair reusing the full band.
    pub fn theta_underlay(&self) -> f64 {
        let (tau, kappa, eta) = (self.tau(), self.kappa(), self.eta());
        let scale = tau + 1.0 / self.g_db;
        if eta.abs() < SINGULAR_PIVOT * scale {
            return self.straddle(|c| &mut c.g_de, Self::theta_underlay);
        }
        let e = (-tau).exp();
        let bracket = kappa * (eta + 1.0) * psi_kernel((kappa + 1.0) / self.g_de)
            + (eta - kappa) * psi_kernel(scale * (1.0 + 1.0 / kappa));
        (e / (self.g_db * eta) + e * bracket / (self.g_db * self.g_de * eta * eta)).clamp(0.0, 1.0)
    }

    pub fn lambda_overlay(&self) -> f64 {
        psi_kernel(1.0 / self.g_ab + 1.0 / self.g_ae) - psi_kernel(1.0 / self.g_ab)
    }

    pub fn lambda_underlay(&self) -> f64 {
        let (ab, ae, db, de) = (self.g_ab, self.g_ae, self.g_db, self.g_de);
        let r1 = db / ab;
        let r2 = ab * de / (ae * db);
        let r3 = de / ae;
        if near_one(r1) {
            return self.straddle(|c| &mut c.g_db, Self::lambda_underlay);
        }
        if near_one(r2) || near_one(r3) {
            return self.straddle(|c| &mut c.g_de, Self::lambda_underlay);
        }
        let cross = psi_kernel((ae / ab + 1.0) / de);
        let t1 = (cross - psi_kernel((ab / ae + 1.0) / db)) / (r2 - 1.0);
        let t2 = (psi_kernel(1.0 / ab + 1.0 / ae) - cross) / (r3 - 1.0);
        let t3 = psi_kernel(1.0 / ab) - psi_kernel(1.0 / db);
        ((t1 + t2 + t3) / (r1 - 1.0)).max(0.0)
    }

    /// Non-outage probability of the pair reusing the full band.
    pub fn omega_underlay(&self) -> f64 {
        match threshold_bits(self.r_t, 1, 1.0) {
            None => 0.0,
            Some(bits) => {
                let t = bits.exp2() - 1.0;
                (-t / self.g_dd).exp() / (self.ratio() * t + 1.0)
            }
        }
    }

    /// Non-outage probability of the pair alone on a `1 - beta` share.
    pub fn overlay_success(&self, beta: f64) -> f64 {
        match threshold_bits(self.r_t, 1, 1.0 - beta) {
            None => 0.0,
            Some(bits) => (-(bits.exp2() - 1.0) / self.g_dd).exp(),
        }
    }

    pub fn delta_overlay(&self) -> f64 {
        psi_kernel(1.0 / self.g_dd) - psi_kernel(1.0 / self.g_adr)
    }

    /// Expected natural-log rate of the pair in underlay mode.
    pub fn underlay_log_rate(&self) -> f64 {
        if near_one(self.ratio()) {
            return self.straddle(|c| &mut c.g_adr, Self::underlay_log_rate);
        }
        (self.delta_overlay() / (self.ratio() - 1.0)).max(0.0)
    }

    pub fn sop(&self, p: f64, beta: f64) -> f64 {
        (1.0 - (1.0 - p) * self.theta_overlay(beta) - p * self.theta_underlay()).clamp(0.0, 1.0)
    }

    pub fn asc(&self, p: f64, beta: f64) -> f64 {
        (p * self.lambda_underlay() + (1.0 - p) * beta * self.lambda_overlay()) / LN_2
    }

    pub fn op(&self, p: f64, beta: f64) -> f64 {
        (1.0 - p * self.omega_underlay() - (1.0 - p) * self.overlay_success(beta)).clamp(0.0, 1.0)
    }

    pub fn ac(&self, p: f64, beta: f64) -> f64 {
        (p * self.underlay_log_rate() - (1.0 - p) * (1.0 - beta) * psi_kernel(1.0 / self.g_dd)) / LN_2
    }

    pub fn constants(&self) -> CaseStudyConstants {
        CaseStudyConstants {
            tau: self.tau(),
            kappa: self.kappa(),
            eta: self.eta(),
            mu: self.lambda_underlay() / self.lambda_overlay(),
            nu: -self.underlay_log_rate() / psi_kernel(1.0 / self.g_dd),
        }
    }

    /// Ratio of CUE secrecy outage probabilities, overlay at `beta` over
    /// underlay.
    pub fn mu_hat(&self, beta: f64) -> f64 {
        (1.0 - self.theta_overlay(beta)) / (1.0 - self.theta_underlay())
    }

    /// Ratio of pair outage probabilities, overlay at `beta` over underlay.
    pub fn nu_hat(&self, beta: f64) -> f64 {
        (1.0 - self.overlay_success(beta)) / (1.0 - self.omega_underlay())
    }

    pub fn report(&self, p: f64, beta: f64) -> MetricReport {
        MetricReport {
            per_cue: vec![CueMetrics {
                sop: self.sop(p, beta),
                asc: self.asc(p, beta),
            }],
            per_pair: vec![PairMetrics {
                op: self.op(p, beta),
                ac: self.ac(p, beta),
            }],
            source: Source::Analytic,
            stderr: None,
        }
    }
}

/// Metrics and derived constants of a one-CUE, one-pair system.
pub fn case_study_metrics(budget: &LinkBudget, scheme: &SchemeConfig) -> Result<(MetricReport, CaseStudyConstants)> {
    let cs = CaseStudy::new(budget, scheme.r_s, scheme.r_t)?;
    Ok((cs.report(scheme.p, scheme.beta), cs.constants()))
}
