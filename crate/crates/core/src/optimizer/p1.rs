//! Rate fairness.
//!
//! For fixed `p` every ASC and AC is affine in `beta`:
//! `ASC_i = (a_i beta + b_i) / (n ln 2)` and
//! `AC_j = (u_j beta + v_j + s_j (beta - 1)) / ln 2`, so the best `beta` has a
//! closed form and only `p` needs searching.

use std::f64::consts::LN_2;

use super::{bracket, fairness, golden_max, Fairness, GridSpec, Optimum, SolutionCase};
use crate::analytic::{Analyzer, CaseStudy, Precomputed};
use crate::error::{Error, Result};
use crate::network::{LinkBudget, SchemeConfig};
use crate::special::psi_kernel;

#[derive(Debug, Clone, PartialEq)]
pub struct P1Coefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub s: Vec<f64>,
}

impl P1Coefficients {
    fn sums(&self) -> (f64, f64, f64, f64) {
        let a: f64 = self.a.iter().sum();
        let b: f64 = self.b.iter().sum();
        let c: f64 = self.u.iter().zip(&self.s).map(|(u, s)| u + s).sum();
        let d: f64 = self.v.iter().zip(&self.s).map(|(v, s)| v - s).sum();
        (a, b, c, d)
    }

    /// `(sum ASC, sum AC)` at `beta`.
    pub fn utilities(&self, beta: f64) -> (f64, f64) {
        let n = self.a.len() as f64;
        let (a, b, c, d) = self.sums();
        ((a * beta + b) / (n * LN_2), (c * beta + d) / LN_2)
    }
}

pub(crate) fn coefficients_from(pre: &Precomputed, p: f64) -> P1Coefficients {
    let n = pre.num_cues();
    let m = pre.num_pairs();
    let eps = p / n as f64;
    let vt = p * (1.0 - 1.0 / n as f64);
    let split = |size: usize, rest: usize, value: f64| {
        let w = eps.powi(size as i32) * value;
        let rest = rest as i32;
        (w * ((1.0 - eps).powi(rest) - vt.powi(rest)), w * vt.powi(rest))
    };
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let (ai, bi) = pre
            .cue_lambdas(i)
            .map(|(k, lambda)| split(k, m - k, lambda))
            .fold((0.0, 0.0), |acc, t| (acc.0 + t.0, acc.1 + t.1));
        a.push(ai);
        b.push(bi);
    }
    let overlay = pre.overlay_share(p);
    let mut u = Vec::with_capacity(m);
    let mut v = Vec::with_capacity(m);
    let mut s = Vec::with_capacity(m);
    for j in 0..m {
        let (mut uj, mut vj) = (0.0, 0.0);
        for i in 0..n {
            for (k, rate) in pre.pair_log_rates(j, i) {
                let (x, y) = split(k, m - 1 - k, eps * rate);
                uj += x;
                vj += y;
            }
        }
        u.push(uj / n as f64);
        v.push(vj / n as f64);
        s.push(psi_kernel(1.0 / pre.budget().d2d_direct(j)) * overlay);
    }
    P1Coefficients { a, b, u, v, s }
}

/// Coefficients of the affine `beta` dependence at `scheme.p`.
pub fn p1_coefficients(budget: &LinkBudget, scheme: &SchemeConfig) -> Result<P1Coefficients> {
    if !(0.0..=1.0).contains(&scheme.p) {
        return Err(Error::invalid("scheme.p", "must lie in [0, 1]"));
    }
    let pre = Analyzer::new(budget)?.precompute(scheme.r_s, scheme.r_t)?;
    Ok(coefficients_from(&pre, scheme.p))
}

/// Maximizer over `beta` of the rate-fair function for fixed `p`.
pub fn p1_optimal_beta(coeffs: &P1Coefficients, w_c: f64, w_d: f64) -> f64 {
    let (a, b, c, d) = coeffs.sums();
    if c >= 0.0 {
        // Both utilities are non-decreasing in beta.
        return 1.0;
    }
    if a <= 0.0 {
        // The CUE utility is flat; the pair utility falls with beta.
        return 0.0;
    }
    let stationary = -w_d * b / a - w_c * d / c;
    stationary.clamp(0.0, 1.0)
}

fn objective_at(coeffs: &P1Coefficients, beta: f64, w_c: f64, w_d: f64) -> Fairness {
    let (uc, ud) = coeffs.utilities(beta);
    fairness(uc, ud, w_c, w_d)
}

/// Grid search over `p` with the closed-form `beta`, refined by
/// golden-section search around the grid winner.
pub fn solve_p1(budget: &LinkBudget, scheme: &SchemeConfig, grid: &GridSpec) -> Result<Optimum> {
    grid.validate()?;
    scheme.validate_weights()?;
    let pre = Analyzer::new(budget)?.precompute(scheme.r_s, scheme.r_t)?;
    let (w_c, w_d) = (scheme.w_c, scheme.w_d);
    let along_p = |p: f64| {
        let coeffs = coefficients_from(&pre, p);
        let beta = p1_optimal_beta(&coeffs, w_c, w_d);
        (beta, objective_at(&coeffs, beta, w_c, w_d).value())
    };
    let mut best = (f64::NAN, f64::NAN, f64::NEG_INFINITY);
    for p in grid.p_values() {
        let (beta, value) = along_p(p);
        if value > best.2 {
            best = (p, beta, value);
        }
    }
    if best.2 == f64::NEG_INFINITY {
        return Err(Error::ZeroUtility("every p on the grid gives zero summed ASC or AC".into()));
    }
    if let Some(tol) = grid.refine_tol {
        let (lo, hi) = bracket(best.0, grid.p_step(), grid.p_range);
        if hi > lo {
            let (p, value) = golden_max(lo, hi, tol, |p| Ok(along_p(p).1))?;
            if value > best.2 {
                best = (p, along_p(p).0, value);
            }
        }
    }
    Ok(Optimum::new(best.0, best.1, best.2, SolutionCase::Grid))
}

/// Closed-form optimum for one CUE and one pair, keyed on the underlay rate
/// gains `mu` and `nu`.
pub fn solve_p1_case_study(budget: &LinkBudget, w_c: f64, w_d: f64) -> Result<Optimum> {
    // The rate gains do not depend on the target rates.
    let cs = CaseStudy::new(budget, 0.0, 0.0)?;
    let k = cs.constants();
    let (mu, nu) = (k.mu, k.nu);
    let (p, beta, case) = if mu + nu > 1.0 {
        if w_c / mu < w_d / nu {
            ((w_c / (1.0 - nu)).min(1.0), 0.0, SolutionCase::P1Case1)
        } else if mu < 1.0 {
            ((w_d / (1.0 - mu)).min(1.0), 1.0, SolutionCase::P1Case2)
        } else {
            (1.0, 1.0, SolutionCase::P1Case2)
        }
    } else {
        (0.0, w_c, SolutionCase::P1Case3)
    };
    let value = fairness(cs.asc(p, beta), cs.ac(p, beta), w_c, w_d).value();
    if value == f64::NEG_INFINITY {
        return Err(Error::ZeroUtility("summed ASC or AC is zero at the closed-form optimum".into()));
    }
    Ok(Optimum::new(p, beta, value, case))
}
