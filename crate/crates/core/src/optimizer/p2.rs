//! Outage fairness.

use rayon::prelude::*;

use super::{bracket, fairness, golden_max, grid_argmax, Fairness, GridSpec, Optimum, SolutionCase};
use crate::analytic::{Analyzer, BetaSlice, CaseStudy, Precomputed};
use crate::error::{Error, Result};
use crate::network::{LinkBudget, SchemeConfig};

/// Negated fair function of summed SOP and OP; `-inf` for zero sums.
fn outage_fairness(sop: f64, op: f64, w_c: f64, w_d: f64) -> f64 {
    match fairness(sop, op, w_c, w_d) {
        Fairness::Finite(v) => -v,
        Fairness::ZeroUtility => f64::NEG_INFINITY,
    }
}

fn value_at(pre: &Precomputed, slice: &BetaSlice, p: f64, w_c: f64, w_d: f64) -> f64 {
    let sop: f64 = (0..pre.num_cues()).map(|i| pre.sop(i, p, slice)).sum();
    let op: f64 = (0..pre.num_pairs()).map(|j| pre.op(j, p, slice.beta(), slice)).sum();
    outage_fairness(sop, op, w_c, w_d)
}

/// Two-dimensional grid search with a coordinate-wise golden-section pass.
pub fn solve_p2(budget: &LinkBudget, scheme: &SchemeConfig, grid: &GridSpec) -> Result<Optimum> {
    grid.validate()?;
    scheme.validate_weights()?;
    let pre = Analyzer::new(budget)?.precompute(scheme.r_s, scheme.r_t)?;
    let (w_c, w_d) = (scheme.w_c, scheme.w_d);
    let ps = grid.p_values();
    let betas = grid.beta_values();
    let slices: Vec<BetaSlice> = betas.par_iter().map(|&b| pre.beta_slice(b)).collect::<Result<_>>()?;
    let (ip, ib, value) = grid_argmax(&ps, &betas, |ip, ib| value_at(&pre, &slices[ib], ps[ip], w_c, w_d));
    if value == f64::NEG_INFINITY {
        return Err(Error::ZeroUtility("every grid point gives zero summed SOP or OP".into()));
    }
    let mut best = (ps[ip], betas[ib], value);
    if let Some(tol) = grid.refine_tol {
        let (lo, hi) = bracket(best.1, grid.beta_step(), grid.beta_range);
        if hi > lo && best.0 < 1.0 {
            let p = best.0;
            let (beta, v) = golden_max(lo, hi, tol, |b| Ok(value_at(&pre, &pre.beta_slice(b)?, p, w_c, w_d)))?;
            if v > best.2 {
                best = (p, beta, v);
            }
        }
        let (lo, hi) = bracket(best.0, grid.p_step(), grid.p_range);
        if hi > lo {
            let slice = pre.beta_slice(best.1)?;
            let (p, v) = golden_max(lo, hi, tol, |p| Ok(value_at(&pre, &slice, p, w_c, w_d)))?;
            if v > best.2 {
                best = (p, best.1, v);
            }
        }
    }
    Ok(Optimum::new(best.0, best.1, best.2, SolutionCase::Grid))
}

/// Closed-form optimum for one CUE and one pair. The objective is convex in
/// `p`, so only pure overlay (`p = 0`) and pure underlay (`p = 1`) compete;
/// overlay wins exactly on the set of `beta` where
/// `mu_hat(beta)^w_c nu_hat(beta)^w_d < 1`, searched on a 1e-3 grid.
pub fn solve_p2_case_study(budget: &LinkBudget, r_s: f64, r_t: f64, w_c: f64, w_d: f64) -> Result<Optimum> {
    let cs = CaseStudy::new(budget, r_s, r_t)?;
    let overlay = |beta: f64| outage_fairness(cs.sop(0.0, beta), cs.op(0.0, beta), w_c, w_d);
    let in_rho = |beta: f64| w_c * cs.mu_hat(beta).ln() + w_d * cs.nu_hat(beta).ln() < 0.0;
    const POINTS: usize = 1001;
    let step = 1.0 / (POINTS - 1) as f64;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..POINTS {
        let beta = k as f64 * step;
        if in_rho(beta) {
            let v = overlay(beta);
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((beta, v));
            }
        }
    }
    match best {
        None => {
            let v = outage_fairness(cs.sop(1.0, 1.0), cs.op(1.0, 1.0), w_c, w_d);
            if v == f64::NEG_INFINITY {
                return Err(Error::ZeroUtility("summed SOP or OP is zero".into()));
            }
            Ok(Optimum::new(1.0, 1.0, v, SolutionCase::RhoEmpty))
        }
        Some((beta, v)) => {
            let (lo, hi) = bracket(beta, step, (0.0, 1.0));
            let (rb, rv) = golden_max(lo, hi, 1e-6, |b| Ok(overlay(b)))?;
            let (beta, v) = if rv > v && in_rho(rb) { (rb, rv) } else { (beta, v) };
            Ok(Optimum::new(0.0, beta, v, SolutionCase::RhoNonEmpty))
        }
    }
}
