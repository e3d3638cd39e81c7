//! Joint choice of the mode-selection probability `p` and the spectrum
//! partition factor `beta`.
//!
//! Problem P1 maximizes the weighted proportional-fair function of the summed
//! ASC of the CUEs and the summed AC of the pairs. Problem P2 maximizes the
//! negated fair function of the summed SOP and OP. Closed-form solutions
//! exist for one CUE and one pair; otherwise the solvers search a grid and
//! refine the winner by golden-section search.

mod p1;
mod p2;

pub use p1::{p1_coefficients, p1_optimal_beta, solve_p1, solve_p1_case_study, P1Coefficients};
pub use p2::{solve_p2, solve_p2_case_study};

use std::fmt;

use rayon::prelude::*;

use crate::analytic::MetricReport;
use crate::error::{Error, Result};

/// Value of a fair function. A non-positive utility has no logarithm; such
/// points rank below every finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fairness {
    Finite(f64),
    ZeroUtility,
}

impl Fairness {
    /// The value, with `-inf` standing for [`Fairness::ZeroUtility`].
    pub fn value(self) -> f64 {
        match self {
            Fairness::Finite(v) => v,
            Fairness::ZeroUtility => f64::NEG_INFINITY,
        }
    }
}

/// `w_c ln u_c + w_d ln u_d`.
pub fn fairness(u_c: f64, u_d: f64, w_c: f64, w_d: f64) -> Fairness {
    if u_c > 0.0 && u_d > 0.0 {
        Fairness::Finite(w_c * u_c.ln() + w_d * u_d.ln())
    } else {
        Fairness::ZeroUtility
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// Rate fairness: utilities are summed ASC and summed AC.
    P1,
    /// Outage fairness: the negated fair function of summed SOP and OP.
    P2,
}

pub fn fairness_objective(report: &MetricReport, w_c: f64, w_d: f64, problem: Problem) -> Fairness {
    match problem {
        Problem::P1 => fairness(report.sum_asc(), report.sum_ac(), w_c, w_d),
        Problem::P2 => match fairness(report.sum_sop(), report.sum_op(), w_c, w_d) {
            Fairness::Finite(v) => Fairness::Finite(-v),
            Fairness::ZeroUtility => Fairness::ZeroUtility,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionCase {
    /// Closed-form case 1: underlay gains favor the pair.
    P1Case1,
    /// Closed-form case 2: underlay gains favor the CUE.
    P1Case2,
    /// Closed-form case 3: underlay gains too small, pure overlay.
    P1Case3,
    /// No `beta` makes pure overlay beat pure underlay.
    RhoEmpty,
    RhoNonEmpty,
    Grid,
}

impl fmt::Display for SolutionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionCase::P1Case1 => "case1",
            SolutionCase::P1Case2 => "case2",
            SolutionCase::P1Case3 => "case3",
            SolutionCase::RhoEmpty => "rho-empty",
            SolutionCase::RhoNonEmpty => "rho-nonempty",
            SolutionCase::Grid => "grid",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub p_star: f64,
    /// Canonicalized to 1 when `beta_any` is set.
    pub beta_star: f64,
    /// The objective does not depend on `beta` at `p_star`.
    pub beta_any: bool,
    pub objective: f64,
    pub case: SolutionCase,
}

impl Optimum {
    fn new(p: f64, beta: f64, objective: f64, case: SolutionCase) -> Self {
        // At p = 1 every pair is in underlay and the band split is moot.
        let beta_any = p >= 1.0;
        Optimum {
            p_star: p,
            beta_star: if beta_any { 1.0 } else { beta },
            beta_any,
            objective,
            case,
        }
    }
}

/// Search grid over `[p_lo, p_hi] x [beta_lo, beta_hi]`. A range with one
/// point uses its lower end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub p_range: (f64, f64),
    pub beta_range: (f64, f64),
    pub p_points: usize,
    pub beta_points: usize,
    /// Golden-section tolerance of the refinement pass; `None` skips it.
    pub refine_tol: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            p_range: (0.0, 1.0),
            beta_range: (0.0, 1.0),
            p_points: 1001,
            beta_points: 1001,
            refine_tol: Some(1e-6),
        }
    }
}

fn linspace((lo, hi): (f64, f64), points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let last = points - 1;
    // Exact endpoints, so p = 0 and p = 1 are always evaluated.
    (0..points)
        .map(|k| if k == last { hi } else { lo + (hi - lo) * k as f64 / last as f64 })
        .collect()
}

impl GridSpec {
    /// `points x points` over the unit square.
    pub fn square(points: usize) -> Self {
        GridSpec {
            p_points: points,
            beta_points: points,
            ..GridSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi), points) in [("p", self.p_range, self.p_points), ("beta", self.beta_range, self.beta_points)] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::invalid(format!("grid.{name}"), "range must lie in [0, 1] with lo <= hi"));
            }
            if points == 0 {
                return Err(Error::invalid(format!("grid.{name}"), "needs at least one point"));
            }
        }
        if let Some(tol) = self.refine_tol {
            if !(tol > 0.0) {
                return Err(Error::invalid("grid.refine_tol", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn p_values(&self) -> Vec<f64> {
        linspace(self.p_range, self.p_points)
    }

    pub fn beta_values(&self) -> Vec<f64> {
        linspace(self.beta_range, self.beta_points)
    }

    fn p_step(&self) -> f64 {
        step(self.p_range, self.p_points)
    }

    fn beta_step(&self) -> f64 {
        step(self.beta_range, self.beta_points)
    }
}

fn step((lo, hi): (f64, f64), points: usize) -> f64 {
    if points > 1 {
        (hi - lo) / (points - 1) as f64
    } else {
        0.0
    }
}

/// Grid argmax of `f(ip, ib)` over `ps.len() x betas.len()` points. Ties go
/// to the lowest `p`, then the lowest `beta`.
pub fn grid_argmax(ps: &[f64], betas: &[f64], f: impl Fn(usize, usize) -> f64 + Sync) -> (usize, usize, f64) {
    let rows: Vec<(usize, usize, f64)> = (0..ps.len())
        .into_par_iter()
        .map(|ip| {
            let mut best = (ip, 0, f(ip, 0));
            for ib in 1..betas.len() {
                let v = f(ip, ib);
                if v > best.2 {
                    best = (ip, ib, v);
                }
            }
            best
        })
        .collect();
    rows.into_iter().reduce(|best, row| if row.2 > best.2 { row } else { best }).expect("non-empty grid")
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_max(lo: f64, hi: f64, tol: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Bracket of one grid step on each side of `x`, clipped to `range`.
fn bracket(x: f64, step: f64, (lo, hi): (f64, f64)) -> (f64, f64) {
    ((x - step).max(lo), (x + step).min(hi))
}
