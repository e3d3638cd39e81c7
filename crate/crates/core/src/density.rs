//! Densities of aggregate underlay interference.
//!
//! For a fixed set of interfering D2D transmitters the received interference
//! is a sum of independent exponentials. Its density is built in closed form
//! when possible (Erlang for equal means, hypoexponential for well-separated
//! means) and by numerical convolution otherwise.

use crate::error::{Error, Result};
use crate::network::{LinkBudget, NodeId};
use crate::special::{try_integrate_halfline, QuadratureSpec};

/// Rates closer than this (relative) are treated as equal.
const NEAR_EQUAL: f64 = 1e-6;
/// Partial-fraction coefficients above this lose too many digits.
const MAX_COEFFICIENT: f64 = 1e6;
/// Intervals of the numerical grid.
const GRID_INTERVALS: usize = 1 << 14;
/// Grid length beyond the mean, in units of the largest summand mean.
const TAIL_SPAN: f64 = 36.0;

/// A realization of the set of underlay pairs interfering at one receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnderlaySet {
    members: Vec<usize>,
    excluded_pair: Option<usize>,
}

impl UnderlaySet {
    pub fn new(members: Vec<usize>) -> Self {
        UnderlaySet {
            members,
            excluded_pair: None,
        }
    }

    /// Interferers at the receiver of `pair`, which never interferes with
    /// itself.
    pub fn excluding(members: Vec<usize>, pair: usize) -> Result<Self> {
        if members.contains(&pair) {
            return Err(Error::invalid("underlay set", format!("pair {pair} cannot interfere with itself")));
        }
        Ok(UnderlaySet {
            members,
            excluded_pair: Some(pair),
        })
    }

    pub fn empty() -> Self {
        UnderlaySet::new(Vec::new())
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn excluded_pair(&self) -> Option<usize> {
        self.excluded_pair
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityForm {
    /// Point mass at zero (no interferers).
    Empty,
    Erlang,
    Hypoexponential,
    NumericalGrid,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Empty,
    Erlang { shape: u32, rate: f64, log_norm: f64 },
    /// `pdf(x) = sum_b exp(-rate_b x) sum_r poly_b[r] x^r`.
    Hypo { blocks: Vec<Block> },
    /// `pdf` on `2^14` intervals and `coarse` on half as many, combined by
    /// Richardson extrapolation.
    Grid { step: f64, pdf: Vec<f64>, coarse: Vec<f64> },
}

/// Density of a sum of independent exponentials.
#[derive(Debug, Clone, PartialEq)]
pub struct SumDensity {
    rates: Vec<f64>,
    repr: Repr,
}

fn ln_factorial(k: u32) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

impl SumDensity {
    /// Density of `sum_k X_k`, `X_k ~ Exp(mean = means[k])`.
    pub fn from_means(means: &[f64]) -> Result<Self> {
        if means.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
            return Err(Error::invalid("means", "every mean must be positive and finite"));
        }
        let rates: Vec<f64> = means.iter().map(|g| 1.0 / g).collect();
        Ok(Self::from_rates_unchecked(rates))
    }

    fn from_rates_unchecked(rates: Vec<f64>) -> Self {
        let repr = match rates.len() {
            0 => Repr::Empty,
            1 => Self::erlang(1, rates[0]),
            _ => {
                let blocks = clusters(&rates);
                if blocks.len() == 1 {
                    let (k, rate) = blocks[0];
                    Self::erlang(k, rate)
                } else {
                    match block_coefficients(&blocks) {
                        Some(blocks) => Repr::Hypo { blocks },
                        None => Self::grid_repr(&rates),
                    }
                }
            }
        };
        SumDensity { rates, repr }
    }

    fn erlang(shape: u32, rate: f64) -> Repr {
        Repr::Erlang {
            shape,
            rate,
            log_norm: shape as f64 * rate.ln() - ln_factorial(shape - 1),
        }
    }

    fn grid_repr(rates: &[f64]) -> Repr {
        let mean: f64 = rates.iter().map(|r| 1.0 / r).sum();
        let sd = rates.iter().map(|r| 1.0 / (r * r)).sum::<f64>().sqrt();
        // The slowest exponential sets the tail; stop where it is below 1e-15.
        let slowest = rates.iter().copied().fold(f64::INFINITY, f64::min);
        let length = (mean + 12.0 * sd).max(mean + TAIL_SPAN / slowest);
        let step = length / GRID_INTERVALS as f64;
        // Start from the smoothest summand so the sampled seed is accurate.
        let mut sorted = rates.to_vec();
        sorted.sort_by(f64::total_cmp);
        Repr::Grid {
            step,
            pdf: convolve_on_grid(&sorted, step, GRID_INTERVALS),
            coarse: convolve_on_grid(&sorted, 2.0 * step, GRID_INTERVALS / 2),
        }
    }

    pub fn form(&self) -> DensityForm {
        match self.repr {
            Repr::Empty => DensityForm::Empty,
            Repr::Erlang { .. } => DensityForm::Erlang,
            Repr::Hypo { .. } => DensityForm::Hypoexponential,
            Repr::Grid { .. } => DensityForm::NumericalGrid,
        }
    }

    /// Exponential rate parameters `1/gamma_k` of the summands.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Sampled pdf for the grid form, with its step.
    pub fn grid(&self) -> Option<(f64, &[f64])> {
        match &self.repr {
            Repr::Grid { step, pdf, .. } => Some((*step, pdf)),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        self.rates.iter().map(|r| 1.0 / r).sum()
    }

    /// Density at `x`. The empty form has no density; it returns 0 and is
    /// handled separately by [`SumDensity::expect`].
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match &self.repr {
            Repr::Empty => 0.0,
            Repr::Erlang {
                shape,
                rate,
                log_norm,
            } => {
                if *shape == 1 {
                    rate * (-rate * x).exp()
                } else if x == 0.0 {
                    0.0
                } else {
                    (log_norm + (*shape - 1) as f64 * x.ln() - rate * x).exp()
                }
            }
            Repr::Hypo { blocks } => {
                let v: f64 = blocks
                    .iter()
                    .map(|b| (-b.rate * x).exp() * b.poly.iter().rev().fold(0.0, |acc, c| acc * x + c))
                    .sum();
                v.max(0.0)
            }
            Repr::Grid { step, pdf, .. } => {
                let pos = x / step;
                let i = pos.floor() as usize;
                if i + 1 >= pdf.len() {
                    return 0.0;
                }
                let frac = pos - i as f64;
                pdf[i] * (1.0 - frac) + pdf[i + 1] * frac
            }
        }
    }

    /// `E[kernel(X)]` under this density.
    pub fn expect<F>(&self, mut kernel: F, spec: &QuadratureSpec) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        match &self.repr {
            Repr::Empty => kernel(0.0),
            Repr::Grid { step, pdf, coarse } => {
                let mut fine = Vec::with_capacity(pdf.len());
                let mut half = Vec::with_capacity(coarse.len());
                for (i, &p) in pdf.iter().enumerate() {
                    let c = if i % 2 == 0 { coarse[i / 2] } else { 0.0 };
                    if p == 0.0 && c == 0.0 {
                        fine.push(0.0);
                    } else {
                        let k = kernel(i as f64 * step)?;
                        fine.push(p * k);
                        if i % 2 == 0 {
                            half.push(c * k);
                        }
                        continue;
                    }
                    if i % 2 == 0 {
                        half.push(0.0);
                    }
                }
                let f = simpson(&fine, *step);
                let h = simpson(&half, 2.0 * step);
                Ok((4.0 * f - h) / 3.0)
            }
            _ => try_integrate_halfline(
                |x| {
                    let p = self.pdf(x);
                    if p == 0.0 {
                        Ok(0.0)
                    } else {
                        Ok(p * kernel(x)?)
                    }
                },
                self.mean(),
                spec,
            ),
        }
    }
}

/// Groups near-equal rates into `(multiplicity, rate)` blocks. A block's
/// rate keeps the block mean exact.
fn clusters(rates: &[f64]) -> Vec<(u32, f64)> {
    let mut sorted = rates.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(u32, f64, f64)> = Vec::new();
    for r in sorted {
        match out.last_mut() {
            Some((k, first, mean)) if (r - *first).abs() <= NEAR_EQUAL * r.max(*first) => {
                *k += 1;
                *mean += 1.0 / r;
            }
            _ => out.push((1, r, 1.0 / r)),
        }
    }
    out.into_iter().map(|(k, _, mean)| (k, k as f64 / mean)).collect()
}

#[derive(Debug, Clone, PartialEq)]
struct Block {
    rate: f64,
    poly: Vec<f64>,
}

/// Partial fractions of `prod_b (rate_b / (s + rate_b))^k_b`. `None` when a
/// coefficient is too large to keep full precision.
fn block_coefficients(blocks: &[(u32, f64)]) -> Option<Vec<Block>> {
    let mut out = Vec::with_capacity(blocks.len());
    for (b, &(k, rate)) in blocks.iter().enumerate() {
        let k = k as usize;
        let s = -rate;
        let others = || blocks.iter().enumerate().filter(move |&(c, _)| c != b).map(|(_, &blk)| blk);
        // Derivatives of G(s) = rate^k prod_c (rate_c / (s + rate_c))^k_c
        // via G' = G L with L the logarithmic derivative.
        let l_deriv = |n: usize| -> f64 {
            let fact: f64 = (1..=n).map(|i| i as f64).product();
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            others().map(|(kc, rc)| sign * kc as f64 * fact / (s + rc).powi(n as i32 + 1)).sum()
        };
        let mut g = vec![rate.powi(k as i32) * others().map(|(kc, rc)| (rc / (s + rc)).powi(kc as i32)).product::<f64>()];
        for n in 0..k.saturating_sub(1) {
            let mut next = 0.0;
            let mut binom = 1.0;
            for i in 0..=n {
                next += binom * g[i] * l_deriv(n - i);
                binom *= (n - i) as f64 / (i + 1) as f64;
            }
            g.push(next);
        }
        let mut poly = Vec::with_capacity(k);
        for r in 1..=k {
            let d = k - r;
            let a = g[d] / (1..=d).map(|i| i as f64).product::<f64>();
            if (a / rate.powi(r as i32)).abs() > MAX_COEFFICIENT {
                return None;
            }
            poly.push(a / (1..r).map(|i| i as f64).product::<f64>());
        }
        out.push(Block { rate, poly });
    }
    Some(out)
}

/// Sum density sampled on `intervals + 1` nodes, normalized to unit mass.
fn convolve_on_grid(rates: &[f64], step: f64, intervals: usize) -> Vec<f64> {
    let nodes = intervals + 1;
    let mut pdf: Vec<f64> = (0..nodes).map(|i| rates[0] * (-rates[0] * i as f64 * step).exp()).collect();
    let mut next = vec![0.0; nodes];
    for &rate in &rates[1..] {
        // Convolve the piecewise-linear interpolant with the exponential
        // density exactly on each step.
        let a = rate * step;
        let e = (-a).exp();
        let one_minus_e = -(-a).exp_m1();
        let w_right = if a < 1e-4 {
            a / 2.0 - a * a / 6.0 + a * a * a / 24.0
        } else {
            one_minus_e - (one_minus_e - a * e) / a
        };
        let w_left = one_minus_e - w_right;
        next[0] = 0.0;
        for i in 0..nodes - 1 {
            next[i + 1] = e * next[i] + w_left * pdf[i] + w_right * pdf[i + 1];
        }
        std::mem::swap(&mut pdf, &mut next);
    }
    let total = simpson(&pdf, step);
    for v in &mut pdf {
        *v /= total;
    }
    pdf
}

/// Composite Simpson rule over equally spaced samples (even interval count).
fn simpson(values: &[f64], step: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n % 2 == 0);
    let mut acc = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * step / 3.0
}

/// Receivers at which aggregate underlay interference is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    BaseStation,
    Eavesdropper,
    D2dRx(usize),
}

impl From<Receiver> for NodeId {
    fn from(r: Receiver) -> Self {
        match r {
            Receiver::BaseStation => NodeId::BaseStation,
            Receiver::Eavesdropper => NodeId::Eavesdropper,
            Receiver::D2dRx(j) => NodeId::D2dRx(j),
        }
    }
}

/// Density of the interference the members of `set` cause at `target`.
pub fn sum_density(set: &UnderlaySet, target: Receiver, budget: &LinkBudget) -> Result<SumDensity> {
    let m = budget.num_pairs();
    if let (Some(ex), Receiver::D2dRx(j)) = (set.excluded_pair, target) {
        if ex != j {
            return Err(Error::invalid("underlay set", "excluded pair does not match the receiver"));
        }
    }
    let means = set
        .members
        .iter()
        .map(|&k| {
            if k >= m {
                return Err(Error::invalid("underlay set", format!("pair index {k} out of range")));
            }
            if Receiver::D2dRx(k) == target {
                return Err(Error::invalid("underlay set", format!("pair {k} cannot interfere with itself")));
            }
            Ok(budget.gamma(NodeId::D2dTx(k), target.into()).expect("modeled link"))
        })
        .collect::<Result<Vec<_>>>()?;
    SumDensity::from_means(&means)
}

/// Moments of order 0, 1 or 2.
pub fn density_moment(d: &SumDensity, k: u32) -> Result<f64> {
    let means = d.rates.iter().map(|r| 1.0 / r);
    match k {
        0 => Ok(1.0),
        1 => Ok(d.mean()),
        2 => {
            let var: f64 = means.map(|g| g * g).sum();
            Ok(var + d.mean() * d.mean())
        }
        _ => Err(Error::UnsupportedOrder(k)),
    }
}
