use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        if !(abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", "must be positive"));
        }
        if max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions", "must be at least 1"));
        }
        Ok(QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }
}

// 21-point Kronrod rule with its embedded 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_109_811,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn non_finite(x: f64) -> Error {
    Error::Domain {
        function: "integrand (non-finite value)",
        arg: x,
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    if !fc.is_finite() {
        return Err(non_finite(center));
    }
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for k in 0..10 {
        let dx = half * XGK[k];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        if !f1.is_finite() {
            return Err(non_finite(center - dx));
        }
        if !f2.is_finite() {
            return Err(non_finite(center + dx));
        }
        fv1[k] = f1;
        fv2[k] = f2;
        res_k += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
        if k % 2 == 1 {
            res_g += WG[k / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for k in 0..10 {
        res_asc += WGK[k] * ((fv1[k] - mean).abs() + (fv2[k] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { a, b, value, error })
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
fn adaptive<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let first = kronrod(&mut f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut segments = 1;
    // Error that can no longer be reduced because the segment is too narrow.
    let mut frozen_err = 0.0;
    let mut frozen_val = 0.0;

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a).abs() <= 8.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            frozen_err += worst.error;
            frozen_val += worst.value;
            continue;
        }
        if segments >= spec.max_subdivisions {
            heap.push(worst);
            break;
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        segments += 1;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Resum periodically to keep the running totals from drifting.
        if segments % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum::<f64>() + frozen_val;
            total_err = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
        }
    }
    total = heap.iter().map(|s| s.value).sum::<f64>() + frozen_val;
    total_err = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
    if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        return Ok(total);
    }
    Err(Error::Quadrature {
        estimate: total,
        error: total_err,
        subdivisions: segments,
    })
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate_interval<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    adaptive(|x| Ok(f(x)), a, b, spec)
}

/// Fallible-integrand version of [`integrate_halfline_scaled`].
pub(crate) fn try_integrate_halfline<F>(mut f: F, scale: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    debug_assert!(scale > 0.0);
    // x = scale * t / (1 - t), dx = scale / (1 - t)^2 dt
    adaptive(
        |t| {
            let u = 1.0 - t;
            let x = scale * t / u;
            let fx = f(x)?;
            if fx == 0.0 {
                return Ok(0.0);
            }
            Ok(fx * scale / (u * u))
        },
        0.0,
        1.0,
        spec,
    )
}

/// Integrates `f` over `[0, inf)`.
pub fn integrate_halfline<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_halfline_scaled(f, 1.0, spec)
}

/// Integrates `f` over `[0, inf)`; `scale` is where the integrand's mass
/// sits (for a density, its mean). It only affects efficiency.
pub fn integrate_halfline_scaled<F>(mut f: F, scale: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::invalid("scale", "must be positive and finite"));
    }
    try_integrate_halfline(|x| Ok(f(x)), scale, spec)
}

/// Integrates `f(x, y)` over `[0, inf)^2` as an iterated integral.
pub fn integrate_quadrant<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    integrate_quadrant_scaled(f, 1.0, 1.0, spec)
}

pub fn integrate_quadrant_scaled<F>(f: F, scale_x: f64, scale_y: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    for s in [scale_x, scale_y] {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::invalid("scale", "must be positive and finite"));
        }
    }
    try_integrate_halfline(
        |x| try_integrate_halfline(|y| Ok(f(x, y)), scale_y, spec),
        scale_x,
        spec,
    )
}
