use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Series/continued-fraction switch point for `E1`.
const SWITCH: f64 = 1.0;

/// `E1(x)` for `0 < x <= 1` by its power series.
fn e1_series(x: f64) -> f64 {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= -x / kf;
        let add = term / kf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `e^x E1(x)` for `x > 1` by the Lentz continued fraction.
fn e1_scaled_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `e^x E1(x)` for `x > 0` without overflow.
pub(crate) fn e1_scaled(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= SWITCH {
        x.exp() * e1_series(x)
    } else {
        e1_scaled_cf(x)
    }
}

/// `Psi(x) = e^x Ei(-x)` for `x > 0`, unchecked.
#[inline]
pub(crate) fn psi_kernel(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    -e1_scaled(x)
}

/// Exponential integral `E1(x) = int_x^inf e^-t / t dt` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "E1",
            arg: x,
        });
    }
    if x <= SWITCH {
        Ok(e1_series(x))
    } else {
        Ok(e1_scaled_cf(x) * (-x).exp())
    }
}

/// Exponential integral `Ei(x)` for negative `x`, i.e. `-E1(-x)`.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::Domain {
            function: "Ei",
            arg: x,
        });
    }
    exp_integral_e1(-x).map(|v| -v)
}

/// `Psi(x) = e^x Ei(-x)` for `x > 0`.
pub fn psi(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "Psi",
            arg: x,
        });
    }
    Ok(psi_kernel(x))
}
