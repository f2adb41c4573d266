//! libm re-exports under short names, so the crate builds without `std`.
#![allow(unused_imports)]

pub(crate) use libm::{
    acos, atan2, cbrt, ceil, cos, exp, exp2, expm1, fabs, floor, hypot, lgamma, log as ln,
    log1p as ln1p, log2, pow as powf, round, sin, sqrt, tgamma,
};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const E: f64 = core::f64::consts::E;
pub(crate) const LN_2: f64 = core::f64::consts::LN_2;

/// `ln(e^a + e^b)` without overflow.
pub(crate) fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::INFINITY {
        return hi;
    }
    hi + ln1p(exp(lo - hi))
}

/// `ln(e^a - e^b)` for `a >= b`; `-inf` when equal.
pub(crate) fn ln_sub(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + ln(-expm1(b - a))
}

/// `ln(e^x - 1)` for `x > 0`.
pub(crate) fn ln_expm1(x: f64) -> f64 {
    if x > 36.0 {
        x + ln1p(-exp(-x))
    } else {
        ln(expm1(x))
    }
}

pub(crate) fn powi(x: f64, n: i32) -> f64 {
    let mut r = 1.0;
    let mut b = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            r *= b;
        }
        b *= b;
        e >>= 1;
    }
    r
}
