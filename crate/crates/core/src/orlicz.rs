//! Gauge functions, their generalized inverses and the derived gauges
//! (clamped, shifted, power-composed) used by the conditions and constructions.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::math::{exp, expm1, ln, ln1p, ln_expm1, ln_sub, powf, E};
use crate::numeric::{geomspace, monotone_inverse, monotone_inverse_real, Pchip};

/// `ln(1 + e^x)` without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 36.0 {
        x + ln1p(exp(-x))
    } else {
        ln1p(exp(x))
    }
}

/// A monotone function on `[0, ∞)`, given in closed form or as a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Gauge {
    /// `t^p`
    Power { p: f64 },
    /// `t^p · ln^s(e + t)`
    PowerLog { p: f64, s: f64 },
    /// `e^{t^a} - 1`
    ExpPowerM1 { a: f64 },
    /// `e^{t^a}` (positive at 0)
    ExpPower { a: f64 },
    /// `e^{e^t}`
    DoubleExp,
    /// `min(t, cap)`
    Capped { cap: f64 },
    /// `c` for every `t >= 0`
    Constant { c: f64 },
    /// Monotone cubic interpolation of sampled values, linear beyond the last node.
    Table { table: Pchip },
    /// `inner(1)` on `(0, 1)`, `inner(t)` for `t >= 1`, 0 at 0.
    Clamped { inner: Box<Gauge> },
    /// `inner(t + c) - inner(c)`
    Shifted { inner: Box<Gauge>, c: f64 },
    /// `inner(t^p)`
    PowerComposed { inner: Box<Gauge>, p: f64 },
}

impl Gauge {
    /// Table gauge from samples; `(0, 0)` is prepended when the first node is positive.
    pub fn table(mut t: Vec<f64>, mut v: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            bail!(Validation, "empty gauge table");
        }
        if t[0] < 0.0 {
            bail!(Validation, "gauge table starts at negative t");
        }
        if t[0] > 0.0 {
            t.insert(0, 0.0);
            v.insert(0, 0.0);
        }
        if v.windows(2).any(|w| w[1] < w[0]) {
            bail!(Validation, "gauge table values must be non-decreasing");
        }
        Ok(Gauge::Table {
            table: Pchip::new(t, v)?,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = if t > 0.0 { t } else { 0.0 };
        match self {
            Gauge::Power { p } => powf(t, *p),
            Gauge::PowerLog { p, s } => {
                if t == 0.0 {
                    return if *p > 0.0 { 0.0 } else { powf(ln(E), *s) };
                }
                powf(t, *p) * powf(ln(E + t), *s)
            }
            Gauge::ExpPowerM1 { a } => expm1(powf(t, *a)),
            Gauge::ExpPower { a } => exp(powf(t, *a)),
            Gauge::DoubleExp => exp(exp(t)),
            Gauge::Capped { cap } => t.min(*cap),
            Gauge::Constant { c } => *c,
            Gauge::Table { table } => table.eval(t).max(0.0),
            Gauge::Clamped { inner } => {
                if t == 0.0 {
                    0.0
                } else if t < 1.0 {
                    inner.eval(1.0)
                } else {
                    inner.eval(t)
                }
            }
            Gauge::Shifted { inner, c } => {
                if let Gauge::Power { p } = **inner {
                    if *c > 0.0 {
                        return powf(*c, p) * expm1(p * ln1p(t / c));
                    }
                }
                (inner.eval(t + c) - inner.eval(*c)).max(0.0)
            }
            Gauge::PowerComposed { inner, p } => inner.eval(powf(t, *p)),
        }
    }

    /// `ln g(e^y)`, accurate where `e^y` or `g` itself leaves the f64 range.
    pub fn ln_eval_at_log(&self, y: f64) -> f64 {
        if y.is_nan() {
            return f64::NAN;
        }
        match self {
            Gauge::Power { p } => {
                if y == f64::NEG_INFINITY {
                    if *p > 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        0.0
                    }
                } else {
                    p * y
                }
            }
            Gauge::PowerLog { p, s } => {
                if y == f64::NEG_INFINITY {
                    return ln(self.eval(0.0));
                }
                // ln(e + e^y) = 1 + softplus(y - 1)
                p * y + s * ln(1.0 + softplus(y - 1.0))
            }
            Gauge::ExpPowerM1 { a } => {
                if y == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let x = exp(a * y);
                if x == 0.0 {
                    a * y
                } else {
                    ln_expm1(x)
                }
            }
            Gauge::ExpPower { a } => {
                if y == f64::NEG_INFINITY {
                    return 0.0;
                }
                exp(a * y)
            }
            Gauge::DoubleExp => exp(exp(y)),
            Gauge::Capped { cap } => y.min(ln(*cap)),
            Gauge::Constant { c } => ln(*c),
            Gauge::Table { table } => {
                let t = exp(y);
                if t.is_finite() {
                    return ln(self.eval(t));
                }
                let s = table.derivative(table.last_x());
                if s > 0.0 {
                    ln(s) + y
                } else {
                    ln(self.eval(table.last_x()))
                }
            }
            Gauge::Clamped { inner } => {
                if y == f64::NEG_INFINITY {
                    f64::NEG_INFINITY
                } else if y < 0.0 {
                    inner.ln_eval_at_log(0.0)
                } else {
                    inner.ln_eval_at_log(y)
                }
            }
            Gauge::Shifted { inner, c } => {
                if y == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                if *c == 0.0 {
                    return inner.ln_eval_at_log(y);
                }
                let lc = ln(*c);
                if let Gauge::Power { p } = **inner {
                    return p * lc + ln_expm1(p * softplus(y - lc));
                }
                let a = inner.ln_eval_at_log(lc);
                let b = inner.ln_eval_at_log(lc + softplus(y - lc));
                ln_sub(b, a)
            }
            Gauge::PowerComposed { inner, p } => inner.ln_eval_at_log(p * y),
        }
    }

    /// Textual form accepted by the spec parser.
    pub fn spec_string(&self) -> String {
        match self {
            Gauge::Power { p } => format!("pow:p={p}"),
            Gauge::PowerLog { p, s } => format!("powlog:p={p},s={s}"),
            Gauge::ExpPowerM1 { a } => format!("exp:a={a}"),
            Gauge::ExpPower { a } => format!("expraw:a={a}"),
            Gauge::DoubleExp => String::from("expexp"),
            Gauge::Capped { cap } => format!("min:c={cap}"),
            Gauge::Constant { c } => format!("const:c={c}"),
            Gauge::Table { table } => format!("table[{} nodes]", table.xs().len()),
            Gauge::Clamped { inner } => format!("clamp({})", inner.spec_string()),
            Gauge::Shifted { inner, c } => format!("shift({},c={c})", inner.spec_string()),
            Gauge::PowerComposed { inner, p } => format!("compose({},p={p})", inner.spec_string()),
        }
    }

    fn nodes(&self) -> Vec<f64> {
        match self {
            Gauge::Table { table } => table.xs().to_vec(),
            Gauge::Clamped { inner }
            | Gauge::Shifted { inner, .. }
            | Gauge::PowerComposed { inner, .. } => inner.nodes(),
            _ => Vec::new(),
        }
    }
}

/// Default saturation level: values above it are reported as `+∞`.
pub const DEFAULT_OVERFLOW: f64 = 1e300;

/// A validated monotone gauge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrliczFunction {
    pub gauge: Gauge,
    pub description: String,
    pub monotone: bool,
    pub convex: bool,
    pub zero_at_zero: bool,
    pub overflow_threshold: f64,
}

fn sample_grid(g: &Gauge) -> Vec<f64> {
    let mut grid = alloc::vec![0.0];
    grid.extend(geomspace(1e-6, 1e6, 241));
    grid.extend(geomspace(0.05, 20.0, 160));
    for x in g.nodes() {
        grid.push(x);
        grid.push(x * (1.0 + 1e-7));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn check_monotone(g: &Gauge, grid: &[f64]) -> Option<f64> {
    let mut prev = g.eval(grid[0]);
    for &t in &grid[1..] {
        let v = g.eval(t);
        if v.is_nan() {
            return Some(t);
        }
        if v < prev && prev.is_finite() {
            return Some(t);
        }
        prev = v;
    }
    None
}

fn check_convex(g: &Gauge, grid: &[f64]) -> bool {
    let coarse: Vec<f64> = grid.iter().copied().step_by(7).collect();
    for (i, &t1) in coarse.iter().enumerate() {
        let f1 = g.eval(t1);
        if !f1.is_finite() {
            continue;
        }
        for &t2 in &coarse[i + 1..] {
            let f2 = g.eval(t2);
            if !f2.is_finite() || f2 > 1e250 {
                continue;
            }
            for lam in [0.25, 0.5, 0.75] {
                let mid = g.eval(lam * t1 + (1.0 - lam) * t2);
                let chord = lam * f1 + (1.0 - lam) * f2;
                if mid > chord + 1e-12 * chord.abs().max(1e-300) {
                    return false;
                }
            }
        }
    }
    true
}

impl OrliczFunction {
    /// Validated gauge with `φ(0) = 0`.
    pub fn new(gauge: Gauge) -> Result<Self> {
        let f = Self::general(gauge)?;
        if !f.zero_at_zero {
            bail!(
                Validation,
                "gauge {} has nonzero value {} at 0",
                f.description,
                f.gauge.eval(0.0)
            );
        }
        Ok(f)
    }

    /// Validated monotone gauge; the value at 0 may be positive.
    pub fn general(gauge: Gauge) -> Result<Self> {
        let grid = sample_grid(&gauge);
        if let Some(t) = check_monotone(&gauge, &grid) {
            bail!(
                Validation,
                "gauge {} is not non-decreasing near t = {t}",
                gauge.spec_string()
            );
        }
        let v0 = gauge.eval(0.0);
        if !(v0 >= 0.0) {
            bail!(Validation, "gauge {} is negative at 0", gauge.spec_string());
        }
        let convex = check_convex(&gauge, &grid);
        Ok(Self {
            description: gauge.spec_string(),
            monotone: true,
            convex,
            zero_at_zero: v0 == 0.0,
            overflow_threshold: DEFAULT_OVERFLOW,
            gauge,
        })
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    pub fn with_overflow_threshold(mut self, threshold: f64) -> Self {
        self.overflow_threshold = threshold;
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        let v = self.gauge.eval(t);
        if v > self.overflow_threshold {
            f64::INFINITY
        } else {
            v
        }
    }

    /// `ln φ(e^y)`.
    pub fn ln_eval_at_log(&self, y: f64) -> f64 {
        self.gauge.ln_eval_at_log(y)
    }

    /// `inf { t : φ(t) >= τ }`, `∞` when the set is empty.
    pub fn inverse(&self, tau: f64) -> f64 {
        monotone_inverse(|t| self.eval(t), tau, 1e300)
    }

    /// `ln φ^{-1}(e^u)`; `-∞` when `φ(0) >= e^u`, `+∞` when never reached.
    pub fn ln_inverse_at_log(&self, u: f64) -> f64 {
        if self.ln_eval_at_log(f64::NEG_INFINITY) >= u {
            return f64::NEG_INFINITY;
        }
        monotone_inverse_real(|y| self.ln_eval_at_log(y), u, 0.0, 1e7).unwrap_or(f64::INFINITY)
    }
}

/// The map `τ ↦ inf { t : Φ(t) >= τ }` of a monotone gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedInverse {
    pub source: OrliczFunction,
}

impl GeneralizedInverse {
    pub fn new(source: OrliczFunction) -> Self {
        Self { source }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        self.source.inverse(tau)
    }
}

pub fn eval_inverse(phi: &OrliczFunction, tau: f64) -> f64 {
    phi.inverse(tau)
}

/// `φ_*`: constant `φ(1)` on `(0, 1)`, unchanged elsewhere.
pub fn clamp_below_one(phi: &OrliczFunction) -> Result<OrliczFunction> {
    OrliczFunction::new(Gauge::Clamped {
        inner: Box::new(phi.gauge.clone()),
    })
}

/// `t ↦ φ(t + c) − φ(c)`.
pub fn shift_normalize(phi: &OrliczFunction, c: f64) -> Result<OrliczFunction> {
    if !(c >= 0.0) {
        bail!(Domain, "shift must be nonnegative, got {c}");
    }
    OrliczFunction::new(Gauge::Shifted {
        inner: Box::new(phi.gauge.clone()),
        c,
    })
}

/// `H = ln Φ` with the convention `H' = 0` where `Φ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGauge {
    pub gauge: Gauge,
}

impl LogGauge {
    pub fn eval(&self, t: f64) -> f64 {
        let v = self.gauge.eval(t);
        if v <= 0.0 {
            f64::NEG_INFINITY
        } else {
            ln(v)
        }
    }

    /// `H(e^y)` in log coordinates.
    pub fn eval_at_log(&self, y: f64) -> f64 {
        self.gauge.ln_eval_at_log(y)
    }

    /// `H'(t)` by Richardson-extrapolated central differences in `ln t`.
    pub fn derivative(&self, t: f64) -> f64 {
        if t <= 0.0 || self.gauge.eval(t) <= 0.0 {
            return 0.0;
        }
        let y = ln(t);
        let h = 1e-3;
        let d = crate::numeric::misc::richardson_derivative(|z| self.gauge.ln_eval_at_log(z), y, h);
        if d.is_finite() {
            d / t
        } else {
            0.0
        }
    }
}

/// `Φ_p(t) = Φ(t^p)` together with `H_p = ln Φ_p`.
pub fn power_compose(phi: &OrliczFunction, p: f64) -> Result<(OrliczFunction, LogGauge)> {
    if !(p > 0.0) {
        bail!(Domain, "exponent must be positive, got {p}");
    }
    let g = Gauge::PowerComposed {
        inner: Box::new(phi.gauge.clone()),
        p,
    };
    let f = OrliczFunction::general(g.clone())?;
    Ok((f, LogGauge { gauge: g }))
}
