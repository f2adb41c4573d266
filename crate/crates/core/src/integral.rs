//! Convergence classification of improper integrals and the integral
//! conditions built on gauges and radial weights.
//!
//! Every integral is reduced to a tail `∫_{t0}^∞ f(t) dt` with `f >= 0`, given
//! through `u ↦ ln f(e^u)`. The integral up to the cutoff is computed in log
//! space; the decision comes from local power-law fits of the integrand, first
//! against `ln t` on the last decade below the cutoff, then (for integrands
//! that look like `1/t` there) against `ln ln t` and `ln ln ln t` on a window far
//! beyond the cutoff. The threshold is −1 in every tier.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::math::{exp, ln, ln_add, powf, E};
use crate::numeric::misc::{linear_fit, linspace, richardson_derivative};
use crate::numeric::{integrate, ln_integrate, QuadConfig, SphereRule};
use crate::orlicz::{power_compose, OrliczFunction};
use crate::report::{Relation, VerificationReport};
use crate::weight::RadialWeight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Classification {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub condition: String,
    pub classification: Classification,
    /// Integral from the lower limit up to the cutoff.
    pub partial_value: f64,
    /// Full-integral estimate: continuation past the cutoff plus a fitted tail
    /// (`inf` when divergent).
    pub value_estimate: f64,
    /// Fitted exponent of the tier that decided.
    pub tail_exponent: f64,
    /// 0: power of `t`; 1: power of `ln t` (after `t·f`); 2: power of `ln ln t`.
    pub tier: u8,
    pub cutoff: f64,
    pub margin: f64,
    pub evidence: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    /// Upper limit `T` of the partial integral (in `t`).
    pub cutoff: f64,
    /// `ln t` at the far end of the window used by the iterated-log tiers.
    pub far_log: f64,
    /// Decision margin around the threshold −1.
    pub margin: f64,
    pub fit_points: usize,
    pub rel_tol: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            cutoff: 1e12,
            far_log: 1e4,
            margin: 0.05,
            fit_points: 16,
            rel_tol: 1e-10,
        }
    }
}

const THRESHOLD: f64 = -1.0;

enum Fit {
    Slope(f64),
    Zero,
    Infinite,
    Undefined,
}

fn fit_tier(xs: &[f64], ys: &[f64]) -> Fit {
    if ys.iter().any(|y| y.is_nan()) {
        return Fit::Undefined;
    }
    if ys.contains(&f64::INFINITY) {
        return Fit::Infinite;
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.is_finite())
        .map(|(x, y)| (*x, *y))
        .collect();
    if pts.len() < 3 {
        return Fit::Zero;
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    Fit::Slope(linear_fit(&x, &y).0)
}

fn decide(e: f64, margin: f64) -> Option<Classification> {
    if e >= THRESHOLD + margin {
        Some(Classification::Divergent)
    } else if e <= THRESHOLD - margin {
        Some(Classification::Convergent)
    } else {
        None
    }
}

/// A tail integral `∫_{e^{u0}}^∞ f(t) dt`, `f >= 0`, through `ln_f(u) = ln f(e^u)`.
pub struct Tail<'a> {
    pub ln_f: &'a dyn Fn(f64) -> f64,
    pub u0: f64,
    /// Largest `u` at which `ln_f` can be evaluated reliably.
    pub u_limit: f64,
    /// Signed contribution already integrated below `e^{u0}`.
    pub head: f64,
}

impl core::fmt::Debug for Tail<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Tail")
            .field("u0", &self.u0)
            .field("u_limit", &self.u_limit)
            .field("head", &self.head)
            .finish()
    }
}

/// Classify a tail integral.
pub fn classify_tail(
    condition: &str,
    tail: &Tail<'_>,
    cfg: &ClassifierConfig,
) -> ConvergenceVerdict {
    let ln_f = tail.ln_f;
    let g = |u: f64| ln_f(u) + u;
    let ut = ln(cfg.cutoff).max(tail.u0 + core::f64::consts::LN_10);
    let cutoff = exp(ut);
    let part = ln_integrate(g, tail.u0, ut, cfg.rel_tol, 4000);
    let mut verdict = ConvergenceVerdict {
        condition: String::from(condition),
        classification: Classification::Inconclusive,
        partial_value: tail.head + exp(part.ln_value),
        value_estimate: f64::NAN,
        tail_exponent: f64::NAN,
        tier: 0,
        cutoff,
        margin: cfg.margin,
        evidence: String::new(),
    };
    if part.ln_value == f64::INFINITY || part.ln_value.is_nan() {
        verdict.classification = Classification::Divergent;
        verdict.partial_value = f64::INFINITY;
        verdict.value_estimate = f64::INFINITY;
        verdict.tail_exponent = f64::INFINITY;
        verdict.evidence = String::from("integrand infinite on the integration range");
        return verdict;
    }
    let n = cfg.fit_points.max(4);

    // tier 0: ln f against ln t on the last decade below the cutoff
    let xs = linspace(ut - core::f64::consts::LN_10, ut, n);
    let ys: Vec<f64> = xs.iter().map(|&u| ln_f(u)).collect();
    let e0 = match fit_tier(&xs, &ys) {
        Fit::Infinite => {
            verdict.classification = Classification::Divergent;
            verdict.value_estimate = f64::INFINITY;
            verdict.tail_exponent = f64::INFINITY;
            verdict.evidence = String::from("integrand infinite near the cutoff");
            return verdict;
        }
        Fit::Zero => {
            verdict.classification = Classification::Convergent;
            verdict.tail_exponent = f64::NEG_INFINITY;
            verdict.value_estimate = verdict.partial_value;
            verdict.evidence = String::from("integrand vanishes near the cutoff");
            return verdict;
        }
        Fit::Undefined => {
            verdict.evidence = String::from("integrand undefined near the cutoff");
            return verdict;
        }
        Fit::Slope(s) => s,
    };
    let mut evidence = format!(
        "tier0 exponent {e0:.4} on [{:.3e}, {cutoff:.3e}]",
        cutoff / 10.0
    );
    let mut decided = decide(e0, cfg.margin).map(|c| (c, e0, 0u8));

    let far = tail.u_limit.min(cfg.far_log).max(ut);
    if decided.is_none() && far >= 30.0 {
        // tier 1: g1 = t·f against ln ln t; tier 2: g2 = t ln t f against ln ln ln t
        let x1 = linspace(ln(far / 10.0), ln(far), n);
        let y1: Vec<f64> = x1.iter().map(|&x| g(exp(x))).collect();
        match fit_tier(&x1, &y1) {
            Fit::Slope(e1) => {
                evidence.push_str(&format!(
                    "; tier1 exponent {e1:.4} on ln t in [{:.3e}, {far:.3e}]",
                    far / 10.0
                ));
                decided = decide(e1, cfg.margin).map(|c| (c, e1, 1u8));
                if decided.is_none() {
                    let x2 = linspace(ln(ln(far / 10.0)), ln(ln(far)), n);
                    let y2: Vec<f64> = x2
                        .iter()
                        .map(|&z| {
                            let u = exp(exp(z));
                            g(u) + ln(u)
                        })
                        .collect();
                    match fit_tier(&x2, &y2) {
                        Fit::Slope(e2) => {
                            evidence.push_str(&format!("; tier2 exponent {e2:.4}"));
                            decided = decide(e2, cfg.margin).map(|c| (c, e2, 2u8));
                            if decided.is_none() {
                                verdict.tail_exponent = e2;
                                verdict.tier = 2;
                            }
                        }
                        Fit::Zero => {
                            decided = Some((Classification::Convergent, f64::NEG_INFINITY, 2))
                        }
                        Fit::Infinite => {
                            decided = Some((Classification::Divergent, f64::INFINITY, 2))
                        }
                        Fit::Undefined => evidence.push_str("; tier2 integrand undefined"),
                    }
                }
            }
            Fit::Zero => decided = Some((Classification::Convergent, f64::NEG_INFINITY, 1)),
            Fit::Infinite => decided = Some((Classification::Divergent, f64::INFINITY, 1)),
            Fit::Undefined => evidence.push_str("; far window undefined"),
        }
    } else if decided.is_none() {
        evidence.push_str("; no room for the iterated-log tiers");
    }

    match decided {
        None => {
            if verdict.tail_exponent.is_nan() {
                verdict.tail_exponent = e0;
            }
            verdict.evidence = evidence;
        }
        Some((c, e, tier)) => {
            verdict.classification = c;
            verdict.tail_exponent = e;
            verdict.tier = tier;
            verdict.evidence = evidence;
            verdict.value_estimate = match c {
                Classification::Divergent => f64::INFINITY,
                _ => tail.head + exp(estimate_ln_total(&g, part.ln_value, ut, far, cfg)),
            };
        }
    }
    verdict
}

// ln of the whole tail integral: partial + continuation to `far` + local tail
// model beyond `far`.
fn estimate_ln_total<G: Fn(f64) -> f64>(
    g: &G,
    ln_partial: f64,
    ut: f64,
    far: f64,
    cfg: &ClassifierConfig,
) -> f64 {
    let mut total = ln_partial;
    let mut end = ut;
    if far > ut {
        let cont = ln_integrate(g, ut, far, cfg.rel_tol, 4000);
        if cont.ln_value.is_finite() || cont.ln_value == f64::NEG_INFINITY {
            total = ln_add(total, cont.ln_value);
            end = far;
        }
    }
    let ge = g(end);
    if !ge.is_finite() {
        return total;
    }
    let h = 1e-4 * end.max(1.0);
    let s0 = (g(end + h) - g(end - h)) / (2.0 * h);
    // e^{g} ~ e^{s0 u}: tail e^{g(end)}/(-s0)
    if s0 < -0.5 {
        return ln_add(total, ge - ln(-s0));
    }
    // e^{g} ~ u^{s1}: tail e^{g(end)}·end/(-1 - s1)
    let s1 = s0 * end;
    if s1 < -1.0 - 1e-3 {
        return ln_add(total, ge + ln(end) - ln(-1.0 - s1));
    }
    total
}

/// `∫_0^{r_max} f(r) dr` given `ln_f_at_log(v) = ln f(e^v)`; classified as the
/// tail `∫_{1/r_max}^∞ f(1/t) t^{-2} dt`.
pub fn classify_zero_end(
    condition: &str,
    ln_f_at_log: &dyn Fn(f64) -> f64,
    r_max: f64,
    v_limit: f64,
    head: f64,
    cfg: &ClassifierConfig,
) -> ConvergenceVerdict {
    classify_zero_end_log(condition, ln_f_at_log, ln(r_max), v_limit, head, cfg)
}

/// As [`classify_zero_end`] with the upper limit given as `ln r_max`, so that
/// limits below the f64 range are allowed.
pub fn classify_zero_end_log(
    condition: &str,
    ln_f_at_log: &dyn Fn(f64) -> f64,
    ln_r_max: f64,
    v_limit: f64,
    head: f64,
    cfg: &ClassifierConfig,
) -> ConvergenceVerdict {
    let ln_g = |u: f64| ln_f_at_log(-u) - 2.0 * u;
    let tail = Tail {
        ln_f: &ln_g,
        u0: -ln_r_max,
        u_limit: v_limit,
        head,
    };
    let mut v = classify_tail(condition, &tail, cfg);
    v.cutoff = 1.0 / v.cutoff;
    v
}

/// Tail-integral verdict for a plain integrand `t ↦ f(t)` (finite f64 range).
pub fn classify_function(
    condition: &str,
    f: &dyn Fn(f64) -> f64,
    t0: f64,
    cfg: &ClassifierConfig,
) -> ConvergenceVerdict {
    let ln_f = |u: f64| {
        let v = f(exp(u));
        if v < 0.0 {
            f64::NAN
        } else {
            ln(v)
        }
    };
    let tail = Tail {
        ln_f: &ln_f,
        u0: ln(t0),
        u_limit: 700.0,
        head: 0.0,
    };
    classify_tail(condition, &tail, cfg)
}

/// `∫_1^∞ [t/φ(t)]^{1/(k-1)} dt`.
pub fn calderon_condition(
    phi: &OrliczFunction,
    k: usize,
    cfg: &ClassifierConfig,
) -> Result<ConvergenceVerdict> {
    if k < 2 {
        bail!(Domain, "k must be at least 2, got {k}");
    }
    if !(phi.eval(1.0) > 0.0) {
        bail!(
            Domain,
            "φ vanishes at t = 1, the integrand [t/φ(t)]^(1/(k-1)) is undefined"
        );
    }
    let km1 = (k - 1) as f64;
    let ln_f = |u: f64| (u - phi.ln_eval_at_log(u)) / km1;
    let tail = Tail {
        ln_f: &ln_f,
        u0: 0.0,
        u_limit: f64::INFINITY,
        head: 0.0,
    };
    Ok(classify_tail("calderon", &tail, cfg))
}

/// `A_* = A + φ(1)^{-1/(k-1)}`, `A` the full value of the convergent integral.
pub fn a_star(phi: &OrliczFunction, k: usize, cfg: &ClassifierConfig) -> Result<f64> {
    let v = calderon_condition(phi, k, cfg)?;
    if v.classification != Classification::Convergent {
        bail!(
            Precondition,
            "calderon integral is {:?}, A_* needs it convergent",
            v.classification
        );
    }
    let p1 = phi.eval(1.0);
    Ok(v.value_estimate + powf(1.0 / p1, 1.0 / (k - 1) as f64))
}

/// Which of the six equivalent divergence forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionForm {
    /// `∫ H_p'(t) dt/t`
    DerivativeOverT,
    /// `∫ dH_p(t)/t` (Stieltjes)
    Stieltjes,
    /// `∫ H_p(t) dt/t²`
    OverTSquared,
    /// `∫_0^Δ H_p(1/t) dt`
    Reciprocal,
    /// `∫ dη / H_p^{-1}(η)`
    LogInverse,
    /// `∫ dτ / (τ Φ_p^{-1}(τ))`
    Inverse,
}

impl ConditionForm {
    pub const ALL: [ConditionForm; 6] = [
        ConditionForm::DerivativeOverT,
        ConditionForm::Stieltjes,
        ConditionForm::OverTSquared,
        ConditionForm::Reciprocal,
        ConditionForm::LogInverse,
        ConditionForm::Inverse,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConditionForm::DerivativeOverT => "int H_p'(t) dt/t",
            ConditionForm::Stieltjes => "int dH_p(t)/t",
            ConditionForm::OverTSquared => "int H_p(t) dt/t^2",
            ConditionForm::Reciprocal => "int_0^D H_p(1/t) dt",
            ConditionForm::LogInverse => "int d eta/H_p^-1(eta)",
            ConditionForm::Inverse => "int d tau/(tau Phi_p^-1(tau))",
        }
    }
}

/// `t0 = sup { t : Φ_p(t) = 0 }` (0 when `Φ_p(0) > 0`).
pub fn zero_set_end(phi_p: &OrliczFunction) -> f64 {
    if phi_p.eval(0.0) > 0.0 {
        return 0.0;
    }
    // sup of the zero set = inf { t : Φ_p(t) > 0 }
    crate::numeric::roots::bisect_predicate(
        |t| phi_p.eval(t) > 0.0,
        0.0,
        {
            let mut hi = 1.0;
            while phi_p.eval(hi) <= 0.0 && hi < 1e300 {
                hi *= 2.0;
            }
            hi
        },
        4000,
    )
    .0
}

/// Classify one form of the divergence condition for `Φ_p(t) = Φ(t^p)`.
pub fn classify_form(
    phi: &OrliczFunction,
    p: f64,
    delta: f64,
    form: ConditionForm,
    cfg: &ClassifierConfig,
) -> Result<ConvergenceVerdict> {
    let (phi_p, hlog) = power_compose(phi, p)?;
    let t0 = zero_set_end(&phi_p);
    if !(delta > t0) || !(phi_p.eval(delta) > 0.0) {
        bail!(
            Precondition,
            "delta = {delta} must exceed t0 = sup{{t : Φ_p(t) = 0}} = {t0}"
        );
    }
    let quad = QuadConfig::rel(1e-10);
    // H(e^u)
    let h_at = |u: f64| hlog.eval_at_log(u);
    let ln_delta = ln(delta);
    // first point where H >= 0 (Φ_p >= 1)
    let t_plus = phi_p.inverse(1.0);
    let name = form.name();
    let verdict = match form {
        ConditionForm::DerivativeOverT => {
            let ln_f = |u: f64| {
                let h = 1e-4 * u.abs().max(1.0);
                let d = richardson_derivative(h_at, u, h);
                if d.is_nan() || d <= 0.0 {
                    if h_at(u) == f64::INFINITY {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    ln(d) - 2.0 * u
                }
            };
            classify_tail(
                name,
                &Tail {
                    ln_f: &ln_f,
                    u0: ln_delta,
                    u_limit: f64::INFINITY,
                    head: 0.0,
                },
                cfg,
            )
        }
        ConditionForm::Stieltjes => {
            let q = 1e-4;
            let lq = crate::math::ln1p(q);
            let ln_f = |u: f64| {
                let a = h_at(u);
                let b = h_at(u + lq);
                if b == f64::INFINITY {
                    return f64::INFINITY;
                }
                let dh = if a == f64::NEG_INFINITY { b } else { b - a };
                if !(dh > 0.0) {
                    f64::NEG_INFINITY
                } else {
                    ln(dh) - 2.0 * u - ln(q)
                }
            };
            let mut v = classify_tail(
                name,
                &Tail {
                    ln_f: &ln_f,
                    u0: ln_delta,
                    u_limit: f64::INFINITY,
                    head: 0.0,
                },
                cfg,
            );
            // the partial value itself comes from refined Riemann–Stieltjes sums
            let rs = stieltjes_sum(&h_at, ln_delta, ln(v.cutoff), 1e-6);
            if v.classification != Classification::Divergent || rs.is_finite() {
                if v.value_estimate.is_finite() {
                    v.value_estimate += rs - v.partial_value;
                }
                v.partial_value = rs;
            }
            v
        }
        ConditionForm::OverTSquared => {
            let (head, u0) = signed_head(&|t: f64| hlog.eval(t) / (t * t), delta, t_plus, &quad);
            let ln_f = |u: f64| {
                let h = h_at(u);
                if h > 0.0 {
                    ln(h) - 2.0 * u
                } else if h == f64::INFINITY {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            };
            if u0 == f64::INFINITY {
                negative_everywhere(name, head, cfg)
            } else {
                classify_tail(
                    name,
                    &Tail {
                        ln_f: &ln_f,
                        u0,
                        u_limit: f64::INFINITY,
                        head,
                    },
                    cfg,
                )
            }
        }
        ConditionForm::Reciprocal => {
            // ∫_0^Δ H(1/r) dr with Δ = 1/δ, integrated near r = 0
            let big_delta = 1.0 / delta;
            let r_plus = if t_plus.is_finite() && t_plus > 0.0 {
                1.0 / t_plus
            } else if t_plus == 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            let head = if r_plus < big_delta {
                integrate(|r: f64| hlog.eval(1.0 / r), r_plus, big_delta, &quad).value
            } else {
                0.0
            };
            if r_plus == 0.0 {
                negative_everywhere(
                    name,
                    integrate(|r: f64| hlog.eval(1.0 / r), 0.0, big_delta, &quad).value,
                    cfg,
                )
            } else {
                let r_max = r_plus.min(big_delta);
                let ln_f = |v: f64| {
                    let h = h_at(-v);
                    if h > 0.0 {
                        ln(h)
                    } else if h == f64::INFINITY {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    }
                };
                classify_zero_end(name, &ln_f, r_max, f64::INFINITY, head, cfg)
            }
        }
        ConditionForm::LogInverse => {
            // H^{-1}(η) = Φ_p^{-1}(e^η) = exp(ln Φ^{-1}(e^η) / p)
            let h0 = phi_p.ln_eval_at_log(f64::NEG_INFINITY).max(h_at(-745.0));
            let start = if h_at(ln_delta) > h0 {
                h_at(ln_delta)
            } else {
                h0 + 1.0
            };
            let inv = |eta: f64| exp(phi.ln_inverse_at_log(eta) / p);
            let (head, u0) = if start < 1.0 {
                (
                    integrate(|eta: f64| 1.0 / inv(eta), start, 1.0, &quad).value,
                    0.0,
                )
            } else {
                (0.0, ln(start))
            };
            let ln_f = |u: f64| -phi.ln_inverse_at_log(exp(u)) / p;
            classify_tail(
                name,
                &Tail {
                    ln_f: &ln_f,
                    u0,
                    u_limit: 690.0,
                    head,
                },
                cfg,
            )
        }
        ConditionForm::Inverse => {
            let phi0 = phi.eval(0.0);
            let at_delta = phi_p.eval(delta);
            let start = if at_delta > phi0 {
                at_delta
            } else {
                phi0 + 1.0
            };
            let ln_f = |u: f64| -u - phi.ln_inverse_at_log(u) / p;
            classify_tail(
                name,
                &Tail {
                    ln_f: &ln_f,
                    u0: ln(start),
                    u_limit: f64::INFINITY,
                    head: 0.0,
                },
                cfg,
            )
        }
    };
    Ok(verdict)
}

// Signed part of an integral below the point where the integrand turns
// nonnegative: returns (∫_δ^{t+} f, ln max(δ, t+)); `u0 = inf` when it never does.
fn signed_head(f: &dyn Fn(f64) -> f64, delta: f64, t_plus: f64, quad: &QuadConfig) -> (f64, f64) {
    if t_plus == f64::INFINITY {
        let v = crate::numeric::integrate_to_infinity(f, delta, quad).value;
        return (v, f64::INFINITY);
    }
    if t_plus > delta {
        let v = integrate(|u: f64| f(exp(u)) * exp(u), ln(delta), ln(t_plus), quad).value;
        (v, ln(t_plus))
    } else {
        (0.0, ln(delta))
    }
}

fn negative_everywhere(name: &str, value: f64, cfg: &ClassifierConfig) -> ConvergenceVerdict {
    ConvergenceVerdict {
        condition: String::from(name),
        classification: Classification::Convergent,
        partial_value: value,
        value_estimate: value,
        tail_exponent: f64::NEG_INFINITY,
        tier: 0,
        cutoff: cfg.cutoff,
        margin: cfg.margin,
        evidence: String::from("integrand never positive; the integral is finite"),
    }
}

// Riemann–Stieltjes sums of dH/t on geometric partitions of [e^{ua}, e^{ub}],
// tags at geometric midpoints, refined until two successive sums agree.
fn stieltjes_sum(h_at: &dyn Fn(f64) -> f64, ua: f64, ub: f64, rel: f64) -> f64 {
    let sum = |m: usize| -> f64 {
        let step = (ub - ua) / m as f64;
        let mut s = 0.0;
        let mut prev = h_at(ua);
        for i in 0..m {
            let u1 = ua + step * (i + 1) as f64;
            let cur = h_at(u1);
            if cur == f64::INFINITY {
                return f64::INFINITY;
            }
            if prev.is_finite() {
                s += (cur - prev) * exp(-(u1 - 0.5 * step));
            }
            prev = cur;
        }
        s
    };
    let mut m = 1024;
    let mut last = sum(m);
    while m < (1 << 22) {
        m *= 2;
        let cur = sum(m);
        if !cur.is_finite() {
            return cur;
        }
        if (cur - last).abs() <= rel * cur.abs().max(1e-300) {
            return cur;
        }
        last = cur;
    }
    last
}

/// All six forms for `Φ_p`; for convex `Φ` the classifications must agree.
pub fn condition_equivalence_report(
    phi: &OrliczFunction,
    p: f64,
    delta: f64,
    cfg: &ClassifierConfig,
) -> Result<Vec<ConvergenceVerdict>> {
    ConditionForm::ALL
        .iter()
        .map(|f| classify_form(phi, p, delta, *f, cfg))
        .collect()
}

/// True when every verdict carries the same classification.
pub fn verdicts_agree(v: &[ConvergenceVerdict]) -> bool {
    v.windows(2)
        .all(|w| w[0].classification == w[1].classification)
}

/// `∫_{δ0}^∞ dτ / (τ [Φ^{-1}(τ)]^{1/p})`.
pub fn inverse_tail_condition(
    phi: &OrliczFunction,
    p: f64,
    delta0: f64,
    cfg: &ClassifierConfig,
) -> Result<ConvergenceVerdict> {
    if !(delta0 > phi.eval(0.0)) {
        bail!(
            Precondition,
            "δ0 = {delta0} must exceed Φ(0) = {}",
            phi.eval(0.0)
        );
    }
    if !(p > 0.0) {
        bail!(Domain, "p must be positive");
    }
    let ln_f = |u: f64| -u - phi.ln_inverse_at_log(u) / p;
    Ok(classify_tail(
        "inverse tail",
        &Tail {
            ln_f: &ln_f,
            u0: ln(delta0),
            u_limit: f64::INFINITY,
            head: 0.0,
        },
        cfg,
    ))
}

/// `∫_0^{r_max} dr / (r q^{1/p}(r))`.
pub fn lehto_integral(
    w: &RadialWeight,
    p: f64,
    r_max: f64,
    cfg: &ClassifierConfig,
) -> Result<ConvergenceVerdict> {
    if !(p > 0.0) || !(r_max > 0.0) {
        bail!(Domain, "p and r_max must be positive");
    }
    let ln_f = |v: f64| -v - w.ln_q_at_log(v) / p;
    let mut verdict = classify_zero_end("lehto", &ln_f, r_max, f64::INFINITY, 0.0, cfg);
    if (1..64)
        .map(|i| r_max * i as f64 / 64.0)
        .any(|r| w.q(r) <= 0.0)
    {
        verdict.classification = Classification::Divergent;
        verdict.value_estimate = f64::INFINITY;
        verdict.evidence = format!(
            "q vanishes on part of (0, {r_max}); integrand infinite there. {}",
            verdict.evidence
        );
    }
    Ok(verdict)
}

/// `∫_0^{δ_max} dr / ‖Q‖_{n-1}(x0, r)`; divergence means the extension criterion holds.
pub fn boundary_criterion(
    w: &RadialWeight,
    delta_max: f64,
    cfg: &ClassifierConfig,
) -> Result<ConvergenceVerdict> {
    if !(delta_max > 0.0) {
        bail!(Domain, "δ_max must be positive");
    }
    let v_limit = if w.full.is_some() {
        700.0
    } else {
        f64::INFINITY
    };
    let ln_f = |v: f64| -w.ln_surface_norm_at_log(v);
    let mut verdict = classify_zero_end("boundary criterion", &ln_f, delta_max, v_limit, 0.0, cfg);
    if (1..64)
        .map(|i| delta_max * i as f64 / 64.0)
        .any(|r| w.q(r) <= 0.0)
    {
        verdict.classification = Classification::Divergent;
        verdict.value_estimate = f64::INFINITY;
        verdict.evidence = format!(
            "norm profile vanishes on part of (0, {delta_max}). {}",
            verdict.evidence
        );
    }
    Ok(verdict)
}

/// Truncations used by the two-sided comparison of the weighted log integral
/// with the inverse-gauge tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogIntegralConfig {
    /// Inner truncation `δ` of `∫ dr/(r q^{1/p})` (outer end at `1 - δ`).
    pub delta: f64,
    /// Upper truncation of the `τ` integral.
    pub tau_max: f64,
    pub tolerance: f64,
}

impl Default for LogIntegralConfig {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            tau_max: 1e12,
            tolerance: 1e-6,
        }
    }
}

/// Ball average `M` of `Φ∘Q` over the unit ball.
pub fn ball_average(w: &RadialWeight, phi: &OrliczFunction) -> f64 {
    let n = w.n as f64;
    let rule = if w.full.is_some() {
        Some(SphereRule::new(w.n, 16))
    } else {
        None
    };
    let integrand = |r: f64| {
        let m = match &rule {
            None => phi.eval(w.q(r)),
            Some(rule) => rule.mean(|x| phi.eval(w.eval_point(x)), &w.center, r),
        };
        n * powf(r, n - 1.0) * m
    };
    integrate(integrand, 0.0, 1.0, &QuadConfig::rel(1e-10)).value
}

/// `∫_δ^{1-δ} dr/(r q^{1/p}) >= (1/n) ∫_{eM}^{τ_max} dτ/(τ [Φ^{-1}(τ)]^{1/p})`.
pub fn log_integral_bound_check(
    w: &RadialWeight,
    phi: &OrliczFunction,
    p: f64,
    lc: &LogIntegralConfig,
) -> Result<VerificationReport> {
    let anchor = "weighted log integral dominates (1/n) times the inverse-gauge tail from eM";
    if !(p > 0.0) {
        return Err(Error::Domain(String::from("p must be positive")));
    }
    let lhs_q = ln_integrate(
        |v: f64| -w.ln_q_at_log(v) / p,
        ln(lc.delta),
        crate::math::ln1p(-lc.delta),
        1e-10,
        4000,
    );
    let m = ball_average(w, phi);
    let lower = E * m;
    let rhs_q = ln_integrate(
        |u: f64| -phi.ln_inverse_at_log(u) / p,
        ln(lower),
        ln(lc.tau_max),
        1e-10,
        4000,
    );
    let n = w.n as f64;
    let lhs = exp(lhs_q.ln_value);
    let rhs = exp(rhs_q.ln_value) / n;
    let mut r = VerificationReport::compare(
        "log integral bound",
        anchor,
        lhs,
        Relation::Ge,
        rhs,
        lc.tolerance,
    )
    .with_note(format!(
        "M = {m:.6e}; truncations delta = {:e}, tau_max = {:e}",
        lc.delta, lc.tau_max
    ));
    if !lhs_q.converged || !rhs_q.converged || !m.is_finite() {
        if lhs.is_finite() && rhs.is_finite() {
            r = r.mark_inconclusive("quadrature did not reach tolerance");
        } else if lhs == f64::INFINITY && rhs.is_finite() {
            r.note = String::from("left side infinite at the truncation; inequality holds");
        } else {
            r = VerificationReport::inconclusive(
                "log integral bound",
                anchor,
                "quadrature failure",
            );
        }
    }
    Ok(r)
}

/// One weight/gauge/exponent triple for the two-sided log-integral comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct LogIntegralCase {
    pub name: String,
    pub weight: RadialWeight,
    pub phi: OrliczFunction,
    pub p: f64,
}

/// Five pairs covering constant, power, logarithmic and non-radial weights
/// against linear, power and exponential gauges.
pub fn log_integral_battery() -> Result<Vec<LogIntegralCase>> {
    use crate::orlicz::Gauge;
    use crate::weight::{FullWeight, Profile};
    let case = |name: &str, weight: RadialWeight, g: Gauge, p: f64| -> Result<LogIntegralCase> {
        Ok(LogIntegralCase {
            name: String::from(name),
            weight,
            phi: OrliczFunction::general(g)?,
            p,
        })
    };
    Ok(alloc::vec![
        case(
            "unit-weight-linear",
            RadialWeight::constant(2, 1.0),
            Gauge::Power { p: 1.0 },
            1.0
        )?,
        case(
            "log-weight-exponential",
            RadialWeight::new(2, Profile::LogPower { c: 1.0, s: 1.0 })?,
            Gauge::ExpPower { a: 1.0 },
            1.0,
        )?,
        case(
            "constant-weight-quadratic",
            RadialWeight::constant(3, 2.0),
            Gauge::Power { p: 2.0 },
            2.0
        )?,
        case(
            "dipole-power-weight-linear",
            RadialWeight::new(3, Profile::Power { c: 1.0, a: -0.5 })?
                .with_full(FullWeight::Dipole { amplitude: 0.5 })?,
            Gauge::Power { p: 1.0 },
            1.0,
        )?,
        case(
            "root-log-weight-gaussian",
            RadialWeight::new(2, Profile::LogPower { c: 1.0, s: 0.5 })?,
            Gauge::ExpPowerM1 { a: 2.0 },
            2.0,
        )?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::Gauge;
    use crate::weight::Profile;
    use alloc::boxed::Box;

    fn f(g: Gauge) -> OrliczFunction {
        OrliczFunction::general(g).unwrap()
    }

    fn cfg() -> ClassifierConfig {
        ClassifierConfig::default()
    }

    #[test]
    fn calderon_power_examples() {
        let v = calderon_condition(&f(Gauge::Power { p: 3.0 }), 2, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Convergent);
        let v = calderon_condition(&f(Gauge::Power { p: 2.0 }), 2, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Divergent);
        assert!(v.tier >= 1);
    }

    #[test]
    fn a_star_closed_forms() {
        let a = a_star(&f(Gauge::Power { p: 3.0 }), 2, &cfg()).unwrap();
        assert!((a - 2.0).abs() < 1e-8, "{a}");
        let a = a_star(&f(Gauge::Power { p: 4.0 }), 2, &cfg()).unwrap();
        assert!((a - 1.5).abs() < 1e-8, "{a}");
        assert!(a_star(&f(Gauge::Power { p: 3.0 }), 3, &cfg()).is_err());
    }

    #[test]
    fn calderon_rejects_vanishing_gauge() {
        let t = Gauge::table(alloc::vec![0.0, 2.0, 3.0], alloc::vec![0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            calderon_condition(&f(t), 2, &cfg()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn powlog_value_against_substitution_oracle() {
        // ∫_1^∞ dt/(t ln²(e+t)) by an independent route: s = ln t on a
        // semi-infinite map with plain doubles
        let phi = f(Gauge::PowerLog { p: 2.0, s: 2.0 });
        let v = calderon_condition(&phi, 2, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Convergent);
        let oracle = crate::numeric::integrate_to_infinity(
            |s: f64| {
                let t = s.exp();
                if !t.is_finite() {
                    // ln(e + t) = s for huge t
                    return 1.0 / (s * s);
                }
                1.0 / (E + t).ln().powi(2)
            },
            0.0,
            &QuadConfig::rel(1e-12),
        )
        .value;
        assert!(
            (v.value_estimate / oracle - 1.0).abs() < 0.01,
            "{} vs {oracle}",
            v.value_estimate
        );
        let truncated = integrate(
            |s: f64| 1.0 / (E + s.exp()).ln().powi(2),
            0.0,
            1e12f64.ln(),
            &QuadConfig::rel(1e-12),
        )
        .value;
        assert!((v.partial_value / truncated - 1.0).abs() < 1e-8);
    }

    #[test]
    fn six_forms_examples() {
        let e = f(Gauge::ExpPowerM1 { a: 1.0 });
        let v = condition_equivalence_report(&e, 2.0, 1.0, &cfg()).unwrap();
        assert!(
            v.iter()
                .all(|x| x.classification == Classification::Divergent),
            "{v:#?}"
        );
        let lin = f(Gauge::Power { p: 1.0 });
        let v = condition_equivalence_report(&lin, 1.0, 1.0, &cfg()).unwrap();
        assert!(
            v.iter()
                .all(|x| x.classification == Classification::Convergent),
            "{v:#?}"
        );
        let c = f(Gauge::Constant { c: 1.0 });
        let v = condition_equivalence_report(&c, 1.0, 1.0, &cfg()).unwrap();
        assert!(
            v.iter()
                .all(|x| x.classification == Classification::Convergent),
            "{v:#?}"
        );
    }

    #[test]
    fn six_forms_values_for_linear_gauge() {
        // Φ = t, p = 1, δ = 1: H = ln t
        let lin = f(Gauge::Power { p: 1.0 });
        let v = condition_equivalence_report(&lin, 1.0, 1.0, &cfg()).unwrap();
        // ∫_1^∞ dt/t² = 1 for the derivative and Stieltjes forms
        assert!((v[0].value_estimate - 1.0).abs() < 1e-6, "{:?}", v[0]);
        assert!((v[1].partial_value - 1.0).abs() < 1e-5, "{:?}", v[1]);
        // ∫_1^∞ ln t/t² = 1, ∫_0^1 ln(1/t) dt = 1
        assert!((v[2].value_estimate - 1.0).abs() < 1e-6, "{:?}", v[2]);
        assert!((v[3].value_estimate - 1.0).abs() < 1e-6, "{:?}", v[3]);
        // ∫_0^∞ e^{-η} dη = 1; ∫_1^∞ dτ/τ² = 1
        assert!((v[4].value_estimate - 1.0).abs() < 1e-6, "{:?}", v[4]);
        assert!((v[5].value_estimate - 1.0).abs() < 1e-6, "{:?}", v[5]);
    }

    #[test]
    fn delta_below_zero_set_is_rejected() {
        let t = Gauge::table(alloc::vec![0.0, 2.0, 3.0], alloc::vec![0.0, 0.0, 1.0]).unwrap();
        let phi = f(t);
        assert!(matches!(
            condition_equivalence_report(&phi, 1.0, 1.0, &cfg()),
            Err(Error::Precondition(_))
        ));
        assert!(condition_equivalence_report(&phi, 1.0, 2.5, &cfg()).is_ok());
    }

    #[test]
    fn inverse_tail_examples() {
        let e = f(Gauge::ExpPower { a: 1.0 });
        let v = inverse_tail_condition(&e, 2.0, E, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Divergent);
        // oracle: antiderivative 2√(ln τ), so the partial value is 2(√ln T − 1)
        let oracle = 2.0 * (v.cutoff.ln().sqrt() - 1.0);
        assert!((v.partial_value / oracle - 1.0).abs() < 1e-8);
        let e2 = f(Gauge::ExpPower { a: 2.0 });
        assert_eq!(
            inverse_tail_condition(&e2, 1.0, E, &cfg())
                .unwrap()
                .classification,
            Classification::Divergent
        );
        let ee = f(Gauge::DoubleExp);
        let v = inverse_tail_condition(&ee, 1.0, E.exp(), &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Divergent);
        // Φ = t^3, p = 1: integrand τ^{-4/3}, value 3 δ0^{-1/3}
        let c = f(Gauge::Power { p: 3.0 });
        let v = inverse_tail_condition(&c, 1.0, 2.0, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Convergent);
        assert!((v.value_estimate - 3.0 * 2f64.powf(-1.0 / 3.0)).abs() < 1e-6);
        assert!(inverse_tail_condition(&e, 1.0, 0.5, &cfg()).is_err());
    }

    #[test]
    fn lehto_examples() {
        let one = RadialWeight::constant(2, 1.0);
        assert_eq!(
            lehto_integral(&one, 1.0, 1.0, &cfg())
                .unwrap()
                .classification,
            Classification::Divergent
        );
        let log2 = RadialWeight::new(2, Profile::LogPower { c: 1.0, s: 2.0 }).unwrap();
        let v = lehto_integral(&log2, 1.0, 1.0 / E, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Convergent);
        // antiderivative 1/ln(1/r): value 1 on (0, 1/e)
        assert!((v.value_estimate - 1.0).abs() < 1e-3, "{v:?}");
        let logn = RadialWeight::new(3, Profile::LogPower { c: 1.0, s: 2.0 }).unwrap();
        assert_eq!(
            lehto_integral(&logn, 2.0, 1.0 / E, &cfg())
                .unwrap()
                .classification,
            Classification::Divergent
        );
    }

    #[test]
    fn boundary_examples() {
        let one = RadialWeight::constant(3, 1.0);
        assert_eq!(
            boundary_criterion(&one, 0.5, &cfg())
                .unwrap()
                .classification,
            Classification::Divergent
        );
        let sing = RadialWeight::new(3, Profile::Power { c: 1.0, a: -2.0 }).unwrap();
        let v = boundary_criterion(&sing, 0.5, &cfg()).unwrap();
        assert_eq!(v.classification, Classification::Convergent);
        // ‖Q‖_2(r) = √(4π)/r: value ∫_0^{1/2} r dr/√(4π) = 1/(16√π)
        let oracle = 1.0 / (16.0 * crate::math::PI.sqrt());
        assert!((v.value_estimate / oracle - 1.0).abs() < 1e-8);
        let log = RadialWeight::new(3, Profile::LogPower { c: 1.0, s: 1.0 }).unwrap();
        assert_eq!(
            boundary_criterion(&log, 0.5, &cfg())
                .unwrap()
                .classification,
            Classification::Divergent
        );
    }

    #[test]
    fn log_integral_bound_examples() {
        let lc = LogIntegralConfig::default();
        let lin = f(Gauge::Power { p: 1.0 });
        let r = log_integral_bound_check(&RadialWeight::constant(2, 1.0), &lin, 1.0, &lc).unwrap();
        assert!(r.passed());
        // closed forms: LHS = ln((1-δ)/δ), RHS = (1/2)(1/e − 1/τ_max)
        let lhs = ((1.0 - lc.delta) / lc.delta).ln();
        let rhs = 0.5 * (1.0 / E - 1.0 / lc.tau_max);
        assert!(
            (r.lhs / lhs - 1.0).abs() < 1e-9 && (r.rhs / rhs - 1.0).abs() < 1e-9,
            "{r:?}"
        );
        let e = f(Gauge::ExpPower { a: 1.0 });
        let w = RadialWeight::new(2, Profile::LogPower { c: 1.0, s: 1.0 }).unwrap();
        let r = log_integral_bound_check(&w, &e, 1.0, &lc).unwrap();
        assert!(r.passed(), "{r:?}");
        // M = 2 (average of 1/|x|); RHS = (ln ln τ_max − ln ln 2e)/2
        let rhs = 0.5 * (lc.tau_max.ln().ln() - (2.0 * E).ln().ln());
        assert!((r.rhs / rhs - 1.0).abs() < 1e-8, "{} vs {rhs}", r.rhs);
    }

    #[test]
    fn ball_average_with_dipole_matches_radial() {
        let base = RadialWeight::new(3, Profile::Power { c: 1.0, a: -0.5 }).unwrap();
        let lin = f(Gauge::Power { p: 1.0 });
        let dip = base
            .clone()
            .with_full(crate::weight::FullWeight::Dipole { amplitude: 0.5 })
            .unwrap();
        let a = ball_average(&base, &lin);
        let b = ball_average(&dip, &lin);
        // Φ linear: the dipole factor averages out; 3∫ r^{1.5} dr = 6/5
        assert!((a - 1.2).abs() < 1e-8 && (b - 1.2).abs() < 1e-8, "{a} {b}");
        let _ = Box::new(0);
    }
}
