//! Adaptive Gauss–Kronrod quadrature (21-point rule, global subdivision).
#![allow(clippy::excessive_precision)]

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::math::{exp, fabs, ln, ln_add};

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
    0.123_491_976_262_065_851_077_600_525_478_260,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// One 21-point Kronrod step on `[a, b]`: (Kronrod value, |Kronrod - Gauss|).
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[10] * fc;
    let mut g = 0.0;
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, fabs((k - g) * h))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
///
/// A non-finite panel value stops the refinement and is returned as is, so a
/// divergent integrand shows up as `inf`/`NaN` with `converged = false`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if b < a {
        let r = integrate(f, b, a, cfg);
        return QuadResult {
            value: -r.value,
            ..r
        };
    }
    let (v, e) = gk21(&f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    let mut total = v;
    let mut err = e;
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
    });
    while heap.len() < cfg.max_intervals {
        if !total.is_finite() {
            return QuadResult {
                value: total,
                error: f64::INFINITY,
                evaluations,
                converged: false,
            };
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * fabs(total)) {
            return QuadResult {
                value: total,
                error: err,
                evaluations,
                converged: true,
            };
        }
        let p = heap.pop().expect("non-empty");
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            // interval cannot be split further in floating point
            heap.push(p);
            break;
        }
        let (v1, e1) = gk21(&f, p.a, m);
        let (v2, e2) = gk21(&f, m, p.b);
        evaluations += 42;
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
    // recompute the sums from scratch to shed accumulated cancellation
    let total: f64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.error).sum();
    let converged = total.is_finite() && err <= cfg.abs_tol.max(cfg.rel_tol * fabs(total));
    QuadResult {
        value: total,
        error: err,
        evaluations,
        converged,
    }
}

/// `∫_a^∞ f`, through `t = a + (1 - u)/u` on `(0, 1]`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadConfig) -> QuadResult {
    integrate(
        |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let t = a + (1.0 - u) / u;
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                v / (u * u)
            }
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Result of a log-space integration: `ln ∫ e^{g}` and its relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnQuadResult {
    pub ln_value: f64,
    pub rel_error: f64,
    pub converged: bool,
}

struct LnPanel {
    a: f64,
    b: f64,
    ln_value: f64,
    rel_error: f64,
    weight: f64,
}

impl PartialEq for LnPanel {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight
    }
}
impl Eq for LnPanel {}
impl PartialOrd for LnPanel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for LnPanel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.total_cmp(&other.weight)
    }
}

// Log of the absolute error of a panel; all-zero panels rank by width far below any
// panel carrying mass.
fn ln_weight(a: f64, b: f64, ln_value: f64, rel_error: f64) -> f64 {
    if ln_value == f64::NEG_INFINITY || rel_error == 0.0 {
        ln(b - a) - 1e6
    } else {
        ln_value + ln(rel_error)
    }
}

fn ln_gk21<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut vals = [0.0f64; 21];
    vals[0] = g(c);
    for j in 0..10 {
        let dx = h * XGK[j];
        vals[1 + 2 * j] = g(c - dx);
        vals[2 + 2 * j] = g(c + dx);
    }
    let shift = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return (f64::NEG_INFINITY, 0.0);
    }
    if !shift.is_finite() {
        return (shift, f64::INFINITY);
    }
    let mut k = WGK[10] * exp(vals[0] - shift);
    let mut gs = 0.0;
    for j in 0..10 {
        let s = exp(vals[1 + 2 * j] - shift) + exp(vals[2 + 2 * j] - shift);
        k += WGK[j] * s;
        if j % 2 == 1 {
            gs += WG[j / 2] * s;
        }
    }
    if k <= 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    (shift + ln(k * h), fabs(k - gs) / k)
}

/// `ln ∫_a^b e^{g(x)} dx` for integrands whose magnitude over- or underflows.
///
/// `g` returns the logarithm of a nonnegative integrand (`-inf` for zero).
pub fn ln_integrate<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> LnQuadResult {
    if !(b > a) {
        return LnQuadResult {
            ln_value: f64::NEG_INFINITY,
            rel_error: 0.0,
            converged: true,
        };
    }
    let (v, e) = ln_gk21(&g, a, b);
    let mut panels = BinaryHeap::new();
    panels.push(LnPanel {
        a,
        b,
        ln_value: v,
        rel_error: e,
        weight: ln_weight(a, b, v, e),
    });
    let mut ln_total = v;
    loop {
        if ln_total == f64::INFINITY || ln_total.is_nan() {
            return LnQuadResult {
                ln_value: ln_total,
                rel_error: f64::INFINITY,
                converged: false,
            };
        }
        if ln_total == f64::NEG_INFINITY {
            // all samples zero so far; refine a few times to look for mass
            if panels.len() >= 64 {
                return LnQuadResult {
                    ln_value: ln_total,
                    rel_error: 0.0,
                    converged: true,
                };
            }
        } else {
            let err: f64 = panels
                .iter()
                .map(|p| exp(p.ln_value - ln_total) * p.rel_error)
                .sum();
            if err <= rel_tol {
                return LnQuadResult {
                    ln_value: ln_total,
                    rel_error: err,
                    converged: true,
                };
            }
            if panels.len() >= max_intervals {
                return LnQuadResult {
                    ln_value: ln_total,
                    rel_error: err,
                    converged: false,
                };
            }
        }
        let p = panels.pop().expect("non-empty");
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            panels.push(p);
            let err: f64 = panels
                .iter()
                .map(|q| exp(q.ln_value - ln_total) * q.rel_error)
                .sum();
            return LnQuadResult {
                ln_value: ln_total,
                rel_error: err,
                converged: false,
            };
        }
        let (v1, e1) = ln_gk21(&g, p.a, m);
        let (v2, e2) = ln_gk21(&g, m, p.b);
        panels.push(LnPanel {
            a: p.a,
            b: m,
            ln_value: v1,
            rel_error: e1,
            weight: ln_weight(p.a, m, v1, e1),
        });
        panels.push(LnPanel {
            a: m,
            b: p.b,
            ln_value: v2,
            rel_error: e2,
            weight: ln_weight(m, p.b, v2, e2),
        });
        ln_total = panels
            .iter()
            .fold(f64::NEG_INFINITY, |acc, q| ln_add(acc, q.ln_value));
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton on the Legendre recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = crate::math::cos(crate::math::PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if fabs(dz) < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fixed Gauss–Legendre rule mapped to `[a, b]`.
#[derive(Debug, Clone)]
pub struct FixedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FixedRule {
    pub fn gauss(n: usize, a: f64, b: f64) -> Self {
        let (x, w) = gauss_legendre(n);
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        Self {
            nodes: x.iter().map(|xi| c + h * xi).collect(),
            weights: w.iter().map(|wi| h * wi).collect(),
        }
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk21_exact_for_polynomials_to_degree_31() {
        // Kronrod-21 integrates x^d exactly for d <= 31
        for d in [0u32, 1, 5, 10, 20, 31] {
            let (v, _) = gk21(&|x: f64| x.powi(d as i32), 0.0, 1.0);
            assert!(
                (v - 1.0 / (d as f64 + 1.0)).abs() < 1e-15,
                "degree {d}: {v}"
            );
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &QuadConfig::rel(1e-10));
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
        let r = integrate(|x: f64| -x.ln(), 0.0, 1.0, &QuadConfig::rel(1e-12));
        assert!((r.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(|t: f64| (-t).exp(), 0.0, &QuadConfig::default());
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_to_infinity(|t: f64| 1.0 / (t * t), 1.0, &QuadConfig::default());
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_space_integral_of_huge_integrand() {
        // ∫_0^1000 e^x dx = e^1000 - 1
        let r = ln_integrate(|x| x, 0.0, 1000.0, 1e-12, 4000);
        assert!(r.converged);
        assert!((r.ln_value - 1000.0).abs() < 1e-10, "{r:?}");
        let r = ln_integrate(|x: f64| -x, 0.0, 2.0, 1e-13, 4000);
        assert!((r.ln_value - (1.0 - (-2.0f64).exp()).ln()).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_weights_and_exactness() {
        for n in [1usize, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
            let d = 2 * n - 1;
            let v: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * xi.powi(d as i32 - 1))
                .sum();
            let exact = if (d - 1) % 2 == 0 {
                2.0 / d as f64
            } else {
                0.0
            };
            assert!((v - exact).abs() < 1e-13, "n={n}");
        }
    }
}
