//! Calderon's extremal radial profile for a gauge with divergent integral
//! `∫_1^∞ [t/φ(t)]^{1/(k-1)} dt`, and the diameter and area bounds that hold
//! when that integral converges.
//!
//! `Φ(t) = ∫_1^t [τ/φ(τ)]^{1/(k-1)} dτ`, `Ψ = Φ'/Φ`, `h = Ψ^{-1}`,
//! `F(t) = ∫_t^1 [h(s) - h(1)] ds` on `[0, 1]` and 0 beyond.
//!
//! Everything is kept in log coordinates: `μ = ln t` on the `Φ, Ψ` side,
//! `w = ln s` on the `h, F` side. `ln Φ` and `F` are cumulative sums over
//! node grids with an 8-point Gauss rule on each cell, so evaluations are
//! cheap and remain valid far below the smallest positive double.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::constants::ConstantsConfig;
use crate::error::{bail, Result};
use crate::integral::{
    a_star, calderon_condition, classify_zero_end_log, Classification, ClassifierConfig,
    ConvergenceVerdict,
};
use crate::math::{exp, ln, ln_add, ln_sub, powf};
use crate::numeric::quad::gauss_legendre;
use crate::numeric::roots::brent;
use crate::numeric::{geomspace, integrate, ln_integrate, unit_sphere_area, QuadConfig};
use crate::orlicz::OrliczFunction;
use crate::report::{Relation, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Keep `F` and record its total energy.
    Report,
    /// Replace `F` by `F/c` with the smallest `c >= 1` making the energy at most 1.
    Rescale,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalConfig {
    /// Right end of the `Φ, Ψ` tables.
    pub t_max: f64,
    /// Left end of the `h` and `F` tables.
    pub s_min: f64,
    /// Nodes per exported table.
    pub nodes: usize,
    pub normalization: Normalization,
    /// Smallest `ln s` at which `h` and `F` are kept on the node grid.
    pub log_floor: f64,
}

impl Default for ExtremalConfig {
    fn default() -> Self {
        Self {
            t_max: 1e8,
            s_min: 1e-8,
            nodes: 4096,
            normalization: Normalization::Report,
            log_floor: -2e4,
        }
    }
}

/// Sampled `(x, y)` pairs, `x` increasing.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfileTables {
    pub phi_big: Table,
    pub psi: Table,
    pub h: Table,
    pub f: Table,
}

// Node caches; rebuilt on load, never serialized.
#[derive(Debug, Clone, PartialEq, Default)]
struct Grid {
    gx: Vec<f64>,
    gw: Vec<f64>,
    mu: Vec<f64>,
    ln_cum: Vec<f64>,
    ln_psi: Vec<f64>,
    ln_h1: f64,
    w: Vec<f64>,
    f_cum: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedProfile {
    pub phi: OrliczFunction,
    pub k: usize,
    pub config: ExtremalConfig,
    pub scale: f64,
    pub raw_energy: f64,
    pub energy: f64,
    pub tables: ProfileTables,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SavedProfile", into = "SavedProfile")]
pub struct ExtremalProfile {
    pub phi: OrliczFunction,
    pub k: usize,
    pub config: ExtremalConfig,
    /// Divisor `c` applied to `F` (1 unless rescaled).
    pub scale: f64,
    /// Total energy `∫ φ(|∇F_*|)` before rescaling.
    pub raw_energy: f64,
    /// Total energy after rescaling.
    pub energy: f64,
    pub tables: ProfileTables,
    grid: Grid,
}

impl TryFrom<SavedProfile> for ExtremalProfile {
    type Error = crate::Error;

    fn try_from(s: SavedProfile) -> Result<Self> {
        if s.k < 2 || !(s.scale >= 1.0) {
            bail!(
                Validation,
                "saved profile has k = {} and scale = {}",
                s.k,
                s.scale
            );
        }
        let mut p = ExtremalProfile::skeleton(s.phi, s.k, s.config);
        p.scale = s.scale;
        p.raw_energy = s.raw_energy;
        p.energy = s.energy;
        p.tables = s.tables;
        Ok(p)
    }
}

impl From<ExtremalProfile> for SavedProfile {
    fn from(p: ExtremalProfile) -> Self {
        SavedProfile {
            phi: p.phi,
            k: p.k,
            config: p.config,
            scale: p.scale,
            raw_energy: p.raw_energy,
            energy: p.energy,
            tables: p.tables,
        }
    }
}

const MU_START: f64 = 1e-9;

/// Build the profile. Fails unless `φ` is convex with `φ(0) = 0` and the
/// Calderon integral diverges.
pub fn build_profile(
    phi: &OrliczFunction,
    k: usize,
    config: &ExtremalConfig,
) -> Result<ExtremalProfile> {
    if !phi.zero_at_zero || !phi.convex {
        bail!(
            Precondition,
            "the extremal profile needs a convex gauge with φ(0) = 0"
        );
    }
    let verdict = calderon_condition(phi, k, &ClassifierConfig::default())?;
    match verdict.classification {
        Classification::Divergent => {}
        Classification::Convergent => bail!(
            Precondition,
            "calderon integral converges (value ≈ {:.6e}); F would be bounded",
            verdict.value_estimate
        ),
        Classification::Inconclusive => {
            bail!(
                Precondition,
                "calderon integral could not be classified: {}",
                verdict.evidence
            )
        }
    }
    if !(config.log_floor < -1.0)
        || !(config.t_max > 1.0)
        || !(config.s_min > 0.0 && config.s_min < 1.0)
    {
        bail!(Validation, "extremal config out of range");
    }
    let mut p = ExtremalProfile::skeleton(phi.clone(), k, *config);
    p.raw_energy = p.energy_with_scale(0.0, 1.0).value_estimate;
    p.energy = p.raw_energy;
    if config.normalization == Normalization::Rescale && p.raw_energy > 1.0 {
        let c = p.rescale_factor()?;
        p.scale = c;
        p.energy = p.energy_with_scale(0.0, 1.0).value_estimate;
    }
    p.tables = p.tabulate();
    Ok(p)
}

impl ExtremalProfile {
    fn skeleton(phi: OrliczFunction, k: usize, config: ExtremalConfig) -> Self {
        let mut p = ExtremalProfile {
            phi,
            k,
            config,
            scale: 1.0,
            raw_energy: f64::NAN,
            energy: f64::NAN,
            tables: ProfileTables::default(),
            grid: Grid::default(),
        };
        p.build_grid();
        p
    }

    /// `ln G(e^μ)`, `G(t) = [t/φ(t)]^{1/(k-1)}`.
    pub fn ln_g_at_log(&self, mu: f64) -> f64 {
        (mu - self.phi.ln_eval_at_log(mu)) / (self.k - 1) as f64
    }

    fn g(&self, v: f64) -> f64 {
        self.ln_g_at_log(v) + v
    }

    // ln ∫_a^b e^{g(v)} dv by the fixed Gauss rule
    fn ln_gauss(&self, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut vals = [0.0f64; 8];
        let mut top = f64::NEG_INFINITY;
        for (i, x) in self.grid.gx.iter().enumerate() {
            vals[i] = self.g(mid + half * x);
            top = top.max(vals[i]);
        }
        if top == f64::NEG_INFINITY {
            return top;
        }
        let s: f64 = vals
            .iter()
            .zip(&self.grid.gw)
            .map(|(v, w)| w * exp(v - top))
            .sum();
        top + ln(s * half)
    }

    fn build_grid(&mut self) {
        let (gx, gw) = gauss_legendre(8);
        self.grid.gx = gx;
        self.grid.gw = gw;
        let mu_far = -self.config.log_floor + 100.0;
        let mut mu = alloc::vec![MU_START];
        let mut cum = alloc::vec![self.ln_gauss(0.0, MU_START)];
        let mut m = MU_START;
        while m < mu_far {
            let d = 1e-4 * m.max(1.0);
            let slope = ((self.g(m + d) - self.g(m - d.min(0.5 * m))) / (d + d.min(0.5 * m))).abs();
            let mut step = if m < 2.0 {
                0.25 * m
            } else {
                0.5f64.max(0.02 * m)
            };
            if slope > 0.0 {
                step = step.min(2.0 / slope);
            }
            step = step.max(1e-3 * m);
            let next = (m + step).min(mu_far);
            let last = *cum.last().expect("non-empty");
            cum.push(ln_add(last, self.ln_gauss(m, next)));
            mu.push(next);
            m = next;
        }
        self.grid.ln_psi = mu
            .iter()
            .zip(&cum)
            .map(|(m, c)| self.ln_g_at_log(*m) - c)
            .collect();
        self.grid.mu = mu;
        self.grid.ln_cum = cum;
        self.grid.ln_h1 = self.ln_h_at_log(0.0);

        let mut w = alloc::vec![0.0];
        let mut f_cum = alloc::vec![0.0];
        let mut cur = 0.0f64;
        while cur > self.config.log_floor {
            let step = if cur > -0.5 { 0.01 } else { 0.02 * -cur };
            let next = (cur - step).max(self.config.log_floor);
            let add = self.gauss_f(next, cur);
            f_cum.push(f_cum.last().expect("non-empty") + add);
            w.push(next);
            cur = next;
        }
        self.grid.w = w;
        self.grid.f_cum = f_cum;
    }

    // ∫_a^b [h(e^w) - h(1)] e^w dw, unscaled
    fn gauss_f(&self, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.grid
            .gx
            .iter()
            .zip(&self.grid.gw)
            .map(|(x, wt)| {
                let w = mid + half * x;
                wt * exp(ln_sub(self.ln_h_at_log(w), self.grid.ln_h1) + w)
            })
            .sum::<f64>()
            * half
    }

    /// `ln Φ(e^μ)`; `-∞` at `μ <= 0`.
    pub fn ln_phi_big_at_log(&self, mu: f64) -> f64 {
        if !(mu > 0.0) {
            return if mu.is_nan() { mu } else { f64::NEG_INFINITY };
        }
        let nodes = &self.grid.mu;
        if mu < nodes[0] {
            return self.ln_gauss(0.0, mu);
        }
        let i = nodes.partition_point(|x| *x <= mu) - 1;
        if mu == nodes[i] {
            return self.grid.ln_cum[i];
        }
        if i + 1 == nodes.len() {
            let rest = ln_integrate(|v| self.g(v), nodes[i], mu, 1e-13, 2000).ln_value;
            return ln_add(self.grid.ln_cum[i], rest);
        }
        ln_add(self.grid.ln_cum[i], self.ln_gauss(nodes[i], mu))
    }

    /// `ln Ψ(e^μ)`.
    pub fn ln_psi_at_log(&self, mu: f64) -> f64 {
        self.ln_g_at_log(mu) - self.ln_phi_big_at_log(mu)
    }

    pub fn phi_big(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        exp(self.ln_phi_big_at_log(ln(t)))
    }

    pub fn psi(&self, t: f64) -> f64 {
        exp(self.ln_psi_at_log(ln(t)))
    }

    /// `ln h(e^w)`: the `μ` with `ln Ψ(e^μ) = w`.
    pub fn ln_h_at_log(&self, w: f64) -> f64 {
        let mu = &self.grid.mu;
        let lp = &self.grid.ln_psi;
        let f = |m: f64| self.ln_psi_at_log(m) - w;
        let (a, b) = if w >= lp[0] {
            let mut lo = mu[0];
            while f(lo) < 0.0 {
                lo *= 0.5;
                if lo < 1e-300 {
                    return 0.0;
                }
            }
            (lo, mu[0])
        } else if w < *lp.last().expect("non-empty") {
            let mut lo = *mu.last().expect("non-empty");
            let mut hi = lo;
            while f(hi) > 0.0 {
                lo = hi;
                hi *= 2.0;
                if hi > 1e15 {
                    return f64::INFINITY;
                }
            }
            (lo, hi)
        } else {
            // ln Ψ decreases along the nodes
            let i = lp.partition_point(|x| *x >= w);
            if lp[i - 1] == w {
                return mu[i - 1];
            }
            (mu[i - 1], mu[i])
        };
        brent(f, a, b, 0.0, 200).unwrap_or(f64::NAN)
    }

    pub fn h(&self, s: f64) -> f64 {
        exp(self.ln_h_at_log(ln(s)))
    }

    pub fn ln_h1(&self) -> f64 {
        self.grid.ln_h1
    }

    /// `ln |F'(e^v)| = ln(h(e^v) - h(1)) - ln c`; `-∞` for `v >= 0`.
    pub fn ln_abs_df_at_log(&self, v: f64) -> f64 {
        if v >= 0.0 {
            return f64::NEG_INFINITY;
        }
        ln_sub(self.ln_h_at_log(v), self.grid.ln_h1) - ln(self.scale)
    }

    pub fn df(&self, t: f64) -> f64 {
        -exp(self.ln_abs_df_at_log(ln(t)))
    }

    /// `F(e^v)`.
    pub fn f_at_log(&self, v: f64) -> f64 {
        if v >= 0.0 {
            return 0.0;
        }
        let w = &self.grid.w;
        let fc = &self.grid.f_cum;
        let last = w.len() - 1;
        let raw = if v < w[last] {
            let tail = integrate(
                |x: f64| exp(ln_sub(self.ln_h_at_log(x), self.grid.ln_h1) + x),
                v,
                w[last],
                &QuadConfig::rel(1e-12),
            )
            .value;
            fc[last] + tail
        } else {
            // w decreasing: first index with w[i] < v, segment (w[i], w[i-1]]
            let i = w.partition_point(|x| *x >= v);
            if w[i - 1] == v {
                fc[i - 1]
            } else {
                fc[i - 1] + self.gauss_f(v, w[i - 1])
            }
        };
        raw / self.scale
    }

    pub fn f(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::INFINITY;
        }
        self.f_at_log(ln(t))
    }

    /// `ln` of the energy integrand `φ(|F'(r)|/c') r^{k-1}` at `r = e^v` for an
    /// extra divisor `c'` on top of the profile's scale.
    fn ln_energy_integrand(&self, v: f64, extra: f64) -> f64 {
        let d = self.ln_abs_df_at_log(v) - ln(extra);
        self.phi.ln_eval_at_log(d) + (self.k - 1) as f64 * v
    }

    fn energy_with_scale(&self, ln_r: f64, extra: f64) -> ConvergenceVerdict {
        let ln_r = ln_r.min(0.0);
        let sigma = unit_sphere_area(self.k);
        let f = |v: f64| self.ln_energy_integrand(v, extra);
        let mut v = classify_zero_end_log(
            "radial energy",
            &f,
            ln_r,
            -self.config.log_floor,
            0.0,
            &ClassifierConfig::default(),
        );
        v.partial_value *= sigma;
        v.value_estimate *= sigma;
        v
    }

    /// `σ_{k-1} ∫_0^r φ(|F'(t)|) t^{k-1} dt`.
    pub fn radial_energy(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            bail!(Domain, "radius must be positive, got {r}");
        }
        Ok(self.radial_energy_at_log(ln(r)))
    }

    /// Energy of the ball of radius `e^v`.
    pub fn radial_energy_at_log(&self, v: f64) -> f64 {
        let verdict = self.energy_with_scale(v, 1.0);
        match verdict.classification {
            Classification::Convergent => verdict.value_estimate,
            Classification::Divergent => f64::INFINITY,
            Classification::Inconclusive => f64::NAN,
        }
    }

    fn rescale_factor(&self) -> Result<f64> {
        let e = |c: f64| self.energy_with_scale(0.0, c).value_estimate;
        let mut lo = 1.0;
        let mut hi = 2.0;
        while e(hi) > 1.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                bail!(Numerical, "no rescaling below 1e12 brings the energy to 1");
            }
        }
        for _ in 0..60 {
            let mid = crate::math::sqrt(lo * hi);
            if e(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi / lo - 1.0 < 1e-10 {
                break;
            }
        }
        Ok(hi)
    }

    fn tabulate(&self) -> ProfileTables {
        let n = self.config.nodes.max(8);
        let mus = geomspace(1e-8, ln(self.config.t_max), n);
        let t: Vec<f64> = mus.iter().map(|m| exp(*m)).collect();
        let phi_big = Table {
            x: t.clone(),
            y: mus
                .iter()
                .map(|m| exp(self.ln_phi_big_at_log(*m)))
                .collect(),
        };
        let psi = Table {
            x: t,
            y: mus.iter().map(|m| exp(self.ln_psi_at_log(*m))).collect(),
        };
        let s_hi = psi.y[0];
        let ss = geomspace(self.config.s_min, s_hi, n);
        let h = Table {
            x: ss.clone(),
            y: ss.iter().map(|s| self.h(*s)).collect(),
        };
        let ts = geomspace(self.config.s_min, 1.0, n);
        let f = Table {
            x: ts.clone(),
            y: ts.iter().map(|t| self.f(*t)).collect(),
        };
        ProfileTables { phi_big, psi, h, f }
    }

    /// Structural checks on the tabulated maps.
    pub fn check_invariants(&self) -> Vec<VerificationReport> {
        let tb = &self.tables;
        let mut out = Vec::new();
        let incr = tb.phi_big.y.windows(2).all(|w| w[1] > w[0]);
        out.push(VerificationReport::flag(
            "phi_big increasing",
            "Φ vanishes at 1 and increases strictly on (1, ∞)",
            incr && self.phi_big(1.0) == 0.0,
            "",
        ));
        let psi_dec = tb.psi.y.windows(2).all(|w| w[1] <= w[0]);
        let growth: Vec<f64> = (1..40)
            .map(|j| self.psi(1.0 + powf(2.0, -(j as f64))))
            .collect();
        let blows_up = growth.windows(2).all(|w| w[1] > w[0]);
        out.push(VerificationReport::flag(
            "psi decreasing",
            "Ψ decreases and grows without bound as t decreases to 1",
            psi_dec && blows_up,
            alloc::format!(
                "Ψ(1 + 2^-39) = {:.3e}",
                growth.last().copied().unwrap_or(f64::NAN)
            ),
        ));
        let h_ok = tb.h.y.iter().all(|v| *v > 1.0) && tb.h.y.windows(2).all(|w| w[1] <= w[0]);
        out.push(VerificationReport::flag(
            "h above one and decreasing",
            "h(s) > 1 and h decreases",
            h_ok,
            "",
        ));
        let fy = &tb.f.y;
        let f_ok = fy.iter().all(|v| *v >= 0.0)
            && fy.windows(2).all(|w| w[1] <= w[0])
            && self.f(1.0) == 0.0;
        let dfs: Vec<f64> = tb.f.x.iter().map(|t| self.df(*t)).collect();
        let df_ok = dfs.windows(2).all(|w| w[1] >= w[0]);
        out.push(VerificationReport::flag(
            "F convexity chain",
            "F is nonnegative and decreasing with F(1) = 0, F' non-decreasing",
            f_ok && df_ok,
            "",
        ));
        let worst = self.inversion_error(&geomspace(self.config.s_min, 1e4, 200));
        out.push(VerificationReport::compare(
            "psi of h",
            "Ψ(h(s)) = s",
            worst,
            Relation::Le,
            1e-9,
            0.0,
        ));
        out
    }

    /// Largest `|Ψ(h(s))/s - 1|` over the given points.
    pub fn inversion_error(&self, s: &[f64]) -> f64 {
        s.iter()
            .map(|s| {
                let w = ln(*s);
                let back = self.ln_psi_at_log(self.ln_h_at_log(w));
                (exp(back - w) - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Outcome of the Calderon pair: `∫_0^1 h = ∞` and `∫_0^1 φ(h(s)) s^{k-1} ds < ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalderonPair {
    /// `(s, ∫_s^1 h)` along `s = 2^{-j}`.
    pub partial_integrals: Vec<(f64, f64)>,
    pub h_integral: ConvergenceVerdict,
    pub weighted_integral: ConvergenceVerdict,
    pub report: VerificationReport,
}

pub fn verify_calderon_pair(p: &ExtremalProfile, s_min: f64) -> CalderonPair {
    let cfg = ClassifierConfig::default();
    let mut partial = Vec::new();
    let mut j = 1;
    while powf(2.0, -(j as f64)) >= s_min {
        let s = powf(2.0, -(j as f64));
        let v = integrate(
            |w: f64| exp(p.ln_h_at_log(w) + w),
            ln(s),
            0.0,
            &QuadConfig::rel(1e-11),
        )
        .value;
        partial.push((s, v));
        j += 1;
    }
    let floor = -p.config.log_floor;
    let h_integral = classify_zero_end_log(
        "int_0^1 h(s) ds",
        &|v| p.ln_h_at_log(v),
        0.0,
        floor,
        0.0,
        &cfg,
    );
    let km1 = (p.k - 1) as f64;
    let weighted_integral = classify_zero_end_log(
        "int_0^1 phi(h(s)) s^(k-1) ds",
        &|v| p.phi.ln_eval_at_log(p.ln_h_at_log(v)) + km1 * v,
        0.0,
        floor,
        0.0,
        &cfg,
    );
    let anchor = "the integral of h diverges while the weighted integral of φ(h) converges";
    let monotone = partial.windows(2).all(|w| w[1].1 > w[0].1);
    let inconclusive = h_integral.classification == Classification::Inconclusive
        || weighted_integral.classification == Classification::Inconclusive;
    let ok = h_integral.classification == Classification::Divergent
        && weighted_integral.classification == Classification::Convergent
        && monotone;
    let note = alloc::format!(
        "h integral {:?} (tier {}), weighted integral {:?} ≈ {:.6e}",
        h_integral.classification,
        h_integral.tier,
        weighted_integral.classification,
        weighted_integral.value_estimate
    );
    let report = if inconclusive {
        VerificationReport::inconclusive("calderon pair", anchor, note)
    } else {
        VerificationReport::flag("calderon pair", anchor, ok, note)
    };
    CalderonPair {
        partial_integrals: partial,
        h_integral,
        weighted_integral,
        report,
    }
}

fn a_star_checked(phi: &OrliczFunction, k: usize) -> Result<f64> {
    a_star(phi, k, &ClassifierConfig::default())
}

/// `m·α_k·A_*^{(k-1)/k}·E^{1/k}` bounding the oscillation over a cube of
/// `m` unit edges when the Calderon integral converges.
pub fn cube_diameter_bound(
    phi: &OrliczFunction,
    k: usize,
    m: u32,
    energy: f64,
    constants: &ConstantsConfig,
) -> Result<f64> {
    if !(energy >= 0.0) {
        bail!(Domain, "energy must be nonnegative");
    }
    let a = a_star_checked(phi, k)?;
    let kf = k as f64;
    Ok(m as f64 * constants.alpha_k.value * powf(a, (kf - 1.0) / kf) * powf(energy, 1.0 / kf))
}

/// `(m·α_k)^k·A_*^{k-1}·E` bounding the k-dimensional Hausdorff measure of
/// the image of a set with energy `E`.
pub fn hausdorff_area_bound(
    phi: &OrliczFunction,
    k: usize,
    m: u32,
    energy: f64,
    constants: &ConstantsConfig,
) -> Result<f64> {
    if !(energy >= 0.0) {
        bail!(Domain, "energy must be nonnegative");
    }
    let a = a_star_checked(phi, k)?;
    let kf = k as f64;
    Ok(powf(m as f64 * constants.alpha_k.value, kf) * powf(a, kf - 1.0) * energy)
}

/// Short human description of a profile.
pub fn describe(p: &ExtremalProfile) -> String {
    alloc::format!(
        "k = {}, φ = {}, h(1) = {:.6}, scale = {:.6}, energy = {:.6e} (raw {:.6e})",
        p.k,
        p.phi.gauge.spec_string(),
        exp(p.ln_h1()),
        p.scale,
        p.energy,
        p.raw_energy
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::Gauge;

    fn profile(p: f64, k: usize, normalization: Normalization) -> ExtremalProfile {
        let phi = OrliczFunction::new(Gauge::Power { p }).unwrap();
        let cfg = ExtremalConfig {
            nodes: 256,
            normalization,
            ..ExtremalConfig::default()
        };
        build_profile(&phi, k, &cfg).unwrap()
    }

    #[test]
    fn quadratic_in_plane_matches_log() {
        let p = profile(2.0, 2, Normalization::Report);
        for t in [1.001, 1.5, 3.0, 100.0, 1e6] {
            let t: f64 = t;
            assert!((p.phi_big(t) / t.ln() - 1.0).abs() < 1e-12, "t={t}");
            assert!((p.psi(t) * t * t.ln() - 1.0).abs() < 1e-12, "t={t}");
        }
        // h by bisection on s·t·ln t = 1
        for s in [1e-6, 0.01, 1.0, 50.0] {
            let (mut lo, mut hi) = (1.0f64, 1e12f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if s * mid * mid.ln() > 1.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert!(
                (p.h(s) / lo - 1.0).abs() < 1e-11,
                "s={s}: {} vs {lo}",
                p.h(s)
            );
        }
        assert_eq!(p.f(1.0), 0.0);
        assert_eq!(p.f(2.0), 0.0);
    }

    #[test]
    fn quadratic_in_space_matches_square_root() {
        let p = profile(2.0, 3, Normalization::Report);
        for t in [1.0001, 2.0, 50.0, 1e7] {
            let t: f64 = t;
            let exact = 2.0 * (t.sqrt() - 1.0);
            assert!((p.phi_big(t) / exact - 1.0).abs() < 1e-11, "t={t}");
            let psi = 1.0 / (t.sqrt() * exact);
            assert!((p.psi(t) / psi - 1.0).abs() < 1e-11, "t={t}");
        }
    }

    #[test]
    fn f_matches_direct_quadrature() {
        let p = profile(2.0, 2, Normalization::Report);
        for t in [0.9, 0.3, 1e-3, 1e-9] {
            let t: f64 = t;
            let h1 = p.h(1.0);
            let direct = integrate(
                |w: f64| (p.h(w.exp()) - h1) * w.exp(),
                t.ln(),
                0.0,
                &QuadConfig::rel(1e-13),
            )
            .value;
            assert!(
                (p.f(t) - direct).abs() < 1e-11 * direct.max(1.0),
                "t={t}: {} vs {direct}",
                p.f(t)
            );
        }
        // deep below the f64 range F keeps growing like ln ln(1/t)
        let a = p.f_at_log(-1e3);
        let b = p.f_at_log(-1e4);
        assert!(b > a && (b - a - 10f64.ln()).abs() < 0.05, "{a} {b}");
    }

    #[test]
    fn invariants_hold() {
        for k in [2usize, 3] {
            let p = profile(2.0, k, Normalization::Rescale);
            for r in p.check_invariants() {
                assert!(r.passed(), "k={k}: {r:?}");
            }
            assert!(p.energy <= 1.0 + 1e-12, "k={k}: {}", p.energy);
        }
    }

    #[test]
    fn energy_is_monotone_in_radius() {
        let p = profile(2.0, 2, Normalization::Report);
        let e5 = p.radial_energy(0.5).unwrap();
        let e7 = p.radial_energy(0.7).unwrap();
        assert!(e5 <= e7);
        let small: Vec<f64> = [1e-2, 1e-4, 1e-8]
            .iter()
            .map(|r| p.radial_energy(*r).unwrap())
            .collect();
        assert!(small.windows(2).all(|w| w[1] < w[0]));
        assert!(p.radial_energy(0.0).is_err());
        let whole = p.radial_energy(1.0).unwrap();
        assert!((whole - p.raw_energy).abs() < 1e-12);
    }

    #[test]
    fn calderon_pair_for_quadratic() {
        let p = profile(2.0, 2, Normalization::Report);
        let pair = verify_calderon_pair(&p, 1e-8);
        assert!(pair.report.passed(), "{:?}", pair.report);
        assert!(pair.partial_integrals[0].1 < pair.partial_integrals[1].1);
        // independent route: with s = Ψ(t) the integral is ∫_{h(1)}^∞ t²Ψ|Ψ'| dt
        // = ∫_L^∞ (l + 1)/l³ dl = 1/L + 1/(2L²), L = ln h(1), h(1) ln h(1) = 1
        let (mut lo, mut hi) = (1.0f64, 3.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.ln() > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let l = lo.ln();
        let oracle = 1.0 / l + 0.5 / (l * l);
        let got = pair.weighted_integral.value_estimate;
        assert!((got / oracle - 1.0).abs() < 0.01, "{got} vs {oracle}");
    }

    #[test]
    fn convergent_gauge_is_rejected() {
        let phi = OrliczFunction::new(Gauge::Power { p: 3.0 }).unwrap();
        assert!(matches!(
            build_profile(&phi, 2, &ExtremalConfig::default()),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn bounds_for_cubic_gauge() {
        let phi = OrliczFunction::new(Gauge::Power { p: 3.0 }).unwrap();
        let c = ConstantsConfig::default();
        let d = cube_diameter_bound(&phi, 2, 1, 1.0, &c).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-6, "{d}");
        let d2 = cube_diameter_bound(&phi, 2, 2, 1.0, &c).unwrap();
        assert!((d2 - 2.0 * d).abs() < 1e-12);
        assert_eq!(cube_diameter_bound(&phi, 2, 1, 0.0, &c).unwrap(), 0.0);
        let a = hausdorff_area_bound(&phi, 2, 1, 1.0, &c).unwrap();
        assert!((a - 2.0).abs() < 1e-6);
        assert!((hausdorff_area_bound(&phi, 2, 1, 2.0, &c).unwrap() - 2.0 * a).abs() < 1e-12);
        assert!((a - d * d).abs() < 1e-9);
        let sq = OrliczFunction::new(Gauge::Power { p: 2.0 }).unwrap();
        assert!(cube_diameter_bound(&sq, 2, 1, 1.0, &c).is_err());
    }

    #[test]
    fn saved_profile_round_trip() {
        let p = profile(2.0, 2, Normalization::Rescale);
        let s = serde_json::to_string(&p).unwrap();
        let q: ExtremalProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(p.scale, q.scale);
        assert_eq!(p.f(0.01), q.f(0.01));
    }
}
