//! A graph embedding `g(x) = (x, f(x))` of `R^k` in the Orlicz–Sobolev class
//! of a gauge with divergent Calderon integral whose image of a null set has
//! positive `k`-dimensional Hausdorff measure, truncated at depth `P`.
//!
//! `f = Σ_l 2^{-l} f_l`, `f_l` a sum of capped radial bumps
//! `F_l(r) = min(1, F(r) - F(r_l))` on the dyadic lattice of spacing `2^{-l}`.
//! The radii collapse doubly exponentially, so they are stored as logarithms
//! and points inside a ball are represented relative to its center.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{build_profile, ExtremalConfig, ExtremalProfile, Normalization};
use crate::math::{exp, floor, ln, ln1p, ln_add, ln_sub, powf, powi, round, sqrt, LN_2, PI};
use crate::numeric::misc::{halton, Matrix};
use crate::numeric::roots::brent;
use crate::numeric::{linspace, ln_integrate, unit_ball_volume, unit_sphere_area};
use crate::orlicz::{shift_normalize, OrliczFunction};
use crate::report::{Relation, VerificationReport};

/// Which constraint fixed `r_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// Energy of the ball reached `2^{-lk}`.
    Energy,
    /// `r_1 <= 1/4`.
    Quarter,
    /// `r_l <= ρ_{l-1}`.
    InnerRadius,
    /// `r_l <= 2^{-2l}(ρ*_{l-1} - ρ_{l-1})`.
    Gap,
    /// `r_l <= 1/[2^{l+2}(l-1)|F'(ρ_{l-1})|]`.
    Slope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub l: usize,
    pub ln_r: f64,
    pub ln_rho: f64,
    pub ln_rho_star: f64,
    /// `F(r_l)`.
    pub f_r: f64,
    /// `ln |F'(ρ_l)|`.
    pub ln_slope_rho: f64,
    /// Energy of the ball of radius `r_l`.
    pub energy: f64,
    pub binding: Binding,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    /// Smallest admissible `ln r`.
    pub log_floor: f64,
    /// Offset `c` of the reference cube `C_0 = [c - 1/2, c + 1/2]^k`.
    pub cube_center: f64,
    pub samples_per_ball: usize,
    /// Balls examined per level (all when zero).
    pub sample_balls: usize,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            log_floor: -1e6,
            cube_center: 0.5 + core::f64::consts::SQRT_2 / 1000.0,
            samples_per_ball: 4096,
            sample_balls: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleModel {
    pub k: usize,
    /// The gauge `φ`; the profile is built from `φ_*(t) = φ(t + k) - φ(k)`.
    pub phi: OrliczFunction,
    pub profile: ExtremalProfile,
    pub depth: usize,
    pub levels: Vec<Level>,
    pub config: CounterexampleConfig,
}

/// Build `φ_*`, its profile and the radii.
pub fn build_counterexample(
    phi: &OrliczFunction,
    k: usize,
    depth: usize,
    config: &CounterexampleConfig,
) -> Result<CounterexampleModel> {
    if depth == 0 {
        return Err(Error::Validation(String::from("depth must be at least 1")));
    }
    let phi_star = shift_normalize(phi, k as f64)?;
    let pcfg = ExtremalConfig {
        normalization: Normalization::Report,
        log_floor: config.log_floor,
        nodes: 1024,
        ..ExtremalConfig::default()
    };
    let profile = build_profile(&phi_star, k, &pcfg)?;
    build_sequences(phi, profile, k, depth, config)
}

/// Radii `r_l`, `ρ_l`, `ρ*_l` for `l = 1..=P` from a built profile.
pub fn build_sequences(
    phi: &OrliczFunction,
    profile: ExtremalProfile,
    k: usize,
    depth: usize,
    config: &CounterexampleConfig,
) -> Result<CounterexampleModel> {
    if profile.k != k {
        return Err(Error::Validation(alloc::format!(
            "profile built for k = {}, not {k}",
            profile.k
        )));
    }
    let floor_v = config.log_floor;
    let mut levels: Vec<Level> = Vec::new();
    let kf = k as f64;
    for l in 1..=depth {
        let depth_err = || Error::Depth {
            requested: depth,
            max_feasible: l - 1,
        };
        let (cap, cap_kind) = match levels.last() {
            None => (ln(0.25), Binding::Quarter),
            Some(prev) => {
                let gap = -2.0 * l as f64 * LN_2 + ln_sub(prev.ln_rho_star, prev.ln_rho);
                let slope = -((l + 2) as f64 * LN_2 + ln((l - 1) as f64)) - prev.ln_slope_rho;
                let mut c = (prev.ln_rho, Binding::InnerRadius);
                if gap < c.0 {
                    c = (gap, Binding::Gap);
                }
                if slope < c.0 {
                    c = (slope, Binding::Slope);
                }
                c
            }
        };
        if !(cap > floor_v) {
            return Err(depth_err());
        }
        let target = -(l as f64) * kf * LN_2;
        let ln_energy = |v: f64| ln(profile.radial_energy_at_log(v));
        let (ln_r, binding) = if ln_energy(cap) <= target {
            (cap, cap_kind)
        } else {
            let mut hi = cap;
            let mut step = 1.0;
            let mut lo = cap - step;
            while ln_energy(lo) > target {
                hi = lo;
                step *= 2.0;
                lo = cap - step;
                if lo < floor_v {
                    if ln_energy(floor_v) > target {
                        return Err(depth_err());
                    }
                    lo = floor_v;
                    break;
                }
            }
            for _ in 0..200 {
                if hi - lo <= 1e-12 * hi.abs().max(1.0) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if ln_energy(mid) <= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, Binding::Energy)
        };
        let f_r = profile.f_at_log(ln_r);
        let solve = |excess: f64| -> Result<f64> {
            let goal = f_r + excess;
            let g = |v: f64| profile.f_at_log(v) - goal;
            let mut step = 1.0;
            let mut lo = ln_r - step;
            while g(lo) < 0.0 {
                step *= 2.0;
                lo = ln_r - step;
                if lo < floor_v {
                    return Err(depth_err());
                }
            }
            brent(g, lo, ln_r, 0.0, 300).ok_or(Error::Construction {
                level: l,
                reason: String::from("F increment not bracketed; F too flat"),
            })
        };
        let ln_rho = solve(1.0)?;
        let ln_rho_star = solve(0.75)?;
        levels.push(Level {
            l,
            ln_r,
            ln_rho,
            ln_rho_star,
            f_r,
            ln_slope_rho: profile.ln_abs_df_at_log(ln_rho),
            energy: profile.radial_energy_at_log(ln_r),
            binding,
        });
    }
    Ok(CounterexampleModel {
        k,
        phi: phi.clone(),
        profile,
        depth,
        levels,
        config: *config,
    })
}

/// A point `center + e^{ln_scale}·u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPoint {
    pub center: Vec<f64>,
    pub ln_scale: f64,
    pub u: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}

fn nearest_lattice(x: &[f64], l: usize) -> Vec<f64> {
    let s = powi(2.0, l as i32);
    x.iter().map(|xi| round(xi * s) / s).collect()
}

impl CounterexampleModel {
    fn level(&self, l: usize) -> &Level {
        &self.levels[l - 1]
    }

    /// `F_l` at `ln` of the distance to the ball center.
    pub fn cap_at_log(&self, l: usize, ln_d: f64) -> f64 {
        let lv = self.level(l);
        if ln_d >= lv.ln_r {
            0.0
        } else if ln_d <= lv.ln_rho {
            1.0
        } else {
            (self.profile.f_at_log(ln_d) - lv.f_r).clamp(0.0, 1.0)
        }
    }

    /// `f*_P(x)` at an ordinary point.
    pub fn eval_f(&self, x: &[f64]) -> f64 {
        (1..=self.depth)
            .map(|l| {
                let c = nearest_lattice(x, l);
                let d: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
                powi(0.5, l as i32) * self.cap_at_log(l, ln(norm(&d)))
            })
            .sum()
    }

    /// `(f(x), g(x) = (x, f(x)), H(x, y) = (x, y + f(x)))`.
    pub fn eval_construction(&self, x: &[f64], y: f64) -> (f64, Vec<f64>, Vec<f64>) {
        let f = self.eval_f(x);
        let mut g = x.to_vec();
        g.push(f);
        let mut h = x.to_vec();
        h.push(y + f);
        (f, g, h)
    }

    /// `ln` of the distance from a local point to the level-`l` lattice center
    /// nearest its anchor.
    fn ln_dist_local(&self, p: &LocalPoint, l: usize) -> f64 {
        let c = nearest_lattice(&p.center, l);
        let off: Vec<f64> = p.center.iter().zip(&c).map(|(a, b)| a - b).collect();
        let d0 = norm(&off);
        if d0 == 0.0 {
            return p.ln_scale + ln(norm(&p.u));
        }
        if p.ln_scale < ln(d0) - 40.0 {
            // first-order perturbation, far below f64 resolution of d0
            let proj: f64 = off.iter().zip(&p.u).map(|(a, b)| a * b).sum::<f64>() / d0;
            return ln(d0) + ln1p(exp(p.ln_scale - ln(d0)) * proj);
        }
        let s = exp(p.ln_scale);
        let x: Vec<f64> = p.center.iter().zip(&p.u).map(|(c, u)| c + s * u).collect();
        let d: Vec<f64> = x
            .iter()
            .zip(&nearest_lattice(&x, l))
            .map(|(a, b)| a - b)
            .collect();
        ln(norm(&d))
    }

    /// `f*_m` at a local point (levels `1..=m`).
    pub fn eval_local(&self, p: &LocalPoint, m: usize) -> f64 {
        (1..=m.min(self.depth))
            .map(|l| powi(0.5, l as i32) * self.cap_at_log(l, self.ln_dist_local(p, l)))
            .sum()
    }

    /// Upper bound for the oscillation of `f_l` over `B(center, e^{ln_s})`:
    /// exact for concentric balls, first order in the radius otherwise.
    pub fn osc_level_over_ball(&self, l: usize, center: &[f64], ln_s: f64) -> f64 {
        let lv = self.level(l);
        let c = nearest_lattice(center, l);
        let off: Vec<f64> = center.iter().zip(&c).map(|(a, b)| a - b).collect();
        let d0 = norm(&off);
        if d0 == 0.0 {
            return 1.0 - self.cap_at_log(l, ln_s);
        }
        let ld0 = ln(d0);
        if ln_s < ld0 - 40.0 {
            if ld0 >= lv.ln_r || ld0 <= lv.ln_rho {
                return 0.0;
            }
            return exp(LN_2 + ln_s + self.profile.ln_abs_df_at_log(ld0));
        }
        let s = exp(ln_s);
        let near = if s >= d0 {
            f64::NEG_INFINITY
        } else {
            ln(d0 - s)
        };
        self.cap_at_log(l, near) - self.cap_at_log(l, ln(d0 + s))
    }

    /// Lattice points of level `l` in the cube of edge `2^{-m}` centered at `c`.
    pub fn lattice_in_cube(&self, l: usize, center: &[f64], half_edge: f64) -> Vec<Vec<f64>> {
        let s = powi(2.0, l as i32);
        let ranges: Vec<(i64, i64)> = center
            .iter()
            .map(|c| {
                let lo = crate::math::ceil((c - half_edge) * s) as i64;
                let hi = floor((c + half_edge) * s) as i64;
                (lo, hi)
            })
            .collect();
        let mut out = Vec::new();
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        if ranges.iter().any(|r| r.1 < r.0) {
            return out;
        }
        loop {
            out.push(idx.iter().map(|j| *j as f64 / s).collect());
            let mut d = 0;
            loop {
                if d == idx.len() {
                    return out;
                }
                idx[d] += 1;
                if idx[d] <= ranges[d].1 {
                    break;
                }
                idx[d] = ranges[d].0;
                d += 1;
            }
        }
    }

    fn c0(&self) -> Vec<f64> {
        alloc::vec![self.config.cube_center; self.k]
    }

    fn balls_at(&self, p: usize) -> Vec<Vec<f64>> {
        let all = self.lattice_in_cube(p, &self.c0(), 0.5);
        let n = self.config.sample_balls;
        if n == 0 || n >= all.len() {
            return all;
        }
        (0..n).map(|i| all[i * all.len() / n].clone()).collect()
    }

    fn unit_ball_samples(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        let mut i = 1u64;
        while out.len() < self.config.samples_per_ball
            && i < 64 * self.config.samples_per_ball as u64 + 64
        {
            let u: Vec<f64> = halton(i, self.k).iter().map(|x| 2.0 * x - 1.0).collect();
            if norm(&u) <= 1.0 {
                out.push(u);
            }
            i += 1;
        }
        out
    }

    /// First-order variation of `f*_{m}` over `B(center, e^{ln_s})` at the
    /// unit-ball samples, relative to the center value.
    fn sampled_osc(&self, center: &[f64], ln_s: f64, m: usize, samples: &[Vec<f64>]) -> f64 {
        let mut lo = 0.0f64;
        let mut hi = 0.0f64;
        for u in samples {
            let mut delta = 0.0;
            for l in 1..=m {
                let c = nearest_lattice(center, l);
                let off: Vec<f64> = center.iter().zip(&c).map(|(a, b)| a - b).collect();
                let d0 = norm(&off);
                let weight = powi(0.5, l as i32);
                if d0 == 0.0 {
                    let p = LocalPoint {
                        center: center.to_vec(),
                        ln_scale: ln_s,
                        u: u.clone(),
                    };
                    delta += weight
                        * (self.cap_at_log(l, self.ln_dist_local(&p, l))
                            - self.cap_at_log(l, f64::NEG_INFINITY));
                    continue;
                }
                let ld0 = ln(d0);
                let lv = self.level(l);
                if ld0 >= lv.ln_r || ld0 <= lv.ln_rho {
                    continue;
                }
                let proj: f64 = off.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / d0;
                delta -= weight * exp(ln_s + self.profile.ln_abs_df_at_log(ld0)) * proj;
            }
            lo = lo.min(delta);
            hi = hi.max(delta);
        }
        hi - lo
    }

    /// Oscillation of `f*_{p-1}` over the balls of level `p` against
    /// `2^{-(p+2)}`, plus the full range of `f_p` there.
    pub fn check_oscillation(&self, p: usize) -> VerificationReport {
        let anchor =
            "oscillation of the partial sum below level p over a level-p ball is at most 2^-(p+2)";
        if p < 2 || p > self.depth {
            return VerificationReport::inconclusive(
                "oscillation",
                anchor,
                "level must lie in 2..=P",
            );
        }
        let samples = self.unit_ball_samples();
        let ln_rp = self.level(p).ln_r;
        let mut worst_bound = 0.0f64;
        let mut worst_sampled = 0.0f64;
        let mut full_range = true;
        let balls = self.balls_at(p);
        for c in &balls {
            let bound: f64 = (1..p)
                .map(|l| powi(0.5, l as i32) * self.osc_level_over_ball(l, c, ln_rp))
                .sum();
            worst_bound = worst_bound.max(bound);
            worst_sampled = worst_sampled.max(self.sampled_osc(c, ln_rp, p - 1, &samples));
            let own = self.osc_level_over_ball(p, c, ln_rp);
            full_range &= (own - 1.0).abs() <= 1e-12;
        }
        let rhs = powi(0.5, p as i32 + 2);
        let mut r = VerificationReport::compare("oscillation", anchor, worst_bound, Relation::Le, rhs, 0.0)
            .with_slack("sampling", worst_bound - worst_sampled)
            .with_samples((balls.len() * samples.len()) as u64)
            .with_note(alloc::format!(
                "level {p}: {} balls, sampled oscillation {worst_sampled:.3e}, full cap range of f_p: {full_range}",
                balls.len()
            ));
        if !full_range {
            r.status = crate::report::Status::Fail;
        }
        r
    }

    /// Oscillation of `f` along the axis segment through a level-`p` center,
    /// outside the deeper balls; returns (lower estimate, upper estimate).
    fn ball_diameters(&self, p: usize, center: &[f64], grid: &[(f64, f64)]) -> (f64, f64) {
        // lower-level contributions: constant plus a first-order slope along e_1
        let mut base = 0.0;
        let mut slope = 0.0;
        for l in 1..p {
            let w = powi(0.5, l as i32);
            let c = nearest_lattice(center, l);
            let off: Vec<f64> = center.iter().zip(&c).map(|(a, b)| a - b).collect();
            let d0 = norm(&off);
            if d0 == 0.0 {
                base += w * self.cap_at_log(l, self.level(p).ln_r);
                continue;
            }
            base += w * self.cap_at_log(l, ln(d0));
            let ld0 = ln(d0);
            let lv = self.level(l);
            if ld0 < lv.ln_r && ld0 > lv.ln_rho {
                slope -= w * exp(self.profile.ln_abs_df_at_log(ld0)) * off[0] / d0;
            }
        }
        let wp = powi(0.5, p as i32);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(ln_t, cap) in grid {
            for sign in [-1.0, 1.0] {
                let v = base + slope * sign * exp(ln_t) + wp * cap;
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let lower = hi - lo;
        let below: f64 = (1..p)
            .map(|l| powi(0.5, l as i32) * self.osc_level_over_ball(l, center, self.level(p).ln_r))
            .sum();
        // levels >= p contribute at most 2^{-l} each, the infinite tail included
        let osc_up = below + 2.0 * wp;
        let upper = sqrt(osc_up * osc_up + 4.0 * exp(2.0 * self.level(p).ln_r));
        (lower, upper)
    }

    fn segment_grid(&self, p: usize) -> Vec<(f64, f64)> {
        let lv = self.level(p);
        let inner = if p < self.depth {
            self.level(p + 1).ln_r
        } else {
            lv.ln_rho - 1.0
        };
        let mut pts = linspace(inner, lv.ln_r, 2048);
        pts.push(lv.ln_rho);
        pts.push(lv.ln_rho_star);
        pts.into_iter()
            .filter(|v| *v >= inner && *v <= lv.ln_r)
            .map(|v| (v, self.cap_at_log(p, v)))
            .collect()
    }

    /// Lower (`>= 2^{-(p+1)}` up to the truncation tail) and upper
    /// (`<= 8·2^{-p}`) estimates for the diameters of the images of level-`p` balls.
    pub fn check_diameter(&self, p: usize) -> Vec<VerificationReport> {
        let anchor_lo = "the image of a level-p ball has diameter at least 2^-(p+1)";
        let anchor_hi = "the image of a level-p ball lies in a cylinder of diameter at most 8·2^-p";
        if p < 2 || p > self.depth {
            return alloc::vec![VerificationReport::inconclusive(
                "diameter",
                anchor_lo,
                "level must lie in 2..=P"
            )];
        }
        let tail = powi(0.5, self.depth as i32);
        let grid = self.segment_grid(p);
        let balls = self.balls_at(p);
        let mut min_lower = f64::INFINITY;
        let mut max_upper = 0.0f64;
        for c in &balls {
            let (lo, hi) = self.ball_diameters(p, c, &grid);
            min_lower = min_lower.min(lo);
            max_upper = max_upper.max(hi);
        }
        let rhs = powi(0.5, p as i32 + 1);
        let three_quarters = {
            let lv = self.level(p);
            let inner = if p < self.depth {
                self.level(p + 1).ln_r
            } else {
                lv.ln_rho
            };
            self.cap_at_log(p, inner) >= 0.75
        };
        let mut lower = VerificationReport::compare(
            "diameter lower",
            anchor_lo,
            min_lower,
            Relation::Ge,
            rhs,
            tail,
        )
        .with_slack("truncation tail 2^-P", tail)
        .with_samples((balls.len() * grid.len() * 2) as u64)
        .with_note(alloc::format!(
            "level {p}, {} balls; f_p reaches 3/4 of its range off deeper balls: {three_quarters}",
            balls.len()
        ));
        if !three_quarters {
            lower.status = crate::report::Status::Fail;
        }
        let upper = VerificationReport::compare(
            "diameter upper",
            anchor_hi,
            max_upper,
            Relation::Le,
            8.0 * powi(0.5, p as i32),
            0.0,
        )
        .with_note(alloc::format!("level {p}"));
        alloc::vec![lower, upper]
    }

    /// `ln` of `σ ∫_{ρ_l}^{r_l} G(|F'(t)|) t^{k-1} dt` for a log-integrand builder.
    fn annulus_integral(&self, l: usize, ln_integrand: &dyn Fn(f64) -> f64) -> f64 {
        let lv = self.level(l);
        let kf = self.k as f64;
        let r = ln_integrate(
            |v: f64| ln_integrand(v) + kf * v,
            lv.ln_rho,
            lv.ln_r,
            1e-10,
            4000,
        );
        r.ln_value + ln(unit_sphere_area(self.k))
    }

    /// Per-level and aggregate energy of `f` and of the graph map over the
    /// unit cube `C_0`.
    pub fn energy_budget(&self) -> Vec<VerificationReport> {
        let kf = self.k as f64;
        let phi_star = &self.profile.phi;
        let mut out = Vec::new();
        let mut aggregate = f64::NEG_INFINITY;
        let mut jensen = 0.0;
        let mut graph = f64::NEG_INFINITY;
        let mut support = f64::NEG_INFINITY;
        let c0 = self.c0();
        for l in 1..=self.depth {
            let count = self.lattice_in_cube(l, &c0, 0.5).len() as f64;
            let expected = powf(2.0, l as f64 * kf);
            let slope = |v: f64| self.profile.ln_abs_df_at_log(v);
            let own = self.annulus_integral(l, &|v| phi_star.ln_eval_at_log(slope(v)));
            let level_total = ln(count) + own;
            let scaled =
                self.annulus_integral(l, &|v| phi_star.ln_eval_at_log(slope(v) - l as f64 * LN_2));
            aggregate = ln_add(aggregate, ln(count) + scaled);
            jensen += powi(0.5, l as i32) * exp(level_total);
            let ln_grad_g = |v: f64| {
                let x = slope(v) - l as f64 * LN_2;
                // ln sqrt(k + x²)
                if x > 20.0 {
                    x + 0.5 * ln1p(kf * exp(-2.0 * x))
                } else {
                    0.5 * ln(kf + exp(2.0 * x))
                }
            };
            let g_part = self.annulus_integral(l, &|v| self.phi.ln_eval_at_log(ln_grad_g(v)));
            graph = ln_add(graph, ln(count) + g_part);
            let lv = self.level(l);
            let vol = ln(unit_ball_volume(self.k))
                + kf * lv.ln_r
                + ln1p(-exp(kf * (lv.ln_rho - lv.ln_r)));
            support = ln_add(support, ln(count) + vol);
            out.push(
                VerificationReport::compare(
                    "level energy",
                    "energy of one level of bumps over a unit cube is at most 1",
                    exp(level_total),
                    Relation::Le,
                    1.0,
                    0.0,
                )
                .with_note(alloc::format!(
                    "level {l}: {count} centers (expected {expected})"
                )),
            );
            if count != expected {
                out.last_mut().expect("pushed").status = crate::report::Status::Fail;
            }
        }
        let agg = exp(aggregate);
        out.push(
            VerificationReport::compare(
                "aggregate energy",
                "energy of f over a unit cube is at most 1",
                agg,
                Relation::Le,
                1.0,
                0.0,
            )
            .with_note(alloc::format!(
                "Jensen bound Σ 2^-l E_l = {jensen:.6e}; disjoint gradient supports"
            )),
        );
        let flat = self.phi.eval(sqrt(kf)) * (1.0 - exp(support)).max(0.0);
        let lhs = flat + exp(graph);
        let rhs = 1.0 + self.phi.eval(kf);
        out.push(
            VerificationReport::compare(
                "graph energy",
                "energy of the graph map over a unit cube is at most 1 + φ(k)",
                lhs,
                Relation::Le,
                rhs,
                0.0,
            )
            .with_note(alloc::format!(
                "flat part {flat:.6e}, bump part {:.6e}",
                exp(graph)
            )),
        );
        out
    }

    /// Covering bound at one dyadic scale: `2^{-4k} Σ_{S_l} d^k >= 2^{-5k}`, and
    /// the cube-sum bound `Σ d^k <= 2^{3k} L^k` for a cube of edge `L = 2^{-1}`.
    pub fn hausdorff_lower(&self, l: usize) -> Vec<VerificationReport> {
        let anchor =
            "k-dimensional Hausdorff measure of the image of the null set is at least 2^-5k";
        if l < 2 || l > self.depth {
            return alloc::vec![VerificationReport::inconclusive(
                "hausdorff",
                anchor,
                "level must lie in 2..=P"
            )];
        }
        let kf = self.k as f64;
        let grid = self.segment_grid(l);
        let centers = self.lattice_in_cube(l, &self.c0(), 0.5);
        let mut sum_lower = 0.0;
        let mut count = 0usize;
        for c in &centers {
            let (lo, _) = self.ball_diameters(l, c, &grid);
            sum_lower += powf(lo, kf);
            count += 1;
        }
        let lhs = powf(2.0, -4.0 * kf) * sum_lower;
        let rhs = powf(2.0, -5.0 * kf);
        let tail = powi(0.5, self.depth as i32);
        let lower =
            VerificationReport::compare("hausdorff lower", anchor, lhs, Relation::Ge, rhs, 0.0)
                .with_samples(count as u64)
                .with_slack("truncation tail 2^-P", tail)
                .with_note(alloc::format!(
                    "level {l}: N_l = {count} (2^(lk) = {})",
                    powf(2.0, l as f64 * kf)
                ));
        // a sub-cube of edge 1/2 centered at an irrational-like point
        let sub_center: Vec<f64> = self
            .c0()
            .iter()
            .map(|c| c - 0.25 + 1e-3 * core::f64::consts::FRAC_1_SQRT_2)
            .collect();
        let sub = self.lattice_in_cube(l, &sub_center, 0.25);
        let mut sum_upper = 0.0;
        for c in &sub {
            let (_, hi) = self.ball_diameters(l, c, &grid);
            sum_upper += powf(hi, kf);
        }
        let cube = VerificationReport::compare(
            "cube diameter sum",
            "sum of k-th powers of image diameters over balls in a cube of edge L is at most 2^3k L^k",
            sum_upper,
            Relation::Le,
            powf(2.0, 3.0 * kf) * powf(0.5, kf),
            0.0,
        )
        .with_samples(sub.len() as u64);
        alloc::vec![lower, cube]
    }

    /// Structural invariants of the radii and of the evaluated function.
    pub fn check_invariants(&self) -> Vec<VerificationReport> {
        let mut out = Vec::new();
        let kf = self.k as f64;
        let mut order = true;
        let mut caps = true;
        let mut energy = true;
        let mut incr = 0.0f64;
        let mut gaps_decrease = true;
        let mut prev_gap = f64::INFINITY;
        for (i, lv) in self.levels.iter().enumerate() {
            order &= lv.ln_rho < lv.ln_rho_star && lv.ln_rho_star < lv.ln_r;
            if i == 0 {
                caps &= lv.ln_r <= ln(0.25);
            } else {
                let prev = &self.levels[i - 1];
                let l = lv.l as f64;
                caps &= lv.ln_r <= prev.ln_rho;
                caps &= lv.ln_r <= -2.0 * l * LN_2 + ln_sub(prev.ln_rho_star, prev.ln_rho) + 1e-12;
                caps &= lv.ln_r <= -((l + 2.0) * LN_2 + ln(l - 1.0)) - prev.ln_slope_rho + 1e-12;
            }
            energy &= lv.energy <= powf(2.0, -(lv.l as f64) * kf) * (1.0 + 1e-9);
            let f_rho = self.profile.f_at_log(lv.ln_rho) - lv.f_r;
            let f_star = self.profile.f_at_log(lv.ln_rho_star) - lv.f_r;
            incr = incr.max((f_rho - 1.0).abs()).max((f_star - 0.75).abs());
            let gap = ln_sub(lv.ln_rho_star, lv.ln_rho);
            gaps_decrease &= gap < prev_gap;
            prev_gap = gap;
        }
        out.push(VerificationReport::flag(
            "radii order",
            "ρ_l < ρ*_l < r_l",
            order,
            "",
        ));
        out.push(VerificationReport::flag(
            "radius caps",
            "r_1 <= 1/4 and the three caps on r_l",
            caps,
            "",
        ));
        out.push(VerificationReport::flag(
            "level energy caps",
            "energy of the ball of radius r_l is at most 2^-lk",
            energy,
            "",
        ));
        out.push(VerificationReport::compare(
            "cap increments",
            "F(ρ_l) = F(r_l) + 1 and F(ρ*_l) = F(r_l) + 3/4",
            incr,
            Relation::Le,
            1e-10,
            0.0,
        ));
        out.push(VerificationReport::flag(
            "gap decreasing",
            "ρ*_l - ρ_l decreases",
            gaps_decrease,
            "",
        ));

        let disjoint = self
            .levels
            .iter()
            .filter(|lv| lv.l >= 2)
            .all(|lv| LN_2 + lv.ln_r < -(lv.l as f64) * LN_2);
        out.push(VerificationReport::flag(
            "disjoint balls",
            "balls of one level l >= 2 are disjoint",
            disjoint,
            "",
        ));

        // measure of the tail unions
        let omega = ln(unit_ball_volume(self.k));
        let mut measure_ok = true;
        for m in 1..=self.depth {
            let mut total = f64::NEG_INFINITY;
            for lv in &self.levels[m - 1..] {
                total = ln_add(total, lv.l as f64 * kf * LN_2 + omega + kf * lv.ln_r);
            }
            let bound = omega - kf * (m as f64 - 1.0) * LN_2 - ln(powf(2.0, kf) - 1.0);
            measure_ok &= total <= bound;
        }
        out.push(VerificationReport::flag(
            "measure vanishing",
            "the tail unions of balls have measure at most Ω_k 2^-k(m-1)/(2^k - 1)",
            measure_ok,
            "",
        ));

        // values, overlap counts and Lipschitz bounds at sampled points
        let origin = alloc::vec![0.0; self.k];
        let f0 = self.eval_f(&origin);
        out.push(VerificationReport::compare(
            "value at origin",
            "f(0) = 1 - 2^-P",
            f0,
            Relation::Eq,
            1.0 - powi(0.5, self.depth as i32),
            1e-15,
        ));
        let mut bounded = true;
        let mut overlap_ok = true;
        for i in 1..=512u64 {
            let x: Vec<f64> = halton(i, self.k);
            let v = self.eval_f(&x);
            bounded &= (0.0..=1.0).contains(&v);
            for l in 2..=self.depth {
                let c = nearest_lattice(&x, l);
                let s = powi(0.5, l as i32);
                let mut hits = 0;
                for dir in 0..powi(3.0, self.k as i32) as usize {
                    let mut q = c.clone();
                    let mut code = dir;
                    for coord in q.iter_mut() {
                        *coord += s * ((code % 3) as f64 - 1.0);
                        code /= 3;
                    }
                    let d: Vec<f64> = x.iter().zip(&q).map(|(a, b)| a - b).collect();
                    if ln(norm(&d)) <= self.level(l).ln_r {
                        hits += 1;
                    }
                }
                overlap_ok &= hits <= 1;
            }
        }
        out.push(VerificationReport::flag(
            "bounded",
            "0 <= f <= 1",
            bounded,
            "512 Halton points",
        ));
        out.push(VerificationReport::flag(
            "overlap",
            "each point lies in at most one ball per level",
            overlap_ok,
            "512 Halton points",
        ));

        let samples = self.unit_ball_samples();
        let mut lip_ok = true;
        let mut jac_err = 0.0f64;
        for p in 1..=self.depth {
            let center = alloc::vec![0.0; self.k];
            let ln_s = self.level(p).ln_r;
            // ln of Σ 2^{-l} |F'(ρ_l)| · scale
            let ln_lip = self.levels.iter().fold(f64::NEG_INFINITY, |a, lv| {
                ln_add(a, lv.ln_slope_rho - lv.l as f64 * LN_2)
            }) + ln_s;
            for pair in samples.chunks(2).take(64) {
                if pair.len() < 2 {
                    break;
                }
                let a = LocalPoint {
                    center: center.clone(),
                    ln_scale: ln_s,
                    u: pair[0].clone(),
                };
                let b = LocalPoint {
                    center: center.clone(),
                    ln_scale: ln_s,
                    u: pair[1].clone(),
                };
                let df = (self.eval_local(&a, self.depth) - self.eval_local(&b, self.depth)).abs();
                let du: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(x, y)| x - y).collect();
                lip_ok &= df == 0.0 || ln(df) <= ln_lip + ln(norm(&du)) + 1e-9;
            }
            // shear map in local coordinates: (u, y) -> (u, y + f(center + s u))
            for u in samples.iter().take(16) {
                let n = self.k + 1;
                let h = 1e-6;
                let y0 = 0.3;
                let eval = |uu: &[f64], y: f64| -> Vec<f64> {
                    let q = LocalPoint {
                        center: center.clone(),
                        ln_scale: ln_s,
                        u: uu.to_vec(),
                    };
                    let mut out = uu.to_vec();
                    out.push(y + self.eval_local(&q, self.depth));
                    out
                };
                let mut jac = Matrix::zeros(n);
                for j in 0..n {
                    let mut up = u.clone();
                    let mut dn = u.clone();
                    let (mut yu, mut yd) = (y0, y0);
                    if j < self.k {
                        up[j] += h;
                        dn[j] -= h;
                    } else {
                        yu += h;
                        yd -= h;
                    }
                    let a = eval(&up, yu);
                    let b = eval(&dn, yd);
                    for i in 0..n {
                        jac.set(i, j, (a[i] - b[i]) / (2.0 * h));
                    }
                }
                jac_err = jac_err.max((jac.det() - 1.0).abs());
            }
        }
        out.push(VerificationReport::flag(
            "lipschitz",
            "|f(x) - f(y)| <= Σ 2^-l |F'(ρ_l)| |x - y| on sampled pairs",
            lip_ok,
            "",
        ));
        out.push(VerificationReport::compare(
            "shear jacobian",
            "the shear (x, y) -> (x, y + f(x)) has Jacobian 1",
            jac_err,
            Relation::Le,
            1e-6,
            0.0,
        ));
        let _ = PI;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::Gauge;

    fn model(depth: usize) -> CounterexampleModel {
        let phi = OrliczFunction::new(Gauge::Power { p: 2.0 }).unwrap();
        let cfg = CounterexampleConfig {
            samples_per_ball: 256,
            sample_balls: 16,
            ..CounterexampleConfig::default()
        };
        build_counterexample(&phi, 2, depth, &cfg).unwrap()
    }

    #[test]
    fn radii_satisfy_the_caps() {
        let m = model(3);
        for r in m.check_invariants() {
            assert!(r.passed(), "{r:?}");
        }
        assert!(m.levels[0].ln_r <= ln(0.25));
    }

    #[test]
    fn origin_and_far_points() {
        let m = model(3);
        let (f, g, h) = m.eval_construction(&[0.0, 0.0], 0.5);
        assert!((f - 0.875).abs() < 1e-15);
        assert_eq!(g[2], f);
        assert_eq!(h[2], 0.5 + f);
        // a point away from every lattice point of levels 1..3
        let x = [0.3, 0.07];
        assert_eq!(m.eval_f(&x), 0.0);
        let (_, _, h1) = m.eval_construction(&x, 1.0);
        let (_, _, h2) = m.eval_construction(&x, 2.5);
        assert_eq!(h2[2] - h1[2], 1.5);
        assert_eq!(h1[..2], h2[..2]);
    }

    #[test]
    fn level_checks_pass() {
        let m = model(4);
        for p in 2..=4 {
            assert!(
                m.check_oscillation(p).passed(),
                "{:?}",
                m.check_oscillation(p)
            );
        }
        for p in 2..=3 {
            for r in m.check_diameter(p) {
                assert!(r.passed(), "{r:?}");
            }
        }
        for r in m.energy_budget() {
            assert!(r.passed(), "{r:?}");
        }
        for r in m.hausdorff_lower(3) {
            assert!(r.passed(), "{r:?}");
        }
    }
}
