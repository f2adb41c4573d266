//! Mean oscillation over discs, finite-mean-oscillation point tests and the
//! two disc-sum examples that are FMO without being locally in `L^p`.
//!
//! Every ball integral goes through a list of `(value, weight)` nodes, so the
//! ball mean and the oscillation about it use the same quadrature. Fields built
//! from many tiny discs are integrated component by component in the local
//! coordinates of each disc, with exact lens areas for the empty part.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::math::{acos, ceil, cos, exp, floor, ln, powf, sin, sqrt, LN_2, PI};
use crate::numeric::quad::gauss_legendre;
use crate::numeric::{linear_fit, Pchip};
use crate::report::{Relation, Status, VerificationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    Constant {
        c: f64,
    },
    /// `log(1/|z|)`
    LogRecip,
    /// `|z|^{-a}`; continuous for `a < 0`, not integrable at 0 for `a >= 2`.
    InversePower {
        a: f64,
    },
    /// Indicator of `{x > 0}`.
    HalfPlane,
    /// `u(z) = table(|z|)`, clamped to the end values outside the table.
    RadialTable {
        table: Pchip,
    },
    /// `Σ_{n <= n_max} 2^{2n²} χ(D(2^{-n}, 2^{-p n²}))`
    DiscSum {
        p: f64,
        n_max: usize,
    },
    /// `Σ_{2 <= k <= k_max} 2^{2k²} φ₀((z - 2^{-k}) / r_k)`, `r_k = 2^{-(1+δ)k²}`,
    /// `φ₀(w) = exp(1/(|w|² - 1))` on the unit disc.
    BumpSum {
        delta: f64,
        k_max: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationField {
    pub kind: FieldKind,
    /// Added to every value.
    pub offset: f64,
    /// Largest ball radius the quadrature is trusted for.
    pub integrable_radius: f64,
    pub description: String,
}

/// Polar product rule: Gauss–Legendre in the radius, trapezoid in the angle.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarRule {
    s: Vec<f64>,
    ws: Vec<f64>,
    angular: usize,
}

impl PolarRule {
    pub fn new(radial: usize, angular: usize) -> Self {
        let (x, w) = gauss_legendre(radial);
        let s = x.iter().map(|x| 0.5 * (x + 1.0)).collect();
        let ws = w.iter().map(|w| 0.5 * w).collect();
        Self { s, ws, angular }
    }

    fn angle(&self, j: usize) -> f64 {
        2.0 * PI * (j as f64 + 0.5) / self.angular as f64
    }
}

impl Default for PolarRule {
    fn default() -> Self {
        Self::new(256, 256)
    }
}

fn bump(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        exp(1.0 / (s * s - 1.0))
    }
}

/// Area of `D(0, big) ∩ D(d, small)` (centers `d` apart).
pub fn lens_area(big: f64, small: f64, d: f64) -> f64 {
    // containment first: a disc touching the boundary from inside counts whole
    if d + small <= big {
        return PI * small * small;
    }
    if d >= big + small {
        return 0.0;
    }
    if d + big <= small {
        return PI * big * big;
    }
    if small < 1e-6 * big {
        // the big circle is a straight line at this scale
        let t = ((big - d) / small).clamp(-1.0, 1.0);
        return small * small * (acos(-t) + t * sqrt(1.0 - t * t));
    }
    let a = small
        * small
        * acos(((d * d + small * small - big * big) / (2.0 * d * small)).clamp(-1.0, 1.0));
    let b =
        big * big * acos(((d * d + big * big - small * small) / (2.0 * d * big)).clamp(-1.0, 1.0));
    let c = 0.5
        * sqrt(
            ((-d + small + big) * (d + small - big) * (d - small + big) * (d + small + big))
                .max(0.0),
        );
    a + b - c
}

/// Where a ball meets a disc component, in the component's unit coordinates.
enum Clip {
    Full,
    Disc { wc: [f64; 2], radius: f64 },
    HalfPlane { e: [f64; 2], t: f64 },
}

impl Clip {
    /// Interval of `s ∈ [0, 1]` along the ray in direction `v` inside the ball.
    fn ray(&self, v: [f64; 2]) -> Option<(f64, f64)> {
        let (lo, hi) = match *self {
            Clip::Full => (0.0, 1.0),
            Clip::Disc { wc, radius } => {
                let b = v[0] * wc[0] + v[1] * wc[1];
                let disc = b * b - (wc[0] * wc[0] + wc[1] * wc[1]) + radius * radius;
                if disc <= 0.0 {
                    return None;
                }
                let q = sqrt(disc);
                (b - q, b + q)
            }
            Clip::HalfPlane { e, t } => {
                let ve = v[0] * e[0] + v[1] * e[1];
                if ve > 0.0 {
                    (-t / ve, f64::INFINITY)
                } else if ve < 0.0 {
                    (f64::NEG_INFINITY, t / -ve)
                } else if t > 0.0 {
                    (0.0, 1.0)
                } else {
                    return None;
                }
            }
        };
        let (lo, hi) = (lo.max(0.0), hi.min(1.0));
        (hi > lo).then_some((lo, hi))
    }
}

struct Component {
    z: [f64; 2],
    r: f64,
    /// Value at local radius `s`.
    amplitude: f64,
    constant: bool,
}

impl OscillationField {
    pub fn new(kind: FieldKind) -> Self {
        let description = match &kind {
            FieldKind::Constant { c } => alloc::format!("constant {c}"),
            FieldKind::LogRecip => String::from("log(1/|z|)"),
            FieldKind::InversePower { a } => alloc::format!("|z|^-{a}"),
            FieldKind::HalfPlane => String::from("indicator of x > 0"),
            FieldKind::RadialTable { .. } => String::from("radial table"),
            FieldKind::DiscSum { p, n_max } => alloc::format!("disc sum p={p}, {n_max} discs"),
            FieldKind::BumpSum { delta, k_max } => {
                alloc::format!("bump sum delta={delta}, k=2..{k_max}")
            }
        };
        Self {
            kind,
            offset: 0.0,
            integrable_radius: 1.0,
            description,
        }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn eval(&self, z: [f64; 2]) -> f64 {
        let r = sqrt(z[0] * z[0] + z[1] * z[1]);
        let v = match &self.kind {
            FieldKind::Constant { c } => *c,
            FieldKind::LogRecip => -ln(r),
            FieldKind::InversePower { a } => powf(r, -a),
            FieldKind::HalfPlane => {
                if z[0] > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FieldKind::RadialTable { table } => {
                table.eval(r.clamp(table.first_x(), table.last_x()))
            }
            FieldKind::DiscSum { .. } | FieldKind::BumpSum { .. } => {
                let mut v = 0.0;
                for c in self.components() {
                    let d =
                        sqrt((z[0] - c.z[0]) * (z[0] - c.z[0]) + (z[1] - c.z[1]) * (z[1] - c.z[1]));
                    if d < c.r {
                        v += if c.constant {
                            c.amplitude
                        } else {
                            c.amplitude * bump(d / c.r)
                        };
                    }
                }
                v
            }
        };
        v + self.offset
    }

    fn components(&self) -> Vec<Component> {
        match self.kind {
            FieldKind::DiscSum { p, n_max } => (1..=n_max)
                .map(|n| {
                    let n2 = (n * n) as f64;
                    Component {
                        z: [powf(2.0, -(n as f64)), 0.0],
                        r: powf(2.0, -p * n2),
                        amplitude: powf(2.0, 2.0 * n2),
                        constant: true,
                    }
                })
                .collect(),
            FieldKind::BumpSum { delta, k_max } => (2..=k_max)
                .map(|k| {
                    let k2 = (k * k) as f64;
                    Component {
                        z: [powf(2.0, -(k as f64)), 0.0],
                        r: powf(2.0, -(1.0 + delta) * k2),
                        amplitude: powf(2.0, 2.0 * k2),
                        constant: false,
                    }
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Quadrature nodes `(u, weight)` over `B(center, radius)`; weights sum to
    /// the disc area.
    pub fn ball_nodes(
        &self,
        center: [f64; 2],
        radius: f64,
        rule: &PolarRule,
    ) -> Result<Vec<(f64, f64)>> {
        if !(radius > 0.0) {
            bail!(Validation, "ball radius must be positive, got {radius}");
        }
        if radius > self.integrable_radius {
            bail!(
                Precondition,
                "radius {radius} exceeds the trusted radius {}",
                self.integrable_radius
            );
        }
        if let FieldKind::InversePower { a } = self.kind {
            if a >= 2.0 && center[0] * center[0] + center[1] * center[1] <= radius * radius {
                return Err(Error::Domain(alloc::format!(
                    "|z|^-{a} is not integrable near 0"
                )));
            }
        }
        let comps = self.components();
        if comps.is_empty() {
            return Ok(self.polar_nodes(center, radius, rule));
        }
        let mut nodes = Vec::new();
        let mut covered = 0.0;
        for c in &comps {
            let dx = [c.z[0] - center[0], c.z[1] - center[1]];
            let d = sqrt(dx[0] * dx[0] + dx[1] * dx[1]);
            let area = lens_area(radius, c.r, d);
            if area == 0.0 {
                continue;
            }
            covered += area;
            if c.constant {
                nodes.push((c.amplitude + self.offset, area));
                continue;
            }
            let clip = if d + c.r <= radius {
                Clip::Full
            } else if c.r < 1e-6 * radius {
                Clip::HalfPlane {
                    e: [-dx[0] / d, -dx[1] / d],
                    t: (radius - d) / c.r,
                }
            } else {
                Clip::Disc {
                    wc: [-dx[0] / c.r, -dx[1] / c.r],
                    radius: radius / c.r,
                }
            };
            let dth = 2.0 * PI / rule.angular as f64;
            for j in 0..rule.angular {
                let th = rule.angle(j);
                let v = [cos(th), sin(th)];
                let Some((lo, hi)) = clip.ray(v) else {
                    continue;
                };
                for (s, w) in rule.s.iter().zip(&rule.ws) {
                    let s = lo + (hi - lo) * s;
                    let weight = w * (hi - lo) * s * dth * c.r * c.r;
                    nodes.push((c.amplitude * bump(s) + self.offset, weight));
                }
            }
        }
        nodes.push((self.offset, (PI * radius * radius - covered).max(0.0)));
        Ok(nodes)
    }

    fn polar_nodes(&self, center: [f64; 2], radius: f64, rule: &PolarRule) -> Vec<(f64, f64)> {
        let dth = 2.0 * PI / rule.angular as f64;
        let mut nodes = Vec::with_capacity(rule.s.len() * rule.angular);
        for j in 0..rule.angular {
            let th = rule.angle(j);
            let (c, s_) = (cos(th), sin(th));
            for (s, w) in rule.s.iter().zip(&rule.ws) {
                let r = radius * s;
                nodes.push((
                    self.eval([center[0] + r * c, center[1] + r * s_]),
                    w * s * radius * radius * dth,
                ));
            }
        }
        nodes
    }

    pub fn ball_mean(&self, center: [f64; 2], radius: f64, rule: &PolarRule) -> Result<f64> {
        Ok(mean_of(&self.ball_nodes(center, radius, rule)?))
    }

    /// `⨍_B |u - u_B|`.
    pub fn mean_oscillation(&self, center: [f64; 2], radius: f64, rule: &PolarRule) -> Result<f64> {
        let nodes = self.ball_nodes(center, radius, rule)?;
        let m = mean_of(&nodes);
        Ok(deviation(&nodes, m))
    }

    /// `⨍_B |u - c|`.
    pub fn deviation_from(
        &self,
        center: [f64; 2],
        radius: f64,
        c: f64,
        rule: &PolarRule,
    ) -> Result<f64> {
        Ok(deviation(&self.ball_nodes(center, radius, rule)?, c))
    }

    /// Largest mean oscillation over the given balls: a lower bound for the
    /// BMO seminorm.
    pub fn bmo_lower_bound(&self, balls: &[([f64; 2], f64)], rule: &PolarRule) -> Result<f64> {
        let mut best = 0.0f64;
        for (c, r) in balls {
            best = best.max(self.mean_oscillation(*c, *r, rule)?);
        }
        Ok(best)
    }
}

fn mean_of(nodes: &[(f64, f64)]) -> f64 {
    // relative to the heaviest node: constants come out exact, and a huge
    // spike on a tiny weight does not swamp the background value
    let v0 = nodes
        .iter()
        .fold((0.0, f64::NEG_INFINITY), |acc, n| {
            if n.1 > acc.1 {
                (n.0, n.1)
            } else {
                acc
            }
        })
        .0;
    let (mut s, mut w) = (0.0, 0.0);
    for (v, wt) in nodes {
        s += (v - v0) * wt;
        w += wt;
    }
    v0 + s / w
}

fn deviation(nodes: &[(f64, f64)], c: f64) -> f64 {
    let (mut s, mut w) = (0.0, 0.0);
    for (v, wt) in nodes {
        s += (v - c).abs() * wt;
        w += wt;
    }
    s / w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum FmoEvidence {
    EvidenceFor,
    EvidenceAgainst,
    /// Ball means diverge together with the oscillation.
    NotFmoEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmoResult {
    pub eps: Vec<f64>,
    /// Ball means `ũ_ε(z0)`.
    pub means: Vec<f64>,
    /// `⨍_{B(z0,ε)} |u - ũ_ε|`.
    pub oscillations: Vec<f64>,
    /// `⨍_{B(z0,ε)} |u - c_ε|` for the supplied centering constants.
    pub against_constants: Vec<f64>,
    /// Max over the grid, the limsup proxy.
    pub max_oscillation: f64,
    /// Slope of `ln(osc)` against `ln(1/ε)`.
    pub trend: f64,
    pub evidence: FmoEvidence,
    pub reports: Vec<VerificationReport>,
}

/// Mean oscillation at `z0` along `eps_grid` (decreasing). `centering`
/// supplies the constants `c_ε` for the comparison
/// `⨍|u - ũ_ε| <= 2 ⨍|u - c_ε|`; zero when absent.
pub fn fmo_at_point(
    u: &OscillationField,
    z0: [f64; 2],
    eps_grid: &[f64],
    centering: Option<&dyn Fn(f64) -> f64>,
    rule: &PolarRule,
) -> Result<FmoResult> {
    if eps_grid.len() < 2 {
        bail!(Validation, "need at least two scales");
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        bail!(Validation, "scales must decrease");
    }
    let mut out = FmoResult {
        eps: eps_grid.to_vec(),
        means: Vec::new(),
        oscillations: Vec::new(),
        against_constants: Vec::new(),
        max_oscillation: 0.0,
        trend: 0.0,
        evidence: FmoEvidence::EvidenceFor,
        reports: Vec::new(),
    };
    for &eps in eps_grid {
        let nodes = match u.ball_nodes(z0, eps, rule) {
            Ok(n) => n,
            Err(Error::Domain(msg)) => {
                out.evidence = FmoEvidence::NotFmoEvidence;
                out.max_oscillation = f64::INFINITY;
                out.reports.push(VerificationReport::flag(
                    "finite mean oscillation",
                    "ball means and mean oscillation stay finite as the radius shrinks",
                    false,
                    msg,
                ));
                return Ok(out);
            }
            Err(e) => return Err(e),
        };
        let m = mean_of(&nodes);
        let osc = deviation(&nodes, m);
        let c = centering.map_or(0.0, |f| f(eps));
        out.means.push(m);
        out.oscillations.push(osc);
        out.against_constants.push(deviation(&nodes, c));
    }
    out.max_oscillation = out.oscillations.iter().cloned().fold(0.0, f64::max);
    let pairs: Vec<(f64, f64)> = out
        .eps
        .iter()
        .zip(&out.oscillations)
        .filter(|(_, o)| **o > 1e-300)
        .map(|(e, o)| (-ln(*e), ln(*o)))
        .collect();
    if pairs.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        out.trend = linear_fit(&x, &y).0;
    }
    let last = *out.oscillations.last().expect("non-empty grid");
    let growing = out.trend > 0.25 && last > out.oscillations[0];
    out.evidence = if growing {
        FmoEvidence::EvidenceAgainst
    } else {
        FmoEvidence::EvidenceFor
    };
    let ratio = out
        .oscillations
        .iter()
        .zip(&out.against_constants)
        .map(|(o, c)| {
            if *c > 0.0 {
                o / (2.0 * c)
            } else if *o > 1e-12 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    out.reports.push(
        VerificationReport::compare(
            "centering comparison",
            "oscillation about the ball mean is at most twice the oscillation about any constant",
            ratio,
            Relation::Le,
            1.0,
            1e-12,
        )
        .with_samples(eps_grid.len() as u64),
    );
    let mut fmo = VerificationReport::flag(
        "finite mean oscillation",
        "mean oscillation about the ball means stays bounded as the radius shrinks",
        !growing,
        alloc::format!(
            "max {:.6e}, trend slope {:.4} over {} scales",
            out.max_oscillation,
            out.trend,
            eps_grid.len()
        ),
    );
    fmo.lhs = out.max_oscillation;
    out.reports.push(fmo);
    Ok(out)
}

/// Dyadic scales `2^{-1}, …, 2^{-count}` times `top`.
pub fn dyadic_scales(top: f64, count: usize) -> Vec<f64> {
    (0..count).map(|j| top * powf(2.0, -(j as f64))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub reports: Vec<VerificationReport>,
    /// `∫ u^p` over each component.
    pub per_component: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Fitted constant of the geometric tail bound (disc sum only).
    pub fitted_constant: Option<f64>,
}

/// The disc sum with `c_n = 2^{2n²}`, `r_n = 2^{-pn²}`, `n <= 6`.
pub fn build_disc_sum(p: f64) -> Result<(OscillationField, ExampleReport)> {
    build_disc_sum_with(p, 6)
}

pub fn build_disc_sum_with(p: f64, n_max: usize) -> Result<(OscillationField, ExampleReport)> {
    if !(p > 1.0) {
        bail!(Domain, "exponent must exceed 1, got {p}");
    }
    let n_min = floor(1.0 / (p - 1.0)) as usize + 1;
    if n_min > n_max {
        bail!(
            Validation,
            "need n_max >= {n_min} so that (p-1)N > 1 for some N <= n_max"
        );
    }
    let field = OscillationField::new(FieldKind::DiscSum { p, n_max });
    let rule = PolarRule::new(8, 8);
    let comps = field.components();
    let mut reports = Vec::new();

    let mut per = Vec::new();
    let mut sums = Vec::new();
    let mut total = 0.0;
    for c in &comps {
        let v = exp(p * ln(c.amplitude) + ln(PI) + 2.0 * ln(c.r));
        per.push(v);
        total += v;
        sums.push(total);
    }
    let worst = per.iter().map(|v| (v - PI).abs()).fold(0.0, f64::max);
    reports.push(VerificationReport::compare(
        "disc L^p contribution",
        "each disc contributes exactly π to the integral of u^p",
        worst,
        Relation::Le,
        1e-9,
        0.0,
    ));
    let xs: Vec<f64> = (1..=sums.len()).map(|m| m as f64).collect();
    let (slope, icpt) = linear_fit(&xs, &sums);
    let increasing = sums.windows(2).all(|w| w[1] > w[0]);
    let lin_err = xs
        .iter()
        .zip(&sums)
        .map(|(x, s)| (slope * x + icpt - s).abs())
        .fold(0.0, f64::max);
    reports.push(VerificationReport::flag(
        "L^p partial sums",
        "partial sums of the integral of u^p grow linearly without bound",
        increasing && lin_err < 1e-9 && (slope - PI).abs() < 1e-9,
        alloc::format!("slope {slope:.12}, max deviation from a line {lin_err:.3e}"),
    ));

    // integral over D(ε_N), ε_N = z_N + r_N, against the geometric bound
    let mut fitted = 0.0f64;
    let mut rows = Vec::new();
    for big_n in n_min..=n_max {
        let c = &comps[big_n - 1];
        let eps = c.z[0] + c.r;
        let nodes = field.ball_nodes([0.0, 0.0], eps, &rule)?;
        let integral: f64 = nodes.iter().map(|(v, w)| v * w).sum();
        let enclosed: f64 = PI
            * (big_n..=n_max)
                .map(|n| exp(2.0 * (1.0 - p) * (n * n) as f64 * LN_2))
                .sum::<f64>();
        // D(ε_N) may also clip the larger discs n < N
        let clipped: f64 = comps[..big_n - 1]
            .iter()
            .map(|c| c.amplitude * lens_area(eps, c.r, c.z[0]))
            .sum();
        let closed = enclosed + clipped;
        let geometric = PI
            * (big_n..=n_max)
                .map(|n| exp(2.0 * (1.0 - p) * n as f64 * LN_2))
                .sum::<f64>();
        let scale = exp(2.0 * (1.0 - p) * big_n as f64 * LN_2);
        fitted = fitted.max(integral / scale);
        rows.push((big_n, eps, integral, closed, geometric, scale));
    }
    let mut chain_ok = true;
    let mut worst_ratio = 0.0f64;
    let mut quad_err = 0.0f64;
    for &(_, eps, integral, closed, geometric, _) in &rows {
        quad_err = quad_err.max((integral / closed - 1.0).abs());
        chain_ok &= integral <= geometric * (1.0 + 1e-12);
        worst_ratio = worst_ratio.max(integral / (2.0 * fitted * eps * eps));
    }
    reports.push(VerificationReport::compare(
        "disc integral",
        "the integral over D(ε) is π times the sum of 2^{2(1-p)n²} over the enclosed discs plus clipped parts of larger discs",
        quad_err,
        Relation::Le,
        1e-12,
        0.0,
    ));
    reports.push(VerificationReport::flag(
        "geometric tail",
        "the enclosed disc integrals are dominated by the geometric series in 2^{2(1-p)n}",
        chain_ok,
        "",
    ));
    reports.push(
        VerificationReport::compare(
            "shrinking disc bound",
            "the integral over D(ε) is below 2Cε² with the fitted constant C",
            worst_ratio,
            Relation::Le,
            1.0,
            0.0,
        )
        .with_note(alloc::format!(
            "fitted C = {fitted:.6e} over N = {n_min}..={n_max}"
        )),
    );
    Ok((
        field,
        ExampleReport {
            reports,
            per_component: per,
            partial_sums: sums,
            fitted_constant: Some(fitted),
        },
    ))
}

/// Smooth bump sum with `r_k = 2^{-(1+δ)k²}`, `k <= ceil(1/δ) + 3`.
pub fn build_bump_sum(delta: f64) -> Result<(OscillationField, ExampleReport)> {
    if !(delta > 0.0) {
        bail!(Domain, "delta must be positive, got {delta}");
    }
    build_bump_sum_with(delta, ceil(1.0 / delta) as usize + 3)
}

pub fn build_bump_sum_with(delta: f64, k_max: usize) -> Result<(OscillationField, ExampleReport)> {
    if !(delta > 0.0) {
        bail!(Domain, "delta must be positive, got {delta}");
    }
    let k_needed = ceil(1.0 / delta) as usize + 1;
    if k_max < k_needed {
        bail!(
            Validation,
            "truncation {k_max} is below ceil(1/delta) + 1 = {k_needed}"
        );
    }
    let field = OscillationField::new(FieldKind::BumpSum { delta, k_max });
    let rule = PolarRule::default();
    let comps = field.components();
    let mut reports = Vec::new();

    // I = ∫ φ₀, both powers by the same radial rule
    let unit = |e: f64| -> f64 {
        2.0 * PI
            * rule
                .s
                .iter()
                .zip(&rule.ws)
                .map(|(s, w)| w * s * powf(bump(*s), e))
                .sum::<f64>()
    };
    let i0 = unit(1.0);
    let ip = unit(1.0 + delta);

    // per-bump integrals through the field's own quadrature
    let mut per = Vec::new();
    let mut sums = Vec::new();
    let mut mass_err = 0.0f64;
    let mut total = 0.0;
    for (idx, c) in comps.iter().enumerate() {
        let k = idx + 2;
        let nodes = field.ball_nodes(c.z, c.r, &rule)?;
        let mass: f64 = nodes.iter().map(|(v, w)| v * w).sum();
        let expected = exp(-2.0 * delta * (k * k) as f64 * LN_2) * i0;
        mass_err = mass_err.max((mass / expected - 1.0).abs());
        let lp: f64 = nodes.iter().map(|(v, w)| powf(*v, 1.0 + delta) * w).sum();
        per.push(lp);
        total += lp;
        sums.push(total);
    }
    reports.push(VerificationReport::compare(
        "bump mass",
        "the k-th bump has integral 2^{-2δk²} times the integral of the profile",
        mass_err,
        Relation::Le,
        1e-9,
        0.0,
    ));
    let spread = per.iter().map(|v| (v / ip - 1.0).abs()).fold(0.0, f64::max);
    reports.push(
        VerificationReport::compare(
            "bump L^{1+δ} integral",
            "each bump has the same L^{1+δ} integral as the profile",
            spread,
            Relation::Le,
            1e-6,
            0.0,
        )
        .with_note(alloc::format!("profile integral {ip:.12e}")),
    );
    let xs: Vec<f64> = (1..=sums.len()).map(|m| m as f64).collect();
    let (slope, icpt) = linear_fit(&xs, &sums);
    let lin_err = xs
        .iter()
        .zip(&sums)
        .map(|(x, s)| (slope * x + icpt - s).abs())
        .fold(0.0, f64::max);
    reports.push(VerificationReport::flag(
        "L^{1+δ} partial sums",
        "partial sums of the L^{1+δ} integral grow linearly without bound",
        sums.windows(2).all(|w| w[1] > w[0]) && lin_err <= 1e-6 * ip,
        alloc::format!("slope {slope:.12e}"),
    ));

    // J = ⨍_{D(ε)} u for ε in (2^{-(K+1)}, 2^{-K}] with Kδ > 1
    let k_lo = floor(1.0 / delta) as usize + 1;
    let bound = 16.0 * i0 / (3.0 * PI);
    let mut worst = f64::NEG_INFINITY;
    let mut inner_ok = true;
    let mut count = 0u64;
    for big_k in k_lo..=k_max {
        for theta in [1.0, 0.9, 0.75, 0.6, 0.51] {
            let eps = theta * powf(2.0, -(big_k as f64));
            let j = field.ball_mean([0.0, 0.0], eps, &rule)?;
            let tail: f64 = (big_k..=k_max)
                .map(|k| exp(-2.0 * delta * (k * k) as f64 * LN_2))
                .sum();
            let middle = i0 * tail / (PI * powf(2.0, -2.0 * (big_k as f64 + 1.0)));
            inner_ok &= j <= middle * (1.0 + 1e-9);
            worst = worst.max(j - bound);
            count += 1;
        }
    }
    reports.push(
        VerificationReport::compare(
            "shrinking disc mean",
            "the mean of u over D(ε) is at most 16I/(3π) once Kδ > 1",
            worst + bound,
            Relation::Le,
            bound,
            1e-6,
        )
        .with_samples(count),
    );
    reports.push(VerificationReport::flag(
        "dyadic tail bound",
        "the disc mean is at most I Σ_{k>=K} 2^{-2δk²} / (π 2^{-2(K+1)})",
        inner_ok,
        "",
    ));
    let _ = Status::Pass;
    Ok((
        field,
        ExampleReport {
            reports,
            per_component: per,
            partial_sums: sums,
            fitted_constant: None,
        },
    ))
}
