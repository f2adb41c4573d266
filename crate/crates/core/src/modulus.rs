//! Modulus of sphere and curve families in spherical rings: the weighted
//! closed forms with their extremal densities, a discrete polar-grid solver
//! in the plane, and the reciprocity between joining and separating families.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::distortion::ModelMap;
use crate::error::{bail, Error, Result};
use crate::math::{exp, ln, powf, sqrt, PI};
use crate::numeric::misc::proportional_fit;
use crate::numeric::{geomspace, integrate, unit_sphere_area, QuadConfig, SphereRule};
use crate::report::{Relation, VerificationReport};
use crate::weight::RadialWeight;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingDomain {
    pub center: Vec<f64>,
    pub r1: f64,
    pub r2: f64,
    pub n: usize,
}

impl RingDomain {
    pub fn new(r1: f64, r2: f64, n: usize) -> Result<Self> {
        if !(r1 > 0.0 && r1 < r2) {
            bail!(Domain, "ring needs 0 < r1 < r2, got {r1}, {r2}");
        }
        if n < 2 {
            bail!(Domain, "ring dimension must be at least 2");
        }
        Ok(Self {
            center: alloc::vec![0.0; n],
            r1,
            r2,
            n,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    /// Spheres centred at the ring center (separating surfaces in `R^n`,
    /// circles in the plane).
    Spheres,
    /// Curves joining the boundary spheres.
    Curves,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    ClosedForm,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    /// `ρ₀(x) = Q(x) / ‖Q‖_{n-1}(|x|)`
    SphereExtremal { weight: RadialWeight },
    /// `η₀(r) = 1 / (I r q^{1/(n-1)}(r))`
    CurveExtremal { weight: RadialWeight, i: f64 },
    /// Cell values on a polar grid, radius-major.
    Grid {
        radii: Vec<f64>,
        angular: usize,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleDensity {
    pub family: Family,
    pub kind: DensityKind,
}

impl AdmissibleDensity {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = sqrt(x.iter().map(|v| v * v).sum());
        match &self.kind {
            DensityKind::SphereExtremal { weight } => weight.eval_point(x) / weight.surface_norm(r),
            DensityKind::CurveExtremal { weight, i } => {
                let e = (weight.n - 1) as f64;
                1.0 / (i * r * powf(weight.q(r), 1.0 / e))
            }
            DensityKind::Grid {
                radii,
                angular,
                values,
            } => {
                if r < radii[0] || r >= *radii.last().expect("grid radii") {
                    return 0.0;
                }
                let i = radii.partition_point(|v| *v <= r) - 1;
                let th = crate::math::atan2(x[1], x[0]).rem_euclid(2.0 * PI);
                let j = ((th / (2.0 * PI) * *angular as f64) as usize).min(angular - 1);
                values[i * angular + j]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusResult {
    pub value: f64,
    pub family: Family,
    pub method: Method,
    pub extremal: AdmissibleDensity,
    pub certificate: VerificationReport,
}

/// `‖Q‖_{n-1}(x0, r) = (∫_{S(x0,r)} Q^{n-1} dA)^{1/(n-1)}`.
pub fn surface_norm(w: &RadialWeight, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        bail!(Domain, "sphere radius must be positive, got {r}");
    }
    let v = w.surface_norm(r);
    if !v.is_finite() {
        return Err(Error::Domain(alloc::format!(
            "weight undefined on the sphere of radius {r}"
        )));
    }
    Ok(v)
}

/// `∫_ε^{ε0} dr / ‖Q‖_{n-1}(r)`, the lower bound for the `(n-1)`-modulus of the
/// image of the spheres between `ε` and `ε0`, with extremal `ρ₀`.
pub fn spheres_lower_bound(w: &RadialWeight, eps: f64, eps0: f64) -> Result<ModulusResult> {
    if !(eps > 0.0 && eps < eps0) {
        bail!(Domain, "need 0 < eps < eps0, got {eps}, {eps0}");
    }
    let cfg = QuadConfig::rel(1e-13);
    let zero = core::cell::Cell::new(false);
    let res = integrate(
        |v: f64| {
            let r = exp(v);
            let s = w.surface_norm(r);
            if s == 0.0 {
                zero.set(true);
                return 0.0;
            }
            r / s
        },
        ln(eps),
        ln(eps0),
        &cfg,
    );
    let value = res.value;
    let density = AdmissibleDensity {
        family: Family::Spheres,
        kind: DensityKind::SphereExtremal { weight: w.clone() },
    };

    // ∫_{S(r)} ρ₀^{n-1} dA on a grid of spheres
    let e = (w.n - 1) as f64;
    let rule = SphereRule::new(w.n, 24);
    let mut worst = f64::INFINITY;
    let radii = geomspace(eps, eps0, 33);
    for r in &radii {
        let area = unit_sphere_area(w.n) * powf(*r, e);
        let s = w.surface_norm(*r);
        let m = rule.mean(|x| powf(w.eval_point(x) / s, e), &w.center, *r);
        worst = worst.min(area * m);
    }
    let mut cert = VerificationReport::compare(
        "sphere admissibility",
        "the extremal density has (n-1)-integral at least 1 over every sphere",
        worst,
        Relation::Ge,
        1.0,
        1e-6,
    )
    .with_samples(radii.len() as u64);
    if zero.get() {
        cert = cert
            .with_note("surface norm vanishes on part of the range; the integrand there diverges");
    }
    Ok(ModulusResult {
        value,
        family: Family::Spheres,
        method: Method::ClosedForm,
        extremal: density,
        certificate: cert,
    })
}

/// `ω_{n-1} / I^{n-1}`, `I = ∫_{r1}^{r2} dr / (r q^{1/(n-1)}(r))`: the upper bound
/// for the modulus of curves joining the boundary spheres, with extremal `η₀`.
pub fn ring_upper_bound(w: &RadialWeight, ring: &RingDomain) -> Result<ModulusResult> {
    if w.n != ring.n {
        bail!(
            Validation,
            "weight dimension {} differs from ring dimension {}",
            w.n,
            ring.n
        );
    }
    let e = (ring.n - 1) as f64;
    let cfg = QuadConfig::rel(1e-13);
    let inner = |v: f64| exp(-w.ln_q_at_log(v) / e);
    let i = integrate(inner, ln(ring.r1), ln(ring.r2), &cfg).value;
    if !(i > 0.0) || !i.is_finite() {
        return Err(Error::Numerical(alloc::format!(
            "degenerate weight: I = {i}"
        )));
    }
    let value = unit_sphere_area(ring.n) / powf(i, e);
    let weight = w.clone();
    // ∫ η₀ dr in the radius itself, a different parametrization from I
    let check = integrate(
        |r: f64| 1.0 / (i * r * powf(weight.q(r), 1.0 / e)),
        ring.r1,
        ring.r2,
        &cfg,
    )
    .value;
    let cert = VerificationReport::compare(
        "curve density normalization",
        "the extremal radial density integrates to 1 across the ring",
        check,
        Relation::Eq,
        1.0,
        1e-9,
    );
    Ok(ModulusResult {
        value,
        family: Family::Curves,
        method: Method::ClosedForm,
        extremal: AdmissibleDensity {
            family: Family::Curves,
            kind: DensityKind::CurveExtremal { weight, i },
        },
        certificate: cert,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub resolution: usize,
    pub p: f64,
    pub max_iter: usize,
    /// Stop when the relative objective change over `window` iterations is below this.
    pub rel_change: f64,
    pub window: usize,
    /// Angular sector `[θ0, θ1)` carrying the family (curves only).
    pub sector: (f64, f64),
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            resolution: 256,
            p: 2.0,
            max_iter: 10_000,
            rel_change: 1e-7,
            window: 100,
            sector: (0.0, 2.0 * PI),
        }
    }
}

/// One constraint `Σ ℓ_i ρ_i >= 1` over its own cells of areas `A_i`.
struct Block {
    cells: Vec<usize>,
    len: Vec<f64>,
    area: Vec<f64>,
}

/// Euclidean projection onto `{x >= 0, ℓ·x >= 1}`.
fn project(x: &mut [f64], len: &[f64]) {
    let ll: f64 = len.iter().map(|l| l * l).sum();
    let lx: f64 = x.iter().zip(len).map(|(v, l)| v * l).sum();
    // without active sign constraints the projection is a single shift along ℓ
    let lam = ((1.0 - lx) / ll).max(0.0);
    if x.iter().zip(len).all(|(v, l)| v + lam * l >= 0.0) {
        for (v, l) in x.iter_mut().zip(len) {
            *v += lam * l;
        }
        return;
    }
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
    let dot = |x: &[f64], lam: f64| -> f64 {
        x.iter()
            .zip(len)
            .map(|(v, l)| (v + lam * l).max(0.0) * l)
            .sum()
    };
    if dot(x, 0.0) >= 1.0 {
        return;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while dot(x, hi) < 1.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dot(x, mid) >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    for (v, l) in x.iter_mut().zip(len) {
        *v = (*v + hi * l).max(0.0);
    }
}

/// Projection onto `{x >= 0, ℓ·x >= 1}` in the metric `Σ d_i x_i²`; falls back
/// to the Euclidean projection when a sign constraint becomes active.
fn project_scaled(x: &mut [f64], len: &[f64], d: &[f64]) {
    let lx: f64 = x.iter().zip(len).map(|(v, l)| v * l).sum();
    let ldl: f64 = len.iter().zip(d).map(|(l, di)| l * l / di).sum();
    let lam = ((1.0 - lx) / ldl).max(0.0);
    if x.iter()
        .zip(len)
        .zip(d)
        .all(|((v, l), di)| v + lam * l / di >= 0.0)
    {
        for ((v, l), di) in x.iter_mut().zip(len).zip(d) {
            *v += lam * l / di;
        }
    } else {
        project(x, len);
    }
}

/// Hölder lower bound for one block: `min Σ A ρ^p` subject to `Σ ℓρ >= 1`.
fn block_dual(len: &[f64], area: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return len
            .iter()
            .zip(area)
            .map(|(l, a)| a / l)
            .fold(f64::INFINITY, f64::min);
    }
    let q = p / (p - 1.0);
    let s: f64 = len
        .iter()
        .zip(area)
        .map(|(l, a)| powf(*l, q) * powf(*a, 1.0 - q))
        .sum();
    powf(s, 1.0 - p)
}

/// Projected subgradient with Polyak steps on one block, in the variables
/// `y = A^{1/p} ρ` where the objective is `Σ y^p`, with steps and projection
/// taken in the diagonal metric of its curvature. Each constraint uses its own
/// cells, so blocks are solved independently and the projection is exact; the
/// Hölder bound serves as the Polyak target and certifies the gap.
/// Returns (ρ, value, iterations, duality gap).
fn solve_block(b: &Block, cfg: &GridConfig) -> (Vec<f64>, f64, usize, f64) {
    let p = cfg.p;
    let target = block_dual(&b.len, &b.area, p);
    let scale: Vec<f64> = b.area.iter().map(|a| powf(*a, 1.0 / p)).collect();
    let len: Vec<f64> = b.len.iter().zip(&scale).map(|(l, s)| l / s).collect();
    let obj = |y: &[f64]| -> f64 { y.iter().map(|v| powf(v.max(0.0), p)).sum() };
    let ll: f64 = len.iter().map(|l| l * l).sum();
    let mut y: Vec<f64> = len.iter().map(|l| l / ll).collect();
    let mut f = obj(&y);
    let mut best = (y.clone(), f);
    let mut history = Vec::with_capacity(cfg.max_iter);
    let mut iters = 0;
    for it in 0..cfg.max_iter {
        iters = it + 1;
        if f - target <= 1e-15 * target {
            break;
        }
        let g: Vec<f64> = y.iter().map(|v| p * powf(v.max(0.0), p - 1.0)).collect();
        // diagonal metric from the curvature of Σ y^p (identity for p <= 1)
        let d: Vec<f64> = y
            .iter()
            .map(|v| {
                if p > 1.0 {
                    p * (p - 1.0) * powf(v.max(1e-300), p - 2.0)
                } else {
                    1.0
                }
            })
            .map(|v| if v.is_finite() && v > 0.0 { v } else { 1.0 })
            .collect();
        // the iterate sits on ℓ·y = 1, so step along the tangential part of g
        let ldg: f64 = len
            .iter()
            .zip(&g)
            .zip(&d)
            .map(|((l, gi), di)| l * gi / di)
            .sum();
        let ldl: f64 = len.iter().zip(&d).map(|(l, di)| l * l / di).sum();
        let mu = ldg / ldl;
        let gt: Vec<f64> = g.iter().zip(&len).map(|(gi, l)| gi - mu * l).collect();
        let gg: f64 = gt.iter().zip(&d).map(|(v, di)| v * v / di).sum();
        let full: f64 = g.iter().zip(&d).map(|(v, di)| v * v / di).sum();
        if gg <= 1e-24 * full {
            break;
        }
        let step = (f - target) / gg;
        for ((v, gi), di) in y.iter_mut().zip(&gt).zip(&d) {
            *v -= step * gi / di;
        }
        project_scaled(&mut y, &len, &d);
        f = obj(&y);
        if f < best.1 {
            best = (y.clone(), f);
        }
        history.push(best.1);
        if history.len() > cfg.window {
            let old = history[history.len() - 1 - cfg.window];
            if (old - best.1).abs() <= cfg.rel_change * best.1 {
                break;
            }
        }
    }
    let rho: Vec<f64> = best.0.iter().zip(&scale).map(|(v, s)| v / s).collect();
    let gap = best.1 - target;
    (rho, best.1, iters, gap)
}

/// Discrete `p`-modulus of the joining curves (`Curves`: rays) or the
/// separating circles (`Spheres`) of a planar ring on a polar grid with
/// logarithmically spaced radii.
pub fn grid_modulus_2d(
    ring: &RingDomain,
    family: Family,
    cfg: &GridConfig,
) -> Result<ModulusResult> {
    if ring.n != 2 {
        return Err(Error::Unsupported(String::from("grid solver is planar")));
    }
    if !(cfg.p >= 1.0) || cfg.resolution < 2 {
        bail!(Validation, "grid needs p >= 1 and resolution >= 2");
    }
    let (t0, t1) = cfg.sector;
    if !(t0 >= 0.0 && t1 > t0 && t1 <= 2.0 * PI + 1e-12) {
        bail!(Validation, "sector must satisfy 0 <= θ0 < θ1 <= 2π");
    }
    let nr = cfg.resolution;
    let nt = cfg.resolution;
    let dth = 2.0 * PI / nt as f64;
    let radii = geomspace(ring.r1, ring.r2, nr + 1);
    let area = |i: usize| 0.5 * (radii[i + 1] * radii[i + 1] - radii[i] * radii[i]) * dth;
    let in_sector = |j: usize| {
        let th = (j as f64 + 0.5) * dth;
        th >= t0 && th < t1
    };
    let mut blocks = Vec::new();
    match family {
        Family::Curves => {
            for j in (0..nt).filter(|j| in_sector(*j)) {
                blocks.push(Block {
                    cells: (0..nr).map(|i| i * nt + j).collect(),
                    len: (0..nr).map(|i| radii[i + 1] - radii[i]).collect(),
                    area: (0..nr).map(area).collect(),
                });
            }
        }
        Family::Spheres => {
            if t0 != 0.0 || t1 < 2.0 * PI - 1e-12 {
                bail!(Validation, "separating circles need the full angle");
            }
            for i in 0..nr {
                let m = sqrt(radii[i] * radii[i + 1]);
                blocks.push(Block {
                    cells: (0..nt).map(|j| i * nt + j).collect(),
                    len: alloc::vec![m * dth; nt],
                    area: alloc::vec![area(i); nt],
                });
            }
        }
    }
    if blocks.is_empty() {
        bail!(Validation, "sector contains no grid curves");
    }
    let mut values = alloc::vec![0.0; nr * nt];
    let mut total = 0.0;
    let mut worst_gap = 0.0f64;
    let mut worst_constraint = f64::INFINITY;
    let mut max_iters = 0;
    for b in &blocks {
        let (x, f, it, gap) = solve_block(b, cfg);
        total += f;
        worst_gap = worst_gap.max(gap / f);
        max_iters = max_iters.max(it);
        worst_constraint = worst_constraint.min(x.iter().zip(&b.len).map(|(v, l)| v * l).sum());
        for (c, v) in b.cells.iter().zip(&x) {
            values[*c] = *v;
        }
    }
    let mut cert = VerificationReport::compare(
        "grid admissibility",
        "every discrete curve has density integral at least 1",
        worst_constraint,
        Relation::Ge,
        1.0,
        1e-9,
    )
    .with_samples(blocks.len() as u64)
    .with_slack("relative duality gap", worst_gap)
    .with_note(alloc::format!(
        "{} blocks, at most {max_iters} iterations",
        blocks.len()
    ));
    if worst_gap > 1e-6 {
        cert = cert.mark_inconclusive(alloc::format!(
            "duality gap {worst_gap:.3e} after {max_iters} iterations"
        ));
    }
    Ok(ModulusResult {
        value: total,
        family,
        method: Method::Grid,
        extremal: AdmissibleDensity {
            family,
            kind: DensityKind::Grid {
                radii,
                angular: nt,
                values,
            },
        },
        certificate: cert,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityResult {
    pub image_r1: f64,
    pub image_r2: f64,
    /// `M(Δ(fS₁, fS₂; fD))`
    pub joining: f64,
    /// `M(fΣ)`
    pub separating: f64,
    pub grid_joining: Option<f64>,
    pub grid_separating: Option<f64>,
    pub reports: Vec<VerificationReport>,
}

/// `M(Δ) <= 1 / M^{n-1}(Σ)` on the image of a ring under a radial model map,
/// with equality for these symmetric rings; planar rings are also solved on
/// the grid when `grid` is given.
pub fn hesse_ziemer_check(
    ring: &RingDomain,
    map: &ModelMap,
    grid: Option<&GridConfig>,
) -> Result<ReciprocityResult> {
    let (a, b) =
        match map {
            ModelMap::Identity { n } if *n == ring.n => (ring.r1, ring.r2),
            ModelMap::RadialStretch { alpha, n } if *n == ring.n => {
                (powf(ring.r1, *alpha), powf(ring.r2, *alpha))
            }
            _ => return Err(Error::Unsupported(String::from(
                "reciprocity check needs the identity or a radial stretch of the ring's dimension",
            ))),
        };
    let image = RingDomain::new(a, b, ring.n)?;
    let w = RadialWeight::constant(ring.n, 1.0);
    let joining = ring_upper_bound(&w, &image)?.value;
    let separating = spheres_lower_bound(&w, a, b)?.value;
    let e = (ring.n - 1) as f64;
    let dual = 1.0 / powf(separating, e);
    let mut reports = alloc::vec![
        VerificationReport::compare(
            "reciprocity",
            "joining-curve modulus is at most the reciprocal (n-1)-power of the separating-sphere modulus",
            joining,
            Relation::Le,
            dual,
            1e-9 * dual,
        ),
        VerificationReport::compare(
            "reciprocity equality",
            "for spherical rings the two sides are equal",
            joining,
            Relation::RelEq,
            dual,
            1e-9,
        ),
    ];
    let (mut gj, mut gs) = (None, None);
    if let (Some(cfg), 2) = (grid, ring.n) {
        let j = grid_modulus_2d(&image, Family::Curves, cfg)?;
        let s = grid_modulus_2d(&image, Family::Spheres, cfg)?;
        reports.push(VerificationReport::compare(
            "grid reciprocity",
            "grid moduli of joining and separating families multiply to 1",
            j.value * s.value,
            Relation::RelEq,
            1.0,
            0.05,
        ));
        gj = Some(j.value);
        gs = Some(s.value);
    }
    Ok(ReciprocityResult {
        image_r1: a,
        image_r2: b,
        joining,
        separating,
        grid_joining: gj,
        grid_separating: gs,
        reports,
    })
}

/// Fit `c` in `M(Σ) ≈ c·log(R/r)` over rings `(r, R)` for the weight `w`;
/// returns `(c, max relative residual)`.
pub fn log_growth_fit(w: &RadialWeight, r: f64, outer: &[f64]) -> Result<(f64, f64)> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for big in outer {
        x.push(ln(big / r));
        y.push(spheres_lower_bound(w, r, *big)?.value);
    }
    let c = proportional_fit(&x, &y);
    let res = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (c * a / b - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((c, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::E;
    use crate::weight::{FullWeight, Profile};

    #[test]
    fn surface_norm_values() {
        let w3 = RadialWeight::constant(3, 1.0);
        assert!((surface_norm(&w3, 2.0).unwrap() - 4.0 * PI.sqrt()).abs() < 1e-12);
        let w2 = RadialWeight::constant(2, 1.0);
        assert!((surface_norm(&w2, 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        let c = RadialWeight::constant(3, 5.0);
        assert!(
            (surface_norm(&c, 2.0).unwrap() / surface_norm(&w3, 2.0).unwrap() - 5.0).abs() < 1e-12
        );
        assert!(surface_norm(&w3, 0.0).is_err());
    }

    #[test]
    fn closed_forms_for_unit_weight() {
        let w = RadialWeight::constant(3, 1.0);
        let s = spheres_lower_bound(&w, 1.0, E).unwrap();
        assert!((s.value - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-12);
        assert!(s.certificate.passed());
        let ring = RingDomain::new(1.0, E, 3).unwrap();
        let c = ring_upper_bound(&w, &ring).unwrap();
        assert!((c.value - 4.0 * PI).abs() < 1e-10);
        assert!(c.certificate.passed());
    }

    #[test]
    fn homogeneity_in_the_weight() {
        let ring = RingDomain::new(1.0, E, 3).unwrap();
        let a = ring_upper_bound(&RadialWeight::constant(3, 1.0), &ring)
            .unwrap()
            .value;
        let b = ring_upper_bound(&RadialWeight::constant(3, 9.0), &ring)
            .unwrap()
            .value;
        assert!((b / a - 9.0).abs() < 1e-10);
        let s1 = spheres_lower_bound(&RadialWeight::constant(3, 1.0), 0.5, 2.0)
            .unwrap()
            .value;
        let s4 = spheres_lower_bound(&RadialWeight::constant(3, 4.0), 0.5, 2.0)
            .unwrap()
            .value;
        assert!((s1 / s4 - 4.0).abs() < 1e-10);
    }

    #[test]
    fn dipole_weight_certificate() {
        let w = RadialWeight::new(3, Profile::Power { c: 1.0, a: 0.5 })
            .unwrap()
            .with_full(FullWeight::Dipole { amplitude: 0.7 })
            .unwrap();
        let s = spheres_lower_bound(&w, 0.1, 1.0).unwrap();
        assert!(s.certificate.passed(), "{:?}", s.certificate);
    }

    #[test]
    fn projection_lands_on_the_constraint() {
        let mut x = [0.0, -1.0, 0.1];
        let l = [1.0, 2.0, 0.5];
        project(&mut x, &l);
        let dot: f64 = x.iter().zip(&l).map(|(a, b)| a * b).sum();
        assert!((dot - 1.0).abs() < 1e-12 && x.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn stretch_reciprocity() {
        let ring = RingDomain::new(1.0, E, 3).unwrap();
        let r =
            hesse_ziemer_check(&ring, &ModelMap::RadialStretch { alpha: 2.0, n: 3 }, None).unwrap();
        assert!((r.image_r2 - E * E).abs() < 1e-12);
        for rep in &r.reports {
            assert!(rep.passed(), "{rep:?}");
        }
    }
}
