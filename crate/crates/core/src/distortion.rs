//! Model maps with known distortion, numerical `K_f`, and the pointwise
//! distortion bounds driven by sphere averages of `K_f^{n-1}`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::constants::ConstantsConfig;
use crate::counterexample::CounterexampleModel;
use crate::error::{bail, Error, Result};
use crate::math::{exp, ln, powf, sqrt};
use crate::numeric::misc::{halton, proportional_fit};
use crate::numeric::{integrate, linear_fit, unit_sphere_area, Matrix, QuadConfig, SphereRule};
use crate::report::{Relation, VerificationReport};
use crate::weight::RadialWeight;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelMap {
    Identity {
        n: usize,
    },
    /// `x ↦ x|x|^{α-1}`
    RadialStretch {
        alpha: f64,
        n: usize,
    },
    /// `(x, y) ↦ (x, y + f(x))` for the lattice construction `f`.
    Shear {
        model: Box<CounterexampleModel>,
    },
    /// Applied left to right.
    Composed {
        maps: Vec<ModelMap>,
    },
}

fn norm(x: &[f64]) -> f64 {
    sqrt(x.iter().map(|v| v * v).sum())
}

impl ModelMap {
    pub fn stretch(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0) || n < 2 {
            bail!(Domain, "stretch needs alpha > 0 and n >= 2");
        }
        Ok(ModelMap::RadialStretch { alpha, n })
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelMap::Identity { n } | ModelMap::RadialStretch { n, .. } => *n,
            ModelMap::Shear { model } => model.k + 1,
            ModelMap::Composed { maps } => maps.first().map_or(0, |m| m.dim()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ModelMap::Identity { .. } => x.to_vec(),
            ModelMap::RadialStretch { alpha, .. } => {
                let r = norm(x);
                if r == 0.0 {
                    return x.to_vec();
                }
                let s = powf(r, alpha - 1.0);
                x.iter().map(|v| v * s).collect()
            }
            ModelMap::Shear { model } => {
                let k = model.k;
                model.eval_construction(&x[..k], x[k]).2
            }
            ModelMap::Composed { maps } => maps.iter().fold(x.to_vec(), |y, m| m.eval(&y)),
        }
    }

    /// `K_f` where it is known in closed form.
    pub fn kf_closed(&self) -> Option<f64> {
        match self {
            ModelMap::Identity { .. } => Some(1.0),
            ModelMap::RadialStretch { alpha, n } => Some(if *alpha >= 1.0 {
                powf(*alpha, (*n - 1) as f64)
            } else {
                1.0 / alpha
            }),
            _ => None,
        }
    }
}

/// Central-difference Jacobian with one Richardson step (`h` and `h/2`).
pub fn jacobian(map: &ModelMap, x: &[f64], h: f64) -> Result<Matrix> {
    let n = map.dim();
    if x.len() != n {
        bail!(Validation, "point has dimension {}, map has {n}", x.len());
    }
    let mut m = Matrix::zeros(n);
    let col = |j: usize, h: f64| -> Vec<f64> {
        let mut up = x.to_vec();
        let mut dn = x.to_vec();
        up[j] += h;
        dn[j] -= h;
        let (a, b) = (map.eval(&up), map.eval(&dn));
        a.iter().zip(&b).map(|(p, q)| (p - q) / (2.0 * h)).collect()
    };
    for j in 0..n {
        let d1 = col(j, h);
        let d2 = col(j, 0.5 * h);
        for i in 0..n {
            let v = (4.0 * d2[i] - d1[i]) / 3.0;
            if !v.is_finite() {
                return Err(Error::Numerical(alloc::format!(
                    "non-finite difference quotient at column {j}"
                )));
            }
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// `K_f(x) = ‖f'(x)‖^n / |J_f(x)|` with `K = 1` where `f' = 0` and `∞` where
/// `J_f = 0 ≠ f'`. `step` is relative to `max(|x|, 1e-4)`.
pub fn kf_numeric(map: &ModelMap, x: &[f64], step: f64) -> Result<f64> {
    if !(step > 0.0) {
        bail!(Validation, "step must be positive");
    }
    let h = step * norm(x).max(1e-4);
    let jac = jacobian(map, x, h)?;
    let op = jac.operator_norm();
    if op == 0.0 {
        return Ok(1.0);
    }
    let det = jac.det().abs();
    if det <= 1e-14 * powf(op, map.dim() as f64) {
        return Ok(f64::INFINITY);
    }
    Ok(powf(op, map.dim() as f64) / det)
}

/// Chordal distance on the one-point compactification; `None` is `∞`.
pub fn chordal(x: Option<&[f64]>, y: Option<&[f64]>) -> f64 {
    match (x, y) {
        (None, None) => 0.0,
        (Some(p), None) | (None, Some(p)) => 1.0 / sqrt(1.0 + p.iter().map(|v| v * v).sum::<f64>()),
        (Some(p), Some(q)) => {
            let d: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
            sqrt(d)
                / (sqrt(1.0 + p.iter().map(|v| v * v).sum::<f64>())
                    * sqrt(1.0 + q.iter().map(|v| v * v).sum::<f64>()))
        }
    }
}

/// Lower bound `Δ` for the chordal diameter of the omitted set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordalGap {
    pub delta: f64,
}

impl ChordalGap {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            bail!(Domain, "chordal gap must lie in (0, 1], got {delta}");
        }
        Ok(Self { delta })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionBound {
    /// `(α_n/Δ)·exp(-∫ dr / (r k^{1/(n-1)}(r)))`
    pub average_form: f64,
    /// The same with `ω_{n-1}^{1/(n-1)} ∫ dr / ‖K‖_{n-1}(r)`.
    pub norm_form: f64,
    pub exponent_integral: f64,
}

/// Pointwise bound for `h(f(x), f(x0))` from the sphere means of
/// `K_f^{n-1}`, given as the weight `k_profile` whose values are `K_f`.
pub fn distortion_bound(
    k_profile: &RadialWeight,
    gap: ChordalGap,
    x0: &[f64],
    eps0: f64,
    x: &[f64],
    constants: &ConstantsConfig,
) -> Result<DistortionBound> {
    let n = k_profile.n;
    let e = (n - 1) as f64;
    let d: f64 = sqrt(x.iter().zip(x0).map(|(a, b)| (a - b) * (a - b)).sum());
    if !(d > 0.0 && d < eps0) {
        bail!(Domain, "need 0 < |x - x0| < eps0, got {d} and {eps0}");
    }
    let rule = SphereRule::new(n, 12);
    let cfg = QuadConfig::rel(1e-13);
    let avg = integrate(
        |v: f64| {
            let r = exp(v);
            let k = k_profile.sphere_mean_power(r, e, Some(&rule));
            1.0 / powf(k, 1.0 / e)
        },
        ln(d),
        ln(eps0),
        &cfg,
    );
    let omega = powf(unit_sphere_area(n), 1.0 / e);
    let nrm = integrate(
        |v: f64| {
            let r = exp(v);
            let area = unit_sphere_area(n) * powf(r, e);
            let s = powf(
                area * k_profile.sphere_mean_power(r, e, Some(&rule)),
                1.0 / e,
            );
            omega * r / s
        },
        ln(d),
        ln(eps0),
        &cfg,
    );
    if !avg.value.is_finite() || !avg.converged {
        return Err(Error::Numerical(String::from(
            "distortion exponent integral did not converge",
        )));
    }
    let c = constants.alpha_n.value / gap.delta;
    Ok(DistortionBound {
        average_form: c * exp(-avg.value),
        norm_form: c * exp(-nrm.value),
        exponent_integral: avg.value,
    })
}

/// `(α_n/Δ)·[log(1/ε0) / log(1/|x - x0|)]^β` with `β` supplied.
pub fn fmo_bound(
    gap: ChordalGap,
    eps0: f64,
    beta: f64,
    x0: &[f64],
    x: &[f64],
    constants: &ConstantsConfig,
) -> Result<f64> {
    let d: f64 = sqrt(x.iter().zip(x0).map(|(a, b)| (a - b) * (a - b)).sum());
    if !(d < 1.0) || !(eps0 < 1.0) {
        bail!(
            Domain,
            "need |x - x0| < 1 and eps0 < 1 for the logarithms to be positive"
        );
    }
    if !(beta > 0.0) {
        bail!(Validation, "beta must be positive");
    }
    Ok(constants.alpha_n.value / gap.delta * powf(ln(1.0 / eps0) / ln(1.0 / d), beta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderResult {
    pub k_f: f64,
    pub fitted_exponent: f64,
    pub bound_exponent: f64,
    pub hypothesis_constant: f64,
    pub reports: Vec<VerificationReport>,
}

/// Hölder behaviour of the contracting stretch at the origin: `K_f`, the
/// exponent of `|f(x)|` against `|x|`, the exponent `1/k^{1/(n-1)}` from the
/// distortion bound, and the constant `c` in `∫_{ε<|x|<1} K^{n-1}|x|^{-n} = c·log(1/ε)`.
pub fn holder_check(alpha: f64, n: usize) -> Result<HolderResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Unsupported(alloc::format!(
            "Hölder check needs 0 < alpha < 1, got {alpha}"
        )));
    }
    let map = ModelMap::stretch(alpha, n)?;
    let e = (n - 1) as f64;
    let step = 1e-6;

    // K_f at Halton points with 1e-4 <= |x| <= 1
    let mut pts = Vec::new();
    let mut i = 1u64;
    while pts.len() < 64 {
        let x: Vec<f64> = halton(i, n).iter().map(|v| 2.0 * v - 1.0).collect();
        let r = norm(&x);
        if (1e-4..=1.0).contains(&r) {
            pts.push(x);
        }
        i += 1;
    }
    let ks: Vec<f64> = pts
        .iter()
        .map(|x| kf_numeric(&map, x, step))
        .collect::<Result<_>>()?;
    let k_exact = 1.0 / alpha;
    let k_err = ks.iter().map(|k| (k - k_exact).abs()).fold(0.0, f64::max);
    let k_f = ks.iter().sum::<f64>() / ks.len() as f64;

    // sphere average of K^{n-1}, numerically, and the exponent it implies
    let rule = SphereRule::new(n, 6);
    let sphere_avg = |r: f64| -> Result<f64> {
        let mut s = 0.0;
        for (u, w) in rule.points.iter().zip(&rule.weights) {
            let x: Vec<f64> = u.iter().map(|v| r * v).collect();
            s += w * powf(kf_numeric(&map, &x, step)?, e);
        }
        Ok(s)
    };
    let radii = [1e-3, 1e-2, 0.1, 0.5, 1.0];
    let mut exps = Vec::new();
    for r in radii {
        exps.push(1.0 / powf(sphere_avg(r)?, 1.0 / e));
    }
    let bound_exponent = exps.iter().sum::<f64>() / exps.len() as f64;

    // fitted exponent of |f(x)| against |x|
    let (lx, ly): (Vec<f64>, Vec<f64>) = pts
        .iter()
        .map(|x| (ln(norm(x)), ln(norm(&map.eval(x)))))
        .unzip();
    let (beta, _) = linear_fit(&lx, &ly);

    // hypothesis integral in v = ln r, the sphere average held per node
    let omega = unit_sphere_area(n);
    let eps_grid = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let mut logs = Vec::new();
    let mut vals = Vec::new();
    for eps in eps_grid {
        let gl = crate::numeric::quad::FixedRule::gauss(6, ln(eps), 0.0);
        let mut acc = 0.0;
        for (v, w) in gl.nodes.iter().zip(&gl.weights) {
            acc += w * omega * sphere_avg(exp(*v))?;
        }
        logs.push(ln(1.0 / eps));
        vals.push(acc);
    }
    let c = proportional_fit(&logs, &vals);
    let c_exact = omega * powf(k_exact, e);

    let reports = alloc::vec![
        VerificationReport::compare(
            "distortion coefficient",
            "the stretch has constant K_f = 1/α",
            k_err,
            Relation::Le,
            1e-6,
            0.0
        )
        .with_samples(ks.len() as u64),
        VerificationReport::compare(
            "fitted exponent",
            "|f(x)| = |x|^β with β = α",
            beta,
            Relation::Eq,
            alpha,
            1e-6
        ),
        VerificationReport::compare(
            "bound exponent",
            "the distortion bound has exponent 1/k^{1/(n-1)} equal to the fitted Hölder exponent",
            bound_exponent,
            Relation::Eq,
            beta,
            1e-6,
        ),
        VerificationReport::compare(
            "hypothesis constant",
            "∫_{ε<|x|<1} K_f^{n-1}|x|^{-n} dm = ω_{n-1} K^{n-1} log(1/ε)",
            c,
            Relation::RelEq,
            c_exact,
            1e-6,
        ),
    ];
    Ok(HolderResult {
        k_f,
        fitted_exponent: beta,
        bound_exponent,
        hypothesis_constant: c,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Profile;

    #[test]
    fn stretch_coefficients() {
        let x = [0.6, 0.0, 0.8];
        let k2 = kf_numeric(&ModelMap::stretch(2.0, 3).unwrap(), &x, 1e-6).unwrap();
        assert!((k2 - 4.0).abs() < 1e-6, "{k2}");
        let kh = kf_numeric(&ModelMap::stretch(0.5, 3).unwrap(), &x, 1e-6).unwrap();
        assert!((kh - 2.0).abs() < 1e-6, "{kh}");
        assert!((kf_numeric(&ModelMap::Identity { n: 3 }, &x, 1e-6).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn chordal_identities() {
        let x = [3.0, 4.0];
        assert_eq!(chordal(Some(&x), None), 1.0 / 26f64.sqrt());
        assert_eq!(chordal(Some(&x), Some(&x)), 0.0);
    }

    #[test]
    fn unit_distortion_gives_linear_bound() {
        let w = RadialWeight::constant(3, 1.0);
        let g = ChordalGap::new(0.5).unwrap();
        let b = distortion_bound(
            &w,
            g,
            &[0.0; 3],
            0.5,
            &[0.01, 0.0, 0.0],
            &ConstantsConfig::default(),
        )
        .unwrap();
        // (1/Δ)·|x|/ε0
        assert!((b.average_form - 2.0 * 0.01 / 0.5).abs() < 1e-12);
        assert!((b.norm_form - b.average_form).abs() < 1e-12);
    }

    #[test]
    fn log_profile_gives_log_ratio() {
        let w = RadialWeight::new(3, Profile::LogPower { c: 1.0, s: 1.0 }).unwrap();
        let g = ChordalGap::new(1.0).unwrap();
        let x = [1e-5, 0.0, 0.0];
        let b = distortion_bound(&w, g, &[0.0; 3], 0.1, &x, &ConstantsConfig::default()).unwrap();
        let exact = (10f64).ln() / (1e5f64).ln();
        assert!(
            (b.average_form / exact - 1.0).abs() < 1e-9,
            "{} {exact}",
            b.average_form
        );
        let f = fmo_bound(g, 0.1, 1.0, &[0.0; 3], &x, &ConstantsConfig::default()).unwrap();
        assert!((f / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn holder_rejects_expanding_stretch() {
        assert!(matches!(holder_check(2.0, 3), Err(Error::Unsupported(_))));
    }
}
