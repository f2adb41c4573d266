//! Weights `Q` given through their spherical means `q(r)`, optionally with a
//! full pointwise evaluator whose sphere means reproduce the profile.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::math::{exp, ln, powf, sqrt};
use crate::numeric::{unit_sphere_area, Pchip, SphereRule};

/// Radial profile `r ↦ q(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `q ≡ c`
    Constant { c: f64 },
    /// `q(r) = c·r^a`
    Power { c: f64, a: f64 },
    /// `q(r) = c·[ln(1/r)]^s` for `r < 1`, 0 for `r >= 1`
    LogPower { c: f64, s: f64 },
    /// Monotone cubic interpolation of sampled `(r, q)` pairs.
    Table { table: Pchip },
}

impl Profile {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Profile::Constant { c } => *c,
            Profile::Power { c, a } => c * powf(r, *a),
            Profile::LogPower { c, s } => {
                if r >= 1.0 {
                    0.0
                } else {
                    c * powf(-ln(r), *s)
                }
            }
            Profile::Table { table } => table.eval(r).max(0.0),
        }
    }

    /// `ln q(e^v)`; usable where `e^v` underflows.
    pub fn ln_eval_at_log(&self, v: f64) -> f64 {
        match self {
            Profile::Constant { c } => ln(*c),
            Profile::Power { c, a } => ln(*c) + a * v,
            Profile::LogPower { c, s } => {
                if v >= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    ln(*c) + s * ln(-v)
                }
            }
            Profile::Table { .. } => ln(self.eval(exp(v))),
        }
    }
}

/// Non-radial part of a full weight. The angular factor integrates to 1 over
/// every sphere centred at `x0`, so sphere means equal the profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FullWeight {
    /// `Q(x) = q(|x - x0|)·(1 + a·u_1)`, `u = (x - x0)/|x - x0|`, `|a| <= 1`.
    Dipole { amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialWeight {
    pub n: usize,
    pub profile: Profile,
    pub center: Vec<f64>,
    pub full: Option<FullWeight>,
}

impl RadialWeight {
    pub fn new(n: usize, profile: Profile) -> Result<Self> {
        if n < 2 {
            bail!(Domain, "dimension must be at least 2, got {n}");
        }
        if let Profile::Table { table } = &profile {
            if table.ys().iter().any(|v| *v < 0.0) {
                bail!(Validation, "weight table has negative values");
            }
        }
        Ok(Self {
            n,
            profile,
            center: alloc::vec![0.0; n],
            full: None,
        })
    }

    pub fn with_full(mut self, full: FullWeight) -> Result<Self> {
        let FullWeight::Dipole { amplitude } = full;
        if !(amplitude.abs() <= 1.0) {
            bail!(Validation, "dipole amplitude must lie in [-1, 1]");
        }
        self.full = Some(full);
        Ok(self)
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self {
            n,
            profile: Profile::Constant { c },
            center: alloc::vec![0.0; n],
            full: None,
        }
    }

    /// Spherical mean `q(r)`.
    pub fn q(&self, r: f64) -> f64 {
        self.profile.eval(r)
    }

    pub fn ln_q_at_log(&self, v: f64) -> f64 {
        self.profile.ln_eval_at_log(v)
    }

    /// Pointwise value `Q(x)`.
    pub fn eval_point(&self, x: &[f64]) -> f64 {
        let mut r2 = 0.0;
        for (xi, ci) in x.iter().zip(&self.center) {
            r2 += (xi - ci) * (xi - ci);
        }
        let r = sqrt(r2);
        let q = self.profile.eval(r);
        match self.full {
            None => q,
            Some(FullWeight::Dipole { amplitude }) => {
                if r == 0.0 {
                    q
                } else {
                    q * (1.0 + amplitude * (x[0] - self.center[0]) / r)
                }
            }
        }
    }

    /// Mean of `Q^e` over `S(x0, r)`; exact for radial weights, quadrature otherwise.
    pub fn sphere_mean_power(&self, r: f64, e: f64, rule: Option<&SphereRule>) -> f64 {
        match (&self.full, rule) {
            (None, _) => powf(self.q(r), e),
            (Some(_), Some(rule)) => rule.mean(|x| powf(self.eval_point(x), e), &self.center, r),
            (Some(_), None) => {
                let rule = SphereRule::new(self.n, 24);
                rule.mean(|x| powf(self.eval_point(x), e), &self.center, r)
            }
        }
    }

    /// `‖Q‖_{n-1}(x0, r) = (∫_{S(x0,r)} Q^{n-1} dA)^{1/(n-1)}`.
    pub fn surface_norm(&self, r: f64) -> f64 {
        let k = (self.n - 1) as f64;
        let area = unit_sphere_area(self.n) * powf(r, k);
        powf(area * self.sphere_mean_power(r, k, None), 1.0 / k)
    }

    /// `ln ‖Q‖_{n-1}(x0, e^v)` for radial weights.
    pub fn ln_surface_norm_at_log(&self, v: f64) -> f64 {
        if self.full.is_some() {
            return ln(self.surface_norm(exp(v)));
        }
        let k = (self.n - 1) as f64;
        (ln(unit_sphere_area(self.n)) + k * v) / k + self.ln_q_at_log(v)
    }

    /// Largest relative gap between quadrature sphere means of `Q` and `q(r)`.
    pub fn profile_consistency(&self, radii: &[f64]) -> f64 {
        let rule = SphereRule::new(self.n, 24);
        let mut worst: f64 = 0.0;
        for &r in radii {
            let m = rule.mean(|x| self.eval_point(x), &self.center, r);
            let q = self.q(r);
            let gap = (m - q).abs() / q.abs().max(1e-300);
            worst = worst.max(gap);
        }
        worst
    }
}
