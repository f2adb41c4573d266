//! Product quadrature on spheres `S(x0, r) ⊂ R^n`.

use alloc::vec::Vec;

use crate::math::{cos, powi, sin, sqrt, PI};
use crate::numeric::quad::gauss_legendre;

/// Quadrature nodes (unit vectors) and normalized weights (summing to 1) on the
/// unit sphere of `R^n`: Gauss–Legendre in each polar angle, trapezoid in the
/// azimuth.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(n >= 2, "sphere rule needs dimension >= 2");
        let azimuth = 2 * m;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let (gx, gw) = gauss_legendre(m);
        // recursive over polar angles θ_1..θ_{n-2}, θ_i carries density sin^{n-1-i} (i from 1)
        let mut stack: Vec<(Vec<f64>, f64, f64)> = alloc::vec![(Vec::new(), 1.0, 1.0)];
        for i in 0..n - 2 {
            let power = (n - 2 - i) as i32;
            let mut next = Vec::new();
            for (prefix, scale, w) in &stack {
                for (x, wx) in gx.iter().zip(&gw) {
                    // odd powers: c = cos θ leaves a polynomial density (exact);
                    // even powers: Gauss in θ itself converges geometrically
                    let (c, s, wt) = if power % 2 == 1 {
                        let s = sqrt(1.0 - x * x);
                        (*x, s, wx * powi(s, power - 1))
                    } else {
                        let theta = 0.5 * PI * (x + 1.0);
                        (
                            cos(theta),
                            sin(theta),
                            0.5 * PI * wx * powi(sin(theta), power),
                        )
                    };
                    let mut p = prefix.clone();
                    p.push(scale * c);
                    next.push((p, scale * s, w * wt));
                }
            }
            stack = next;
        }
        for (prefix, scale, w) in stack {
            for j in 0..azimuth {
                let phi = 2.0 * PI * j as f64 / azimuth as f64;
                let mut p = prefix.clone();
                p.push(scale * cos(phi));
                p.push(scale * sin(phi));
                points.push(p);
                weights.push(w * 2.0 * PI / azimuth as f64);
            }
        }
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        Self { n, points, weights }
    }

    /// Mean of `f` over the sphere `S(center, r)`.
    pub fn mean<F: Fn(&[f64]) -> f64>(&self, f: F, center: &[f64], r: f64) -> f64 {
        let mut x = alloc::vec![0.0; self.n];
        let mut s = 0.0;
        for (u, w) in self.points.iter().zip(&self.weights) {
            for d in 0..self.n {
                x[d] = center.get(d).copied().unwrap_or(0.0) + r * u[d];
            }
            s += w * f(&x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_moments_on_spheres() {
        for n in [2usize, 3, 4] {
            let rule = SphereRule::new(n, 12);
            let c = alloc::vec![0.0; n];
            let m1 = rule.mean(|x| x[0], &c, 1.0);
            let m2 = rule.mean(|x| x[0] * x[0], &c, 1.0);
            let m4 = rule.mean(|x| x[n - 1].powi(4), &c, 1.0);
            assert!(m1.abs() < 1e-14, "n={n}");
            // E[x_1^2] = 1/n, E[x_i^4] = 3/(n(n+2)) on the unit sphere
            // exact for n <= 3, geometric convergence in the even-power angle for n = 4
            let tol = if n <= 3 { 1e-13 } else { 1e-9 };
            assert!((m2 - 1.0 / n as f64).abs() < tol, "n={n}: {m2}");
            assert!((m4 - 3.0 / (n * (n + 2)) as f64).abs() < tol, "n={n}: {m4}");
        }
    }
}
