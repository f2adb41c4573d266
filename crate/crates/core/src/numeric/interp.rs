//! Monotone piecewise cubic Hermite interpolation (Fritsch–Carlson).

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Nodes", into = "Nodes")]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Nodes {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TryFrom<Nodes> for Pchip {
    type Error = crate::error::Error;
    fn try_from(n: Nodes) -> Result<Self> {
        Pchip::new(n.x, n.y)
    }
}

impl From<Pchip> for Nodes {
    fn from(p: Pchip) -> Self {
        Nodes { x: p.x, y: p.y }
    }
}

fn endpoint_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            bail!(
                Validation,
                "interpolation needs at least two (x, y) pairs of equal length"
            );
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            bail!(
                Validation,
                "interpolation nodes must be strictly increasing"
            );
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            bail!(Validation, "interpolation data must be finite");
        }
        let mut p = Self {
            x,
            y,
            d: Vec::new(),
        };
        p.compute_slopes();
        Ok(p)
    }

    fn compute_slopes(&mut self) {
        let n = self.x.len();
        let h: Vec<f64> = self.x.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1)
            .map(|i| (self.y[i + 1] - self.y[i]) / h[i])
            .collect();
        let mut d = alloc::vec![0.0; n];
        if n == 2 {
            d[0] = del[0];
            d[1] = del[0];
        } else {
            for i in 1..n - 1 {
                if del[i - 1] == 0.0 || del[i] == 0.0 || del[i - 1].signum() != del[i].signum() {
                    d[i] = 0.0;
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
                }
            }
            d[0] = endpoint_slope(h[0], h[1], del[0], del[1]);
            d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        self.d = d;
    }

    pub fn xs(&self) -> &[f64] {
        &self.x
    }

    pub fn ys(&self) -> &[f64] {
        &self.y
    }

    pub fn first_x(&self) -> f64 {
        self.x[0]
    }

    pub fn last_x(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    /// Value at `t`; outside the nodes the end segments are extended linearly
    /// with the secant slope of the last interval.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            let s = (self.y[1] - self.y[0]) / (self.x[1] - self.x[0]);
            return self.y[0] + s * (t - self.x[0]);
        }
        if t >= self.x[n - 1] {
            let s = (self.y[n - 1] - self.y[n - 2]) / (self.x[n - 1] - self.x[n - 2]);
            return self.y[n - 1] + s * (t - self.x[n - 1]);
        }
        let i = match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => return self.y[i],
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }

    /// Derivative of the interpolant.
    pub fn derivative(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return (self.y[1] - self.y[0]) / (self.x[1] - self.x[0]);
        }
        if t >= self.x[n - 1] {
            return (self.y[n - 1] - self.y[n - 2]) / (self.x[n - 1] - self.x[n - 2]);
        }
        let i = match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => return self.d[i],
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let dh00 = (6.0 * s2 - 6.0 * s) / h;
        let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
        let dh01 = (-6.0 * s2 + 6.0 * s) / h;
        let dh11 = 3.0 * s2 - 2.0 * s;
        dh00 * self.y[i] + dh10 * self.d[i] + dh01 * self.y[i + 1] + dh11 * self.d[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes_and_linear_data() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.7).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let p = Pchip::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(p.eval(*xi), *yi);
        }
        assert!((p.eval(2.45) - (3.0 * 2.45 - 1.0)).abs() < 1e-13);
        assert!((p.derivative(1.1) - 3.0).abs() < 1e-12);
        assert!((p.eval(100.0) - 299.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(Pchip::new(alloc::vec![0.0, 0.0], alloc::vec![1.0, 2.0]).is_err());
        assert!(Pchip::new(alloc::vec![0.0], alloc::vec![1.0]).is_err());
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(steps in proptest::collection::vec((0.01f64..2.0, 0.0f64..5.0), 3..20)) {
            let mut x = alloc::vec![0.0];
            let mut y = alloc::vec![0.0];
            for (dx, dy) in &steps {
                x.push(x.last().unwrap() + dx);
                y.push(y.last().unwrap() + dy);
            }
            let p = Pchip::new(x.clone(), y).unwrap();
            let end = *x.last().unwrap();
            let mut prev = p.eval(0.0);
            for i in 1..=500 {
                let v = p.eval(end * i as f64 / 500.0);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
