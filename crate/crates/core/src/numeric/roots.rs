//! Bracketed root finding and inversion of monotone maps.

use crate::math::fabs;

/// Bisection on a bracket `[lo, hi]` for the predicate boundary of a monotone
/// test: returns `(lo, hi)` with `pred(lo) == false`, `pred(hi) == true`, shrunk
/// until the two are adjacent floats or `max_iter` is reached.
pub fn bisect_predicate<P: Fn(f64) -> bool>(
    pred: P,
    mut lo: f64,
    mut hi: f64,
    max_iter: usize,
) -> (f64, f64) {
    for _ in 0..max_iter {
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            // geometric midpoint for wide positive brackets
            crate::math::sqrt(lo) * crate::math::sqrt(hi)
        } else {
            lo + 0.5 * (hi - lo)
        };
        if !(mid > lo && mid < hi) {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Brent's method for a sign change of `f` on `[a, b]`.
pub fn brent<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fabs(fc) < fabs(fb) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * fabs(b) + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if fabs(m) <= tol || fb == 0.0 {
            return Some(b);
        }
        if fabs(e) >= tol && fabs(fa) > fabs(fb) {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - fabs(tol * q)).min(fabs(e * q)) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if fabs(d) > tol {
            d
        } else if m > 0.0 {
            tol
        } else {
            -tol
        };
        fb = f(b);
    }
    Some(b)
}

/// Generalized inverse `inf { t >= 0 : g(t) >= tau }` of a non-decreasing `g`.
///
/// The bracket is grown geometrically from 1 and then bisected down to adjacent
/// floats, so the returned point satisfies `g(t) >= tau` and nothing strictly
/// smaller representable near it does. `inf` when `g` never reaches `tau` below
/// `t_max`.
pub fn monotone_inverse<G: Fn(f64) -> f64>(g: G, tau: f64, t_max: f64) -> f64 {
    if g(0.0) >= tau {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while g(hi) < tau {
        lo = hi;
        hi *= 2.0;
        if hi > t_max {
            return f64::INFINITY;
        }
    }
    if lo == 0.0 {
        // shrink from below for small targets
        let mut l = 0.5;
        while l > 1e-300 && g(l) >= tau {
            hi = l;
            l *= 0.5;
        }
        lo = if g(l) >= tau { 0.0 } else { l };
    }
    let (_, hi) = bisect_predicate(|t| g(t) >= tau, lo, hi, 4000);
    hi
}

/// Inverse of a non-decreasing map on the whole real line: smallest `y` with
/// `g(y) >= target`, searched by doubling steps from `start`. `None` when the
/// target is not reached within `|y| <= y_max`.
pub fn monotone_inverse_real<G: Fn(f64) -> f64>(
    g: G,
    target: f64,
    start: f64,
    y_max: f64,
) -> Option<f64> {
    let mut step = 1.0;
    let (lo, hi);
    if g(start) >= target {
        let mut h = start;
        let mut l = start - step;
        while g(l) >= target {
            h = l;
            step *= 2.0;
            l = start - step;
            if fabs(l) > y_max {
                return Some(f64::NEG_INFINITY);
            }
        }
        lo = l;
        hi = h;
    } else {
        let mut l = start;
        let mut h = start + step;
        while g(h) < target {
            l = h;
            step *= 2.0;
            h = start + step;
            if fabs(h) > y_max {
                return None;
            }
        }
        lo = l;
        hi = h;
    }
    let (_, hi) = bisect_predicate(|y| g(y) >= target, lo, hi, 4000);
    Some(hi)
}
