//! Quadrature and breakpoint helpers shared by the Fourier and density layers.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::trigpoly::canonical_angle;

/// Angles closer than this are merged into one breakpoint.
pub const CLUSTER_TOL: f64 = 1e-12;

/// Zero of `f - level` on `(a, b)` when the endpoint values bracket it.
pub fn bisect_level(f: impl Fn(f64) -> f64, a: f64, b: f64, level: f64) -> Option<f64> {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo) - level;
    let fhi = f(hi) - level;
    if !(flo * fhi < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid) - level;
        if fm == 0.0 {
            return Some(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Canonical, sorted angles with near-duplicates (also across `pi`) merged.
pub fn cluster_angles(angles: Vec<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = angles.into_iter().map(canonical_angle).collect();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for x in v {
        if out.last().is_none_or(|&l| x - l >= CLUSTER_TOL) {
            out.push(x);
        }
    }
    if out.len() > 1 && out[0] + 2.0 * PI - out[out.len() - 1] < CLUSTER_TOL {
        out.remove(0);
    }
    out
}

pub const GL_ORDER: usize = 20;

/// Nodes and weights of the `GL_ORDER`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    })
}

fn gl_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * gauss_legendre().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>()
}

/// Adaptive Gauss-Legendre on `[a, b]` to absolute tolerance `tol`. The rule
/// is open, so values at `a` and `b` never enter; integrands may jump there.
pub fn adaptive_gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let mut unresolved = 0.0;
    let v = gauss_rec(f, a, b, gl_panel(f, a, b), tol, max_depth, &mut unresolved);
    if !v.is_finite() {
        return Err(Error::QuadratureFailure(format!("non-finite integrand on [{a}, {b}]")));
    }
    if unresolved > 1e3 * tol {
        return Err(Error::QuadratureFailure(format!(
            "depth limit reached on [{a}, {b}] with error estimate {unresolved:e}"
        )));
    }
    Ok(v)
}

fn gauss_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    unresolved: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let (left, right) = (gl_panel(f, a, m), gl_panel(f, m, b));
    let diff = (left + right - whole).abs();
    if diff <= tol {
        return left + right;
    }
    if depth == 0 {
        *unresolved += diff;
        return left + right;
    }
    gauss_rec(f, a, m, left, 0.5 * tol, depth - 1, unresolved)
        + gauss_rec(f, m, b, right, 0.5 * tol, depth - 1, unresolved)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre();
        assert_eq!(rule.len(), GL_ORDER);
        assert!((rule.iter().map(|w| w.1).sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..2 * GL_ORDER {
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            let q: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn adaptive_examples() {
        let v = adaptive_gauss(&|x: f64| x.sin(), 0.0, PI, 1e-12, 40).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_gauss(&|x: f64| x.abs().sqrt(), 0.0, 1.0, 1e-10, 40).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn clustering_merges_across_pi() {
        let v = cluster_angles(vec![PI, -PI + 1e-14, 0.0, 1e-13, 1.0]);
        assert_eq!(v, vec![0.0, 1.0, PI]);
    }

    #[test]
    fn bisect_level_finds_crossing() {
        let k = bisect_level(|x: f64| x.cos(), 0.0, 3.0, 0.5).unwrap();
        assert!((k - PI / 3.0).abs() < 1e-14);
        assert!(bisect_level(|x: f64| x, 0.0, 1.0, 2.0).is_none());
    }
}
