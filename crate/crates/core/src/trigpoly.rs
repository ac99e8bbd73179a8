//! Real trigonometric polynomials on the circle.
//!
//! A [`TrigPoly`] of degree `m` is `a_0 + sum_{n=1}^m (a_n cos(nk) + b_n sin(nk))`.
//! All Pauli coefficient functions of a finite-range Hamiltonian live in this
//! ring, so the spectral case tests reduce to coefficient comparisons.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::Error;

/// Coefficients below this magnitude are treated as zero when trimming.
pub const COEFF_TOL: f64 = 1e-14;

/// Grid oversampling factor for the sign-change scan in [`TrigPoly::roots`].
pub const ROOT_SCAN_FACTOR: usize = 512;

/// Relative threshold (against the l1 coefficient norm) below which a
/// stationary point counts as an even-multiplicity root.
pub const TOUCH_TOL_REL: f64 = 1e-12;

/// Maps any angle onto `(-pi, pi]`.
pub fn canonical_angle(k: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut x = k.rem_euclid(two_pi);
    if x > PI {
        x -= two_pi;
    }
    if x <= -PI {
        x += two_pi;
    }
    x
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrigPoly {
    // cos[n] = a_n, sin[n] = b_n; sin[0] is always 0.
    cos: Vec<f64>,
    sin: Vec<f64>,
}

/// A zero of a trigonometric polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub angle: f64,
    /// Even-multiplicity zero (no sign change), found at a stationary point.
    pub touch: bool,
}

impl TrigPoly {
    /// Builds a polynomial from `a_0..a_m` and `b_1..b_m`. The two lists may
    /// differ in length; the shorter one is padded with zeros.
    pub fn new(cos: Vec<f64>, sin_from_one: Vec<f64>) -> Self {
        let m = cos.len().saturating_sub(1).max(sin_from_one.len());
        let mut c = cos;
        c.resize(m + 1, 0.0);
        let mut s = Vec::with_capacity(m + 1);
        s.push(0.0);
        s.extend(sin_from_one);
        s.resize(m + 1, 0.0);
        let mut p = TrigPoly { cos: c, sin: s };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        TrigPoly {
            cos: vec![0.0],
            sin: vec![0.0],
        }
    }

    pub fn constant(c: f64) -> Self {
        TrigPoly::new(vec![c], vec![])
    }

    /// `a * cos(n k)`.
    pub fn cos_term(n: usize, a: f64) -> Self {
        let mut cos = vec![0.0; n + 1];
        cos[n] = a;
        TrigPoly::new(cos, vec![])
    }

    /// `b * sin(n k)`; `n >= 1`.
    pub fn sin_term(n: usize, b: f64) -> Self {
        assert!(n >= 1, "sin(0 k) vanishes identically");
        let mut sin = vec![0.0; n];
        sin[n - 1] = b;
        TrigPoly::new(vec![], sin)
    }

    fn trim(&mut self) {
        while self.cos.len() > 1 {
            let m = self.cos.len() - 1;
            if self.cos[m].abs() < COEFF_TOL && self.sin[m].abs() < COEFF_TOL {
                self.cos.pop();
                self.sin.pop();
            } else {
                break;
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    /// `a_0..a_m`.
    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    /// `b_1..b_m`.
    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin[1..]
    }

    pub fn eval(&self, k: f64) -> f64 {
        let mut acc = self.cos[0];
        for n in 1..self.cos.len() {
            let (s, c) = (n as f64 * k).sin_cos();
            acc += self.cos[n] * c + self.sin[n] * s;
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut p = TrigPoly {
            cos: self.cos.iter().map(|a| a * s).collect(),
            sin: self.sin.iter().map(|b| b * s).collect(),
        };
        p.trim();
        p
    }

    /// Product via the product-to-sum identities.
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let m = self.degree() + other.degree();
        let mut cos = vec![0.0; m + 1];
        let mut sin = vec![0.0; m + 1];
        // Signed frequency j: cos(jk) = cos(|j|k), sin(jk) = sign(j) sin(|j|k).
        let put_cos = |j: i64, v: f64, cos: &mut Vec<f64>| cos[j.unsigned_abs() as usize] += v;
        let put_sin = |j: i64, v: f64, sin: &mut Vec<f64>| {
            if j != 0 {
                sin[j.unsigned_abs() as usize] += v * j.signum() as f64;
            }
        };
        for (n, (&an, &bn)) in self.cos.iter().zip(&self.sin).enumerate() {
            for (l, (&al, &bl)) in other.cos.iter().zip(&other.sin).enumerate() {
                let (n, l) = (n as i64, l as i64);
                // cos cos
                if an != 0.0 && al != 0.0 {
                    put_cos(n - l, 0.5 * an * al, &mut cos);
                    put_cos(n + l, 0.5 * an * al, &mut cos);
                }
                // sin sin
                if bn != 0.0 && bl != 0.0 {
                    put_cos(n - l, 0.5 * bn * bl, &mut cos);
                    put_cos(n + l, -0.5 * bn * bl, &mut cos);
                }
                // sin(nk) cos(lk)
                if bn != 0.0 && al != 0.0 {
                    put_sin(n + l, 0.5 * bn * al, &mut sin);
                    put_sin(n - l, 0.5 * bn * al, &mut sin);
                }
                // cos(nk) sin(lk)
                if an != 0.0 && bl != 0.0 {
                    put_sin(l + n, 0.5 * an * bl, &mut sin);
                    put_sin(l - n, 0.5 * an * bl, &mut sin);
                }
            }
        }
        sin[0] = 0.0;
        let mut p = TrigPoly { cos, sin };
        p.trim();
        p
    }

    /// Termwise `d/dk`.
    pub fn derivative(&self) -> TrigPoly {
        let m = self.degree();
        let mut cos = vec![0.0; m + 1];
        let mut sin = vec![0.0; m + 1];
        for n in 1..=m {
            let nf = n as f64;
            cos[n] = nf * self.sin[n];
            sin[n] = -nf * self.cos[n];
        }
        let mut p = TrigPoly { cos, sin };
        p.trim();
        p
    }

    /// True iff every coefficient has magnitude below `tol`.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.cos.iter().chain(&self.sin).all(|c| c.abs() < tol)
    }

    pub fn max_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(&self.sin)
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn l1_norm(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|c| c.abs()).sum()
    }

    /// Zeros on `(-pi, pi]`, sorted by angle.
    ///
    /// Sign changes are bracketed on a uniform scan of `512 (2m + 1)` points
    /// and refined by bisection. Even-multiplicity zeros are the stationary
    /// points (sign changes of the derivative) where `|p|` is below
    /// [`TOUCH_TOL_REL`] times the coefficient norm; these are flagged.
    pub fn roots(&self) -> Result<Vec<Root>, Error> {
        if self.is_zero(COEFF_TOL) {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let mut roots: Vec<Root> = self
            .sign_change_zeros()
            .into_iter()
            .map(|angle| Root { angle, touch: false })
            .collect();
        let dp = self.derivative();
        if !dp.is_zero(COEFF_TOL) {
            let tol = TOUCH_TOL_REL * self.l1_norm();
            for k in dp.sign_change_zeros() {
                if self.eval(k).abs() <= tol
                    && !roots.iter().any(|r| angular_distance(r.angle, k) < 1e-9)
                {
                    roots.push(Root {
                        angle: k,
                        touch: true,
                    });
                }
            }
        }
        roots.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        Ok(roots)
    }

    /// Angles where `p` changes sign (or vanishes exactly on the scan grid).
    fn sign_change_zeros(&self) -> Vec<f64> {
        let n = ROOT_SCAN_FACTOR * (2 * self.degree() + 1);
        let h = 2.0 * PI / n as f64;
        let grid: Vec<f64> = (0..n).map(|j| -PI + (j as f64 + 0.5) * h).collect();
        let vals: Vec<f64> = grid.iter().map(|&k| self.eval(k)).collect();
        let mut out = Vec::new();
        for j in 0..n {
            let (a, fa) = (grid[j], vals[j]);
            let fb = vals[(j + 1) % n];
            if fa == 0.0 {
                out.push(canonical_angle(a));
            } else if fa * fb < 0.0 {
                out.push(canonical_angle(self.bisect(a, a + h, fa)));
            }
        }
        out
    }

    fn bisect(&self, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if fa * fm < 0.0 {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        0.5 * (a + b)
    }

    /// `max |p(k)|` over the circle, taken over the stationary points.
    pub fn sup_norm(&self) -> f64 {
        let dp = self.derivative();
        if dp.is_zero(COEFF_TOL) {
            return self.cos[0].abs();
        }
        dp.sign_change_zeros()
            .into_iter()
            .map(|k| self.eval(k).abs())
            .fold(self.eval(PI).abs(), f64::max)
    }
}

/// Distance between two angles on the circle.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    canonical_angle(a - b).abs()
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let m = self.degree().max(rhs.degree());
        let mut cos = vec![0.0; m + 1];
        let mut sin = vec![0.0; m + 1];
        for (i, (c, s)) in self.cos.iter().zip(&self.sin).enumerate() {
            cos[i] += c;
            sin[i] += s;
        }
        for (i, (c, s)) in rhs.cos.iter().zip(&rhs.sin).enumerate() {
            cos[i] += c;
            sin[i] += s;
        }
        let mut p = TrigPoly { cos, sin };
        p.trim();
        p
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(-1.0)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::mul(self, rhs)
    }
}
