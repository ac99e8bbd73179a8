//! Shannon and binary entropy, and window entropies built from them.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest window for which [`spectrum_product`] materializes `2^nu` values.
pub const MAX_PRODUCT_NU: usize = 20;

/// `-x log x` on `(0, 1)`, zero elsewhere.
pub fn shannon_ell(x: f64) -> f64 {
    if x > 0.0 && x < 1.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// `ell((1+x)/2) + ell((1-x)/2)` on `(-1, 1)`, zero for `|x| >= 1`.
pub fn binary_eta(x: f64) -> f64 {
    if x.abs() < 1.0 {
        shannon_ell(0.5 * (1.0 + x)) + shannon_ell(0.5 * (1.0 - x))
    } else {
        0.0
    }
}

/// Von Neumann entropy of a window, in nats.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyValue {
    pub nu: usize,
    #[serde(rename = "S")]
    pub s: f64,
}

impl EntropyValue {
    pub fn bits(&self) -> f64 {
        self.s / std::f64::consts::LN_2
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// `S = sum_i eta(lambda_i)`.
///
/// Values may overshoot `[0, 1]` by rounding; anything below `-1e-8` or above
/// `1 + 1e-6` is rejected.
pub fn entropy_from_lambdas(lambdas: &[f64]) -> Result<EntropyValue> {
    for &l in lambdas {
        if !l.is_finite() || !(-1e-8..=1.0 + 1e-6).contains(&l) {
            return Err(Error::OutOfRange { value: l });
        }
    }
    let s = compensated_sum(lambdas.iter().map(|&l| binary_eta(l.clamp(0.0, 1.0))));
    Ok(EntropyValue {
        nu: lambdas.len(),
        s,
    })
}

/// All `2^nu` products `prod_i (1 + (-1)^{alpha_i} lambda_i) / 2`.
///
/// Bit `i` of the output index (most significant first) is `alpha_i`.
pub fn spectrum_product(lambdas: &[f64]) -> Result<Vec<f64>> {
    if lambdas.len() > MAX_PRODUCT_NU {
        return Err(Error::TooLarge {
            size: lambdas.len(),
            max: MAX_PRODUCT_NU,
        });
    }
    let mut out = vec![1.0];
    for &l in lambdas {
        let (p, m) = (0.5 * (1.0 + l), 0.5 * (1.0 - l));
        out = out.iter().flat_map(|&v| [v * p, v * m]).collect();
    }
    Ok(out)
}

/// Shannon entropy of a probability vector.
pub fn shannon_sum(probs: &[f64]) -> f64 {
    compensated_sum(probs.iter().map(|&p| shannon_ell(p)))
}

/// `|sum_alpha ell(prod_i (1 +- lambda_i)/2) - sum_i eta(lambda_i)|`.
pub fn functional_equation_residual(lambdas: &[f64]) -> f64 {
    let lhs = match spectrum_product(lambdas) {
        Ok(p) => shannon_sum(&p),
        Err(_) => return f64::NAN,
    };
    let rhs = compensated_sum(lambdas.iter().map(|&l| binary_eta(l)));
    (lhs - rhs).abs()
}
