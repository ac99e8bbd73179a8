//! Asymptotic entropy density `s_inf`, the momentum partition by the sign of
//! the group velocity, the energy range `Sigma` and the vanishing test.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{binary_eta, compensated_sum};
use crate::error::{Error, Result};
use crate::quad::{adaptive_gauss, bisect_level, cluster_angles};
use crate::rlmover::{arcs, sign, ChainModel, FermiFunction, RlSymbol, CASE_TOL};
use crate::trigpoly::canonical_angle;

pub const QUAD_TOL: f64 = 1e-10;
pub const QUAD_DEPTH: u32 = 40;
/// `s_inf` below this counts as vanishing.
pub const VANISHING_TOL: f64 = 1e-9;
pub const SIGMA_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mover {
    L,
    R,
}

/// Momentum arcs by the sign of `E_+'`: negative on `pi_l`, positive on
/// `pi_r`. Arcs are `(a, b)` with `a < b`; the last one may extend past `pi`.
#[derive(Clone, Debug, Serialize)]
pub struct MomentumPartition {
    pub pi_l: Vec<(f64, f64)>,
    pub pi_r: Vec<(f64, f64)>,
    /// Stationary points of the band off the zero set.
    pub pi_0: Vec<f64>,
    /// The zero set `Z_|u|`.
    pub excluded: Vec<f64>,
}

fn total(arcs: &[(f64, f64)]) -> f64 {
    arcs.iter().map(|(a, b)| b - a).sum()
}

impl MomentumPartition {
    pub fn length_l(&self) -> f64 {
        total(&self.pi_l)
    }

    pub fn length_r(&self) -> f64 {
        total(&self.pi_r)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingVerdict {
    pub vanishing: bool,
    pub samples: usize,
    /// First sampled energy `x` with `rho(x)` strictly between 0 and 1.
    pub witness: Option<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub s_infinity: f64,
    /// Contributions of `Pi_L` and `Pi_R`.
    pub s_left: f64,
    pub s_right: f64,
    pub partition: MomentumPartition,
    pub sigma: Vec<(f64, f64)>,
    pub vanishing: VanishingVerdict,
}

/// Sub-arc with the inverse temperature of its mover species.
struct LabeledArc {
    a: f64,
    b: f64,
    mover: Mover,
    beta: f64,
}

fn label(rl: &RlSymbol, k: f64) -> Option<(Mover, f64)> {
    let d = rl.bands.derivative(k).ok()?.0;
    let t = rl.model.temps;
    match sign(d) {
        s if s > 0.0 => Some((Mover::R, t.beta_r())),
        s if s < 0.0 => Some((Mover::L, t.beta_l())),
        _ => None,
    }
}

fn labeled_arcs(rl: &RlSymbol, angles: &[f64]) -> Vec<LabeledArc> {
    arcs(angles)
        .into_iter()
        .filter_map(|(a, b)| {
            label(rl, 0.5 * (a + b)).map(|(mover, beta)| LabeledArc { a, b, mover, beta })
        })
        .collect()
}

fn supported(model: &ChainModel) -> Result<RlSymbol> {
    RlSymbol::new(model)
}

fn merge_adjacent(mut arcs: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
    for (a, b) in arcs {
        match out.last_mut() {
            Some(last) if (a - last.1).abs() < 1e-12 => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    // Join across the seam at pi.
    if out.len() > 1 {
        let (first, last) = (out[0], out[out.len() - 1]);
        if (last.1 - (first.0 + 2.0 * PI)).abs() < 1e-12 {
            out.pop();
            out[0] = (last.0, first.1 + 2.0 * PI);
            if out[0].0 > PI {
                out[0] = (out[0].0 - 2.0 * PI, out[0].1 - 2.0 * PI);
            }
            out.sort_by(|x, y| x.0.total_cmp(&y.0));
        }
    }
    out
}

pub fn partition_momentum(model: &ChainModel) -> Result<MomentumPartition> {
    let rl = supported(model)?;
    partition_of(&rl)
}

fn partition_of(rl: &RlSymbol) -> Result<MomentumPartition> {
    let angles = rl.bands.partition_angles();
    let excluded = rl.bands.zero_set();
    let (mut pl, mut pr) = (Vec::new(), Vec::new());
    for arc in labeled_arcs(rl, &angles) {
        match arc.mover {
            Mover::L => pl.push((arc.a, arc.b)),
            Mover::R => pr.push((arc.a, arc.b)),
        }
    }
    let pi_0 = angles
        .iter()
        .copied()
        .filter(|a| !excluded.iter().any(|z| (z - a).abs() < 1e-9))
        .collect();
    let p = MomentumPartition {
        pi_l: merge_adjacent(pl),
        pi_r: merge_adjacent(pr),
        pi_0,
        excluded,
    };
    if (p.length_l() + p.length_r() - 2.0 * PI).abs() > 1e-8 {
        return Err(Error::QuadratureFailure(format!(
            "partition covers {} of the circle",
            p.length_l() + p.length_r()
        )));
    }
    Ok(p)
}

/// Adds the angles where `beta E_+` crosses a Fermi threshold on the arcs
/// between `angles` (on which `E_+` is monotone).
fn with_crossings(rl: &RlSymbol, angles: &[f64], betas: impl Fn(f64) -> Vec<f64>) -> Vec<f64> {
    let th = rl.model.fermi.thresholds();
    let mut out = angles.to_vec();
    if th.is_empty() {
        return out;
    }
    for (a, b) in arcs(angles) {
        for beta in betas(0.5 * (a + b)) {
            let f = |k: f64| beta * rl.bands.dispersion(k).0;
            for &t in &th {
                if let Some(k) = bisect_level(f, a, b, t) {
                    out.push(canonical_angle(k));
                }
            }
        }
    }
    cluster_angles(out)
}

fn integrate(f: impl Fn(f64) -> f64 + Sync, a: f64, b: f64) -> Result<f64> {
    let tol = QUAD_TOL * (b - a) / (2.0 * PI);
    adaptive_gauss(&f, a, b, tol, QUAD_DEPTH)
}

/// `(s_L, s_R)` with `s_alpha = int_{Pi_alpha} eta(g(beta_alpha E_+)) dk / 2pi`.
fn split_integral(rl: &RlSymbol, g: impl Fn(f64) -> f64 + Sync) -> Result<(f64, f64)> {
    let base = rl.bands.partition_angles();
    let angles = with_crossings(rl, &base, |k| label(rl, k).map(|l| vec![l.1]).unwrap_or_default());
    let parts: Vec<(Mover, f64)> = labeled_arcs(rl, &angles)
        .par_iter()
        .map(|arc| {
            let v = integrate(|k| binary_eta(g(arc.beta * rl.bands.dispersion(k).0)), arc.a, arc.b)?;
            Ok((arc.mover, v / (2.0 * PI)))
        })
        .collect::<Result<_>>()?;
    let pick = |m: Mover| compensated_sum(parts.iter().filter(|p| p.0 == m).map(|p| p.1));
    Ok((pick(Mover::L), pick(Mover::R)))
}

fn fermi_split(rl: &RlSymbol) -> Result<(f64, f64)> {
    let fermi = rl.model.fermi.clone();
    split_integral(rl, move |x| fermi.odd2(x))
}

/// `s_inf = int dk/2pi eta(2 Od(rho)((beta + delta sign E') E))` with the
/// partition, `Sigma` and the vanishing verdict.
pub fn s_infinity(model: &ChainModel) -> Result<DensityReport> {
    let rl = supported(model)?;
    let (s_left, s_right) = fermi_split(&rl)?;
    let s = s_left + s_right;
    let partition = partition_of(&rl)?;
    let sigma = sigma_of(&rl);
    let vanishing = vanishing_of(&rl, &sigma, s)?;
    Ok(DensityReport {
        s_infinity: s,
        s_left,
        s_right,
        partition,
        sigma,
        vanishing,
    })
}

/// `s_inf` alone.
pub fn s_infinity_value(model: &ChainModel) -> Result<f64> {
    let (l, r) = fermi_split(&supported(model)?)?;
    Ok(l + r)
}

/// `(1/2) sum_alpha int eta(2 Od(rho)(beta_alpha E)) dk / 2pi` over the full
/// circle; valid when `u_0 = 0`.
pub fn s_infinity_symmetric(model: &ChainModel) -> Result<f64> {
    let rl = supported(model)?;
    let scale = model.hamiltonian.max_coeff();
    if !rl.bands.u0.is_zero(CASE_TOL * scale) {
        return Err(Error::NotSymmetric);
    }
    let t = model.temps;
    let base = rl.bands.partition_angles();
    let mut acc = Vec::new();
    for beta in [t.beta_l(), t.beta_r()] {
        let angles = with_crossings(&rl, &base, |_| vec![beta]);
        let fermi = &model.fermi;
        let parts: Vec<f64> = arcs(&angles)
            .par_iter()
            .map(|&(a, b)| {
                integrate(|k| binary_eta(fermi.odd2(beta * rl.bands.dispersion(k).0)), a, b)
            })
            .collect::<Result<_>>()?;
        acc.push(compensated_sum(parts) / (2.0 * PI));
    }
    Ok(0.5 * (acc[0] + acc[1]))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TanhReport {
    pub s_infinity: f64,
    /// `sum_alpha eta(a_alpha) |Pi_alpha| / 2pi`.
    pub lower_bound: f64,
}

/// `sum_alpha int_{Pi_alpha} eta(tanh(beta_alpha E / 2)) dk / 2pi` for the
/// Fermi-Dirac distribution, with its lower bound.
pub fn tanh_form(model: &ChainModel) -> Result<TanhReport> {
    if !matches!(model.fermi, FermiFunction::FermiDirac) {
        return Err(Error::WrongFermi);
    }
    let rl = supported(model)?;
    let (l, r) = split_integral(&rl, |x| (0.5 * x).tanh())?;
    let p = partition_of(&rl)?;
    let norm: f64 = std::iter::once(&rl.bands.u0)
        .chain(rl.bands.u.iter())
        .map(|u| u.sup_norm())
        .sum();
    let t = model.temps;
    let a = |beta: f64| (0.5 * beta * norm).tanh();
    let lower = (binary_eta(a(t.beta_l())) * p.length_l() + binary_eta(a(t.beta_r())) * p.length_r())
        / (2.0 * PI);
    Ok(TanhReport {
        s_infinity: l + r,
        lower_bound: lower,
    })
}

fn merge_intervals(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn sigma_of(rl: &RlSymbol) -> Vec<(f64, f64)> {
    let angles = rl.bands.partition_angles();
    let mut v = Vec::new();
    for arc in labeled_arcs(rl, &angles) {
        let ea = arc.beta * rl.bands.dispersion(arc.a).0;
        let eb = arc.beta * rl.bands.dispersion(arc.b).0;
        let (lo, hi) = (ea.min(eb), ea.max(eb));
        v.push((lo, hi));
        v.push((-hi, -lo));
    }
    merge_intervals(v)
}

/// The energy range `Sigma` as merged closed intervals.
pub fn sigma_set(model: &ChainModel) -> Result<Vec<(f64, f64)>> {
    Ok(sigma_of(&supported(model)?))
}

fn vanishing_of(rl: &RlSymbol, sigma: &[(f64, f64)], s_inf: f64) -> Result<VanishingVerdict> {
    let fermi = &rl.model.fermi;
    let th = fermi.thresholds();
    let len: f64 = sigma.iter().map(|(a, b)| b - a).sum();
    let mut samples = 0;
    let mut witness = None;
    for &(a, b) in sigma {
        if b <= a {
            continue;
        }
        let n = ((SIGMA_SAMPLES as f64 * (b - a) / len).round() as usize).max(1);
        let h = (b - a) / n as f64;
        for j in 0..n {
            let x = a + (j as f64 + 0.5) * h;
            if th.iter().any(|t| (x - t).abs() < 1e-9) {
                continue;
            }
            samples += 1;
            let r = fermi.rho(x);
            if witness.is_none() && r.abs() > 1e-12 && (r - 1.0).abs() > 1e-12 {
                witness = Some((x, r));
            }
        }
    }
    let vanishing = witness.is_none();
    if vanishing != (s_inf < VANISHING_TOL) {
        return Err(Error::VanishingMismatch {
            s_infinity: s_inf,
            verdict: vanishing,
        });
    }
    Ok(VanishingVerdict {
        vanishing,
        samples,
        witness,
    })
}

/// Samples `rho` on `Sigma`; vanishing iff every sample is 0 or 1. Fails if
/// the verdict disagrees with `s_inf < 1e-9`.
pub fn vanishing_check(model: &ChainModel) -> Result<VanishingVerdict> {
    let rl = supported(model)?;
    let (l, r) = fermi_split(&rl)?;
    vanishing_of(&rl, &sigma_of(&rl), l + r)
}
