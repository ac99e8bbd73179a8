//! Brute-force Fock-space oracle for small windows.
//!
//! Builds the CAR generators by a Jordan-Wigner product (site 1 is the most
//! significant tensor factor), the selfdual generators `B(F)`, Majorana
//! operators and matrix units, and reconstructs the reduced density matrix
//! from Pfaffian correlation functions.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{entropy_from_lambdas, shannon_sum, spectrum_product};
use crate::error::{Error, Result};
use crate::rlmover::{ChainModel, FermiFamilyPhase};
use crate::toeplitz::{b_coeffs, build_r, fourier_coeffs, window_spectrum, CoeffTable};
use crate::C64;

pub type CMat = DMatrix<C64>;

pub const MAX_REP_NU: usize = 6;
pub const MAX_RDM_NU: usize = 5;
pub const MAX_UNIT_NU: usize = 4;
pub const MAX_PFAFFIAN_N: usize = 8;
pub const UNIT_TOL: f64 = 1e-12;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn kron_all(factors: &[CMat]) -> CMat {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Explicit CAR generators on `C^{2^nu}`.
#[derive(Clone, Debug)]
pub struct FockRep {
    pub nu: usize,
    c: Vec<CMat>,
}

impl FockRep {
    pub fn new(nu: usize) -> Result<Self> {
        if nu == 0 || nu > MAX_REP_NU {
            return Err(Error::TooLarge {
                size: nu,
                max: MAX_REP_NU,
            });
        }
        let id = CMat::identity(2, 2);
        let z = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![one(), -one()]));
        let mut lower = CMat::zeros(2, 2);
        lower[(0, 1)] = one();
        let c = (0..nu)
            .map(|j| {
                let f: Vec<CMat> = (0..nu)
                    .map(|k| match k.cmp(&j) {
                        std::cmp::Ordering::Less => z.clone(),
                        std::cmp::Ordering::Equal => lower.clone(),
                        std::cmp::Ordering::Greater => id.clone(),
                    })
                    .collect();
                kron_all(&f)
            })
            .collect();
        Ok(FockRep { nu, c })
    }

    pub fn dim(&self) -> usize {
        1 << self.nu
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.dim(), self.dim())
    }

    /// Annihilator `c_x` (0-based site).
    pub fn c(&self, x: usize) -> &CMat {
        &self.c[x]
    }

    pub fn c_dag(&self, x: usize) -> CMat {
        self.c[x].adjoint()
    }

    /// `B(F) = sum_x f1(x) c_x^* + f2(x) c_x`.
    pub fn b_op(&self, f: &Doubled) -> CMat {
        let mut m = CMat::zeros(self.dim(), self.dim());
        for x in 0..self.nu {
            m += self.c_dag(x) * f.f1[x] + &self.c[x] * f.f2[x];
        }
        m
    }

    /// `max |{c_i, c_j}|` and `max |{c_i, c_j^*} - delta_ij|`.
    pub fn car_residual(&self) -> f64 {
        let id = self.identity();
        let mut r = 0.0_f64;
        for i in 0..self.nu {
            for j in 0..self.nu {
                let (ci, cj) = (&self.c[i], &self.c[j]);
                r = r.max(max_abs(&(ci * cj + cj * ci)));
                let cjd = self.c_dag(j);
                let mut ac = ci * &cjd + &cjd * ci;
                if i == j {
                    ac -= &id;
                }
                r = r.max(max_abs(&ac));
            }
        }
        r
    }
}

/// A vector `f1 + f2` of the doubled one-particle space, restricted to the
/// window.
#[derive(Clone, Debug, PartialEq)]
pub struct Doubled {
    pub f1: Vec<C64>,
    pub f2: Vec<C64>,
}

impl Doubled {
    pub fn zeros(nu: usize) -> Self {
        Doubled {
            f1: vec![zero(); nu],
            f2: vec![zero(); nu],
        }
    }

    /// `J(f1 + f2) = conj(f2) + conj(f1)`.
    pub fn j(&self) -> Doubled {
        Doubled {
            f1: self.f2.iter().map(|z| z.conj()).collect(),
            f2: self.f1.iter().map(|z| z.conj()).collect(),
        }
    }

    /// `(F, G)`, antilinear in `F`.
    pub fn inner(&self, g: &Doubled) -> C64 {
        self.f1
            .iter()
            .zip(&g.f1)
            .chain(self.f2.iter().zip(&g.f2))
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re
    }

    fn combine(&self, a: C64, g: &Doubled, b: C64) -> Doubled {
        Doubled {
            f1: self.f1.iter().zip(&g.f1).map(|(x, y)| a * x + b * y).collect(),
            f2: self.f2.iter().zip(&g.f2).map(|(x, y)| a * x + b * y).collect(),
        }
    }
}

/// `||B(F)|| = sqrt((||F||^2 + sqrt(||F||^4 - |(F, JF)|^2)) / 2)`.
pub fn araki_norm(f: &Doubled) -> f64 {
    let n2 = f.norm_sq();
    let c = f.inner(&f.j()).norm();
    (0.5 * (n2 + (n2 * n2 - c * c).max(0.0).sqrt())).sqrt()
}

pub fn operator_norm(a: &CMat) -> f64 {
    let h = a.adjoint() * a;
    SymmetricEigen::new(h).eigenvalues.max().max(0.0).sqrt()
}

/// Fermi family `Q_i = lambda J^gamma (delta_i + 0)`.
pub fn fermi_family(phase: &FermiFamilyPhase, nu: usize) -> Vec<Doubled> {
    (0..nu)
        .map(|i| {
            let mut q = Doubled::zeros(nu);
            if phase.gamma == 2 {
                q.f1[i] = phase.lambda;
            } else {
                q.f2[i] = phase.lambda;
            }
            q
        })
        .collect()
}

/// Majorana family `M_{2i-1} = Q_i + J Q_i`, `M_{2i} = i (Q_i - J Q_i)`.
pub fn majorana_family(phase: &FermiFamilyPhase, nu: usize) -> Vec<Doubled> {
    let i = C64::new(0.0, 1.0);
    fermi_family(phase, nu)
        .into_iter()
        .flat_map(|q| {
            let jq = q.j();
            [q.combine(one(), &jq, one()), q.combine(i, &jq, -i)]
        })
        .collect()
}

pub fn majoranas(rep: &FockRep, phase: &FermiFamilyPhase) -> Vec<CMat> {
    majorana_family(phase, rep.nu)
        .iter()
        .map(|m| rep.b_op(m))
        .collect()
}

/// `max |gamma_i - gamma_i^*|` and `max |{gamma_i, gamma_j} - 2 delta_ij|`.
pub fn majorana_residual(rep: &FockRep, phase: &FermiFamilyPhase) -> f64 {
    let g = majoranas(rep, phase);
    let id = rep.identity();
    let mut r = 0.0_f64;
    for (i, gi) in g.iter().enumerate() {
        r = r.max(max_abs(&(gi - gi.adjoint())));
        for (j, gj) in g.iter().enumerate() {
            let mut ac = gi * gj + gj * gi;
            if i == j {
                ac -= &id * C64::new(2.0, 0.0);
            }
            r = r.max(max_abs(&ac));
        }
    }
    r
}

/// Residuals of `B^*(F) = B(JF)`, `{B^*(F), B(G)} = (F, G)` and
/// `{B(F), B(G)} = (JF, G)`.
pub fn selfdual_car_residual(rep: &FockRep, f: &Doubled, g: &Doubled) -> f64 {
    let bf = rep.b_op(f);
    let bg = rep.b_op(g);
    let bfs = bf.adjoint();
    let id = rep.identity();
    let r1 = max_abs(&(&bfs - rep.b_op(&f.j())));
    let r2 = max_abs(&(&bfs * &bg + &bg * &bfs - &id * f.inner(g)));
    let r3 = max_abs(&(&bf * &bg + &bg * &bf - &id * f.j().inner(g)));
    r1.max(r2).max(r3)
}

fn antisymmetry_defect(x: &CMat) -> f64 {
    max_abs(&(x + x.transpose()))
}

fn pf_rec(x: &CMat, idx: &[usize]) -> C64 {
    match idx.len() {
        0 => one(),
        2 => x[(idx[0], idx[1])],
        _ => {
            let mut acc = zero();
            let mut rest = Vec::with_capacity(idx.len() - 2);
            for j in 1..idx.len() {
                let a = x[(idx[0], idx[j])];
                if a == zero() {
                    continue;
                }
                rest.clear();
                rest.extend(idx[1..].iter().enumerate().filter(|(p, _)| p + 1 != j).map(|(_, &v)| v));
                let s = if j % 2 == 1 { 1.0 } else { -1.0 };
                acc += a * s * pf_rec(x, &rest);
            }
            acc
        }
    }
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian(x: &CMat) -> Result<C64> {
    let n = x.nrows();
    if n != x.ncols() || n % 2 == 1 {
        return Ok(zero());
    }
    if n / 2 > MAX_PFAFFIAN_N {
        return Err(Error::TooLarge {
            size: n / 2,
            max: MAX_PFAFFIAN_N,
        });
    }
    let d = antisymmetry_defect(x);
    if d > 1e-10 {
        return Err(Error::NotAntisymmetric { residual: d });
    }
    Ok(pf_rec(x, &(0..n).collect::<Vec<_>>()))
}

/// All perfect matchings of `0..2n` as sorted pairs.
pub fn pairings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for j in 1..rest.len() {
            cur.push((rest[0], rest[j]));
            let next: Vec<usize> = rest[1..].iter().copied().filter(|&v| v != rest[j]).collect();
            go(&next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&(0..2 * n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

/// Number of crossing chord pairs when the points sit on a line.
pub fn crossings(p: &[(usize, usize)]) -> usize {
    let mut c = 0;
    for (i, &(a, b)) in p.iter().enumerate() {
        for &(c2, d) in &p[i + 1..] {
            if (a < c2 && c2 < b && b < d) || (c2 < a && a < d && d < b) {
                c += 1;
            }
        }
    }
    c
}

/// Pfaffian as the signed sum over pairings, the sign being the parity of
/// the number of crossings.
pub fn pfaffian_by_pairings(x: &CMat) -> C64 {
    let n = x.nrows() / 2;
    pairings(n)
        .iter()
        .map(|p| {
            let s = if crossings(p).is_multiple_of(2) { 1.0 } else { -1.0 };
            p.iter().fold(C64::new(s, 0.0), |acc, &(a, b)| acc * x[(a, b)])
        })
        .sum()
}

/// The Majorana correlation matrix `Omega_ij = (M_i, R M_j) / 2` on a
/// window of `nu` consecutive sites.
#[derive(Clone, Debug)]
pub struct CorrelationData {
    pub nu: usize,
    pub omega: CMat,
}

impl CorrelationData {
    /// From the Fourier coefficients of the 2-point symbol `r`, with
    /// `(delta_x, R_pq delta_y) = r_pq(x - y)`.
    pub fn from_r_coeffs(r: &CoeffTable, phase: &FermiFamilyPhase, nu: usize) -> Result<Self> {
        if nu == 0 || nu - 1 > r.max_lag {
            return Err(Error::MissingLags {
                needed: nu,
                have: r.max_lag,
            });
        }
        let m = majorana_family(phase, nu);
        let site = |a: usize| a / 2;
        let comp = |d: &Doubled, x: usize| [d.f1[x], d.f2[x]];
        let omega = CMat::from_fn(2 * nu, 2 * nu, |a, b| {
            let (x, y) = (site(a), site(b));
            let (ma, mb) = (comp(&m[a], x), comp(&m[b], y));
            let rr = r.at(x as i64 - y as i64);
            let mut s = zero();
            for p in 0..2 {
                for q in 0..2 {
                    s += ma[p].conj() * rr[p][q] * mb[q];
                }
            }
            0.5 * s
        });
        Ok(CorrelationData { nu, omega })
    }

    pub fn from_model(model: &ChainModel, nu: usize) -> Result<Self> {
        let r = fourier_coeffs(&build_r(model)?, nu.saturating_sub(1))?;
        CorrelationData::from_r_coeffs(&r, &model.phase, nu)
    }

    /// `2 Omega - 1 = 2i Xi`, antisymmetric.
    pub fn covariance(&self) -> CMat {
        let n = self.omega.nrows();
        &self.omega * C64::new(2.0, 0.0) - CMat::identity(n, n)
    }

    /// `Xi` with `Omega = 1/2 + i Xi`.
    pub fn xi(&self) -> DMatrix<f64> {
        let n = self.omega.nrows();
        DMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 0.5 } else { 0.0 };
            ((self.omega[(i, j)] - d) * C64::new(0.0, -1.0)).re
        })
    }

    /// `(max |Omega - Omega^*|, max |Omega^T + Omega - 1|)`.
    pub fn structure_residual(&self) -> (f64, f64) {
        let n = self.omega.nrows();
        let h = max_abs(&(&self.omega - self.omega.adjoint()));
        let t = max_abs(&(self.omega.transpose() + &self.omega - CMat::identity(n, n)));
        (h, t)
    }
}

/// `omega(gamma_{s_1} ... gamma_{s_m})` for an ascending index list.
pub fn omega_monomial(data: &CorrelationData, s: &[usize]) -> Result<C64> {
    if s.len() % 2 == 1 {
        return Ok(zero());
    }
    let cov = data.covariance();
    let sub = CMat::from_fn(s.len(), s.len(), |i, j| cov[(s[i], s[j])]);
    pfaffian(&sub)
}

#[derive(Clone, Debug)]
pub struct ReducedDensity {
    pub matrix: CMat,
    /// Ascending.
    pub spectrum: Vec<f64>,
    /// `-tr(R log R)`.
    pub entropy: f64,
}

fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut v: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `R = 2^{-nu} sum_S omega(gamma_S) gamma_S^*` over all subsets of the
/// `2 nu` Majorana operators.
pub fn reduced_density_matrix(
    rep: &FockRep,
    phase: &FermiFamilyPhase,
    data: &CorrelationData,
) -> Result<ReducedDensity> {
    if rep.nu > MAX_RDM_NU {
        return Err(Error::TooLarge {
            size: rep.nu,
            max: MAX_RDM_NU,
        });
    }
    let g = majoranas(rep, phase);
    let n = 2 * rep.nu;
    let dim = rep.dim();
    let terms: Vec<CMat> = (0u32..1 << n)
        .into_par_iter()
        .map(|mask| {
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let w = omega_monomial(data, &s)?;
            if w == zero() {
                return Ok(CMat::zeros(dim, dim));
            }
            let prod = s
                .iter()
                .fold(rep.identity(), |acc, &i| acc * &g[i]);
            Ok(prod.adjoint() * w)
        })
        .collect::<Result<_>>()?;
    let mut r = CMat::zeros(dim, dim);
    for t in &terms {
        r += t;
    }
    r *= C64::new(1.0 / dim as f64, 0.0);
    let herm = max_abs(&(&r - r.adjoint()));
    let tr = r.trace();
    let spectrum = hermitian_eigenvalues(&r);
    if herm > 1e-10 || (tr - one()).norm() > 1e-10 || spectrum[0] < -1e-10 {
        return Err(Error::AxiomViolation(format!(
            "reduced density matrix: hermiticity {herm:e}, trace {tr}, min eigenvalue {:e}",
            spectrum[0]
        )));
    }
    let entropy = shannon_sum(&spectrum);
    Ok(ReducedDensity {
        matrix: r,
        spectrum,
        entropy,
    })
}

/// `lambda_i = 2 |xi_i|` from the eigenvalues `+-xi_i` of `i Xi`.
pub fn skew_canonical_lambdas(data: &CorrelationData) -> Result<Vec<f64>> {
    let xi = data.xi();
    let d = (&xi + xi.transpose()).abs().max();
    if d > 1e-10 {
        return Err(Error::NotAntisymmetric { residual: d });
    }
    let h = xi.map(|v| C64::new(0.0, v));
    let ev = hermitian_eigenvalues(&h);
    let n = ev.len();
    let mut out = Vec::with_capacity(n / 2);
    for i in 0..n / 2 {
        let r = (ev[i] + ev[n - 1 - i]).abs();
        if r > 1e-6 {
            return Err(Error::PairingFailure { residual: r });
        }
        out.push((ev[n - 1 - i] - ev[i]).min(1.0));
    }
    Ok(out)
}

/// Site matrix units `e^{(i)}_{ab}`, `a, b in {0, 1}`, for the first `n`
/// sites.
pub fn site_units(rep: &FockRep, phase: &FermiFamilyPhase, n: usize) -> Vec<[[CMat; 2]; 2]> {
    let q = fermi_family(phase, rep.nu);
    let id = rep.identity();
    let mut string = id.clone();
    let mut out = Vec::with_capacity(n);
    for qi in q.iter().take(n) {
        let b = rep.b_op(qi);
        let bs = b.adjoint();
        let e11 = &bs * &b;
        let e22 = &b * &bs;
        let e12 = &string * &bs;
        let e21 = &string * &b;
        string = &string * (&e11 * C64::new(2.0, 0.0) - &id);
        out.push([[e11, e12], [e21, e22]]);
    }
    out
}

fn multi_index(a: usize, n: usize) -> Vec<usize> {
    (0..n).map(|i| a >> (n - 1 - i) & 1).collect()
}

/// `e_{ab} = prod_i e^{(i)}_{a_i b_i}`; multi-indices are bit strings with
/// site 1 most significant.
pub fn unit(units: &[[[CMat; 2]; 2]], a: usize, b: usize) -> CMat {
    let n = units.len();
    let (ai, bi) = (multi_index(a, n), multi_index(b, n));
    units
        .iter()
        .enumerate()
        .skip(1)
        .fold(units[0][ai[0]][bi[0]].clone(), |acc, (i, u)| acc * &u[ai[i]][bi[i]])
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitReport {
    pub sites: usize,
    /// Largest residual of each relation.
    pub residuals: Vec<(String, f64)>,
}

impl UnitReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Checks the matrix-unit relations on the first `n` sites of `rep`.
pub fn matrix_units(rep: &FockRep, phase: &FermiFamilyPhase, n: usize) -> Result<UnitReport> {
    if n == 0 || n > rep.nu || n > MAX_UNIT_NU {
        return Err(Error::TooLarge {
            size: n,
            max: MAX_UNIT_NU.min(rep.nu),
        });
    }
    let su = site_units(rep, phase, n);
    let id = rep.identity();
    let mut res: Vec<(String, f64)> = Vec::new();

    let (mut mult, mut adj, mut sum, mut comm) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for (i, u) in su.iter().enumerate() {
        sum = sum.max(max_abs(&(&u[0][0] + &u[1][1] - &id)));
        for a in 0..2 {
            for b in 0..2 {
                adj = adj.max(max_abs(&(u[a][b].adjoint() - &u[b][a])));
                for c in 0..2 {
                    for d in 0..2 {
                        let lhs = &u[a][b] * &u[c][d];
                        let r = if b == c { &lhs - &u[a][d] } else { lhs };
                        mult = mult.max(max_abs(&r));
                        for v in su.iter().skip(i + 1) {
                            let x = &u[a][b] * &v[c][d] - &v[c][d] * &u[a][b];
                            comm = comm.max(max_abs(&x));
                        }
                    }
                }
            }
        }
    }
    res.push(("site product e_ab e_cd = delta_bc e_ad".into(), mult));
    res.push(("site adjoint e_ab^* = e_ba".into(), adj));
    res.push(("site sum e_11 + e_22 = 1".into(), sum));
    res.push(("different sites commute".into(), comm));

    let m = 1usize << n;
    let e: Vec<Vec<CMat>> = (0..m).map(|a| (0..m).map(|b| unit(&su, a, b)).collect()).collect();
    let (mut mult, mut adj, mut tr) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut diag = CMat::zeros(rep.dim(), rep.dim());
    let expect_tr = (1usize << (rep.nu - n)) as f64;
    for a in 0..m {
        diag += &e[a][a];
        for b in 0..m {
            adj = adj.max(max_abs(&(e[a][b].adjoint() - &e[b][a])));
            let t = e[a][b].trace() - if a == b { C64::new(expect_tr, 0.0) } else { zero() };
            tr = tr.max(t.norm());
            for c in 0..m {
                for d in 0..m {
                    let lhs = &e[a][b] * &e[c][d];
                    let r = if b == c { &lhs - &e[a][d] } else { lhs };
                    mult = mult.max(max_abs(&r));
                }
            }
        }
    }
    res.push(("product e_ab e_cd = delta_bc e_ad".into(), mult));
    res.push(("adjoint e_ab^* = e_ba".into(), adj));
    res.push(("sum_a e_aa = 1".into(), max_abs(&(diag - &id))));
    res.push(("trace tr e_ab = 2^(nu - n) delta_ab".into(), tr));

    if let Some((name, v)) = res.iter().find(|r| r.1 > UNIT_TOL) {
        return Err(Error::AxiomViolation(format!("{name} (residual {v:e})")));
    }
    Ok(UnitReport {
        sites: n,
        residuals: res,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    /// `max_{a,b} |omega(e_ab) - delta_ab prod_i omega(e^{(i)}_{a_i a_i})|`.
    pub residual: f64,
    /// `[omega(e^{(i)}_11), omega(e^{(i)}_22)]` per site.
    pub site_diagonals: Vec<[f64; 2]>,
    /// `omega(e_aa)` for every multi-index.
    pub diagonals: Vec<f64>,
}

/// Compares `omega(e_ab)` with the product of single-site expectations,
/// `omega(A) = tr(R A)`.
pub fn factorization_check(
    rep: &FockRep,
    phase: &FermiFamilyPhase,
    rdm: &ReducedDensity,
) -> Result<FactorizationReport> {
    if rep.nu > MAX_UNIT_NU {
        return Err(Error::TooLarge {
            size: rep.nu,
            max: MAX_UNIT_NU,
        });
    }
    let su = site_units(rep, phase, rep.nu);
    let w = |a: &CMat| (&rdm.matrix * a).trace();
    let site_diagonals: Vec<[f64; 2]> = su.iter().map(|u| [w(&u[0][0]).re, w(&u[1][1]).re]).collect();
    let m = 1usize << rep.nu;
    let mut residual = 0.0_f64;
    let mut diagonals = Vec::with_capacity(m);
    for a in 0..m {
        let ai = multi_index(a, rep.nu);
        for b in 0..m {
            let v = w(&unit(&su, a, b));
            let expect = if a == b {
                ai.iter().enumerate().map(|(i, &x)| site_diagonals[i][x]).product()
            } else {
                0.0
            };
            if a == b {
                diagonals.push(v.re);
            }
            residual = residual.max((v - expect).norm());
        }
    }
    Ok(FactorizationReport {
        residual,
        site_diagonals,
        diagonals,
    })
}

/// Outcome of comparing the oracle with the Toeplitz route at one window.
#[derive(Clone, Debug, Serialize)]
pub struct Equivalence {
    pub nu: usize,
    pub lambdas_toeplitz: Vec<f64>,
    pub lambdas_oracle: Vec<f64>,
    pub lambda_deviation: f64,
    /// `max |spec(R) - product formula|` as sorted multisets.
    pub spectrum_deviation: f64,
    pub entropy_direct: f64,
    pub entropy_product: f64,
    pub entropy_lambda: f64,
    pub omega_hermiticity: f64,
    pub omega_transpose: f64,
}

impl Equivalence {
    pub fn entropy_spread(&self) -> f64 {
        let v = [self.entropy_direct, self.entropy_product, self.entropy_lambda];
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

fn max_sorted_diff(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Builds `R` on a `nu`-site window from Pfaffians and compares its spectrum
/// and entropy with the product formula fed by the Toeplitz `lambda`s.
pub fn grand_equivalence(model: &ChainModel, nu: usize) -> Result<Equivalence> {
    let rep = FockRep::new(nu)?;
    let data = CorrelationData::from_model(model, nu)?;
    let (omega_hermiticity, omega_transpose) = data.structure_residual();
    let rdm = reduced_density_matrix(&rep, &model.phase, &data)?;
    let lambdas_oracle = skew_canonical_lambdas(&data)?;
    let lambdas_toeplitz = window_spectrum(&b_coeffs(model, nu, None)?, nu)?.lambdas;
    let product = spectrum_product(&lambdas_toeplitz)?;
    Ok(Equivalence {
        nu,
        lambda_deviation: max_sorted_diff(lambdas_toeplitz.clone(), lambdas_oracle.clone()),
        spectrum_deviation: max_sorted_diff(rdm.spectrum.clone(), product.clone()),
        entropy_direct: rdm.entropy,
        entropy_product: shannon_sum(&product),
        entropy_lambda: entropy_from_lambdas(&lambdas_toeplitz)?.s,
        lambdas_toeplitz,
        lambdas_oracle,
        omega_hermiticity,
        omega_transpose,
    })
}
