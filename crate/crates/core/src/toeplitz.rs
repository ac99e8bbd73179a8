//! Block symbols, their Fourier coefficients, block Toeplitz finite sections
//! and paired spectra.
//!
//! Block `(n, m)` of the order-`N` section is the Fourier coefficient
//! `a(n - m) = int a(e^{ik}) e^{-ik(n-m)} dk / 2pi`.

use std::f64::consts::PI;
use std::sync::Arc;

use faer::complex_native::c64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::rlmover::{arcs, ChainModel, FermiFunction, FermiFamilyPhase, RlSymbol};
use crate::{Mat2, C64};

/// Smallest FFT length used for smooth symbols.
pub const MIN_FFT_SIZE: usize = 1 << 14;
/// Accepted change of any coefficient under one FFT doubling.
pub const FFT_DOUBLING_TOL: f64 = 1e-9;
/// Accepted change of any coefficient under one panel doubling.
pub const PANEL_DOUBLING_TOL: f64 = 1e-11;
/// Largest admissible pairing residual.
pub const PAIRING_TOL: f64 = 1e-6;

const MAX_PANEL_DOUBLINGS: usize = 6;
const ZERO2: Mat2 = [[C64::new(0.0, 0.0); 2]; 2];

pub type SymbolFn = Arc<dyn Fn(f64) -> Result<Mat2> + Send + Sync>;

/// A 2x2 matrix-valued function on the circle.
#[derive(Clone)]
pub struct BlockSymbol {
    eval: SymbolFn,
    /// Angles where the symbol may jump or kink. Empty means smooth.
    breakpoints: Vec<f64>,
    fft_size: Option<usize>,
}

impl std::fmt::Debug for BlockSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlockSymbol")
            .field("breakpoints", &self.breakpoints)
            .field("fft_size", &self.fft_size)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FourierMethod {
    Fft { size: usize },
    GaussLegendre { panels: usize },
}

/// Fourier coefficients `a(x)` for `|x| <= max_lag`.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub max_lag: usize,
    data: Vec<Mat2>,
    /// Largest change of a coefficient in the last refinement step.
    pub delta: f64,
    pub method: FourierMethod,
}

impl CoeffTable {
    pub fn get(&self, x: i64) -> Option<&Mat2> {
        let i = x + self.max_lag as i64;
        if i < 0 {
            return None;
        }
        self.data.get(i as usize)
    }

    pub fn at(&self, x: i64) -> Mat2 {
        *self.get(x).expect("lag outside the coefficient table")
    }
}

fn mat_add_scaled(acc: &mut Mat2, m: &Mat2, w: C64) {
    for p in 0..2 {
        for q in 0..2 {
            acc[p][q] += m[p][q] * w;
        }
    }
}

fn mat_max_diff(a: &[Mat2], b: &[Mat2]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| (0..4).map(move |i| (x[i / 2][i % 2] - y[i / 2][i % 2]).norm()))
        .fold(0.0, f64::max)
}

impl BlockSymbol {
    pub fn new(eval: SymbolFn, breakpoints: Vec<f64>) -> Self {
        BlockSymbol {
            eval,
            breakpoints,
            fft_size: None,
        }
    }

    pub fn from_fn(f: impl Fn(f64) -> Mat2 + Send + Sync + 'static) -> Self {
        BlockSymbol::new(Arc::new(move |k| Ok(f(k))), vec![])
    }

    pub fn constant(c: Mat2) -> Self {
        BlockSymbol::from_fn(move |_| c)
    }

    /// Forces a starting FFT length (rounded up to a power of two, at least
    /// [`MIN_FFT_SIZE`]).
    pub fn with_fft_size(mut self, n: usize) -> Self {
        self.fft_size = Some(n);
        self
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, k: f64) -> Result<Mat2> {
        (self.eval)(k)
    }

    /// Maps the values through `g`, keeping the breakpoints.
    pub fn map(&self, g: impl Fn(Mat2) -> Mat2 + Send + Sync + 'static) -> BlockSymbol {
        let f = self.eval.clone();
        BlockSymbol {
            eval: Arc::new(move |k| f(k).map(&g)),
            breakpoints: self.breakpoints.clone(),
            fft_size: self.fft_size,
        }
    }
}

/// The block symbol entries from `r` and the family phase.
pub fn a_tilde_from_r(r: &Mat2, phase: &FermiFamilyPhase) -> Mat2 {
    let i = C64::new(0.0, 1.0);
    let l = phase.l_factor();
    let s = if phase.gamma == 2 { 1.0 } else { -1.0 };
    let sum = r[0][0].re + r[1][1].re;
    let diff = r[0][0].re - r[1][1].re;
    let lr = l * r[0][1];
    [
        [
            0.5 * i * (1.0 - (sum + 2.0 * lr.re)),
            0.5 * s * (diff - 2.0 * i * lr.im),
        ],
        [
            -0.5 * s * (diff + 2.0 * i * lr.im),
            0.5 * i * (1.0 - (sum - 2.0 * lr.re)),
        ],
    ]
}

fn symbol_breakpoints(rl: &RlSymbol) -> Vec<f64> {
    let m = &rl.model;
    let smooth = matches!(m.fermi, FermiFunction::HalfConstant)
        || (m.temps.delta() == 0.0
            && m.fermi.thresholds().is_empty()
            && rl.bands.zero_set().is_empty());
    if smooth {
        vec![]
    } else {
        rl.breakpoints()
    }
}

/// The R/L mover symbol `r` as a block symbol.
pub fn build_r(model: &ChainModel) -> Result<BlockSymbol> {
    let rl = Arc::new(RlSymbol::new(model)?);
    let bp = symbol_breakpoints(&rl);
    Ok(BlockSymbol::new(Arc::new(move |k| rl.matrix(k)), bp))
}

/// The symbol whose section is the imaginary part of the Majorana
/// correlation matrix.
pub fn build_a_tilde(model: &ChainModel) -> Result<BlockSymbol> {
    let phase = model.phase;
    Ok(build_r(model)?.map(move |r| a_tilde_from_r(&r, &phase)))
}

/// `b = 2i a~`, Hermitian-valued with eigenvalues `2 r_0 - 1 +- 2|r|`.
pub fn build_b(model: &ChainModel) -> Result<BlockSymbol> {
    let two_i = C64::new(0.0, 2.0);
    Ok(build_a_tilde(model)?.map(move |a| a.map(|row| row.map(|z| two_i * z))))
}

/// Fourier coefficients `a(x)`, `|x| <= max_lag`.
///
/// Smooth symbols use an FFT on a half-step offset grid with a doubling
/// check; symbols with breakpoints (or a failed FFT check) are integrated
/// arc by arc with composite Gauss-Legendre, doubling the panel count until
/// coefficients settle.
pub fn fourier_coeffs(s: &BlockSymbol, max_lag: usize) -> Result<CoeffTable> {
    if s.breakpoints.is_empty() {
        match fft_coeffs(s, max_lag) {
            Ok(t) => return Ok(t),
            Err(Error::NoConvergence { .. }) | Err(Error::OnZeroSet { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    panel_coeffs(s, max_lag)
}

fn fft_once(s: &BlockSymbol, n: usize, max_lag: usize) -> Result<Vec<Mat2>> {
    let h = 2.0 * PI / n as f64;
    let vals: Vec<Mat2> = (0..n)
        .into_par_iter()
        .map(|j| s.eval(-PI + (j as f64 + 0.5) * h))
        .collect::<Result<_>>()?;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut out = vec![ZERO2; 2 * max_lag + 1];
    for p in 0..2 {
        for q in 0..2 {
            let mut buf: Vec<C64> = vals.iter().map(|m| m[p][q]).collect();
            fft.process(&mut buf);
            for (idx, x) in (-(max_lag as i64)..=max_lag as i64).enumerate() {
                let sign = if x.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let tw = C64::from_polar(sign / n as f64, -PI * x as f64 / n as f64);
                out[idx][p][q] = tw * buf[x.rem_euclid(n as i64) as usize];
            }
        }
    }
    Ok(out)
}

fn fft_coeffs(s: &BlockSymbol, max_lag: usize) -> Result<CoeffTable> {
    let mut n = s
        .fft_size
        .unwrap_or(0)
        .max(MIN_FFT_SIZE)
        .max(16 * max_lag)
        .next_power_of_two();
    let mut prev = fft_once(s, n, max_lag)?;
    let mut delta = f64::INFINITY;
    for _ in 0..2 {
        n *= 2;
        let next = fft_once(s, n, max_lag)?;
        delta = mat_max_diff(&prev, &next);
        prev = next;
        if delta <= FFT_DOUBLING_TOL {
            return Ok(CoeffTable {
                max_lag,
                data: prev,
                delta,
                method: FourierMethod::Fft { size: n },
            });
        }
    }
    Err(Error::NoConvergence { delta })
}

/// Quadrature nodes `(k, weight / 2pi)` for `panels_per_unit` panels per
/// radian (at least one per arc).
fn panel_nodes(arcs: &[(f64, f64)], panels_per_unit: f64) -> (Vec<(f64, f64)>, usize) {
    let rule = gauss_legendre();
    let mut nodes = Vec::new();
    let mut count = 0;
    for &(a, b) in arcs {
        let len = b - a;
        if len <= 0.0 {
            continue;
        }
        let p = ((len * panels_per_unit).ceil() as usize).max(1);
        count += p;
        let w = len / p as f64;
        for j in 0..p {
            let lo = a + j as f64 * w;
            for &(x, wt) in rule {
                nodes.push((lo + 0.5 * w * (x + 1.0), 0.5 * w * wt / (2.0 * PI)));
            }
        }
    }
    (nodes, count)
}

fn quadrature_once(s: &BlockSymbol, nodes: &[(f64, f64)], max_lag: usize) -> Result<Vec<Mat2>> {
    let lags = 2 * max_lag + 1;
    let partial: Vec<Vec<Mat2>> = nodes
        .par_chunks(256)
        .map(|chunk| {
            let mut acc = vec![ZERO2; lags];
            for &(k, w) in chunk {
                let v = s.eval(k)?;
                let step = C64::from_polar(1.0, -k);
                let mut ph = C64::from_polar(w, k * max_lag as f64);
                for slot in acc.iter_mut() {
                    mat_add_scaled(slot, &v, ph);
                    ph *= step;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut out = vec![ZERO2; lags];
    for part in partial {
        for (o, p) in out.iter_mut().zip(&part) {
            mat_add_scaled(o, p, C64::new(1.0, 0.0));
        }
    }
    Ok(out)
}

fn panel_coeffs(s: &BlockSymbol, max_lag: usize) -> Result<CoeffTable> {
    let arcs = arcs(&s.breakpoints);
    let mut density = max_lag.max(1) as f64 / 8.0;
    let (nodes, _) = panel_nodes(&arcs, density);
    let mut prev = quadrature_once(s, &nodes, max_lag)?;
    let mut delta = f64::INFINITY;
    for _ in 0..MAX_PANEL_DOUBLINGS {
        density *= 2.0;
        let (nodes, panels) = panel_nodes(&arcs, density);
        let next = quadrature_once(s, &nodes, max_lag)?;
        delta = mat_max_diff(&prev, &next);
        prev = next;
        if delta <= PANEL_DOUBLING_TOL {
            return Ok(CoeffTable {
                max_lag,
                data: prev,
                delta,
                method: FourierMethod::GaussLegendre { panels },
            });
        }
    }
    Err(Error::NoConvergence { delta })
}

/// Dense `2N x 2N` block Toeplitz matrix.
#[derive(Clone, Debug)]
pub struct ToeplitzSection {
    pub n_blocks: usize,
    matrix: faer::Mat<c64>,
}

impl ToeplitzSection {
    pub fn dim(&self) -> usize {
        2 * self.n_blocks
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let z = self.matrix.read(i, j);
        C64::new(z.re, z.im)
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        assert!(dim.is_multiple_of(2), "section dimension must be even");
        ToeplitzSection {
            n_blocks: dim / 2,
            matrix: faer::Mat::from_fn(dim, dim, |i, j| {
                let z = f(i, j);
                c64::new(z.re, z.im)
            }),
        }
    }

    /// `max |t_ij - conj(t_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0_f64;
        for i in 0..n {
            for j in 0..=i {
                m = m.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).norm())
            .fold(0.0, f64::max)
    }
}

/// Section of order `n` from a coefficient table.
pub fn build_section(coeffs: &CoeffTable, n: usize) -> Result<ToeplitzSection> {
    if n == 0 {
        return Err(Error::OutOfRange { value: 0.0 });
    }
    if n - 1 > coeffs.max_lag {
        return Err(Error::MissingLags {
            needed: n,
            have: coeffs.max_lag,
        });
    }
    Ok(ToeplitzSection::from_fn(2 * n, |i, j| {
        let x = (i / 2) as i64 - (j / 2) as i64;
        coeffs.at(x)[i % 2][j % 2]
    }))
}

/// Paired spectrum `{+-lambda_i}` of a Hermitian section.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub nu: usize,
    /// `lambda_i >= 0`, largest first, clamped to `[0, 1]`.
    pub lambdas: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Ascending eigenvalues.
    pub raw: Vec<f64>,
}

/// Eigenvalues of the Hermitian part of `t`, paired largest with most
/// negative.
pub fn paired_spectrum(t: &ToeplitzSection) -> Result<SpectrumReport> {
    let n = t.dim();
    let herm = faer::Mat::<c64>::from_fn(n, n, |i, j| {
        let a = t.matrix.read(i, j);
        let b = t.matrix.read(j, i);
        c64::new(0.5 * (a.re + b.re), 0.5 * (a.im - b.im))
    });
    let mut raw = herm.selfadjoint_eigenvalues(faer::Side::Lower);
    raw.sort_by(f64::total_cmp);
    pair_eigenvalues(raw)
}

pub(crate) fn pair_eigenvalues(raw: Vec<f64>) -> Result<SpectrumReport> {
    let n = raw.len();
    let nu = n / 2;
    let mut lambdas = Vec::with_capacity(nu);
    let mut residuals = Vec::with_capacity(nu);
    for i in 0..nu {
        let (lo, hi) = (raw[i], raw[n - 1 - i]);
        let r = (lo + hi).abs();
        if r > PAIRING_TOL {
            return Err(Error::PairingFailure { residual: r });
        }
        let l = 0.5 * (hi - lo);
        if l > 1.0 + 1e-6 {
            return Err(Error::OutOfRange { value: l });
        }
        lambdas.push(l.clamp(0.0, 1.0));
        residuals.push(r);
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(SpectrumReport {
        nu,
        lambdas,
        residuals,
        max_residual,
        raw,
    })
}

/// Coefficients of `b` for windows up to `max_nu` sites.
pub fn b_coeffs(model: &ChainModel, max_nu: usize, fft_size: Option<usize>) -> Result<CoeffTable> {
    let mut b = build_b(model)?;
    if let Some(n) = fft_size {
        b = b.with_fft_size(n);
    }
    fourier_coeffs(&b, max_nu.saturating_sub(1))
}

/// Paired spectrum of the order-`nu` section of `b`.
pub fn window_spectrum(coeffs: &CoeffTable, nu: usize) -> Result<SpectrumReport> {
    paired_spectrum(&build_section(coeffs, nu)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rlmover::tests::xy_model;
    use crate::rlmover::FermiFunction;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_symbol_coefficients() {
        let m = [[c(1.0, 2.0), c(-0.5, 0.0)], [c(0.3, -0.1), c(0.0, 4.0)]];
        let t = fourier_coeffs(&BlockSymbol::constant(m), 5).unwrap();
        for x in -5..=5 {
            let a = t.at(x);
            for p in 0..2 {
                for q in 0..2 {
                    let e = if x == 0 { m[p][q] } else { c(0.0, 0.0) };
                    assert!((a[p][q] - e).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn plane_wave_coefficients() {
        let s = BlockSymbol::from_fn(|k| {
            let z = C64::from_polar(1.0, k);
            [[z, c(0.0, 0.0)], [c(0.0, 0.0), z]]
        });
        let t = fourier_coeffs(&s, 4).unwrap();
        for x in -4..=4 {
            let e = if x == 1 { 1.0 } else { 0.0 };
            assert!((t.at(x)[0][0] - e).norm() < 1e-12);
            assert!((t.at(x)[1][1] - e).norm() < 1e-12);
        }
        // The same symbol routed through the panel rule.
        let s2 = BlockSymbol::new(
            Arc::new(|k| {
                let z = C64::from_polar(1.0, k);
                Ok([[z, c(0.0, 0.0)], [c(0.0, 0.0), z]])
            }),
            vec![-1.0, 2.0],
        );
        let t2 = fourier_coeffs(&s2, 4).unwrap();
        assert!(matches!(t2.method, FourierMethod::GaussLegendre { .. }));
        for x in -4..=4 {
            let e = if x == 1 { 1.0 } else { 0.0 };
            assert!((t2.at(x)[0][0] - e).norm() < 1e-12);
        }
    }

    #[test]
    fn step_symbol_coefficients() {
        // Indicator of (0, pi): a(0) = 1/2, a(x) = (1 - (-1)^x) / (2 pi i x).
        let s = BlockSymbol::new(
            Arc::new(|k: f64| {
                let v = if k > 0.0 && k < PI { 1.0 } else { 0.0 };
                Ok([[c(v, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]])
            }),
            vec![0.0, PI],
        );
        let t = fourier_coeffs(&s, 50).unwrap();
        for x in -50i64..=50 {
            let e = if x == 0 {
                c(0.5, 0.0)
            } else if x % 2 == 0 {
                c(0.0, 0.0)
            } else {
                c(0.0, -1.0 / (PI * x as f64))
            };
            assert!((t.at(x)[0][0] - e).norm() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn half_constant_gives_zero_symbol() {
        let m = xy_model(1.0, 4.0, FermiFunction::HalfConstant);
        let a = build_a_tilde(&m).unwrap();
        for k in [-2.0, 0.5, 3.0] {
            assert_eq!(a.eval(k).unwrap(), ZERO2);
        }
        let t = b_coeffs(&m, 8, None).unwrap();
        let sec = build_section(&t, 8).unwrap();
        assert_eq!(sec.max_abs(), 0.0);
        let rep = paired_spectrum(&sec).unwrap();
        assert!(rep.lambdas.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn standard_phase_entry() {
        let r = [[c(0.7, 0.0), c(0.1, -0.2)], [c(0.1, 0.2), c(0.4, 0.0)]];
        let a = a_tilde_from_r(&r, &FermiFamilyPhase::default());
        let e = 0.5 * (1.0 - 0.7 - 0.4 - 2.0 * 0.1);
        assert!((a[0][0] - c(0.0, e)).norm() < 1e-15);
        // lambda = i flips the sign of the r_12 terms.
        let p = FermiFamilyPhase::new(c(0.0, 1.0), 2).unwrap();
        let a2 = a_tilde_from_r(&r, &p);
        let e2 = 0.5 * (1.0 - 0.7 - 0.4 + 2.0 * 0.1);
        assert!((a2[0][0] - c(0.0, e2)).norm() < 1e-15);
        assert!((a2[0][1] - 0.5 * (c(0.3, 0.0) - 2.0 * c(0.0, 1.0) * 0.2)).norm() < 1e-15);
    }

    #[test]
    fn b_eigenvalues_match_rl_symbol() {
        let m = xy_model(2.0, 5.0, FermiFunction::FermiDirac);
        let rl = RlSymbol::new(&m).unwrap();
        let b = build_b(&m).unwrap();
        for k in [-2.9, -1.0, 0.3, 1.7] {
            let (r0, r) = rl.pauli(k).unwrap();
            let mag = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            let v = b.eval(k).unwrap();
            let tr = (v[0][0] + v[1][1]).re;
            let det = (v[0][0] * v[1][1] - v[0][1] * v[1][0]).re;
            let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
            assert!((0.5 * tr + disc - (2.0 * r0 - 1.0 + 2.0 * mag)).abs() < 1e-12);
            assert!((0.5 * tr - disc - (2.0 * r0 - 1.0 - 2.0 * mag)).abs() < 1e-12);
        }
    }

    #[test]
    fn section_layout() {
        let z = BlockSymbol::from_fn(|k| {
            let z = C64::from_polar(1.0, k);
            [[z, c(0.0, 0.0)], [c(0.0, 0.0), z]]
        });
        let t = fourier_coeffs(&z, 3).unwrap();
        let one = build_section(&t, 1).unwrap();
        assert_eq!(one.dim(), 2);
        let two = build_section(&t, 2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = if i >= 2 && j == i - 2 { 1.0 } else { 0.0 };
                assert!((two.get(i, j) - e).norm() < 1e-12);
            }
        }
        assert!(matches!(build_section(&t, 5), Err(Error::MissingLags { .. })));
    }

    #[test]
    fn xy_section_index_audit_and_nesting() {
        let m = xy_model(2.0, 5.0, FermiFunction::FermiDirac);
        let t = b_coeffs(&m, 4, None).unwrap();
        let s3 = build_section(&t, 3).unwrap();
        assert_eq!(s3.get(0, 2), t.at(-1)[0][0]);
        let s4 = build_section(&t, 4).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(s3.get(i, j), s4.get(i, j));
            }
        }
    }

    #[test]
    fn xy_ness_coefficients_hermitian() {
        let m = xy_model(2.0, 5.0, FermiFunction::FermiDirac);
        let t = b_coeffs(&m, 64, None).unwrap();
        for x in 0..64i64 {
            let (a, b) = (t.at(x), t.at(-x));
            for p in 0..2 {
                for q in 0..2 {
                    assert!((a[p][q] - b[q][p].conj()).norm() < 1e-10);
                }
            }
        }
        assert!(t.at(40)[0][1].norm() < t.at(1)[0][1].norm());
        let sec = build_section(&t, 64).unwrap();
        assert!(sec.hermiticity_defect() < 1e-10);
        let rep = paired_spectrum(&sec).unwrap();
        assert!(rep.max_residual < 1e-9, "{}", rep.max_residual);
    }

    #[test]
    fn spectral_inclusion() {
        let m = xy_model(2.0, 5.0, FermiFunction::FermiDirac);
        let b = build_b(&m).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for j in 0..1024 {
            let k = -PI + (j as f64 + 0.5) * 2.0 * PI / 1024.0;
            let v = b.eval(k).unwrap();
            let tr = (v[0][0] + v[1][1]).re;
            let det = (v[0][0] * v[1][1] - v[0][1] * v[1][0]).re;
            let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
            lo = lo.min(0.5 * tr - disc);
            hi = hi.max(0.5 * tr + disc);
        }
        let t = fourier_coeffs(&b, 31).unwrap();
        let rep = paired_spectrum(&build_section(&t, 32).unwrap()).unwrap();
        for &e in &rep.raw {
            assert!(e >= lo - 1e-8 && e <= hi + 1e-8);
        }
    }

    #[test]
    fn pairing_examples() {
        let z = ToeplitzSection::from_fn(4, |_, _| c(0.0, 0.0));
        assert_eq!(paired_spectrum(&z).unwrap().lambdas, vec![0.0, 0.0]);
        let d = [0.7, -0.7, 0.2, -0.2];
        let t = ToeplitzSection::from_fn(4, |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) });
        let rep = paired_spectrum(&t).unwrap();
        assert!((rep.lambdas[0] - 0.7).abs() < 1e-14 && (rep.lambdas[1] - 0.2).abs() < 1e-14);
        let bad = ToeplitzSection::from_fn(2, |i, j| if i == j { c(0.5, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(paired_spectrum(&bad), Err(Error::PairingFailure { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn b_is_pointwise_hermitian(k in -PI..PI, bl in 0.3f64..3.0, extra in 0.0f64..4.0, th in 0.0f64..(2.0 * PI), g in 1u8..=2) {
            let mut m = xy_model(bl, bl + extra, FermiFunction::FermiDirac);
            m.phase = FermiFamilyPhase::new(C64::from_polar(1.0, th), g).unwrap();
            let v = build_b(&m).unwrap().eval(k).unwrap();
            for p in 0..2 {
                for q in 0..2 {
                    prop_assert!((v[p][q] - v[q][p].conj()).norm() < 1e-10);
                }
            }
        }
    }
}
