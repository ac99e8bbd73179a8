//! Chain model, spectral case, energy bands and the right/left mover
//! 2-point symbol.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{bisect_level, cluster_angles};
use crate::trigpoly::{canonical_angle, TrigPoly};
use crate::{Mat2, C64};

/// Coefficient tolerance for the exact case tests, after normalizing by the
/// largest coefficient.
pub const CASE_TOL: f64 = 1e-12;

/// `|x|` below this is treated as a measure-zero sign point.
pub const SIGN_EPS: f64 = 1e-13;

/// `|u|` below this counts as lying on the zero set `Z_|u|`.
pub const ZERO_SET_EPS: f64 = 1e-13;

pub(crate) fn sign(x: f64) -> f64 {
    if x.abs() < SIGN_EPS {
        0.0
    } else {
        x.signum()
    }
}

/// Hamiltonian coefficients `c_{alpha,n}` of range `mu`.
///
/// Rows `alpha = 0, 1, 2` are sine-type (`n = 1..mu`), row 3 is cosine-type
/// (`n = 0..mu`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HamiltonianCoeffs {
    mu: usize,
    rows: [Vec<f64>; 4],
}

impl HamiltonianCoeffs {
    pub fn zeros(mu: usize) -> Result<Self> {
        if mu == 0 {
            return Err(Error::InvalidModel("range mu must be at least 1".into()));
        }
        Ok(HamiltonianCoeffs {
            mu,
            rows: std::array::from_fn(|_| vec![0.0; mu + 1]),
        })
    }

    /// Builds from `(alpha, n, value)` triples and checks the result.
    pub fn from_entries(mu: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut h = HamiltonianCoeffs::zeros(mu)?;
        for &(alpha, n, v) in entries {
            h.set(alpha, n, v)?;
        }
        h.validate()?;
        Ok(h)
    }

    pub fn set(&mut self, alpha: usize, n: usize, value: f64) -> Result<()> {
        if alpha > 3 {
            return Err(Error::InvalidModel(format!("alpha = {alpha} not in 0..=3")));
        }
        let lo = if alpha == 3 { 0 } else { 1 };
        if n < lo || n > self.mu {
            return Err(Error::InvalidModel(format!(
                "c_({alpha},{n}): n must lie in {lo}..={}",
                self.mu
            )));
        }
        if !value.is_finite() {
            return Err(Error::InvalidModel(format!("c_({alpha},{n}) is not finite")));
        }
        self.rows[alpha][n] = value;
        Ok(())
    }

    pub fn get(&self, alpha: usize, n: usize) -> f64 {
        self.rows.get(alpha).and_then(|r| r.get(n)).copied().unwrap_or(0.0)
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_coeff() == 0.0 {
            return Err(Error::InvalidModel(
                "all coefficients vanish (H is a multiple of the identity)".into(),
            ));
        }
        Ok(())
    }

    pub fn max_coeff(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Nonzero `(alpha, n, value)` triples in lexicographic order.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (alpha, row) in self.rows.iter().enumerate() {
            for (n, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    out.push((alpha, n, v));
                }
            }
        }
        out
    }

    fn scaled(&self, s: f64) -> HamiltonianCoeffs {
        HamiltonianCoeffs {
            mu: self.mu,
            rows: self.rows.clone().map(|r| r.into_iter().map(|c| c * s).collect()),
        }
    }

    /// Pauli coefficient function `u_alpha`.
    pub fn u_alpha(&self, alpha: usize) -> TrigPoly {
        let row = &self.rows[alpha];
        if alpha == 3 {
            let mut cos = vec![row[0]];
            cos.extend(row[1..].iter().map(|c| 2.0 * c));
            TrigPoly::new(cos, vec![])
        } else {
            TrigPoly::new(vec![0.0], row[1..].iter().map(|c| -2.0 * c).collect())
        }
    }

    pub fn u0(&self) -> TrigPoly {
        self.u_alpha(0)
    }

    pub fn u(&self) -> [TrigPoly; 3] {
        [self.u_alpha(1), self.u_alpha(2), self.u_alpha(3)]
    }
}

/// Reservoir inverse temperatures, `0 < beta_L <= beta_R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Temperatures {
    beta_l: f64,
    beta_r: f64,
}

impl Temperatures {
    pub fn new(beta_l: f64, beta_r: f64) -> Result<Self> {
        if !(beta_l.is_finite() && beta_r.is_finite() && beta_l > 0.0 && beta_l <= beta_r) {
            return Err(Error::InvalidModel(format!(
                "need 0 < beta_L <= beta_R, got beta_L = {beta_l}, beta_R = {beta_r}"
            )));
        }
        Ok(Temperatures { beta_l, beta_r })
    }

    pub fn equilibrium(beta: f64) -> Result<Self> {
        Temperatures::new(beta, beta)
    }

    pub fn beta_l(&self) -> f64 {
        self.beta_l
    }

    pub fn beta_r(&self) -> f64 {
        self.beta_r
    }

    pub fn beta(&self) -> f64 {
        0.5 * (self.beta_r + self.beta_l)
    }

    pub fn delta(&self) -> f64 {
        0.5 * (self.beta_r - self.beta_l)
    }

    /// `beta + delta sign(v)`.
    pub fn effective(&self, velocity: f64) -> f64 {
        self.beta() + self.delta() * sign(velocity)
    }
}

pub type OddFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Fermi function `rho` with `rho >= 0` and even part `1/2`.
#[derive(Clone)]
pub enum FermiFunction {
    /// `1 / (1 + e^{-x})`.
    FermiDirac,
    /// Indicator of `(0, inf)`.
    GroundStep,
    /// `rho = 1/2`.
    HalfConstant,
    /// Indicator of a finite union of open intervals; endpoints may be infinite.
    StepSet { intervals: Vec<(f64, f64)> },
    /// `rho = (1 + varrho) / 2` for an odd `varrho` with `|varrho| <= 1`.
    /// `jumps` lists the discontinuities of `varrho`.
    CustomOdd { varrho: OddFn, jumps: Vec<f64> },
}

impl fmt::Debug for FermiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FermiFunction::StepSet { intervals } => {
                f.debug_struct("StepSet").field("intervals", intervals).finish()
            }
            FermiFunction::CustomOdd { jumps, .. } => {
                f.debug_struct("CustomOdd").field("jumps", jumps).finish()
            }
            other => f.write_str(other.name()),
        }
    }
}

const FERMI_SAMPLES: usize = 1024;

impl FermiFunction {
    /// Sorted, validated step set.
    pub fn step_set(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if a.is_nan() || b.is_nan() || a >= b {
                return Err(Error::InvalidFermi(format!("bad interval ({a}, {b})")));
            }
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let f = FermiFunction::StepSet { intervals };
        f.validate()?;
        Ok(f)
    }

    pub fn custom_odd(varrho: OddFn, jumps: Vec<f64>) -> Result<Self> {
        let f = FermiFunction::CustomOdd { varrho, jumps };
        f.validate()?;
        Ok(f)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FermiFunction::FermiDirac => "FermiDirac",
            FermiFunction::GroundStep => "GroundStep",
            FermiFunction::HalfConstant => "HalfConstant",
            FermiFunction::StepSet { .. } => "StepSet",
            FermiFunction::CustomOdd { .. } => "CustomOdd",
        }
    }

    pub fn rho(&self, x: f64) -> f64 {
        match self {
            FermiFunction::FermiDirac => 1.0 / (1.0 + (-x).exp()),
            FermiFunction::GroundStep => {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    0.0
                } else {
                    0.5
                }
            }
            FermiFunction::HalfConstant => 0.5,
            FermiFunction::StepSet { intervals } => {
                if intervals.iter().any(|&(a, b)| a < x && x < b) {
                    1.0
                } else {
                    0.0
                }
            }
            FermiFunction::CustomOdd { varrho, .. } => 0.5 * (1.0 + varrho(x)),
        }
    }

    /// `2 Od(rho)(x) = rho(x) - rho(-x)`.
    pub fn odd2(&self, x: f64) -> f64 {
        match self {
            FermiFunction::FermiDirac => (0.5 * x).tanh(),
            FermiFunction::GroundStep => sign(x),
            FermiFunction::HalfConstant => 0.0,
            FermiFunction::StepSet { .. } => self.rho(x) - self.rho(-x),
            FermiFunction::CustomOdd { varrho, .. } => varrho(x),
        }
    }

    /// Discontinuities of `rho`, closed under `x -> -x`, sorted.
    pub fn thresholds(&self) -> Vec<f64> {
        let raw: Vec<f64> = match self {
            FermiFunction::FermiDirac | FermiFunction::HalfConstant => vec![],
            FermiFunction::GroundStep => vec![0.0],
            FermiFunction::StepSet { intervals } => intervals
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .filter(|x| x.is_finite())
                .collect(),
            FermiFunction::CustomOdd { jumps, .. } => jumps.clone(),
        };
        let mut out: Vec<f64> = raw.iter().flat_map(|&x| [x, -x]).collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        out
    }

    fn sample_grid() -> Vec<f64> {
        // Geometric in |x| from 1e-3 to 1e3, both signs.
        let half = FERMI_SAMPLES / 2;
        (0..half)
            .map(|j| 10f64.powf(-3.0 + 6.0 * (j as f64 + 0.5) / half as f64))
            .flat_map(|x| [x, -x])
            .collect()
    }

    /// Checks `rho >= 0`, `rho(x) + rho(-x) = 1` and `|2 Od(rho)| <= 1` on a
    /// symmetric sample grid, skipping points next to a discontinuity.
    pub fn validate(&self) -> Result<()> {
        let th = self.thresholds();
        for x in FermiFunction::sample_grid() {
            if th.iter().any(|t| (x - t).abs() < 1e-9) {
                continue;
            }
            let (p, m) = (self.rho(x), self.rho(-x));
            if !(p.is_finite() && p >= -1e-12) {
                return Err(Error::InvalidFermi(format!("rho({x}) = {p} is negative")));
            }
            if (p + m - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidFermi(format!(
                    "even part at x = {x} is {} instead of 1/2",
                    0.5 * (p + m)
                )));
            }
            if self.odd2(x).abs() > 1.0 + 1e-12 {
                return Err(Error::InvalidFermi(format!("|2 Od(rho)({x})| exceeds 1")));
            }
        }
        Ok(())
    }
}

/// Phase of the Fermi family `Q_i = lambda J^gamma (delta_{x_i} + 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FermiFamilyPhase {
    pub lambda: C64,
    pub gamma: u8,
}

impl Default for FermiFamilyPhase {
    fn default() -> Self {
        FermiFamilyPhase {
            lambda: C64::new(1.0, 0.0),
            gamma: 2,
        }
    }
}

impl FermiFamilyPhase {
    pub fn new(lambda: C64, gamma: u8) -> Result<Self> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModel(format!("|lambda| = {} != 1", lambda.norm())));
        }
        if gamma != 1 && gamma != 2 {
            return Err(Error::InvalidModel(format!("gamma = {gamma} not in {{1, 2}}")));
        }
        Ok(FermiFamilyPhase { lambda, gamma })
    }

    /// `lambda^{(-1)^gamma}`.
    pub fn lambda_gamma(&self) -> C64 {
        if self.gamma == 2 {
            self.lambda
        } else {
            self.lambda.conj()
        }
    }

    /// `lambda_{gamma+1}^2`, the factor multiplying `r_12` in the block symbol.
    pub fn l_factor(&self) -> C64 {
        let lg1 = if self.gamma == 2 {
            self.lambda.conj()
        } else {
            self.lambda
        };
        lg1 * lg1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
}

impl CaseTag {
    pub fn is_supported(self) -> bool {
        !matches!(self, CaseTag::Case1 | CaseTag::Case6)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn dot(a: &[TrigPoly; 3], b: &[TrigPoly; 3]) -> TrigPoly {
    let mut acc = TrigPoly::zero();
    for (x, y) in a.iter().zip(b) {
        acc = &acc + &(x * y);
    }
    acc
}

/// Spectral case from exact coefficient tests.
pub fn classify(h: &HamiltonianCoeffs) -> CaseTag {
    let m = h.max_coeff();
    let h = if m > 0.0 { h.scaled(1.0 / m) } else { h.clone() };
    let u0 = h.u0();
    let u = h.u();
    let du = u.clone().map(|p| p.derivative());
    let u0_zero = u0.is_zero(CASE_TOL);
    let u_zero = u.iter().all(|p| p.is_zero(CASE_TOL));
    let uu_zero = dot(&u, &du).is_zero(CASE_TOL);
    if u0_zero {
        if uu_zero {
            CaseTag::Case1
        } else {
            CaseTag::Case2
        }
    } else if u_zero {
        CaseTag::Case3
    } else if (&(&u0 * &u0) - &dot(&u, &u)).is_zero(CASE_TOL) {
        CaseTag::Case6
    } else if uu_zero {
        CaseTag::Case4
    } else {
        CaseTag::Case5
    }
}

/// Precomputed Pauli polynomials and their derived quantities.
#[derive(Clone, Debug)]
pub struct Bands {
    pub case: CaseTag,
    pub u0: TrigPoly,
    pub u: [TrigPoly; 3],
    pub du0: TrigPoly,
    pub du: [TrigPoly; 3],
    /// `u^2 = sum_alpha u_alpha^2`.
    pub u_sq: TrigPoly,
    /// `u u' = sum_alpha u_alpha u_alpha'`.
    pub u_du: TrigPoly,
    /// `u_0'^2 u^2 - (u u')^2`.
    pub q: TrigPoly,
}

impl Bands {
    pub fn new(h: &HamiltonianCoeffs) -> Self {
        let u0 = h.u0();
        let u = h.u();
        let du0 = u0.derivative();
        let du = u.clone().map(|p| p.derivative());
        let u_sq = dot(&u, &u);
        let u_du = dot(&u, &du);
        let q = &(&(&du0 * &du0) * &u_sq) - &(&u_du * &u_du);
        Bands {
            case: classify(h),
            u0,
            u,
            du0,
            du,
            u_sq,
            u_du,
            q,
        }
    }

    pub fn u_abs(&self, k: f64) -> f64 {
        self.u_sq.eval(k).max(0.0).sqrt()
    }

    /// `(E_+, E_-)`.
    pub fn dispersion(&self, k: f64) -> (f64, f64) {
        let u0 = self.u0.eval(k);
        if self.case == CaseTag::Case3 {
            return (u0, u0);
        }
        let a = self.u_abs(k);
        (u0 + a, u0 - a)
    }

    /// `(E_+', E_-')`.
    pub fn derivative(&self, k: f64) -> Result<(f64, f64)> {
        let du0 = self.du0.eval(k);
        if self.case == CaseTag::Case3 {
            return Ok((du0, du0));
        }
        let a = self.u_abs(k);
        if a < ZERO_SET_EPS {
            return Err(Error::OnZeroSet { k });
        }
        let t = self.u_du.eval(k) / a;
        Ok((du0 + t, du0 - t))
    }

    /// `u / |u|` at `k`.
    pub fn u_tilde(&self, k: f64) -> Result<[f64; 3]> {
        let a = self.u_abs(k);
        if a < ZERO_SET_EPS {
            return Err(Error::OnZeroSet { k });
        }
        Ok([0, 1, 2].map(|i| self.u[i].eval(k) / a))
    }

    /// Zero set `Z_|u|` on `(-pi, pi]`.
    pub fn zero_set(&self) -> Vec<f64> {
        if self.case == CaseTag::Case3 {
            return vec![];
        }
        self.u_sq
            .roots()
            .map(|r| r.into_iter().map(|x| x.angle).collect())
            .unwrap_or_default()
    }

    /// Angles where the sign of `E_+'` or `E_-'` can change: roots of `Q`
    /// and `u^2`, or of `u_0'` in Case 3.
    pub fn partition_angles(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        if self.case == CaseTag::Case3 {
            if let Ok(r) = self.du0.roots() {
                out.extend(r.into_iter().map(|x| x.angle));
            }
        } else {
            if let Ok(r) = self.q.roots() {
                out.extend(r.into_iter().map(|x| x.angle));
            }
            out.extend(self.zero_set());
        }
        cluster_angles(out)
    }
}

/// Complete problem statement.
#[derive(Clone, Debug)]
pub struct ChainModel {
    pub hamiltonian: HamiltonianCoeffs,
    pub temps: Temperatures,
    pub fermi: FermiFunction,
    pub phase: FermiFamilyPhase,
}

impl ChainModel {
    pub fn new(
        hamiltonian: HamiltonianCoeffs,
        temps: Temperatures,
        fermi: FermiFunction,
        phase: FermiFamilyPhase,
    ) -> Result<Self> {
        hamiltonian.validate()?;
        fermi.validate()?;
        Ok(ChainModel {
            hamiltonian,
            temps,
            fermi,
            phase,
        })
    }

    pub fn case(&self) -> CaseTag {
        classify(&self.hamiltonian)
    }

    pub fn with_fermi(&self, fermi: FermiFunction) -> Result<Self> {
        ChainModel::new(self.hamiltonian.clone(), self.temps, fermi, self.phase)
    }
}

/// The R/L mover symbol of a model in Cases 2-5.
#[derive(Clone, Debug)]
pub struct RlSymbol {
    pub model: ChainModel,
    pub bands: Bands,
}

impl RlSymbol {
    pub fn new(model: &ChainModel) -> Result<Self> {
        let bands = Bands::new(&model.hamiltonian);
        if !bands.case.is_supported() {
            return Err(Error::WrongCase(bands.case));
        }
        Ok(RlSymbol {
            model: model.clone(),
            bands,
        })
    }

    /// `rho((beta + delta sign E') E)` for one band.
    fn occupation(&self, e: f64, de: f64) -> f64 {
        self.model.fermi.rho(self.model.temps.effective(de) * e)
    }

    /// `(r_0, r)`.
    pub fn pauli(&self, k: f64) -> Result<(f64, [f64; 3])> {
        let b = &self.bands;
        let (ep, em) = b.dispersion(k);
        let (dp, dm) = b.derivative(k)?;
        if b.case == CaseTag::Case3 {
            return Ok((self.occupation(ep, dp), [0.0; 3]));
        }
        let (rp, rm) = (self.occupation(ep, dp), self.occupation(em, dm));
        let ut = b.u_tilde(k)?;
        let h = 0.5 * (rp - rm);
        Ok((0.5 * (rp + rm), ut.map(|x| h * x)))
    }

    /// `r(e^{ik})` in the standard matrix basis.
    pub fn matrix(&self, k: f64) -> Result<Mat2> {
        let (r0, r) = self.pauli(k)?;
        Ok(pauli_to_matrix(r0, r))
    }

    /// Angles where the symbol may be non-smooth: sign boundaries of the
    /// group velocities plus the points where an effective argument
    /// `(beta + delta sign E') E` of either band hits a Fermi threshold.
    pub fn breakpoints(&self) -> Vec<f64> {
        let base = self.bands.partition_angles();
        let th = self.model.fermi.thresholds();
        let mut out = base.clone();
        if !th.is_empty() {
            for (a, b) in arcs(&base) {
                for band in [0, 1] {
                    let mid = 0.5 * (a + b);
                    let Ok(d) = self.bands.derivative(mid) else { continue };
                    let beta = self.model.temps.effective(if band == 0 { d.0 } else { d.1 });
                    let f = |k: f64| {
                        let e = self.bands.dispersion(k);
                        beta * if band == 0 { e.0 } else { e.1 }
                    };
                    for &t in &th {
                        if let Some(k) = bisect_level(f, a, b, t) {
                            out.push(canonical_angle(k));
                        }
                    }
                }
            }
        }
        cluster_angles(out)
    }
}

/// Consecutive arcs `(a, b)` with `a < b` between sorted angles on the
/// circle; the last arc wraps past `pi`. No angles gives the full circle.
pub fn arcs(angles: &[f64]) -> Vec<(f64, f64)> {
    use std::f64::consts::PI;
    match angles.len() {
        0 => vec![(-PI, PI)],
        n => (0..n)
            .map(|i| {
                let a = angles[i];
                let b = if i + 1 < n {
                    angles[i + 1]
                } else {
                    angles[0] + 2.0 * PI
                };
                (a, b)
            })
            .collect(),
    }
}

pub fn pauli_to_matrix(r0: f64, r: [f64; 3]) -> Mat2 {
    let c = |re: f64, im: f64| C64::new(re, im);
    [
        [c(r0 + r[2], 0.0), c(r[0], -r[1])],
        [c(r[0], r[1]), c(r0 - r[2], 0.0)],
    ]
}

/// `(E_+, E_-)` at `k`.
pub fn dispersion(h: &HamiltonianCoeffs, k: f64) -> (f64, f64) {
    Bands::new(h).dispersion(k)
}

/// `(E_+', E_-')` at `k`.
pub fn dispersion_derivative(h: &HamiltonianCoeffs, k: f64) -> Result<(f64, f64)> {
    Bands::new(h).derivative(k)
}

pub fn rl_symbol_pauli(model: &ChainModel, k: f64) -> Result<(f64, [f64; 3])> {
    RlSymbol::new(model)?.pauli(k)
}

pub fn rl_symbol_matrix(model: &ChainModel, k: f64) -> Result<Mat2> {
    RlSymbol::new(model)?.matrix(k)
}
