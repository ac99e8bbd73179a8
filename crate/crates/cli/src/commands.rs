use std::f64::consts::LN_2;

use entroscale_core::density::{partition_momentum, s_infinity, MomentumPartition};
use entroscale_core::entropy::entropy_from_lambdas;
use entroscale_core::fock_oracle::{
    factorization_check, grand_equivalence, majorana_residual, matrix_units, pfaffian,
    pfaffian_by_pairings, reduced_density_matrix, CMat, CorrelationData, FockRep,
};
use entroscale_core::rlmover::Bands;
use entroscale_core::toeplitz::{b_coeffs, window_spectrum};
use entroscale_core::{CaseTag, ChainModel, DensityReport, Error, FermiFunction, TrigPoly, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::output::SweepRow;

#[derive(Serialize)]
pub struct Coefficient {
    pub alpha: usize,
    pub n: usize,
    pub value: f64,
}

#[derive(Serialize)]
pub struct PolyEcho {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl From<&TrigPoly> for PolyEcho {
    fn from(p: &TrigPoly) -> Self {
        PolyEcho {
            cos: p.cos_coeffs().to_vec(),
            sin: p.sin_coeffs().to_vec(),
        }
    }
}

#[derive(Serialize)]
pub struct PartitionSummary {
    pub pi_l: Vec<(f64, f64)>,
    pub pi_r: Vec<(f64, f64)>,
    pub pi_0: Vec<f64>,
    pub length_l: f64,
    pub length_r: f64,
}

impl From<&MomentumPartition> for PartitionSummary {
    fn from(p: &MomentumPartition) -> Self {
        PartitionSummary {
            pi_l: p.pi_l.clone(),
            pi_r: p.pi_r.clone(),
            pi_0: p.pi_0.clone(),
            length_l: p.length_l(),
            length_r: p.length_r(),
        }
    }
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub case: CaseTag,
    pub supported: bool,
    pub mu: usize,
    pub coefficients: Vec<Coefficient>,
    /// `u_0, u_1, u_2, u_3`.
    pub u: Vec<PolyEcho>,
    pub zero_set: Vec<f64>,
    pub partition: Option<PartitionSummary>,
    pub notice: Option<String>,
}

pub fn classify(model: &ChainModel) -> Result<ClassifyReport, CliError> {
    let h = &model.hamiltonian;
    let bands = Bands::new(h);
    let case = bands.case;
    let supported = case.is_supported();
    let partition = if supported {
        Some(PartitionSummary::from(&partition_momentum(model)?))
    } else {
        None
    };
    let zero_set = bands.zero_set();
    Ok(ClassifyReport {
        case,
        supported,
        mu: h.mu(),
        coefficients: h
            .entries()
            .into_iter()
            .map(|(alpha, n, value)| Coefficient { alpha, n, value })
            .collect(),
        u: (0..4).map(|a| PolyEcho::from(&h.u_alpha(a))).collect(),
        zero_set,
        partition,
        notice: (!supported).then(|| CliError::WrongCase(case).to_string()),
    })
}

#[derive(Serialize)]
pub struct DensityOutput {
    pub case: CaseTag,
    pub fermi: &'static str,
    #[serde(rename = "beta_L")]
    pub beta_l: f64,
    #[serde(rename = "beta_R")]
    pub beta_r: f64,
    /// `"vanishing"` or `"non-vanishing"`.
    pub verdict: &'static str,
    #[serde(flatten)]
    pub report: DensityReport,
}

pub fn density(model: &ChainModel) -> Result<DensityOutput, CliError> {
    let report = s_infinity(model)?;
    Ok(DensityOutput {
        case: model.case(),
        fermi: model.fermi.name(),
        beta_l: model.temps.beta_l(),
        beta_r: model.temps.beta_r(),
        verdict: if report.vanishing.vanishing {
            "vanishing"
        } else {
            "non-vanishing"
        },
        report,
    })
}

pub fn density_csv(d: &DensityOutput) -> String {
    use crate::output::float;
    format!(
        "s_infinity,s_left,s_right,length_L,length_R,vanishing\n{},{},{},{},{},{}\n",
        float(d.report.s_infinity),
        float(d.report.s_left),
        float(d.report.s_right),
        float(d.report.partition.length_l()),
        float(d.report.partition.length_r()),
        d.report.vanishing.vanishing
    )
}

/// One row per window size; rows are computed in parallel and returned in
/// the order of `nus`.
pub fn sweep(model: &ChainModel, nus: &[usize], fft_size: Option<usize>) -> Result<Vec<SweepRow>, CliError> {
    if nus.is_empty() {
        return Err(CliError::Config("sweep needs at least one nu".into()));
    }
    if let Some(&bad) = nus.iter().find(|&&n| n < 2) {
        return Err(CliError::Config(format!("nu = {bad}: every nu must be at least 2")));
    }
    let s_inf = s_infinity(model)?.s_infinity;
    let max_nu = *nus.iter().max().expect("non-empty");
    let table = b_coeffs(model, max_nu, fft_size)?;
    let rows: Result<Vec<SweepRow>, Error> = nus
        .par_iter()
        .map(|&nu| {
            let s = entropy_from_lambdas(&window_spectrum(&table, nu)?.lambdas)?.s;
            let per = s / nu as f64;
            Ok(SweepRow {
                nu,
                s_nu: s,
                s_nu_over_nu: per,
                s_infinity: s_inf,
                gap: (per - s_inf).abs(),
                s_nu_bits: s / LN_2,
            })
        })
        .collect();
    Ok(rows?)
}

pub const ORACLE_NU: std::ops::RangeInclusive<usize> = 2..=5;

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct OracleReport {
    pub nu: usize,
    pub case: CaseTag,
    pub fermi: &'static str,
    pub entropy_direct: f64,
    pub entropy_product: f64,
    pub entropy_lambda: f64,
    pub lambdas_toeplitz: Vec<f64>,
    pub lambdas_oracle: Vec<f64>,
    pub spectrum_deviation: f64,
    /// `max |R - 1/2^nu|`.
    pub identity_deviation: f64,
    pub checks: Vec<Check>,
    pub verdict: &'static str,
}

impl OracleReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

fn oracle_err(e: Error) -> CliError {
    match e {
        Error::AxiomViolation(_) | Error::NotAntisymmetric { .. } => CliError::Oracle(e.to_string()),
        other => other.into(),
    }
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
}

pub fn oracle(model: &ChainModel, nu: usize) -> Result<OracleReport, CliError> {
    if !ORACLE_NU.contains(&nu) {
        return Err(CliError::Config(format!("oracle needs 2 <= nu <= 5, got {nu}")));
    }
    let eq = grand_equivalence(model, nu).map_err(oracle_err)?;
    let rep = FockRep::new(nu).map_err(oracle_err)?;
    let data = CorrelationData::from_model(model, nu).map_err(oracle_err)?;
    let rdm = reduced_density_matrix(&rep, &model.phase, &data).map_err(oracle_err)?;
    let dim = rep.dim();
    let identity_deviation =
        max_abs(&(&rdm.matrix - rep.identity() * C64::new(1.0 / dim as f64, 0.0)));

    let mut checks = Vec::new();
    let mut push = |name: &str, value: f64, tolerance: f64| {
        checks.push(Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        })
    };
    push("spectrum vs product formula", eq.spectrum_deviation, 1e-8);
    push("lambda lists", eq.lambda_deviation, 1e-8);
    push("entropy routes spread", eq.entropy_spread(), 1e-8);
    push("Omega hermiticity", eq.omega_hermiticity, 1e-10);
    push("Omega^T + Omega = 1", eq.omega_transpose, 1e-10);
    push("CAR", rep.car_residual(), 1e-12);
    push("Majorana relations", majorana_residual(&rep, &model.phase), 1e-12);

    let units_n = nu.min(3);
    let units = match matrix_units(&rep, &model.phase, units_n) {
        Ok(u) => u.max_residual(),
        Err(Error::AxiomViolation(_)) => f64::INFINITY,
        Err(e) => return Err(e.into()),
    };
    push("matrix-unit axioms", units, 1e-12);

    let cov = data.covariance();
    let k = cov.nrows().min(6);
    let sub = cov.view((0, 0), (k, k)).into_owned();
    let pf_sub = pfaffian(&sub).map_err(oracle_err)?;
    push("Pfaffian recursion vs pairing sum", (pf_sub - pfaffian_by_pairings(&sub)).norm(), 1e-10);
    let pf = pfaffian(&cov).map_err(oracle_err)?;
    let det = cov.determinant();
    push("Pfaffian squared vs determinant", (pf * pf - det).norm() / det.norm().max(1.0), 1e-8);

    if matches!(model.fermi, FermiFunction::HalfConstant) {
        push("R = 1/2^nu", identity_deviation, 1e-12);
        if nu <= 4 {
            let f = factorization_check(&rep, &model.phase, &rdm).map_err(oracle_err)?;
            push("product state factorization", f.residual, 1e-12);
        }
    }

    let verdict = if checks.iter().all(|c| c.pass) { "PASS" } else { "FAIL" };
    Ok(OracleReport {
        nu,
        case: model.case(),
        fermi: model.fermi.name(),
        entropy_direct: eq.entropy_direct,
        entropy_product: eq.entropy_product,
        entropy_lambda: eq.entropy_lambda,
        lambdas_toeplitz: eq.lambdas_toeplitz,
        lambdas_oracle: eq.lambdas_oracle,
        spectrum_deviation: eq.spectrum_deviation,
        identity_deviation,
        checks,
        verdict,
    })
}
