//! JSON run configuration.

use std::collections::BTreeMap;
use std::path::Path;

use entroscale_core::{
    ChainModel, FermiFamilyPhase, FermiFunction, HamiltonianCoeffs, Temperatures, C64,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub hamiltonian: HamiltonianSpec,
    #[serde(rename = "beta_L")]
    pub beta_l: f64,
    #[serde(rename = "beta_R")]
    pub beta_r: f64,
    pub fermi: FermiSpec,
    #[serde(default)]
    pub phase: Option<PhaseSpec>,
    #[serde(default)]
    pub run: RunSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub mu: usize,
    /// Keys are `"alpha,n"`.
    pub c: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FermiSpec {
    FermiDirac,
    Ground,
    Half,
    StepSet { intervals: Vec<(Bound, Bound)> },
}

/// Interval endpoint: a number or one of `"inf"`, `"-inf"`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Num(f64),
    Word(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSpec {
    pub lambda: [f64; 2],
    pub gamma: u8,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default)]
    pub nu: Vec<usize>,
    #[serde(default)]
    pub fft_size: Option<usize>,
}

fn cfg(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl Bound {
    fn value(&self, field: &str) -> Result<f64, CliError> {
        match self {
            Bound::Num(x) => Ok(*x),
            Bound::Word(w) => match w.as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                _ => Err(cfg(format!("{field}: expected a number, \"inf\" or \"-inf\", got {w:?}"))),
            },
        }
    }
}

fn parse_key(key: &str) -> Result<(usize, usize), CliError> {
    let bad = || cfg(format!("hamiltonian.c: key {key:?} is not of the form \"alpha,n\""));
    let (a, n) = key.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => cfg(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| cfg(e.to_string()))
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianCoeffs, CliError> {
        let mut entries = Vec::with_capacity(self.hamiltonian.c.len());
        for (k, &v) in &self.hamiltonian.c {
            let (alpha, n) = parse_key(k)?;
            if !v.is_finite() {
                return Err(cfg(format!("hamiltonian.c.\"{k}\": value must be finite")));
            }
            entries.push((alpha, n, v));
        }
        HamiltonianCoeffs::from_entries(self.hamiltonian.mu, &entries)
            .map_err(|e| cfg(format!("hamiltonian: {e}")))
    }

    pub fn fermi(&self) -> Result<FermiFunction, CliError> {
        match &self.fermi {
            FermiSpec::FermiDirac => Ok(FermiFunction::FermiDirac),
            FermiSpec::Ground => Ok(FermiFunction::GroundStep),
            FermiSpec::Half => Ok(FermiFunction::HalfConstant),
            FermiSpec::StepSet { intervals } => {
                let mut iv = Vec::with_capacity(intervals.len());
                for (i, (a, b)) in intervals.iter().enumerate() {
                    let f = format!("fermi.intervals[{i}]");
                    iv.push((a.value(&f)?, b.value(&f)?));
                }
                FermiFunction::step_set(iv).map_err(|e| cfg(format!("fermi: {e}")))
            }
        }
    }

    pub fn phase(&self) -> Result<FermiFamilyPhase, CliError> {
        match &self.phase {
            None => Ok(FermiFamilyPhase::default()),
            Some(p) => FermiFamilyPhase::new(C64::new(p.lambda[0], p.lambda[1]), p.gamma)
                .map_err(|e| cfg(format!("phase: {e}"))),
        }
    }

    /// The model, whatever its spectral case.
    pub fn model(&self) -> Result<ChainModel, CliError> {
        let temps = Temperatures::new(self.beta_l, self.beta_r)
            .map_err(|e| cfg(format!("beta_L/beta_R: {e}")))?;
        ChainModel::new(self.hamiltonian()?, temps, self.fermi()?, self.phase()?)
            .map_err(|e| cfg(e.to_string()))
    }

    /// The model, refusing Cases 1 and 6.
    pub fn supported_model(&self) -> Result<ChainModel, CliError> {
        let m = self.model()?;
        let case = m.case();
        if !case.is_supported() {
            return Err(CliError::WrongCase(case));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use entroscale_core::CaseTag;

    const XY: &str = r#"{
        "hamiltonian": {"mu": 1, "c": {"2,1": 0.02, "3,0": 0.5, "3,1": 0.5}},
        "beta_L": 2, "beta_R": 5,
        "fermi": {"type": "fermi_dirac"},
        "phase": {"lambda": [1, 0], "gamma": 2}
    }"#;

    #[test]
    fn parses_xy() {
        let c = RunConfig::parse(XY).unwrap();
        let m = c.supported_model().unwrap();
        assert_eq!(m.case(), CaseTag::Case2);
        assert_eq!(m.hamiltonian.get(2, 1), 0.02);
    }

    #[test]
    fn unknown_field_names_line() {
        let t = XY.replace("\"beta_R\"", "\"beta_r\"");
        let e = RunConfig::parse(&t).unwrap_err().to_string();
        assert!(e.contains("beta_r") && e.contains("line"), "{e}");
    }

    #[test]
    fn step_set_accepts_infinite_words() {
        let t = XY.replace(
            r#"{"type": "fermi_dirac"}"#,
            r#"{"type": "step_set", "intervals": [[0, "inf"]]}"#,
        );
        let c = RunConfig::parse(&t).unwrap();
        assert!(matches!(c.fermi().unwrap(), FermiFunction::StepSet { .. }));
        let bad = t.replace("\"inf\"", "\"lots\"");
        let e = RunConfig::parse(&bad).unwrap().fermi().unwrap_err().to_string();
        assert!(e.contains("fermi.intervals[0]"), "{e}");
    }

    #[test]
    fn bad_key_and_case_one() {
        let t = XY.replace("\"2,1\"", "\"2;1\"");
        let e = RunConfig::parse(&t).unwrap().model().unwrap_err().to_string();
        assert!(e.contains("2;1"), "{e}");
        let c1 = XY.replace(r#""2,1": 0.02, "3,0": 0.5, "3,1": 0.5"#, r#""3,0": 1"#);
        let c = RunConfig::parse(&c1).unwrap();
        assert!(matches!(c.supported_model(), Err(CliError::WrongCase(CaseTag::Case1))));
    }
}
