use thiserror::Error as ThisError;

use crate::rlmover::CaseTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, ThisError)]
pub enum Error {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid Fermi function: {0}")]
    InvalidFermi(String),
    #[error("model is in {0}; only Cases 2-5 are supported")]
    WrongCase(CaseTag),
    #[error("momentum k = {k} lies on the zero set of |u|")]
    OnZeroSet { k: f64 },
    #[error("Fourier coefficients did not converge (delta {delta:e})")]
    NoConvergence { delta: f64 },
    #[error("section of order {needed} needs lags the symbol table lacks (have {have})")]
    MissingLags { needed: usize, have: usize },
    #[error("eigenvalues do not pair up as +-lambda (residual {residual:e})")]
    PairingFailure { residual: f64 },
    #[error("value {value} outside the admissible range")]
    OutOfRange { value: f64 },
    #[error("size {size} exceeds the limit {max}")]
    TooLarge { size: usize, max: usize },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("u_0 is nonzero; the symmetric route needs u_0 = 0")]
    NotSymmetric,
    #[error("this route needs the Fermi-Dirac distribution")]
    WrongFermi,
    #[error("matrix is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },
    #[error("matrix-unit relation violated: {0}")]
    AxiomViolation(String),
    #[error("vanishing verdict {verdict} disagrees with s_inf = {s_infinity:e}")]
    VanishingMismatch { s_infinity: f64, verdict: bool },
}
