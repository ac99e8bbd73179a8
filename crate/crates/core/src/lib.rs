//! Entanglement entropy of translation-invariant quasifree fermionic chains
//! in right/left mover states.
//!
//! The pipeline runs Hamiltonian coefficients through [`rlmover`] (bands,
//! spectral case, 2-point symbol), [`toeplitz`] (block symbol, finite
//! sections, paired spectra) and [`entropy`] to get `S_nu`, while
//! [`density`] evaluates the asymptotic density `s_inf` directly.
//! [`fock_oracle`] rebuilds the reduced density matrix on a small window in
//! an explicit Fock representation for cross-checking.

pub mod density;
pub mod entropy;
pub mod error;
pub mod fock_oracle;
mod quad;
pub mod rlmover;
pub mod toeplitz;
pub mod trigpoly;

pub use num_complex::Complex64 as C64;

pub use density::{DensityReport, MomentumPartition};
pub use entropy::EntropyValue;
pub use error::{Error, Result};
pub use rlmover::{
    CaseTag, ChainModel, FermiFamilyPhase, FermiFunction, HamiltonianCoeffs, Temperatures,
};
pub use toeplitz::{BlockSymbol, SpectrumReport, ToeplitzSection};
pub use trigpoly::{Root, TrigPoly};

/// A 2x2 complex matrix, row major.
pub type Mat2 = [[C64; 2]; 2];
