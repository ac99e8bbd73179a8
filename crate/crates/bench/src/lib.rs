//! Fixtures shared by the benchmarks in `benches/`.

use entroscale_core::{
    ChainModel, FermiFamilyPhase, FermiFunction, HamiltonianCoeffs, Temperatures,
};

/// XY chain with anisotropy `1/50` and field `1/2`.
pub fn xy() -> HamiltonianCoeffs {
    HamiltonianCoeffs::from_entries(1, &[(2, 1, 1.0 / 50.0), (3, 0, 0.5), (3, 1, 0.5)])
        .expect("valid coefficients")
}

pub fn xy_model(beta_l: f64, beta_r: f64, fermi: FermiFunction) -> ChainModel {
    ChainModel::new(
        xy(),
        Temperatures::new(beta_l, beta_r).expect("ordered temperatures"),
        fermi,
        FermiFamilyPhase::default(),
    )
    .expect("valid model")
}

/// The nonequilibrium XY state at `beta = (2, 5)`.
pub fn xy_ness() -> ChainModel {
    xy_model(2.0, 5.0, FermiFunction::FermiDirac)
}
