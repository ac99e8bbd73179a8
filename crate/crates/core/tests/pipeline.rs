use std::f64::consts::LN_2;

use entroscale_core::density::{s_infinity, s_infinity_value};
use entroscale_core::entropy::entropy_from_lambdas;
use entroscale_core::fock_oracle::{grand_equivalence, CorrelationData};
use entroscale_core::rlmover::classify;
use entroscale_core::toeplitz::{b_coeffs, window_spectrum, FourierMethod};
use entroscale_core::{
    CaseTag, ChainModel, Error, FermiFamilyPhase, FermiFunction, HamiltonianCoeffs, Temperatures,
    C64,
};
use proptest::prelude::*;

fn h(entries: &[(usize, usize, f64)]) -> HamiltonianCoeffs {
    let mu = entries.iter().map(|e| e.1).max().unwrap().max(1);
    HamiltonianCoeffs::from_entries(mu, entries).unwrap()
}

fn xy() -> HamiltonianCoeffs {
    h(&[(2, 1, 1.0 / 50.0), (3, 0, 0.5), (3, 1, 0.5)])
}

fn model(h: HamiltonianCoeffs, bl: f64, br: f64, f: FermiFunction, phase: FermiFamilyPhase) -> ChainModel {
    ChainModel::new(h, Temperatures::new(bl, br).unwrap(), f, phase).unwrap()
}

fn assert_equivalent(m: &ChainModel, nus: &[usize]) {
    for &nu in nus {
        let e = grand_equivalence(m, nu).unwrap();
        assert!(e.lambda_deviation < 1e-9, "nu={nu}: {e:?}");
        assert!(e.spectrum_deviation < 1e-8, "nu={nu}: {e:?}");
        assert!(e.entropy_spread() < 1e-8, "nu={nu}: {e:?}");
        assert!(e.omega_hermiticity < 1e-10 && e.omega_transpose < 1e-10);
    }
}

#[test]
fn oracle_matches_for_every_phase() {
    for (theta, gamma) in [(0.0, 1), (0.9, 2), (std::f64::consts::FRAC_PI_2, 2), (2.3, 1)] {
        let p = FermiFamilyPhase::new(C64::from_polar(1.0, theta), gamma).unwrap();
        assert_equivalent(&model(xy(), 2.0, 5.0, FermiFunction::FermiDirac, p), &[2, 3]);
    }
}

#[test]
fn oracle_matches_for_cases_four_and_five() {
    let c4 = h(&[(0, 1, 0.4), (3, 0, 1.0), (1, 2, 0.0)]);
    assert_eq!(classify(&c4), CaseTag::Case4);
    let c5 = h(&[(0, 1, 0.3), (1, 1, 0.2), (3, 1, 0.5), (3, 0, -0.2)]);
    assert_eq!(classify(&c5), CaseTag::Case5);
    for hh in [c4, c5] {
        let m = model(hh, 0.8, 2.5, FermiFunction::FermiDirac, FermiFamilyPhase::default());
        assert_equivalent(&m, &[2, 3]);
    }
}

#[test]
fn oracle_matches_for_discontinuous_fermi_functions() {
    let p = FermiFamilyPhase::default();
    assert_equivalent(&model(xy(), 1.0, 4.0, FermiFunction::GroundStep, p), &[2, 3]);
    let step = FermiFunction::step_set(vec![(0.5, 2.0), (-0.5, 0.0), (f64::NEG_INFINITY, -2.0)]).unwrap();
    assert_equivalent(&model(xy(), 1.0, 4.0, step, p), &[2, 3]);
}

#[test]
fn equilibrium_uses_fft_route() {
    let m = model(xy(), 1.5, 1.5, FermiFunction::FermiDirac, FermiFamilyPhase::default());
    let t = b_coeffs(&m, 16, None).unwrap();
    assert!(matches!(t.method, FourierMethod::Fft { .. }));
    assert!(t.delta <= 1e-9);
    assert_equivalent(&m, &[2, 4]);
}

#[test]
fn wrong_cases_are_refused_everywhere() {
    let c1 = h(&[(3, 0, 1.0)]);
    let m = model(c1, 1.0, 1.0, FermiFunction::FermiDirac, FermiFamilyPhase::default());
    assert_eq!(s_infinity(&m).unwrap_err(), Error::WrongCase(CaseTag::Case1));
    assert!(matches!(b_coeffs(&m, 4, None), Err(Error::WrongCase(_))));
    assert!(matches!(CorrelationData::from_model(&m, 2), Err(Error::WrongCase(_))));
}

#[test]
fn finite_size_entropy_approaches_density() {
    let m = model(xy(), 2.0, 5.0, FermiFunction::FermiDirac, FermiFamilyPhase::default());
    let s_inf = s_infinity_value(&m).unwrap();
    let t = b_coeffs(&m, 256, None).unwrap();
    let gaps: Vec<f64> = [32usize, 128, 256]
        .iter()
        .map(|&nu| {
            let s = entropy_from_lambdas(&window_spectrum(&t, nu).unwrap().lambdas).unwrap().s;
            assert!(s <= nu as f64 * LN_2);
            (s / nu as f64 - s_inf).abs()
        })
        .collect();
    assert!(gaps[2] < gaps[0], "{gaps:?}");
}

#[test]
fn ground_state_window_entropy_is_sublinear() {
    let m = model(xy(), 1.0, 1.0, FermiFunction::GroundStep, FermiFamilyPhase::default());
    let t = b_coeffs(&m, 128, None).unwrap();
    let s = |nu| entropy_from_lambdas(&window_spectrum(&t, nu).unwrap().lambdas).unwrap().s / nu as f64;
    assert!(s(128) < s(16));
    assert!(s(128) < 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn random_models_pass_the_oracle(
        c in prop::collection::vec(-1.0f64..1.0, 5),
        bl in 0.3f64..3.0,
        extra in 0.0f64..3.0,
    ) {
        let hh = h(&[(0, 1, c[0]), (1, 1, c[1]), (2, 2, c[2]), (3, 0, c[3]), (3, 1, c[4])]);
        prop_assume!(classify(&hh).is_supported());
        let m = model(hh, bl, bl + extra, FermiFunction::FermiDirac, FermiFamilyPhase::default());
        let e = grand_equivalence(&m, 3).unwrap();
        prop_assert!(e.spectrum_deviation < 1e-8 && e.entropy_spread() < 1e-8, "{:?}", e);
        let s = s_infinity_value(&m).unwrap();
        prop_assert!(s > 0.0 && s <= LN_2 + 1e-12);
    }
}
