use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use entroscale_bench::{xy_model, xy_ness};
use entroscale_core::density::s_infinity;
use entroscale_core::fock_oracle::{reduced_density_matrix, CorrelationData, FockRep};
use entroscale_core::toeplitz::{b_coeffs, build_b, build_section, fourier_coeffs, paired_spectrum};
use entroscale_core::FermiFunction;

fn bench_coefficients(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier_coeffs");
    group.sample_size(10);
    let ness = build_b(&xy_ness()).unwrap();
    let eq = build_b(&xy_model(2.0, 2.0, FermiFunction::FermiDirac)).unwrap();
    for lag in [64usize, 512] {
        group.bench_with_input(BenchmarkId::new("gauss_legendre", lag), &lag, |b, &lag| {
            b.iter(|| fourier_coeffs(black_box(&ness), lag).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fft", lag), &lag, |b, &lag| {
            b.iter(|| fourier_coeffs(black_box(&eq), lag).unwrap())
        });
    }
    group.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("paired_spectrum");
    group.sample_size(10);
    let table = b_coeffs(&xy_ness(), 256, None).unwrap();
    for nu in [64usize, 256] {
        let t = build_section(&table, nu).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(nu), &t, |b, t| {
            b.iter(|| paired_spectrum(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn bench_density(c: &mut Criterion) {
    let mut group = c.benchmark_group("s_infinity");
    for (name, m) in [
        ("fermi_dirac", xy_ness()),
        ("ground", xy_model(1.0, 3.0, FermiFunction::GroundStep)),
    ] {
        group.bench_function(name, |b| b.iter(|| s_infinity(black_box(&m)).unwrap()));
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduced_density_matrix");
    group.sample_size(10);
    let m = xy_ness();
    for nu in [2usize, 4] {
        let rep = FockRep::new(nu).unwrap();
        let data = CorrelationData::from_model(&m, nu).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(nu), &nu, |b, _| {
            b.iter(|| reduced_density_matrix(&rep, &m.phase, black_box(&data)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_coefficients, bench_spectrum, bench_density, bench_oracle);
criterion_main!(benches);
