use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pairwalk_core::{
    build_basis, build_hamiltonian, dnls_evolve, evolve, full_spectrum, initial_state,
    thermal_ensemble_correlation, ClassicalField, DnlsSpec, EnsembleSpec, EvolutionSpec,
    InitialState, InputStatistics, LatticeSpec, Method,
};

fn assembly(c: &mut Criterion) {
    let spec = LatticeSpec::new(29, 1.0, 8.0).unwrap();
    c.bench_function("basis+hamiltonian M=29", |b| {
        b.iter(|| {
            let basis = build_basis(black_box(&spec)).unwrap();
            black_box(build_hamiltonian(&spec, &basis).unwrap())
        })
    });
}

fn spectrum(c: &mut Criterion) {
    let spec = LatticeSpec::new(29, 1.0, 8.0).unwrap();
    let basis = build_basis(&spec).unwrap();
    let h = build_hamiltonian(&spec, &basis).unwrap();
    c.bench_function("full spectrum M=29 (dim 435)", |b| {
        b.iter(|| black_box(full_spectrum(black_box(&h)).unwrap()))
    });
}

fn evolution(c: &mut Criterion) {
    let spec = LatticeSpec::new(29, 1.0, 8.0).unwrap();
    let basis = build_basis(&spec).unwrap();
    let h = build_hamiltonian(&spec, &basis).unwrap();
    let state = initial_state(InitialState::Adjacent { site: 14 }, &basis).unwrap();
    c.bench_function("evolve full-diag M=29 T=4", |b| {
        b.iter(|| black_box(evolve(&state, &h, &EvolutionSpec::new(4.0)).unwrap()))
    });

    let big = LatticeSpec::new(61, 1.0, 8.0).unwrap();
    let big_basis = build_basis(&big).unwrap();
    let big_h = build_hamiltonian(&big, &big_basis).unwrap();
    let big_state = initial_state(InitialState::Adjacent { site: 30 }, &big_basis).unwrap();
    let krylov = EvolutionSpec { time: 4.0, method: Method::Krylov, tolerance: 1e-10 };
    c.bench_function("evolve krylov M=61 T=4", |b| {
        b.iter(|| black_box(evolve(&big_state, &big_h, &krylov).unwrap()))
    });
}

fn classical(c: &mut Criterion) {
    let mut field = ClassicalField::zeros(29).unwrap();
    field.amplitudes_mut()[14] = 1.0.into();
    field.amplitudes_mut()[15] = 1.0.into();
    let traj = DnlsSpec { hopping: 1.0, nonlinearity: 1.0, time: 4.0, dt: 1e-3 };
    c.bench_function("dnls trajectory M=29 T=4 dt=1e-3", |b| {
        b.iter(|| black_box(dnls_evolve(&field, &traj).unwrap()))
    });

    let ensemble = EnsembleSpec {
        sites: 29,
        inputs: (14, 15),
        realizations: 128,
        seed: 7,
        statistics: InputStatistics::CircularGaussian,
        hopping: 1.0,
        nonlinearity: 0.5,
        time: 4.0,
        dt: 1e-3,
    };
    c.bench_function("thermal ensemble 128 realizations", |b| {
        b.iter(|| black_box(thermal_ensemble_correlation(&ensemble).unwrap()))
    });
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = assembly, spectrum, evolution, classical
);
criterion_main!(benches);
