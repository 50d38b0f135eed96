//! Continuous-time quantum walks of two interacting bosons on an open
//! one-dimensional Bose-Hubbard chain, together with everything needed to
//! interrogate them: site densities and two-particle correlations, the full
//! two-body spectrum with its bound-pair miniband, closed-form free-boson,
//! free-fermion, and hard-core reference walkers, and a thermal-ensemble
//! engine for the classical mean-field (discrete nonlinear Schrödinger)
//! analogue.
//!
//! Units: the tunneling amplitude J sets the energy scale (J = 1 by
//! convention) and times are measured in 1/J. Sites are indexed from 0 at the
//! left end; both chain ends are open.

pub mod classical;
pub mod error;
pub mod lattice;
mod linalg;
pub mod observables;
pub mod propagator;
pub mod reference;
pub mod special;
pub mod spectrum;

pub use classical::{
    dnls_evolve, quantum_classical_distance, thermal_ensemble_correlation, ClassicalField,
    DnlsSpec, EnsembleResult, EnsembleSpec, InputStatistics,
};
pub use error::{Error, Result};
pub use lattice::{
    build_basis, build_hamiltonian, initial_state, HamiltonianMatrix, InitialState, LatticeSpec,
    PairBasis, TwoParticleState,
};
pub use observables::{
    bunching_ratio, correlation, correlation_fluctuation, density, participation_ratio,
    CorrelationKind, CorrelationMatrix, DensityVector,
};
pub use propagator::{evolve, EvolutionSpec, Method};
pub use reference::{
    boson_correlation_u0, fermion_correlation, hardcore_evolve, propagator as single_particle_propagator,
    SingleParticlePropagator,
};
pub use spectrum::{
    band_gap, classify_bound, full_spectrum, pair_wavefunction, SpectrumResult, BOUND_THRESHOLD,
};
