//! Cross-module consistency: the full two-particle pipeline against the
//! closed-form reference walkers.

use pairwalk_core::{
    boson_correlation_u0, build_basis, build_hamiltonian, correlation, evolve, hardcore_evolve,
    initial_state, EvolutionSpec, InitialState, LatticeSpec,
};

fn pipeline_gamma(m: usize, u: f64, init: InitialState, t: f64) -> pairwalk_core::CorrelationMatrix {
    let spec = LatticeSpec::new(m, 1.0, u).unwrap();
    let basis = build_basis(&spec).unwrap();
    let h = build_hamiltonian(&spec, &basis).unwrap();
    let state = initial_state(init, &basis).unwrap();
    let out = evolve(&state, &h, &EvolutionSpec::new(t)).unwrap();
    correlation(&out)
}

#[test]
fn free_pipeline_matches_the_propagator_product_formula() {
    let m = 29;
    let spec = LatticeSpec::new(m, 1.0, 0.0).unwrap();
    for (init, inputs) in [
        (InitialState::Adjacent { site: 14 }, (14, 15)),
        (InitialState::Doublon { site: 14 }, (14, 14)),
    ] {
        let full = pipeline_gamma(m, 0.0, init, 4.0);
        let closed = boson_correlation_u0(&spec, inputs, 4.0).unwrap();
        let mut worst: f64 = 0.0;
        for q in 0..m {
            for r in 0..m {
                worst = worst.max((full.get(q, r) - closed.get(q, r)).abs());
            }
        }
        assert!(worst <= 1e-10, "inputs {inputs:?}: differ by {worst:.3e}");
    }
}

#[test]
fn very_strong_repulsion_approaches_the_hard_core_walk() {
    let m = 29;
    let spec = LatticeSpec::new(m, 1.0, 1e4).unwrap();
    let full = pipeline_gamma(m, 1e4, InitialState::Adjacent { site: 14 }, 4.0);
    let hc = hardcore_evolve(&spec, (14, 15), 4.0).unwrap();
    let mut worst: f64 = 0.0;
    for q in 0..m {
        for r in 0..m {
            worst = worst.max((full.get(q, r) - hc.get(q, r)).abs());
        }
    }
    assert!(worst <= 5e-3, "U = 1e4 sits {worst:.3e} from the hard-core limit");
}
