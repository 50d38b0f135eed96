//! Full two-particle spectrum: eigenpairs annotated with center-of-mass
//! momentum estimates and double-occupancy weight, split into a scattering
//! band and (for |U| large enough) a bound-pair miniband.
//!
//! For |U| well above the scattering bandwidth 4J the spectrum holds exactly
//! M bound states offset by ≈ |U| from the M(M-1)/2 scattering states, on the
//! repulsive side for U > 0 and mirrored below for U < 0. Classification uses
//! the double-occupancy weight D = Σ_r |ψ(r,r)|², not the momentum label K:
//! open boundaries make K approximate, so K is reported as a diagnostic only
//! (folded to [0, π], since standing waves mix ±K).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{HamiltonianMatrix, TwoParticleState};
use crate::linalg::{self, Eigensystem};

/// Default double-occupancy weight above which a state counts as bound.
pub const BOUND_THRESHOLD: f64 = 0.5;

/// Eigendecomposition of a two-particle Hamiltonian with per-state labels.
#[derive(Debug)]
pub struct SpectrumResult {
    sites: usize,
    eigen: Eigensystem,
    momentum: Vec<f64>,
    doublon_weight: Vec<f64>,
    bound: Vec<bool>,
    threshold: f64,
}

/// Complete eigendecomposition of `h`, annotated and classified with the
/// default threshold [`BOUND_THRESHOLD`].
pub fn full_spectrum(h: &HamiltonianMatrix) -> Result<SpectrumResult> {
    let m = h.sites();
    let eigen = linalg::symmetric_eigen(h.to_dense())?;
    let dim = eigen.values.len();

    let mut momentum = Vec::with_capacity(dim);
    let mut doublon_weight = Vec::with_capacity(dim);
    for k in 0..dim {
        let col = eigen.vectors.column(k);
        momentum.push(momentum_estimate(m, col.as_slice()));
        doublon_weight.push(doublon_fraction(m, col.as_slice()));
    }
    let bound = doublon_weight.iter().map(|&d| d >= BOUND_THRESHOLD).collect();
    Ok(SpectrumResult {
        sites: m,
        eigen,
        momentum,
        doublon_weight,
        bound,
        threshold: BOUND_THRESHOLD,
    })
}

/// Re-flag bound states as D ≥ `threshold`.
pub fn classify_bound(states: SpectrumResult, threshold: f64) -> Result<SpectrumResult> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Config(format!(
            "bound threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let mut states = states;
    states.bound = states.doublon_weight.iter().map(|&d| d >= threshold).collect();
    states.threshold = threshold;
    Ok(states)
}

/// Energy separation between the bound miniband and the scattering band:
/// positive when the bands are disjoint, negative when they overlap.
pub fn band_gap(states: &SpectrumResult) -> Result<f64> {
    let bound: Vec<f64> = states
        .energies()
        .iter()
        .zip(&states.bound)
        .filter(|&(_, &b)| b)
        .map(|(&e, _)| e)
        .collect();
    let scattering: Vec<f64> = states
        .energies()
        .iter()
        .zip(&states.bound)
        .filter(|&(_, &b)| !b)
        .map(|(&e, _)| e)
        .collect();
    if bound.is_empty() {
        return Err(Error::Usage("no bound miniband".into()));
    }
    if scattering.is_empty() {
        return Err(Error::Usage("no scattering band".into()));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // the miniband sits above the scattering band for repulsion, below for attraction
    if mean(&bound) >= mean(&scattering) {
        Ok(min(&bound) - max(&scattering))
    } else {
        Ok(min(&scattering) - max(&bound))
    }
}

/// |ψ(r)|² marginal over the relative coordinate r = |r1 - r2| for the
/// eigenstate at `index`, normalized to 1.
pub fn pair_wavefunction(states: &SpectrumResult, index: usize) -> Result<Vec<f64>> {
    if index >= states.len() {
        return Err(Error::Config(format!(
            "eigenstate index {index} out of range for {} states",
            states.len()
        )));
    }
    let m = states.sites;
    let col = states.eigen.vectors.column(index);
    let mut profile = vec![0.0; m];
    let mut i = 0;
    for r in 0..m {
        for s in r..m {
            profile[s - r] += col[i] * col[i];
            i += 1;
        }
    }
    let total: f64 = profile.iter().sum();
    for p in &mut profile {
        *p /= total;
    }
    Ok(profile)
}

impl SpectrumResult {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.eigen.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigen.values.is_empty()
    }

    /// Eigenvalues in ascending order.
    pub fn energies(&self) -> &[f64] {
        &self.eigen.values
    }

    /// Center-of-mass momentum estimates, folded to [0, π].
    pub fn momentum(&self) -> &[f64] {
        &self.momentum
    }

    /// Double-occupancy weight D per eigenstate.
    pub fn doublon_weights(&self) -> &[f64] {
        &self.doublon_weight
    }

    pub fn bound_flags(&self) -> &[bool] {
        &self.bound
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn bound_count(&self) -> usize {
        self.bound.iter().filter(|&&b| b).count()
    }

    pub fn scattering_count(&self) -> usize {
        self.len() - self.bound_count()
    }

    /// The eigenstate at `index` as a two-particle state.
    pub fn eigenstate(&self, index: usize) -> Result<TwoParticleState> {
        if index >= self.len() {
            return Err(Error::Config(format!(
                "eigenstate index {index} out of range for {} states",
                self.len()
            )));
        }
        let amps = self
            .eigen
            .vectors
            .column(index)
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        Ok(TwoParticleState::new_unchecked(self.sites, amps))
    }

    /// Spectral weights |⟨eigenstate_k|state⟩|².
    pub fn projection_weights(&self, state: &TwoParticleState) -> Result<Vec<f64>> {
        if state.len() != self.len() {
            return Err(Error::Dimension(format!(
                "state has {} amplitudes, spectrum has {}",
                state.len(),
                self.len()
            )));
        }
        let amps = state.amplitudes();
        let mut weights = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            let col = self.eigen.vectors.column(k);
            let mut c = Complex64::ZERO;
            for i in 0..amps.len() {
                c += col[i] * amps[i];
            }
            weights.push(c.norm_sqr());
        }
        Ok(weights)
    }

    /// Apply exp(-iHt) through this decomposition.
    pub fn evolve(&self, state: &TwoParticleState, time: f64) -> Result<TwoParticleState> {
        if state.len() != self.len() {
            return Err(Error::Dimension(format!(
                "state has {} amplitudes, spectrum has {}",
                state.len(),
                self.len()
            )));
        }
        let amps = self.eigen.evolve(state.amplitudes(), time);
        Ok(TwoParticleState::new_unchecked(self.sites, amps))
    }
}

fn doublon_fraction(sites: usize, column: &[f64]) -> f64 {
    let mut acc = 0.0;
    for r in 0..sites {
        let i = r * sites - (r * r - r) / 2;
        acc += column[i] * column[i];
    }
    acc
}

/// Dominant discrete-Fourier frequency of the center-of-mass marginal,
/// doubled (R = (r1+r2)/2 advances by half-sites) and folded to [0, π].
fn momentum_estimate(sites: usize, column: &[f64]) -> f64 {
    let len = 2 * sites - 1;
    let mut marginal = vec![0.0; len];
    let mut i = 0;
    for r in 0..sites {
        for s in r..sites {
            marginal[r + s] += column[i];
            i += 1;
        }
    }
    let mut best_bin = 0;
    let mut best_mag = f64::NEG_INFINITY;
    for bin in 0..len {
        let mut acc = Complex64::ZERO;
        for (sigma, &v) in marginal.iter().enumerate() {
            let phase = -2.0 * std::f64::consts::PI * (bin * sigma) as f64 / len as f64;
            acc += v * Complex64::from_polar(1.0, phase);
        }
        let mag = acc.norm_sqr();
        if mag > best_mag {
            best_mag = mag;
            best_bin = bin;
        }
    }
    let mut omega = 2.0 * std::f64::consts::PI * best_bin as f64 / len as f64;
    if omega > std::f64::consts::PI {
        omega -= 2.0 * std::f64::consts::PI;
    }
    let mut k = 2.0 * omega;
    if k > std::f64::consts::PI {
        k -= 2.0 * std::f64::consts::PI;
    } else if k <= -std::f64::consts::PI {
        k += 2.0 * std::f64::consts::PI;
    }
    k.abs()
}
