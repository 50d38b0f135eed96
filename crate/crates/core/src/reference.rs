//! Closed-form and limit-case reference walkers.
//!
//! These provide independent cross-checks for the full two-particle
//! machinery: non-interacting boson and fermion pair correlations assembled
//! from single-particle propagators, and hard-core evolution in the basis
//! with double occupancy projected out. The hard-core correlations coincide
//! exactly with the free-fermion ones because density-density correlators are
//! blind to the string phase of the spin-to-fermion mapping; that identity is
//! exercised as a test rather than represented as a data object.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::linalg;
use crate::observables::{CorrelationKind, CorrelationMatrix};

/// G_{q,m}(t): amplitude on site q after time t for a particle released at m,
/// under the hopping-only chain (interaction plays no role for one particle).
#[derive(Debug, Clone)]
pub struct SingleParticlePropagator {
    sites: usize,
    matrix: DMatrix<Complex64>,
}

/// exp(-iH₁t) for the open M-site hopping chain.
///
/// Built from the exact standing-wave eigenbasis φ_k(m) = √(2/(M+1))
/// sin((k+1)(m+1)π/(M+1)) with E_k = -2J cos((k+1)π/(M+1)), so no numerical
/// eigensolver is involved; this keeps the reference path independent of the
/// two-particle pipeline.
pub fn propagator(spec: &LatticeSpec, time: f64) -> Result<SingleParticlePropagator> {
    spec.validate()?;
    if !time.is_finite() || time < 0.0 {
        return Err(Error::Config(format!(
            "propagation time must be finite and nonnegative, got {time}"
        )));
    }
    let m = spec.sites;
    let norm = (2.0 / (m as f64 + 1.0)).sqrt();
    let mut modes = DMatrix::zeros(m, m);
    let mut phases = Vec::with_capacity(m);
    for k in 0..m {
        let wavenumber = (k as f64 + 1.0) * std::f64::consts::PI / (m as f64 + 1.0);
        for site in 0..m {
            modes[(site, k)] = norm * ((site as f64 + 1.0) * wavenumber).sin();
        }
        let energy = -2.0 * spec.hopping * wavenumber.cos();
        phases.push(Complex64::from_polar(1.0, -energy * time));
    }
    let mut matrix = DMatrix::from_element(m, m, Complex64::ZERO);
    for q in 0..m {
        for src in 0..m {
            let mut acc = Complex64::ZERO;
            for k in 0..m {
                acc += modes[(q, k)] * modes[(src, k)] * phases[k];
            }
            matrix[(q, src)] = acc;
        }
    }
    Ok(SingleParticlePropagator { sites: m, matrix })
}

impl SingleParticlePropagator {
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Amplitude G_{to,from}.
    pub fn amplitude(&self, to: usize, from: usize) -> Complex64 {
        self.matrix[(to, from)]
    }

    /// |G_{to,from}|².
    pub fn intensity(&self, to: usize, from: usize) -> f64 {
        self.matrix[(to, from)].norm_sqr()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Largest deviation of G†G from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.sites;
        let mut worst: f64 = 0.0;
        for a in 0..m {
            for b in a..m {
                let mut acc = Complex64::ZERO;
                for q in 0..m {
                    acc += self.matrix[(q, a)].conj() * self.matrix[(q, b)];
                }
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((acc - want).norm());
            }
        }
        worst
    }
}

fn check_inputs(spec: &LatticeSpec, inputs: (usize, usize)) -> Result<()> {
    let (m, n) = inputs;
    if m >= spec.sites || n >= spec.sites {
        return Err(Error::Config(format!(
            "input sites ({m}, {n}) out of range for {} sites",
            spec.sites
        )));
    }
    Ok(())
}

/// Two-boson correlation at U = 0 from single-particle amplitudes:
/// Γ_{q,r} = |G_{q,m} G_{r,n} + G_{q,n} G_{r,m}|² / (1 + δ_{mn}).
pub fn boson_correlation_u0(
    spec: &LatticeSpec,
    inputs: (usize, usize),
    time: f64,
) -> Result<CorrelationMatrix> {
    check_inputs(spec, inputs)?;
    let g = propagator(spec, time)?;
    let (m, n) = inputs;
    let norm = if m == n { 0.5 } else { 1.0 };
    let sites = spec.sites;
    let mut data = DMatrix::zeros(sites, sites);
    for q in 0..sites {
        for r in 0..sites {
            let amp = g.amplitude(q, m) * g.amplitude(r, n) + g.amplitude(q, n) * g.amplitude(r, m);
            data[(q, r)] = norm * amp.norm_sqr();
        }
    }
    Ok(CorrelationMatrix::new(CorrelationKind::Bare, data))
}

/// Two-fermion correlation from the Slater determinant:
/// Γ_{q,r} = |G_{q,m} G_{r,n} - G_{q,n} G_{r,m}|², zero on the diagonal.
pub fn fermion_correlation(
    spec: &LatticeSpec,
    inputs: (usize, usize),
    time: f64,
) -> Result<CorrelationMatrix> {
    check_inputs(spec, inputs)?;
    let (m, n) = inputs;
    if m == n {
        return Err(Error::Config(
            "fermions exclude double occupancy; input sites must differ".into(),
        ));
    }
    let g = propagator(spec, time)?;
    let sites = spec.sites;
    let mut data = DMatrix::zeros(sites, sites);
    for q in 0..sites {
        for r in 0..sites {
            if q == r {
                continue; // Pauli: exactly zero, not computed
            }
            let amp = g.amplitude(q, m) * g.amplitude(r, n) - g.amplitude(q, n) * g.amplitude(r, m);
            data[(q, r)] = amp.norm_sqr();
        }
    }
    Ok(CorrelationMatrix::new(CorrelationKind::Bare, data))
}

/// Evolve two hard-core bosons (double occupancy projected out) and return Γ.
///
/// The basis is the M(M-1)/2 strictly ordered pairs r < s with hopping-only
/// matrix elements; hops that would doubly occupy a site are dropped.
pub fn hardcore_evolve(
    spec: &LatticeSpec,
    inputs: (usize, usize),
    time: f64,
) -> Result<CorrelationMatrix> {
    check_inputs(spec, inputs)?;
    let (m, n) = inputs;
    if m == n {
        return Err(Error::Config(
            "hard-core bosons exclude double occupancy; input sites must differ".into(),
        ));
    }
    if !time.is_finite() || time < 0.0 {
        return Err(Error::Config(format!(
            "propagation time must be finite and nonnegative, got {time}"
        )));
    }
    let sites = spec.sites;
    let j = spec.hopping;

    // index of the strictly ordered pair (r, s), r < s
    let index = |r: usize, s: usize| -> usize { r * sites - r * (r + 1) / 2 + (s - r - 1) };
    let dim = sites * (sites - 1) / 2;
    let mut dense = DMatrix::zeros(dim, dim);
    for r in 0..sites {
        for s in (r + 1)..sites {
            let i = index(r, s);
            let moves = [
                (r.wrapping_sub(1), s),
                (r + 1, s),
                (r, s.wrapping_sub(1)),
                (r, s + 1),
            ];
            for (a, b) in moves {
                if a < sites && b < sites && a != b {
                    let (a, b) = (a.min(b), a.max(b));
                    dense[(i, index(a, b))] = -j;
                }
            }
        }
    }

    let eigen = linalg::symmetric_eigen(dense)?;
    let mut psi = vec![Complex64::ZERO; dim];
    psi[index(m.min(n), m.max(n))] = Complex64::ONE;
    let psi = eigen.evolve(&psi, time);

    let mut data = DMatrix::zeros(sites, sites);
    for r in 0..sites {
        for s in (r + 1)..sites {
            let p = psi[index(r, s)].norm_sqr();
            data[(r, s)] = p;
            data[(s, r)] = p;
        }
    }
    Ok(CorrelationMatrix::new(CorrelationKind::Bare, data))
}
