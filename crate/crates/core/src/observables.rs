//! Measured quantities: site density n_r, two-particle correlation Γ_{q,r},
//! its fluctuation part Γ^F, and scalar diagnostics.
//!
//! Conventions for a unit-norm two-boson state ψ over the pair basis:
//!
//! ```text
//! n_q     = Σ_{pairs containing q} (occupancy of q) · |ψ|²
//! Γ_{q,r} = |ψ(q,r)|²        (q ≠ r)
//! Γ_{q,q} = 2 |ψ(q,q)|²      (normal ordering in the √2-normalized basis)
//! Γ^F     = Γ - ½ n ⊗ n
//! ```
//!
//! Both sum rules Σ n_r = 2 and Σ Γ = 2 = N(N-1) hold exactly for N = 2
//! bosons; the constant 2 is specific to the two-particle sector.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::TwoParticleState;

/// Site density n_r, length M.
#[derive(Debug, Clone)]
pub struct DensityVector {
    values: Vec<f64>,
}

impl DensityVector {
    pub(crate) fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, q: usize) -> f64 {
        self.values[q]
    }

    /// Σ_r n_r (2 for a two-particle state).
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Whether a correlation matrix still carries the mean-density background.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationKind {
    /// Γ_{q,r} as measured; entries are nonnegative.
    Bare,
    /// Γ^F = Γ - ½ n_q n_r; entries may be negative.
    Fluctuation,
}

/// M×M real symmetric correlation matrix.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    kind: CorrelationKind,
    data: DMatrix<f64>,
}

impl CorrelationMatrix {
    pub(crate) fn new(kind: CorrelationKind, data: DMatrix<f64>) -> Self {
        Self { kind, data }
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    pub fn sites(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, q: usize, r: usize) -> f64 {
        self.data[(q, r)]
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Σ_{q,r} Γ_{q,r}.
    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Σ_r Γ_{r,r}, twice the probability of double occupancy.
    pub fn diagonal_weight(&self) -> f64 {
        self.data.diagonal().iter().sum()
    }

    /// Largest absolute deviation from its own transpose.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for q in 0..self.sites() {
            for r in (q + 1)..self.sites() {
                worst = worst.max((self.data[(q, r)] - self.data[(r, q)]).abs());
            }
        }
        worst
    }
}

/// Site density of a two-particle state; a doublon pair contributes 2.
pub fn density(state: &TwoParticleState) -> DensityVector {
    let m = state.sites();
    let mut values = vec![0.0; m];
    let mut i = 0;
    for r in 0..m {
        for s in r..m {
            let p = state.amplitudes()[i].norm_sqr();
            if r == s {
                values[r] += 2.0 * p;
            } else {
                values[r] += p;
                values[s] += p;
            }
            i += 1;
        }
    }
    DensityVector::from_values(values)
}

/// Two-particle correlation Γ_{q,r} = ⟨a_q† a_r† a_r a_q⟩.
pub fn correlation(state: &TwoParticleState) -> CorrelationMatrix {
    let m = state.sites();
    let mut data = DMatrix::zeros(m, m);
    let mut i = 0;
    for r in 0..m {
        for s in r..m {
            let p = state.amplitudes()[i].norm_sqr();
            if r == s {
                data[(r, r)] = 2.0 * p;
            } else {
                data[(r, s)] = p;
                data[(s, r)] = p;
            }
            i += 1;
        }
    }
    CorrelationMatrix::new(CorrelationKind::Bare, data)
}

/// Γ^F_{q,r} = Γ_{q,r} - ½ n_q n_r.
pub fn correlation_fluctuation(
    correlation: &CorrelationMatrix,
    density: &DensityVector,
) -> Result<CorrelationMatrix> {
    if correlation.kind() != CorrelationKind::Bare {
        return Err(Error::Usage(
            "fluctuation correlator is already background-subtracted".into(),
        ));
    }
    let m = correlation.sites();
    if density.len() != m {
        return Err(Error::Dimension(format!(
            "density has {} sites, correlation has {m}",
            density.len()
        )));
    }
    let mut data = correlation.data().clone();
    for q in 0..m {
        for r in 0..m {
            data[(q, r)] -= 0.5 * density.get(q) * density.get(r);
        }
    }
    Ok(CorrelationMatrix::new(CorrelationKind::Fluctuation, data))
}

/// Corner-block weight ratio of a correlation matrix.
///
/// Compares the two `window`×`window` same-side corner blocks (both particles
/// on the same edge of the lattice) against the two opposite-corner blocks.
/// Values above 1 mean bunching, below 1 anti-bunching. Saturated bunching
/// (zero opposite-corner weight) reports +∞; two empty block families are
/// undefined and reported as an error.
pub fn bunching_ratio(correlation: &CorrelationMatrix, window: usize) -> Result<f64> {
    let m = correlation.sites();
    if window == 0 || 2 * window >= m {
        return Err(Error::Config(format!(
            "window must satisfy 0 < w < M/2, got w = {window} with M = {m}"
        )));
    }
    let block = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| -> f64 {
        let mut acc = 0.0;
        for q in rows {
            for r in cols.clone() {
                acc += correlation.get(q, r);
            }
        }
        acc
    };
    let lo = 0..window;
    let hi = (m - window)..m;
    let same = block(lo.clone(), lo.clone()) + block(hi.clone(), hi.clone());
    let opposite = block(lo.clone(), hi.clone()) + block(hi, lo);
    if opposite == 0.0 {
        if same == 0.0 {
            return Err(Error::Numerical(
                "both corner-block families are empty; ratio undefined".into(),
            ));
        }
        return Ok(f64::INFINITY);
    }
    Ok(same / opposite)
}

/// Participation ratio (Σ n_r)² / Σ n_r²; 2 for a single occupied site, M for
/// a uniform two-particle density.
pub fn participation_ratio(density: &DensityVector) -> Result<f64> {
    let total = density.total();
    let sq: f64 = density.values().iter().map(|n| n * n).sum();
    if sq == 0.0 {
        return Err(Error::Config("participation ratio of a zero density".into()));
    }
    Ok(total * total / sq)
}
