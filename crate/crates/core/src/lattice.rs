//! Lattice definition, symmetrized two-boson basis, and Hamiltonian assembly.
//!
//! The model is a one-dimensional Bose-Hubbard chain with open (hard-wall)
//! ends,
//!
//! ```text
//! H = -J Σ_⟨l,m⟩ a_l† a_m  +  (U/2) Σ_m n̂_m (n̂_m - 1),
//! ```
//!
//! restricted to the two-particle sector. Basis states are unordered site
//! pairs |r,s⟩ with r ≤ s, normalized as
//!
//! ```text
//! |r,r⟩ = (a_r†)² |0⟩ / √2        |r,s⟩ = a_r† a_s† |0⟩   (r < s)
//! ```
//!
//! so the only nonzero matrix elements are U on doubly occupied diagonal
//! entries, -J between pair states that differ by a single one-site hop, and
//! -√2·J when such a hop creates or destroys a double occupancy (bosonic
//! enhancement).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the squared norm of a state after construction or evolution.
pub(crate) const STATE_NORM_TOL: f64 = 1e-12;

/// Chain length, tunneling amplitude, and on-site interaction.
///
/// J = 1 fixes the unit of energy and times are measured in 1/J. Site indices
/// are 0-based with site 0 at the left end; both ends are open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    /// Number of lattice sites M (at least 2).
    pub sites: usize,
    /// Nearest-neighbor tunneling amplitude J (positive).
    pub hopping: f64,
    /// On-site interaction energy U; either sign, including zero.
    pub interaction: f64,
}

impl LatticeSpec {
    pub fn new(sites: usize, hopping: f64, interaction: f64) -> Result<Self> {
        let spec = Self { sites, hopping, interaction };
        spec.validate()?;
        Ok(spec)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::Config(format!(
                "sites must be at least 2, got {}",
                self.sites
            )));
        }
        if !(self.hopping > 0.0) || !self.hopping.is_finite() {
            return Err(Error::Config(format!(
                "hopping must be positive and finite, got {}",
                self.hopping
            )));
        }
        if !self.interaction.is_finite() {
            return Err(Error::Config(format!(
                "interaction must be finite, got {}",
                self.interaction
            )));
        }
        Ok(())
    }

    /// Dimension of the symmetrized two-boson sector, M(M+1)/2.
    pub fn pair_dimension(&self) -> usize {
        self.sites * (self.sites + 1) / 2
    }
}

/// Lexicographically ordered basis of unordered site pairs (r, s) with r ≤ s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBasis {
    sites: usize,
    pairs: Vec<(usize, usize)>,
}

/// Enumerate the symmetrized two-boson basis for `spec`.
pub fn build_basis(spec: &LatticeSpec) -> Result<PairBasis> {
    spec.validate()?;
    let m = spec.sites;
    let mut pairs = Vec::with_capacity(m * (m + 1) / 2);
    for r in 0..m {
        for s in r..m {
            pairs.push((r, s));
        }
    }
    Ok(PairBasis { sites: m, pairs })
}

impl PairBasis {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The pair stored at basis index `i`.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Basis index of the unordered pair {a, b}, or `None` if out of range.
    ///
    /// The lexicographic layout admits a closed-form index: pairs starting at
    /// r occupy a block of M - r entries beginning at r·M - r(r-1)/2.
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        let (r, s) = if a <= b { (a, b) } else { (b, a) };
        if s >= self.sites {
            return None;
        }
        Some(r * self.sites - (r * r - r) / 2 + (s - r))
    }
}

/// Complex amplitudes over a [`PairBasis`], unit norm within 1e-12.
#[derive(Debug, Clone)]
pub struct TwoParticleState {
    sites: usize,
    amplitudes: Vec<Complex64>,
}

impl TwoParticleState {
    /// Wrap an amplitude vector, checking dimension and normalization.
    pub fn from_amplitudes(sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = sites * (sites + 1) / 2;
        if amplitudes.len() != dim {
            return Err(Error::Dimension(format!(
                "expected {} amplitudes for {} sites, got {}",
                dim,
                sites,
                amplitudes.len()
            )));
        }
        let state = Self { sites, amplitudes };
        let drift = (state.norm_sq() - 1.0).abs();
        if drift > STATE_NORM_TOL {
            return Err(Error::Numerical(format!(
                "state is not normalized: |‖ψ‖² - 1| = {drift:.3e}"
            )));
        }
        Ok(state)
    }

    pub(crate) fn new_unchecked(sites: usize, amplitudes: Vec<Complex64>) -> Self {
        Self { sites, amplitudes }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude on the unordered pair {a, b}.
    pub fn amplitude(&self, a: usize, b: usize) -> Complex64 {
        let (r, s) = if a <= b { (a, b) } else { (b, a) };
        assert!(s < self.sites, "site {s} out of range for {} sites", self.sites);
        self.amplitudes[r * self.sites - (r * r - r) / 2 + (s - r)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// The two-particle configurations used as walk inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Both particles on `site`.
    Doublon { site: usize },
    /// One particle on `site`, one on `site + 1`.
    Adjacent { site: usize },
    /// One particle on each of the two given sites (order irrelevant).
    Pair { a: usize, b: usize },
}

/// Unit-norm state with all weight on a single basis pair.
pub fn initial_state(kind: InitialState, basis: &PairBasis) -> Result<TwoParticleState> {
    let (a, b) = match kind {
        InitialState::Doublon { site } => (site, site),
        InitialState::Adjacent { site } => (site, site + 1),
        InitialState::Pair { a, b } => (a.min(b), a.max(b)),
    };
    let index = basis.index_of(a, b).ok_or_else(|| {
        Error::Config(format!(
            "initial sites ({a}, {b}) out of range for {} sites",
            basis.sites()
        ))
    })?;
    let mut amplitudes = vec![Complex64::ZERO; basis.len()];
    amplitudes[index] = Complex64::ONE;
    Ok(TwoParticleState::new_unchecked(basis.sites(), amplitudes))
}

/// Real symmetric two-particle Hamiltonian over a [`PairBasis`].
///
/// Stored as a diagonal plus per-row coupling lists; every row couples to at
/// most four other pair states, so sparse storage keeps large lattices cheap
/// and [`HamiltonianMatrix::to_dense`] feeds the eigensolver.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    sites: usize,
    diag: Vec<f64>,
    couplings: Vec<Vec<(usize, f64)>>,
}

/// Assemble the two-particle Hamiltonian matrix in the symmetrized basis.
pub fn build_hamiltonian(spec: &LatticeSpec, basis: &PairBasis) -> Result<HamiltonianMatrix> {
    spec.validate()?;
    if basis.sites() != spec.sites {
        return Err(Error::Dimension(format!(
            "basis built for {} sites, spec has {}",
            basis.sites(),
            spec.sites
        )));
    }
    let m = spec.sites;
    let j = spec.hopping;
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut diag = vec![0.0; basis.len()];
    let mut couplings = vec![Vec::new(); basis.len()];

    for (i, &(r, s)) in basis.pairs().iter().enumerate() {
        if r == s {
            diag[i] = spec.interaction;
            // a doublon splits by moving one particle left or right
            for t in [r.wrapping_sub(1), r + 1] {
                if t < m {
                    let target = basis.index_of(r, t).expect("in range");
                    couplings[i].push((target, -sqrt2 * j));
                }
            }
        } else {
            let moves = [
                (r.wrapping_sub(1), s),
                (r + 1, s),
                (r, s.wrapping_sub(1)),
                (r, s + 1),
            ];
            for (a, b) in moves {
                if a < m && b < m {
                    let target = basis.index_of(a, b).expect("in range");
                    let weight = if a == b { -sqrt2 * j } else { -j };
                    couplings[i].push((target, weight));
                }
            }
        }
    }

    Ok(HamiltonianMatrix { sites: m, diag, couplings })
}

impl HamiltonianMatrix {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Matrix element ⟨i|H|j⟩.
    pub fn element(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        self.couplings[i]
            .iter()
            .find(|&&(k, _)| k == j)
            .map_or(0.0, |&(_, v)| v)
    }

    /// Number of unordered coupled basis pairs (each stored twice internally).
    pub fn coupling_count(&self) -> usize {
        self.couplings.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// y = H x for complex amplitude vectors.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        for i in 0..x.len() {
            let mut acc = self.diag[i] * x[i];
            for &(j, v) in &self.couplings[i] {
                acc += v * x[j];
            }
            y[i] = acc;
        }
    }

    /// Energy expectation ⟨ψ|H|ψ⟩ (real for a symmetric H).
    pub fn expectation(&self, state: &TwoParticleState) -> f64 {
        let x = state.amplitudes();
        let mut acc = 0.0;
        for i in 0..x.len() {
            let mut hx = self.diag[i] * x[i];
            for &(j, v) in &self.couplings[i] {
                hx += v * x[j];
            }
            acc += (x[i].conj() * hx).re;
        }
        acc
    }

    /// Gershgorin bound on the spectral radius.
    pub(crate) fn spectral_bound(&self) -> f64 {
        let mut bound: f64 = 0.0;
        for i in 0..self.dim() {
            let row: f64 =
                self.diag[i].abs() + self.couplings[i].iter().map(|&(_, v)| v.abs()).sum::<f64>();
            bound = bound.max(row);
        }
        bound
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut dense = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            dense[(i, i)] = self.diag[i];
            for &(j, v) in &self.couplings[i] {
                dense[(i, j)] = v;
            }
        }
        dense
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(m: usize, u: f64) -> LatticeSpec {
        LatticeSpec::new(m, 1.0, u).unwrap()
    }

    #[test]
    fn basis_dimension() {
        assert_eq!(build_basis(&spec(3, 0.0)).unwrap().len(), 6);
        assert_eq!(build_basis(&spec(29, 0.0)).unwrap().len(), 435);
    }

    #[test]
    fn basis_enumeration_m2() {
        let basis = build_basis(&spec(2, 0.0)).unwrap();
        assert_eq!(basis.pairs(), &[(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn basis_index_round_trip() {
        let basis = build_basis(&spec(17, 0.0)).unwrap();
        for i in 0..basis.len() {
            let (r, s) = basis.pair(i);
            assert_eq!(basis.index_of(r, s), Some(i));
            assert_eq!(basis.index_of(s, r), Some(i));
        }
        assert_eq!(basis.index_of(0, 17), None);
    }

    #[test]
    fn rejects_single_site() {
        assert!(LatticeSpec::new(1, 1.0, 0.0).is_err());
        assert!(LatticeSpec::new(5, 0.0, 0.0).is_err());
        assert!(LatticeSpec::new(5, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn hamiltonian_elements_m2() {
        let spec = spec(2, 5.0);
        let basis = build_basis(&spec).unwrap();
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let dd = basis.index_of(0, 0).unwrap();
        let ad = basis.index_of(0, 1).unwrap();
        // U/2·n(n-1) with n = 2 on a doublon
        assert_relative_eq!(h.element(dd, dd), 5.0);
        // doublon to adjacent pair carries the bosonic √2
        assert_relative_eq!(h.element(dd, ad), -std::f64::consts::SQRT_2);
        // no double occupancy on a split pair
        assert_relative_eq!(h.element(ad, ad), 0.0);
    }

    #[test]
    fn hamiltonian_symmetric_with_allowed_entries() {
        let spec = spec(7, 3.5);
        let basis = build_basis(&spec).unwrap();
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let sqrt2 = std::f64::consts::SQRT_2;
        for i in 0..h.dim() {
            let (r, s) = basis.pair(i);
            assert_eq!(h.element(i, i), if r == s { 3.5 } else { 0.0 });
            for j in 0..h.dim() {
                assert_eq!(h.element(i, j), h.element(j, i));
                if i != j {
                    let v = h.element(i, j);
                    assert!(
                        v == 0.0 || v == -1.0 || v == -sqrt2,
                        "unexpected off-diagonal {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn coupling_count_m3_by_enumeration() {
        // hand count for M = 3: four doublon links (-√2 J) and two pair links (-J)
        let spec = spec(3, 2.0);
        let basis = build_basis(&spec).unwrap();
        let h = build_hamiltonian(&spec, &basis).unwrap();
        assert_eq!(h.coupling_count(), 6);
        let mut sqrt2_links = 0;
        let mut plain_links = 0;
        for i in 0..h.dim() {
            for j in (i + 1)..h.dim() {
                let v = h.element(i, j);
                if v == -std::f64::consts::SQRT_2 {
                    sqrt2_links += 1;
                } else if v == -1.0 {
                    plain_links += 1;
                }
            }
        }
        assert_eq!((sqrt2_links, plain_links), (4, 2));
    }

    #[test]
    fn initial_states() {
        let basis = build_basis(&spec(5, 0.0)).unwrap();
        let st = initial_state(InitialState::Doublon { site: 0 }, &basis).unwrap();
        assert_eq!(st.amplitude(0, 0), Complex64::ONE);
        assert_relative_eq!(st.norm_sq(), 1.0);

        let st = initial_state(InitialState::Adjacent { site: 1 }, &basis).unwrap();
        assert_eq!(st.amplitude(1, 2), Complex64::ONE);

        // unordered input normalizes to (1, 4)
        let st = initial_state(InitialState::Pair { a: 4, b: 1 }, &basis).unwrap();
        assert_eq!(st.amplitude(1, 4), Complex64::ONE);
        assert_eq!(st.amplitude(4, 1), Complex64::ONE);
    }

    #[test]
    fn initial_state_out_of_range() {
        let basis = build_basis(&spec(5, 0.0)).unwrap();
        assert!(initial_state(InitialState::Adjacent { site: 4 }, &basis).is_err());
        assert!(initial_state(InitialState::Doublon { site: 5 }, &basis).is_err());
    }

    #[test]
    fn state_normalization_gate() {
        let err = TwoParticleState::from_amplitudes(2, vec![Complex64::new(0.5, 0.0); 3]);
        assert!(err.is_err());
        let ok = TwoParticleState::from_amplitudes(
            2,
            vec![Complex64::ONE, Complex64::ZERO, Complex64::ZERO],
        );
        assert!(ok.is_ok());
    }
}
