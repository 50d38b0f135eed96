//! Mean-field field dynamics and thermal-ensemble intensity correlations.
//!
//! The classical limit of the two-boson chain is a discrete nonlinear
//! Schrödinger field Ψ_m with
//!
//! ```text
//! H[Ψ] = -J Σ_⟨l,m⟩ Ψ_l* Ψ_m + γ Σ_m |Ψ_m|⁴
//! i dΨ_m/dt = -J (Ψ_{m+1} + Ψ_{m-1}) + 2γ |Ψ_m|² Ψ_m
//! ```
//!
//! on the same open chain. Thermal inputs are modeled by drawing the field at
//! the input sites per realization (circular-Gaussian by default, mean power
//! 1 per input site; random-phase as an alternative), integrating each draw
//! with fixed-step RK4, and averaging intensities:
//!
//! ```text
//! ⟨I_q⟩,   Γ^cl_{q,r} = ⟨I_q I_r⟩,   Γ^{F,cl}_{q,r} = ⟨I_q I_r⟩ - ½⟨I_q⟩⟨I_r⟩.
//! ```
//!
//! Ensembles are reproducible: realization k draws from stream k of a
//! counter-mode generator seeded by the ensemble seed, and accumulation uses
//! a fixed chunked reduction order, so results are bitwise identical for a
//! given seed regardless of thread count.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::observables::{CorrelationKind, CorrelationMatrix};

/// Relative power-conservation budget for one integration.
const POWER_TOL: f64 = 1e-8;
/// Relative budget for the conserved field Hamiltonian.
const ENERGY_TOL: f64 = 1e-6;
/// Allowed intensity change when halving dt (convergence gate).
const DT_GATE: f64 = 1e-6;
/// Realizations per accumulation chunk; fixed so the reduction order does not
/// depend on the thread count.
const CHUNK: usize = 64;

/// Complex field amplitudes Ψ_m over the chain.
#[derive(Debug, Clone)]
pub struct ClassicalField {
    amplitudes: Vec<Complex64>,
}

impl ClassicalField {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::Config("field needs at least 2 sites".into()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Config("field amplitudes must be finite".into()));
        }
        Ok(Self { amplitudes })
    }

    pub fn zeros(sites: usize) -> Result<Self> {
        Self::new(vec![Complex64::ZERO; sites])
    }

    pub fn sites(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Site intensities |Ψ_m|².
    pub fn intensities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Total power P = Σ |Ψ_m|², conserved by the dynamics.
    pub fn power(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Value of the conserved field Hamiltonian H[Ψ].
    pub fn energy(&self, hopping: f64, nonlinearity: f64) -> f64 {
        let mut h = 0.0;
        for m in 0..self.amplitudes.len() {
            if m + 1 < self.amplitudes.len() {
                h -= 2.0 * hopping * (self.amplitudes[m].conj() * self.amplitudes[m + 1]).re;
            }
            h += nonlinearity * self.amplitudes[m].norm_sqr().powi(2);
        }
        h
    }
}

/// Integration parameters for one field trajectory.
#[derive(Debug, Clone, Copy)]
pub struct DnlsSpec {
    pub hopping: f64,
    /// Nonlinear coefficient γ (either sign).
    pub nonlinearity: f64,
    /// Horizon T in units of 1/J.
    pub time: f64,
    /// RK4 step; the trajectory uses ceil(T/dt) equal steps.
    pub dt: f64,
}

impl DnlsSpec {
    fn validate(&self) -> Result<()> {
        if !(self.hopping > 0.0) || !self.hopping.is_finite() {
            return Err(Error::Config(format!(
                "hopping must be positive and finite, got {}",
                self.hopping
            )));
        }
        if !self.nonlinearity.is_finite() {
            return Err(Error::Config("nonlinearity must be finite".into()));
        }
        if !self.time.is_finite() || self.time < 0.0 {
            return Err(Error::Config(format!(
                "time must be finite and nonnegative, got {}",
                self.time
            )));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }
}

fn derivative(hopping: f64, nonlinearity: f64, field: &[Complex64], out: &mut [Complex64]) {
    let m = field.len();
    for i in 0..m {
        let left = if i > 0 { field[i - 1] } else { Complex64::ZERO };
        let right = if i + 1 < m { field[i + 1] } else { Complex64::ZERO };
        let rhs = -hopping * (left + right)
            + 2.0 * nonlinearity * field[i].norm_sqr() * field[i];
        out[i] = Complex64::new(rhs.im, -rhs.re); // multiply by -i
    }
}

/// Integrate the field to `spec.time` with fixed-step RK4.
///
/// Power and the field Hamiltonian are checked against their initial values;
/// a violation is a step-size error and aborts the run rather than being
/// absorbed by rescaling.
pub fn dnls_evolve(field: &ClassicalField, spec: &DnlsSpec) -> Result<ClassicalField> {
    spec.validate()?;
    if spec.time == 0.0 {
        return Ok(field.clone());
    }
    let steps = (spec.time / spec.dt).ceil() as usize;
    let h = spec.time / steps as f64;
    let n = field.sites();

    let power0 = field.power();
    let energy0 = field.energy(spec.hopping, spec.nonlinearity);

    let mut psi = field.amplitudes().to_vec();
    let mut k1 = vec![Complex64::ZERO; n];
    let mut k2 = vec![Complex64::ZERO; n];
    let mut k3 = vec![Complex64::ZERO; n];
    let mut k4 = vec![Complex64::ZERO; n];
    let mut stage = vec![Complex64::ZERO; n];

    for _ in 0..steps {
        derivative(spec.hopping, spec.nonlinearity, &psi, &mut k1);
        for i in 0..n {
            stage[i] = psi[i] + 0.5 * h * k1[i];
        }
        derivative(spec.hopping, spec.nonlinearity, &stage, &mut k2);
        for i in 0..n {
            stage[i] = psi[i] + 0.5 * h * k2[i];
        }
        derivative(spec.hopping, spec.nonlinearity, &stage, &mut k3);
        for i in 0..n {
            stage[i] = psi[i] + h * k3[i];
        }
        derivative(spec.hopping, spec.nonlinearity, &stage, &mut k4);
        for i in 0..n {
            psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    let out = ClassicalField { amplitudes: psi };
    let power_drift = (out.power() - power0).abs();
    if !power_drift.is_finite() || power_drift > POWER_TOL * power0.max(1.0) {
        return Err(Error::Numerical(format!(
            "power drift {power_drift:.3e} exceeds budget; dt = {} is too large",
            spec.dt
        )));
    }
    let energy_drift = (out.energy(spec.hopping, spec.nonlinearity) - energy0).abs();
    if !energy_drift.is_finite() || energy_drift > ENERGY_TOL * energy0.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "energy drift {energy_drift:.3e} exceeds budget; dt = {} is too large",
            spec.dt
        )));
    }
    Ok(out)
}

/// Statistics of the per-realization input amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputStatistics {
    /// Independent complex Gaussians, mean power 1 per input site.
    CircularGaussian,
    /// Unit amplitude with an independent uniform phase per input site.
    RandomPhase,
}

/// Thermal ensemble definition.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleSpec {
    pub sites: usize,
    /// Input sites (m, n); equal sites superpose both draws on one site.
    pub inputs: (usize, usize),
    pub realizations: usize,
    pub seed: u64,
    pub statistics: InputStatistics,
    pub hopping: f64,
    pub nonlinearity: f64,
    pub time: f64,
    pub dt: f64,
}

impl EnsembleSpec {
    fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::Config(format!("sites must be at least 2, got {}", self.sites)));
        }
        if self.inputs.0 >= self.sites || self.inputs.1 >= self.sites {
            return Err(Error::Config(format!(
                "input sites {:?} out of range for {} sites",
                self.inputs, self.sites
            )));
        }
        if self.realizations < 2 {
            return Err(Error::Config(format!(
                "need at least 2 realizations, got {}",
                self.realizations
            )));
        }
        DnlsSpec {
            hopping: self.hopping,
            nonlinearity: self.nonlinearity,
            time: self.time,
            dt: self.dt,
        }
        .validate()
    }

    fn draw_input(&self, realization: usize) -> ClassicalField {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(realization as u64);
        let mut amplitudes = vec![Complex64::ZERO; self.sites];
        for site in [self.inputs.0, self.inputs.1] {
            let draw = match self.statistics {
                InputStatistics::CircularGaussian => {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                }
                InputStatistics::RandomPhase => {
                    let phase = rng.random::<f64>() * std::f64::consts::TAU;
                    Complex64::from_polar(1.0, phase)
                }
            };
            amplitudes[site] += draw;
        }
        ClassicalField { amplitudes }
    }

    /// Step for one realization: the nominal dt is sized for the mean input
    /// power 2, and strong draws rotate faster under the nonlinearity, so the
    /// step shrinks with the drawn power. Constant within a trajectory.
    fn scaled_dt(&self, input: &ClassicalField) -> f64 {
        let reference = 2.0 * self.hopping + 2.0 * self.nonlinearity.abs() * 2.0;
        let actual = 2.0 * self.hopping + 2.0 * self.nonlinearity.abs() * input.power();
        self.dt * (reference / actual).min(1.0)
    }
}

/// Ensemble-averaged intensities and intensity correlations.
#[derive(Debug)]
pub struct EnsembleResult {
    /// ⟨I_q⟩ per site.
    pub mean_intensity: Vec<f64>,
    /// Bare Γ^cl_{q,r} = ⟨I_q I_r⟩.
    pub correlation: CorrelationMatrix,
    /// Γ^{F,cl}_{q,r} = ⟨I_q I_r⟩ - ½⟨I_q⟩⟨I_r⟩.
    pub fluctuation: CorrelationMatrix,
    /// Standard error of each ⟨I_q I_r⟩ estimate.
    pub correlation_std_err: DMatrix<f64>,
    pub realizations: usize,
}

struct Partial {
    sum_i: Vec<f64>,
    sum_ii: Vec<f64>,
    sum_ii_sq: Vec<f64>,
}

/// Draw, evolve, and average `spec.realizations` thermal inputs.
pub fn thermal_ensemble_correlation(spec: &EnsembleSpec) -> Result<EnsembleResult> {
    spec.validate()?;
    let m = spec.sites;

    // convergence gate: halving dt must not move the first realization's
    // final intensities beyond DT_GATE
    {
        let probe = spec.draw_input(0);
        let dt = spec.scaled_dt(&probe);
        let coarse = run_one(spec, &probe, dt)?;
        let fine = run_one(spec, &probe, dt / 2.0)?;
        let worst = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        if worst >= DT_GATE {
            return Err(Error::Numerical(format!(
                "dt = {} fails the halving gate: intensities moved by {worst:.3e}",
                spec.dt
            )));
        }
    }

    let chunks = spec.realizations.div_ceil(CHUNK);
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = ((chunk + 1) * CHUNK).min(spec.realizations);
            let mut acc = Partial {
                sum_i: vec![0.0; m],
                sum_ii: vec![0.0; m * m],
                sum_ii_sq: vec![0.0; m * m],
            };
            for realization in start..end {
                let input = spec.draw_input(realization);
                let dt = spec.scaled_dt(&input);
                let intensity = run_one(spec, &input, dt)?;
                for q in 0..m {
                    acc.sum_i[q] += intensity[q];
                    for r in 0..m {
                        let prod = intensity[q] * intensity[r];
                        acc.sum_ii[q * m + r] += prod;
                        acc.sum_ii_sq[q * m + r] += prod * prod;
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<Partial>>>()?;

    // sequential reduction in chunk order keeps the sums bitwise reproducible
    let mut sum_i = vec![0.0; m];
    let mut sum_ii = vec![0.0; m * m];
    let mut sum_ii_sq = vec![0.0; m * m];
    for p in &partials {
        for q in 0..m {
            sum_i[q] += p.sum_i[q];
        }
        for k in 0..m * m {
            sum_ii[k] += p.sum_ii[k];
            sum_ii_sq[k] += p.sum_ii_sq[k];
        }
    }

    let n = spec.realizations as f64;
    let mean_intensity: Vec<f64> = sum_i.iter().map(|s| s / n).collect();
    let mut correlation = DMatrix::zeros(m, m);
    let mut fluctuation = DMatrix::zeros(m, m);
    let mut std_err = DMatrix::zeros(m, m);
    for q in 0..m {
        for r in 0..m {
            let mean = sum_ii[q * m + r] / n;
            correlation[(q, r)] = mean;
            fluctuation[(q, r)] = mean - 0.5 * mean_intensity[q] * mean_intensity[r];
            let var = (sum_ii_sq[q * m + r] / n - mean * mean).max(0.0) * n / (n - 1.0);
            std_err[(q, r)] = (var / n).sqrt();
        }
    }

    Ok(EnsembleResult {
        mean_intensity,
        correlation: CorrelationMatrix::new(CorrelationKind::Bare, correlation),
        fluctuation: CorrelationMatrix::new(CorrelationKind::Fluctuation, fluctuation),
        correlation_std_err: std_err,
        realizations: spec.realizations,
    })
}

fn run_one(spec: &EnsembleSpec, input: &ClassicalField, dt: f64) -> Result<Vec<f64>> {
    let evolved = dnls_evolve(
        input,
        &DnlsSpec {
            hopping: spec.hopping,
            nonlinearity: spec.nonlinearity,
            time: spec.time,
            dt,
        },
    )?;
    Ok(evolved.intensities())
}

/// Frobenius distance between two fluctuation correlators after scaling each
/// to unit Frobenius norm; ranges over [0, 2].
pub fn quantum_classical_distance(
    a: &CorrelationMatrix,
    b: &CorrelationMatrix,
) -> Result<f64> {
    if a.kind() != CorrelationKind::Fluctuation || b.kind() != CorrelationKind::Fluctuation {
        return Err(Error::Usage(
            "distance is defined between fluctuation correlators".into(),
        ));
    }
    if a.sites() != b.sites() {
        return Err(Error::Dimension(format!(
            "matrices have {} and {} sites",
            a.sites(),
            b.sites()
        )));
    }
    let norm_a = a.data().norm();
    let norm_b = b.data().norm();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(Error::Usage("distance to a zero matrix is undefined".into()));
    }
    let mut acc = 0.0;
    for q in 0..a.sites() {
        for r in 0..a.sites() {
            let d = a.get(q, r) / norm_a - b.get(q, r) / norm_b;
            acc += d * d;
        }
    }
    Ok(acc.sqrt())
}
