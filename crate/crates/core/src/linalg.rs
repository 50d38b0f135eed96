//! Dense symmetric eigendecomposition shared by the propagator and the
//! spectrum module, with eigenvalues sorted ascending.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct Eigensystem {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column k holds the eigenvector belonging to `values[k]`.
    pub vectors: DMatrix<f64>,
}

pub(crate) fn symmetric_eigen(matrix: DMatrix<f64>) -> Result<Eigensystem> {
    let n = matrix.nrows();
    let eigen = nalgebra::linalg::SymmetricEigen::try_new(matrix, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));

    let values: Vec<f64> = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eigen.eigenvectors.column(src));
    }
    Ok(Eigensystem { values, vectors })
}

impl Eigensystem {
    /// Apply exp(-iHt) using the spectral decomposition.
    pub fn evolve(&self, amplitudes: &[Complex64], time: f64) -> Vec<Complex64> {
        let n = self.values.len();
        assert_eq!(amplitudes.len(), n);
        // project onto the eigenbasis
        let mut coeffs = vec![Complex64::ZERO; n];
        for k in 0..n {
            let col = self.vectors.column(k);
            let mut c = Complex64::ZERO;
            for i in 0..n {
                c += col[i] * amplitudes[i];
            }
            coeffs[k] = c * Complex64::from_polar(1.0, -self.values[k] * time);
        }
        // reconstruct
        let mut out = vec![Complex64::ZERO; n];
        for k in 0..n {
            let col = self.vectors.column(k);
            let c = coeffs[k];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for i in 0..n {
                out[i] += col[i] * c;
            }
        }
        out
    }
}
