// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Density matrices in a Fock basis.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

/// Eigenvalues in `(-CLIP_THRESHOLD, 0)` are float noise and get clipped;
/// anything lower is reported as an error.
pub const CLIP_THRESHOLD: f64 = 1e-10;

const INVARIANT_TOL: f64 = 1e-12;

/// Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn from_pure(state: &CVector) -> Result<Self> {
        let norm2 = state.norm_squared();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidParameter("zero or non-finite state vector".into()));
        }
        let matrix = state * state.adjoint() / C64::new(norm2, 0.0);
        Ok(Self { matrix })
    }

    /// Validates a matrix, clipping tiny negative eigenvalues.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.ncols(),
            });
        }
        let defect = (&matrix - matrix.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if defect > INVARIANT_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let herm = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let trace = herm.trace().re;
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::BadTrace(trace));
        }
        Self::clipped(herm)
    }

    /// Normalises a Hermitian PSD matrix with arbitrary positive trace.
    pub fn from_unnormalized(matrix: CMatrix) -> Result<Self> {
        let trace = matrix.trace().re;
        if trace <= 0.0 || !trace.is_finite() {
            return Err(Error::BadTrace(trace));
        }
        let scaled = matrix / C64::new(trace, 0.0);
        let herm = (&scaled + scaled.adjoint()) * C64::new(0.5, 0.0);
        Self::clipped(herm)
    }

    fn clipped(herm: CMatrix) -> Result<Self> {
        let eig = SymmetricEigen::new(herm.clone());
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -CLIP_THRESHOLD {
            return Err(Error::NegativeEigenvalue(min));
        }
        let matrix = if min < 0.0 {
            let clipped = eig.eigenvalues.map(|l| C64::new(l.max(0.0), 0.0));
            let rebuilt = &eig.eigenvectors * CMatrix::from_diagonal(&clipped) * eig.eigenvectors.adjoint();
            let trace = rebuilt.trace().re;
            rebuilt / C64::new(trace, 0.0)
        } else {
            herm
        };
        Ok(Self { matrix })
    }

    /// Wraps a matrix the caller guarantees to be a valid density matrix.
    pub(crate) fn new_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let v = C64::new(1.0 / dim as f64, 0.0);
        Self {
            matrix: CMatrix::from_diagonal_element(dim, dim, v),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        shannon_bits(self.eigenvalues().into_iter())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn fidelity_with_pure(&self, state: &CVector) -> f64 {
        (state.adjoint() * &self.matrix * state)[(0, 0)].re / state.norm_squared()
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`; negative round-off is ignored.
pub fn shannon_bits(probabilities: impl Iterator<Item = f64>) -> f64 {
    probabilities
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        + 0.0
}

/// `½ Σ |eig(a - b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = a.matrix() - b.matrix();
    let diff = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(diff);
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_invariants() {
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
        let rho = DensityMatrix::from_pure(&v).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert!(rho.entropy_bits().abs() < 1e-12);
        assert!(rho.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clipped() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(1.0 + 5e-11, 0.0);
        m[(1, 1)] = C64::new(-5e-11, 0.0);
        let rho = DensityMatrix::from_matrix(m).unwrap();
        assert!(rho.eigenvalues().iter().all(|&l| l >= 0.0));
        assert!((rho.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn genuinely_negative_spectrum_is_an_error() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(1.1, 0.0);
        m[(1, 1)] = C64::new(-0.1, 0.0);
        assert!(matches!(DensityMatrix::from_matrix(m), Err(Error::NegativeEigenvalue(_))));
    }

    #[test]
    fn non_hermitian_and_bad_trace_are_rejected() {
        let mut m = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::from_matrix(m), Err(Error::NotHermitian(_))));
        let m = CMatrix::identity(2, 2);
        assert!(matches!(DensityMatrix::from_matrix(m), Err(Error::BadTrace(_))));
    }

    #[test]
    fn maximally_mixed_values() {
        let rho = DensityMatrix::maximally_mixed(10);
        assert!((rho.purity() - 0.1).abs() < 1e-15);
        assert!((rho.entropy_bits() - 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_of_orthogonal_states_is_one() {
        let a = DensityMatrix::from_pure(&CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])).unwrap();
        let b = DensityMatrix::from_pure(&CVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(trace_distance(&a, &a).unwrap(), 0.0);
    }
}
