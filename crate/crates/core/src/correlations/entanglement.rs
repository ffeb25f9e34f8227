// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Concurrence, entanglement of formation and entanglement of particles.

use nalgebra::{Matrix4, SymmetricEigen};

use super::register::{RegisterMap, TwoQubitState};
use crate::density::DensityMatrix;
use crate::error::Result;
use crate::fockspace::FockBasis;
use crate::model::Bipartition;
use crate::C64;

/// `σ_y ⊗ σ_y`, real in the computational basis.
pub(crate) fn sigma_yy() -> Matrix4<C64> {
    let mut y = Matrix4::zeros();
    y[(0, 3)] = C64::new(-1.0, 0.0);
    y[(1, 2)] = C64::new(1.0, 0.0);
    y[(2, 1)] = C64::new(1.0, 0.0);
    y[(3, 0)] = C64::new(-1.0, 0.0);
    y
}

/// Square roots of the eigenvalues of `ρ ρ̃`, in decreasing order.
///
/// With `ρ = A A†` and `A = V √Λ`, the nonzero spectrum of `ρ ρ̃` equals that of
/// `M M†` for `M = A† (σ_y⊗σ_y) A*`, so the square roots are the singular
/// values of `M`. This stays accurate for rank-deficient `ρ`, where a matrix
/// square root of a near-zero eigenvalue loses half the digits.
pub fn concurrence_roots(state: &TwoQubitState) -> [f64; 4] {
    let eig = SymmetricEigen::new(*state.matrix());
    let mut a = eig.eigenvectors;
    for k in 0..4 {
        let w = eig.eigenvalues[k].max(0.0).sqrt();
        for i in 0..4 {
            a[(i, k)] *= w;
        }
    }
    let m = a.adjoint() * sigma_yy() * a.conjugate();
    let sv = m.singular_values();
    let mut roots = [sv[0], sv[1], sv[2], sv[3]];
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

/// Wootters concurrence `max(0, √λ₁ - √λ₂ - √λ₃ - √λ₄)`.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    let r = concurrence_roots(state);
    (r[0] - r[1] - r[2] - r[3]).clamp(0.0, 1.0)
}

/// Binary entropy in bits with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let mut h = 0.0;
    for p in [x, 1.0 - x] {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// `h((1 + √(1 - C²))/2)`.
pub fn entanglement_of_formation(concurrence: f64) -> f64 {
    let c = concurrence.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// `P₁₁ · ℰ(ρ₁₁)`; zero when the (1,1) sector is empty.
pub fn entanglement_of_particles(rho: &DensityMatrix, basis: &FockBasis, partition: &Bipartition) -> Result<f64> {
    let map = RegisterMap::new(basis, partition)?;
    Ok(match map.project(rho) {
        Some((p, reg)) => p * entanglement_of_formation(concurrence(&reg)),
        None => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn werner(p: f64) -> TwoQubitState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = TwoQubitState::from_pure([c(0.0), c(s), c(-s), c(0.0)]).unwrap();
        let m = bell.matrix() * c(p) + Matrix4::identity() * c((1.0 - p) / 4.0);
        TwoQubitState::new(m).unwrap()
    }

    #[test]
    fn bell_and_mixed_extremes() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = TwoQubitState::from_pure([c(s), c(0.0), c(0.0), c(s)]).unwrap();
        assert!((concurrence(&bell) - 1.0).abs() < 1e-12);
        assert_eq!(concurrence(&TwoQubitState::maximally_mixed()), 0.0);
    }

    #[test]
    fn werner_concurrence() {
        // (3p - 1)/2 for the Werner family
        assert!((concurrence(&werner(0.75)) - 0.625).abs() < 1e-12);
        assert_eq!(concurrence(&werner(0.3)), 0.0);
    }

    #[test]
    fn product_state_has_zero_concurrence() {
        let st = TwoQubitState::from_pure([c(0.6), c(0.0), C64::new(0.0, 0.8), c(0.0)]).unwrap();
        assert!(concurrence(&st) < 1e-12);
    }

    #[test]
    fn formation_values() {
        assert_eq!(entanglement_of_formation(0.0), 0.0);
        assert!((entanglement_of_formation(1.0) - 1.0).abs() < 1e-15);
        // h(0.9) for C = 0.6
        let h09 = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert!((entanglement_of_formation(0.6) - h09).abs() < 1e-14);
        let grid: Vec<f64> = (0..=100).map(|i| entanglement_of_formation(i as f64 / 100.0)).collect();
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }
}
