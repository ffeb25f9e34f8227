// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum discord with projective measurements on one qubit.
//!
//! `𝒟 = I(A:B) - 𝒥` with the classical correlation
//! `𝒥 = max_Π [S(ρ^A) - Σ_k p_k S(ρ_k^A)]` over rank-1 projective
//! measurements `{|n⟩⟨n|, |n⊥⟩⟨n⊥|}` on B. The direction `n` is searched on a
//! uniform `(θ, φ)` grid; the best few grid points are refined by shrinking
//! local grids and polished with Newton steps on the sphere.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2, Vector3};

use super::register::{entropy2, weighted_entropy2, RegisterMap, TwoQubitState};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::fockspace::FockBasis;
use crate::model::{Bipartition, Party};
use crate::C64;

/// Agreement expected between discord and entanglement on pure states,
/// and between discord evaluations at different grid resolutions.
pub const DISCORD_GRID_TOLERANCE: f64 = 5e-3;

/// Rank-1 projective measurement along the Bloch direction `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `n = (cos θ/2, e^{iφ} sin θ/2)` and its orthogonal complement.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), e * s], [e.conj() * s, C64::new(-c, 0.0)]]
    }

    pub fn projectors(&self) -> [Matrix2<C64>; 2] {
        self.vectors().map(|v| Matrix2::from_fn(|i, j| v[i] * v[j].conj()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordSettings {
    pub theta_points: usize,
    pub phi_points: usize,
    /// Refinement rounds always performed.
    pub min_rounds: usize,
    pub max_rounds: usize,
    /// Stop refining once a round improves the conditional entropy by less
    /// than this and the local step is below `min_step`.
    pub tolerance: f64,
    /// Angular step (radians) the refinement must reach before stopping.
    pub min_step: f64,
}

impl Default for DiscordSettings {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            min_rounds: 3,
            max_rounds: 40,
            tolerance: 1e-12,
            min_step: 1e-7,
        }
    }
}

impl DiscordSettings {
    /// The bare uniform grid with no local refinement.
    pub fn grid_only(theta_points: usize, phi_points: usize) -> Self {
        Self {
            theta_points,
            phi_points,
            min_rounds: 0,
            max_rounds: 0,
            tolerance: f64::INFINITY,
            min_step: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_points < 2 || self.phi_points < 1 || self.max_rounds < self.min_rounds || !(self.tolerance >= 0.0) {
            return Err(Error::InvalidParameter(format!("invalid discord settings {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    /// Classical correlation `𝒥`.
    pub classical: f64,
    pub mutual_information: f64,
    pub measurement: MeasurementBasis,
    /// Improvement achieved by the last refinement round.
    pub last_improvement: f64,
}

/// `Σ_k p_k S(ρ_k^A)` for a measurement on the second qubit.
fn conditional_entropy(m: &nalgebra::Matrix4<C64>, basis: &MeasurementBasis) -> f64 {
    basis
        .vectors()
        .iter()
        .map(|n| {
            // ⟨n|_B ρ |n⟩_B as an operator on A
            let block = Matrix2::from_fn(|a, a2| {
                let mut z = C64::new(0.0, 0.0);
                for b in 0..2 {
                    for b2 in 0..2 {
                        z += n[b].conj() * m[(2 * a + b, 2 * a2 + b2)] * n[b2];
                    }
                }
                z
            });
            weighted_entropy2(&block)
        })
        .sum()
}

/// Grid minima refined independently, so that nearly degenerate basins are
/// all explored.
const STARTS: usize = 4;
/// Newton iterations of the final polish.
const POLISH_ITERS: usize = 30;

fn bloch(theta: f64, phi: f64) -> Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3::new(st * cp, st * sp, ct)
}

fn angles(n: &Vector3<f64>) -> (f64, f64) {
    (n.z.clamp(-1.0, 1.0).acos(), n.y.atan2(n.x).rem_euclid(2.0 * PI))
}

/// Minimum of `f` over the sphere: uniform grid, shrinking local grids around
/// the best few grid points, then a Newton polish of each.
fn minimize(f: &impl Fn(f64, f64) -> f64, settings: &DiscordSettings) -> ((f64, f64, f64), f64) {
    let nt = settings.theta_points.max(2);
    let np = settings.phi_points.max(1);
    let dt = PI / (nt - 1) as f64;
    let dp = 2.0 * PI / np as f64;
    let mut grid = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = i as f64 * dt;
        for j in 0..np {
            let phi = j as f64 * dp;
            grid.push((f(theta, phi), theta, phi));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    if settings.max_rounds == 0 {
        return (grid[0], 0.0);
    }

    // `n` and `-n` describe the same measurement.
    let separation = (3.0 * dt.max(dp)).min(0.5 * PI).cos();
    let mut starts: Vec<(f64, f64, f64)> = Vec::with_capacity(STARTS);
    for &g in &grid {
        let n = bloch(g.1, g.2);
        if starts.iter().all(|s| bloch(s.1, s.2).dot(&n).abs() < separation) {
            starts.push(g);
            if starts.len() == STARTS {
                break;
            }
        }
    }

    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut last_improvement = 0.0;
    for start in starts {
        let (refined, improvement) = refine(f, start, dt, dp, settings);
        let polished = polish(f, refined);
        if polished.0 < best.0 {
            best = polished;
            last_improvement = improvement;
        }
    }
    (best, last_improvement)
}

/// Shrinking 9×9 grids centred on the running best point.
fn refine(f: &impl Fn(f64, f64) -> f64, start: (f64, f64, f64), mut dt: f64, mut dp: f64, settings: &DiscordSettings) -> ((f64, f64, f64), f64) {
    let mut best = start;
    let mut last_improvement = 0.0;
    for round in 0..settings.max_rounds {
        let (v0, t0, p0) = best;
        let (ht, hp) = (dt / 4.0, dp / 4.0);
        for i in -4i32..=4 {
            for j in -4i32..=4 {
                let (theta, phi) = (t0 + i as f64 * ht, p0 + j as f64 * hp);
                let v = f(theta, phi);
                if v < best.0 {
                    best = (v, theta, phi);
                }
            }
        }
        // A moving centre keeps the step; only a stalled one shrinks it.
        if best.1 == t0 && best.2 == p0 {
            dt = ht;
            dp = hp;
        }
        last_improvement = v0 - best.0;
        let converged = last_improvement < settings.tolerance && dt.max(dp) < settings.min_step;
        if round + 1 >= settings.min_rounds && converged {
            break;
        }
    }
    (best, last_improvement)
}

/// Newton steps in the tangent plane with finite-difference derivatives.
fn polish(f: &impl Fn(f64, f64) -> f64, start: (f64, f64, f64)) -> (f64, f64, f64) {
    let eval = |n: &Vector3<f64>| {
        let (t, p) = angles(n);
        (f(t, p), t, p)
    };
    let mut n = bloch(start.1, start.2);
    let mut cur = eval(&n);
    if start.0 < cur.0 {
        return start;
    }
    let h = 1e-4;
    for _ in 0..POLISH_ITERS {
        let a = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = (a - n * n.dot(&a)).normalize();
        let e2 = n.cross(&e1);
        let at = |x: f64, y: f64| (n + e1 * x + e2 * y).normalize();
        let g = |x: f64, y: f64| eval(&at(x, y)).0;
        let f0 = cur.0;
        let (fpx, fmx, fpy, fmy) = (g(h, 0.0), g(-h, 0.0), g(0.0, h), g(0.0, -h));
        let hxy = (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h);
        let grad = Vector2::new(fpx - fmx, fpy - fmy) / (2.0 * h);
        let hess = Matrix2::new((fpx - 2.0 * f0 + fmx) / (h * h), hxy, hxy, (fpy - 2.0 * f0 + fmy) / (h * h));
        let newton = (hess[(0, 0)] > 0.0 && hess.determinant() > 0.0)
            .then(|| hess.try_inverse().map(|inv| -(inv * grad)))
            .flatten();
        let mut step = newton.unwrap_or(-grad);
        if step.norm() > 0.1 {
            step *= 0.1 / step.norm();
        }
        let mut moved = false;
        for _ in 0..40 {
            let cand_n = at(step.x, step.y);
            let cand = eval(&cand_n);
            if cand.0 < cur.0 {
                n = cand_n;
                cur = cand;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved || step.norm() < 1e-12 {
            break;
        }
    }
    cur
}

/// Discord of a register state with the measurement on `measured`.
pub fn discord_details(state: &TwoQubitState, measured: Party, settings: &DiscordSettings) -> DiscordResult {
    // Arrange the measured qubit second.
    let st = match measured {
        Party::B => state.clone(),
        Party::A => state.swapped(),
    };
    let m = st.matrix();
    let s_a = entropy2(&st.reduced(Party::A));
    let s_b = entropy2(&st.reduced(Party::B));
    let s_ab = st.entropy();
    let mutual = s_a + s_b - s_ab;

    let f = |theta: f64, phi: f64| conditional_entropy(m, &MeasurementBasis::new(theta, phi));
    let (best, last_improvement) = minimize(&f, settings);

    let (cond, theta, phi) = best;
    let classical = s_a - cond;
    let discord = (mutual - classical).max(0.0);
    // Fold the direction back into θ ∈ [0, π], φ ∈ [0, 2π).
    let (mut theta, mut phi) = (theta.rem_euclid(2.0 * PI), phi);
    if theta > PI {
        theta = 2.0 * PI - theta;
        phi += PI;
    }
    DiscordResult {
        discord,
        classical,
        mutual_information: mutual,
        measurement: MeasurementBasis::new(theta, phi.rem_euclid(2.0 * PI)),
        last_improvement,
    }
}

pub fn quantum_discord(state: &TwoQubitState, measured: Party, settings: &DiscordSettings) -> f64 {
    discord_details(state, measured, settings).discord
}

/// `P₁₁ · 𝒟(ρ₁₁)`; zero when the (1,1) sector is empty.
pub fn discord_of_particles(rho: &DensityMatrix, basis: &FockBasis, partition: &Bipartition, measured: Party, settings: &DiscordSettings) -> Result<f64> {
    let map = RegisterMap::new(basis, partition)?;
    Ok(match map.project(rho) {
        Some((p, reg)) => p * quantum_discord(&reg, measured, settings),
        None => 0.0,
    })
}

/// `Σ_k P_{k,N-k} 𝒟(ρ_{k,N-k})` over all sectors.
///
/// In the `(2,0)` and `(0,2)` sectors one party holds no particle, so its
/// register is one-dimensional and the sector carries no discord.
pub fn general_discord_of_particles(rho: &DensityMatrix, basis: &FockBasis, partition: &Bipartition, measured: Party, settings: &DiscordSettings) -> Result<f64> {
    let sectors = super::register::sector_decompose(rho, basis, partition)?;
    let mut total = 0.0;
    for k in 0..=basis.particles() {
        let p = sectors.probability(k);
        if k == 1 {
            if let Some(state) = sectors.state(1) {
                let reg = super::register::to_register(state, basis, partition)?;
                total += p * quantum_discord(&reg, measured, settings);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn projectors_resolve_identity() {
        let b = MeasurementBasis::new(1.1, 2.3);
        let [p, q] = b.projectors();
        assert!((p + q - Matrix2::identity()).norm() < 1e-15);
        assert!((p * p - p).norm() < 1e-15);
        assert!((p.adjoint() - p).norm() < 1e-15);
        assert!((p * q).norm() < 1e-15);
    }

    #[test]
    fn bell_state_has_unit_discord() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = TwoQubitState::from_pure([c(0.0), c(s), c(s), c(0.0)]).unwrap();
        for party in [Party::A, Party::B] {
            let d = quantum_discord(&bell, party, &DiscordSettings::default());
            assert!((d - 1.0).abs() < 1e-12, "{d}");
        }
    }

    #[test]
    fn product_state_has_no_discord() {
        let st = TwoQubitState::from_pure([c(0.6), c(0.8), c(0.0), c(0.0)]).unwrap();
        let r = discord_details(&st, Party::B, &DiscordSettings::default());
        assert!(r.discord < 1e-12 && r.mutual_information.abs() < 1e-12);
    }

    #[test]
    fn werner_grid_resolutions_agree() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = TwoQubitState::from_pure([c(0.0), c(s), c(-s), c(0.0)]).unwrap();
        let w = TwoQubitState::new(bell.matrix() * c(0.75) + nalgebra::Matrix4::identity() * c(0.0625)).unwrap();
        let coarse = quantum_discord(&w, Party::B, &DiscordSettings::grid_only(16, 32));
        let fine = quantum_discord(&w, Party::B, &DiscordSettings::grid_only(128, 256));
        let refined = quantum_discord(&w, Party::B, &DiscordSettings::default());
        assert!((coarse - fine).abs() < 1e-3);
        assert!((refined - fine).abs() < 1e-3);
        assert!(refined > 0.0 && refined < 1.0);
    }
}
