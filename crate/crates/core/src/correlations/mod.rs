// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Superselection-compliant correlation measures of two identical particles.
//!
//! A global Fock-space state is projected onto the sector with one particle
//! per party, mapped onto two distinguishable qubits and analysed there.

mod discord;
mod entanglement;
mod register;

pub use discord::{
    discord_details, discord_of_particles, general_discord_of_particles, quantum_discord,
    DiscordResult, DiscordSettings, MeasurementBasis, DISCORD_GRID_TOLERANCE,
};
pub use entanglement::{
    binary_entropy, concurrence, concurrence_roots, entanglement_of_formation,
    entanglement_of_particles,
};
pub(crate) use entanglement::sigma_yy;
pub use register::{
    party_reduced_state, sector_decompose, to_register, RegisterMap, SectorDecomposition,
    TwoQubitState, EMPTY_SECTOR,
};

use crate::density::DensityMatrix;
use crate::error::Result;
use crate::fockspace::FockBasis;
use crate::model::{Bipartition, Party};

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// `-Tr[ρ ln ρ] / ln d`, in `[0, 1]`.
pub fn decoherence_entropy(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    if d < 2 {
        return 0.0;
    }
    (rho.entropy_bits() / (d as f64).log2()).clamp(0.0, 1.0)
}

/// All per-sample quantities of one density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSnapshot {
    pub p11: f64,
    /// `ℰ(ρ₁₁)`, the entanglement of formation of the register state.
    pub e_modes: f64,
    pub e_p: f64,
    pub d_p: f64,
    pub purity: f64,
    pub s_d: f64,
}

/// Evaluates the correlation measures for a fixed basis and bipartition.
#[derive(Debug, Clone)]
pub struct CorrelationAnalyzer {
    map: RegisterMap,
    measured: Party,
    settings: DiscordSettings,
}

impl CorrelationAnalyzer {
    pub fn new(basis: &FockBasis, partition: &Bipartition, measured: Party, settings: DiscordSettings) -> Result<Self> {
        settings.validate()?;
        Ok(Self {
            map: RegisterMap::new(basis, partition)?,
            measured,
            settings,
        })
    }

    pub fn measured(&self) -> Party {
        self.measured
    }

    pub fn settings(&self) -> &DiscordSettings {
        &self.settings
    }

    pub fn register_map(&self) -> &RegisterMap {
        &self.map
    }

    pub fn analyze(&self, rho: &DensityMatrix) -> CorrelationSnapshot {
        let (p11, e_modes, discord) = match self.map.project(rho) {
            Some((p, reg)) => (
                p,
                entanglement_of_formation(concurrence(&reg)),
                quantum_discord(&reg, self.measured, &self.settings),
            ),
            None => (0.0, 0.0, 0.0),
        };
        CorrelationSnapshot {
            p11,
            e_modes,
            e_p: p11 * e_modes,
            d_p: p11 * discord,
            purity: purity(rho),
            s_d: decoherence_entropy(rho),
        }
    }
}
