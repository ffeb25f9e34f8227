// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Entanglement and discord of two identical particles in Hubbard lattices
//! driven by classical random-telegraph and 1/f^α noise.
//!
//! The crate is organised bottom-up:
//!
//! * [`fockspace`]: occupation-number bases and second-quantized operators.
//! * [`model`]: the Bose-Hubbard ring, the Fermi-Hubbard dimer and their initial states.
//! * [`noise`]: telegraph fluctuators, 1/f^α ensembles and spectral validation.
//! * [`propagator`]: Trotterized evolution and Monte-Carlo density-matrix averaging.
//! * [`correlations`]: superselection sectors, registers, concurrence, discord, mixing.
//! * [`experiment`]: scenario orchestration producing [`experiment::CorrelationRecord`]s.
//! * [`validation`]: property suite and small-instance oracles used by the CLI.

pub mod correlations;
pub mod density;
pub mod error;
pub mod experiment;
pub mod fockspace;
pub mod model;
pub mod noise;
pub mod propagator;
pub mod seed;
pub mod validation;

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for every operator and density matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex state vector.
pub type CVector = nalgebra::DVector<C64>;

pub use correlations::{
    concurrence, decoherence_entropy, discord_of_particles, entanglement_of_formation,
    entanglement_of_particles, general_discord_of_particles, purity, quantum_discord,
    sector_decompose, to_register, CorrelationAnalyzer, DiscordSettings, MeasurementBasis,
    SectorDecomposition, TwoQubitState,
};
pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use experiment::{run_scenario, CorrelationRecord, ModelKind, Scenario, ScenarioRun};
pub use fockspace::{build_basis, FockBasis, OperatorMatrix, Statistics};
pub use model::{Bipartition, HubbardModel, HubbardParams, InitialState, Lattice, Party, StateLabel};
pub use noise::{InitialSign, NoiseChannelSet, NoiseKind, NoiseOptions, RateBand};
pub use propagator::{EnsembleAverage, EnsembleOptions, EvolutionConfig, StepSampling};
