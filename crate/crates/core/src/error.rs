// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::fockspace::Statistics;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("statistics violation: {particles} fermions do not fit in {modes} modes")]
    StatisticsViolation { modes: usize, particles: usize },

    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state {label} requires {expected:?} statistics")]
    IncompatibleState { label: String, expected: Statistics },

    #[error("density matrix has eigenvalue {0:.3e} below the clipping threshold")]
    NegativeEigenvalue(f64),

    #[error("density matrix trace is {0:.6e}")]
    BadTrace(f64),

    #[error("state has weight {0:.3e} outside the (1,1) sector")]
    OutsideSector(f64),

    #[error("invalid rate band [{lower}, {upper}]")]
    InvalidBand { lower: f64, upper: f64 },

    #[error("frequency band [{lower}, {upper}] is not resolvable (resolvable: [{min}, {max}])")]
    UnresolvableBand {
        lower: f64,
        upper: f64,
        min: f64,
        max: f64,
    },

    #[error("no histories to average")]
    EmptyHistories,
}

pub type Result<T> = std::result::Result<T, Error>;
