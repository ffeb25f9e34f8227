// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Occupation-number bases and second-quantized operators.
//!
//! Operators are built directly inside a fixed particle-number sector.
//! Fermionic signs follow the canonical mode order of the basis: creating or
//! annihilating a particle in mode `m` picks up `(-1)^(number of occupied
//! modes before m)`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    fn max_occupation(self, particles: usize) -> u8 {
        match self {
            Statistics::Bose => particles.min(u8::MAX as usize) as u8,
            Statistics::Fermi => 1,
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Bose => f.write_str("bose"),
            Statistics::Fermi => f.write_str("fermi"),
        }
    }
}

/// Enumerated basis of `particles` identical particles in `modes` modes.
///
/// States are ordered lexicographically (ascending) on their occupation
/// vectors, so index `0` is `(0, ..., 0, N)`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    statistics: Statistics,
    modes: usize,
    particles: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    labels: Vec<String>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.statistics == other.statistics
            && self.modes == other.modes
            && self.particles == other.particles
    }
}

impl FockBasis {
    pub fn new(statistics: Statistics, modes: usize, particles: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParameter("a Fock basis needs at least one mode".into()));
        }
        if statistics == Statistics::Fermi && particles > modes {
            return Err(Error::StatisticsViolation { modes, particles });
        }
        let max = statistics.max_occupation(particles);
        let mut states = Vec::new();
        let mut current = vec![0u8; modes];
        enumerate(&mut current, 0, particles, max, &mut states);
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let labels = (1..=modes).map(|m| format!("mode{m}")).collect();
        Ok(Self {
            statistics,
            modes,
            particles,
            states,
            index,
            labels,
        })
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.modes {
            return Err(Error::DimensionMismatch {
                expected: self.modes,
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// The same modes and statistics with a different particle number.
    pub fn with_particles(&self, particles: usize) -> Result<Self> {
        let basis = Self::new(self.statistics, self.modes, particles)?;
        basis.with_labels(self.labels.iter().cloned())
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &[u8] {
        &self.states[index]
    }

    pub fn index_of(&self, occupations: &[u8]) -> Option<usize> {
        self.index.get(occupations).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, mode: usize) -> Option<&str> {
        self.labels.get(mode).map(String::as_str)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            Err(Error::ModeOutOfRange {
                mode,
                modes: self.modes,
            })
        } else {
            Ok(())
        }
    }
}

fn enumerate(current: &mut [u8], mode: usize, remaining: usize, max: u8, out: &mut Vec<Vec<u8>>) {
    if mode + 1 == current.len() {
        if remaining <= max as usize {
            current[mode] = remaining as u8;
            out.push(current.to_vec());
        }
        return;
    }
    let upper = remaining.min(max as usize);
    for n in 0..=upper {
        current[mode] = n as u8;
        enumerate(current, mode + 1, remaining - n, max, out);
    }
    current[mode] = 0;
}

/// `build_basis` under its operational name.
pub fn build_basis(statistics: Statistics, modes: usize, particles: usize) -> Result<FockBasis> {
    FockBasis::new(statistics, modes, particles)
}

/// Dense complex matrix acting on (or between) particle-number sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix(CMatrix);

impl OperatorMatrix {
    pub fn new(matrix: CMatrix) -> Self {
        Self(matrix)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(CMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Max-abs entry of `A - A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        if self.0.nrows() != self.0.ncols() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Frobenius norm of `[A, B]`.
    pub fn commutator_norm(&self, other: &OperatorMatrix) -> f64 {
        (&self.0 * &other.0 - &other.0 * &self.0).norm()
    }

    pub fn apply(&self, state: &CVector) -> CVector {
        &self.0 * state
    }
}

impl std::ops::Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl std::ops::Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

fn fermion_sign(occupations: &[u8], mode: usize) -> f64 {
    let preceding: u32 = occupations[..mode].iter().map(|&n| n as u32).sum();
    if preceding % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Applies `a†_mode` to an occupation vector; `None` when the result vanishes.
pub fn raise(statistics: Statistics, occupations: &[u8], mode: usize) -> Option<(Vec<u8>, f64)> {
    let mut out = occupations.to_vec();
    let n = occupations[mode];
    match statistics {
        Statistics::Bose => {
            out[mode] = n + 1;
            Some((out, ((n + 1) as f64).sqrt()))
        }
        Statistics::Fermi => {
            if n == 1 {
                return None;
            }
            out[mode] = 1;
            Some((out, fermion_sign(occupations, mode)))
        }
    }
}

/// Applies `a_mode` to an occupation vector; `None` when the result vanishes.
pub fn lower(statistics: Statistics, occupations: &[u8], mode: usize) -> Option<(Vec<u8>, f64)> {
    let n = occupations[mode];
    if n == 0 {
        return None;
    }
    let mut out = occupations.to_vec();
    out[mode] = n - 1;
    let factor = match statistics {
        Statistics::Bose => (n as f64).sqrt(),
        Statistics::Fermi => fermion_sign(occupations, mode),
    };
    Some((out, factor))
}

/// `a†_mode` as a map from the `N-1`-particle sector onto `basis` (`N` particles).
pub fn creation_op(basis: &FockBasis, mode: usize) -> Result<OperatorMatrix> {
    basis.check_mode(mode)?;
    if basis.particles() == 0 {
        return Err(Error::InvalidParameter(
            "creation into the vacuum sector has no source sector".into(),
        ));
    }
    let source = basis.with_particles(basis.particles() - 1)?;
    let mut m = CMatrix::zeros(basis.dim(), source.dim());
    for (col, occ) in source.states().iter().enumerate() {
        if let Some((target, factor)) = raise(basis.statistics(), occ, mode) {
            if let Some(row) = basis.index_of(&target) {
                m[(row, col)] = C64::new(factor, 0.0);
            }
        }
    }
    Ok(OperatorMatrix(m))
}

/// `a_mode` as a map from `basis` (`N` particles) onto the `N-1`-particle sector.
pub fn annihilation_op(basis: &FockBasis, mode: usize) -> Result<OperatorMatrix> {
    Ok(creation_op(basis, mode)?.adjoint())
}

pub fn number_op(basis: &FockBasis, mode: usize) -> Result<OperatorMatrix> {
    basis.check_mode(mode)?;
    let diag = CVector::from_iterator(
        basis.dim(),
        basis.states().iter().map(|s| C64::new(s[mode] as f64, 0.0)),
    );
    Ok(OperatorMatrix(CMatrix::from_diagonal(&diag)))
}

pub fn total_number_op(basis: &FockBasis) -> OperatorMatrix {
    let n = C64::new(basis.particles() as f64, 0.0);
    OperatorMatrix(CMatrix::from_diagonal_element(basis.dim(), basis.dim(), n))
}

/// The in-sector bilinear `a†_to a_from`.
pub fn hop_op(basis: &FockBasis, to: usize, from: usize) -> Result<OperatorMatrix> {
    basis.check_mode(to)?;
    basis.check_mode(from)?;
    let stats = basis.statistics();
    let mut m = CMatrix::zeros(basis.dim(), basis.dim());
    for (col, occ) in basis.states().iter().enumerate() {
        let Some((mid, f1)) = lower(stats, occ, from) else {
            continue;
        };
        let Some((target, f2)) = raise(stats, &mid, to) else {
            continue;
        };
        let row = basis
            .index_of(&target)
            .expect("bilinear preserves particle number");
        m[(row, col)] += C64::new(f1 * f2, 0.0);
    }
    Ok(OperatorMatrix(m))
}

/// `a†_{m_1} a†_{m_2} ... a†_{m_k} |0⟩` expressed in `basis`.
///
/// `modes` lists the operators left to right as written; the rightmost acts
/// first. The result is zero when an operator annihilates the state.
pub fn create_state(basis: &FockBasis, modes: &[usize]) -> Result<CVector> {
    if modes.len() != basis.particles() {
        return Err(Error::DimensionMismatch {
            expected: basis.particles(),
            found: modes.len(),
        });
    }
    for &m in modes {
        basis.check_mode(m)?;
    }
    let mut occ = vec![0u8; basis.modes()];
    let mut amplitude = 1.0;
    for &m in modes.iter().rev() {
        match raise(basis.statistics(), &occ, m) {
            Some((next, f)) => {
                occ = next;
                amplitude *= f;
            }
            None => return Ok(CVector::zeros(basis.dim())),
        }
    }
    let mut v = CVector::zeros(basis.dim());
    let idx = basis.index_of(&occ).expect("occupation lies in the basis");
    v[idx] = C64::new(amplitude, 0.0);
    Ok(v)
}
