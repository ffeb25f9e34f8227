// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Bose-Hubbard ring and Fermi-Hubbard dimer with noisy hopping.
//!
//! Bose ring: `H = -T Σ_i q_i (b†_i b_{i+1} + h.c.) + V/2 Σ_i n_i (n_i - 1)`
//! with periodic boundary, one noise channel per bond.
//!
//! Fermi dimer: `H = -T Σ_σ q_σ (c†_{Lσ} c_{Rσ} + h.c.) + V/2 Σ_i n_{i↑} n_{i↓}`
//! with one noise channel per spin. Mode order is `(L↑, L↓, R↑, R↓)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fockspace::{create_state, hop_op, FockBasis, OperatorMatrix, Statistics};
use crate::{CMatrix, CVector, C64};

pub const FERMI_MODE_LABELS: [&str; 4] = ["L↑", "L↓", "R↑", "R↓"];
pub const L_UP: usize = 0;
pub const L_DOWN: usize = 1;
pub const R_UP: usize = 2;
pub const R_DOWN: usize = 3;

const Q_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    BoseRing { sites: usize },
    FermiDimer,
}

impl Lattice {
    pub const BOSE_RING_4: Lattice = Lattice::BoseRing { sites: 4 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    hopping: f64,
    interaction: f64,
    lattice: Lattice,
}

impl HubbardParams {
    pub fn new(hopping: f64, interaction: f64, lattice: Lattice) -> Result<Self> {
        if hopping == 0.0 || !hopping.is_finite() {
            return Err(Error::InvalidParameter("hopping T must be finite and non-zero".into()));
        }
        if !interaction.is_finite() {
            return Err(Error::InvalidParameter("interaction V must be finite".into()));
        }
        if let Lattice::BoseRing { sites } = lattice {
            if sites < 3 {
                return Err(Error::InvalidParameter(format!(
                    "a periodic ring needs at least 3 sites, got {sites}"
                )));
            }
        }
        Ok(Self {
            hopping,
            interaction,
            lattice,
        })
    }

    /// `T = 1`, `V = v`: energies in units of |T| and times in units of 1/|T|.
    pub fn relative(v: f64, lattice: Lattice) -> Result<Self> {
        Self::new(1.0, v, lattice)
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn interaction(&self) -> f64 {
        self.interaction
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// `v = V / T`.
    pub fn relative_interaction(&self) -> f64 {
        self.interaction / self.hopping
    }

    /// `τ_s = 1/|T|`.
    pub fn timescale(&self) -> f64 {
        1.0 / self.hopping.abs()
    }
}

/// Basis of two particles for a lattice.
pub fn lattice_basis(lattice: Lattice) -> Result<FockBasis> {
    match lattice {
        Lattice::BoseRing { sites } => {
            FockBasis::new(Statistics::Bose, sites, 2)?.with_labels((1..=sites).map(|i| format!("site{i}")))
        }
        Lattice::FermiDimer => FockBasis::new(Statistics::Fermi, 4, 2)?.with_labels(FERMI_MODE_LABELS),
    }
}

/// Precomputed operator pieces of a Hubbard Hamiltonian.
#[derive(Debug, Clone)]
pub struct HubbardModel {
    params: HubbardParams,
    basis: FockBasis,
    bonds: Vec<(usize, usize)>,
    hops: Vec<DMatrix<f64>>,
    interaction: Vec<f64>,
}

impl HubbardModel {
    pub fn new(params: HubbardParams) -> Result<Self> {
        let basis = lattice_basis(params.lattice)?;
        let bonds: Vec<(usize, usize)> = match params.lattice {
            Lattice::BoseRing { sites } => (0..sites).map(|i| (i, (i + 1) % sites)).collect(),
            Lattice::FermiDimer => vec![(L_UP, R_UP), (L_DOWN, R_DOWN)],
        };
        let mut hops = Vec::with_capacity(bonds.len());
        for &(i, j) in &bonds {
            let h = &hop_op(&basis, i, j)? + &hop_op(&basis, j, i)?;
            hops.push(h.matrix().map(|z| z.re));
        }
        let v = params.interaction;
        let interaction = basis
            .states()
            .iter()
            .map(|occ| match params.lattice {
                Lattice::BoseRing { .. } => {
                    0.5 * v * occ.iter().map(|&n| (n as f64) * (n as f64 - 1.0)).sum::<f64>()
                }
                Lattice::FermiDimer => {
                    let doublons = (occ[L_UP] * occ[L_DOWN] + occ[R_UP] * occ[R_DOWN]) as f64;
                    0.5 * v * doublons
                }
            })
            .collect();
        Ok(Self {
            params,
            basis,
            bonds,
            hops,
            interaction,
        })
    }

    pub fn params(&self) -> &HubbardParams {
        &self.params
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// One independent noise channel per bond (ring) or per spin (dimer).
    pub fn channels(&self) -> usize {
        self.bonds.len()
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    fn check_noise(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.channels() {
            return Err(Error::DimensionMismatch {
                expected: self.channels(),
                found: q.len(),
            });
        }
        if let Some(bad) = q.iter().find(|x| !(x.abs() <= 1.0 + Q_SLACK)) {
            return Err(Error::InvalidParameter(format!("noise value {bad} outside [-1, 1]")));
        }
        Ok(())
    }

    /// Real symmetric Hamiltonian for the noise values `q`.
    ///
    /// No bounds check: the propagator calls this with values produced by
    /// the noise generators, which are bounded by construction.
    pub fn real_hamiltonian(&self, q: &[f64]) -> DMatrix<f64> {
        let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.interaction));
        let t = self.params.hopping;
        for (hop, &qc) in self.hops.iter().zip(q) {
            h += hop * (-t * qc);
        }
        h
    }

    pub fn hamiltonian(&self, q: &[f64]) -> Result<OperatorMatrix> {
        self.check_noise(q)?;
        Ok(OperatorMatrix::new(self.real_hamiltonian(q).map(|x| C64::new(x, 0.0))))
    }

    pub fn noiseless_hamiltonian(&self) -> OperatorMatrix {
        OperatorMatrix::new(
            self.real_hamiltonian(&vec![1.0; self.channels()]).map(|x| C64::new(x, 0.0)),
        )
    }

    pub fn default_partition(&self) -> Bipartition {
        match self.params.lattice {
            Lattice::BoseRing { .. } => Bipartition::bose_default(),
            Lattice::FermiDimer => Bipartition::fermi_default(),
        }
    }
}

/// Hamiltonian of the Bose-Hubbard ring for per-bond noise values.
pub fn bose_hubbard(params: HubbardParams, q: &[f64]) -> Result<OperatorMatrix> {
    if !matches!(params.lattice, Lattice::BoseRing { .. }) {
        return Err(Error::InvalidParameter("bose_hubbard needs a BoseRing lattice".into()));
    }
    HubbardModel::new(params)?.hamiltonian(q)
}

/// Hamiltonian of the Fermi-Hubbard dimer for per-spin noise values `[q↑, q↓]`.
pub fn fermi_hubbard(params: HubbardParams, q: &[f64]) -> Result<OperatorMatrix> {
    if params.lattice != Lattice::FermiDimer {
        return Err(Error::InvalidParameter("fermi_hubbard needs the FermiDimer lattice".into()));
    }
    HubbardModel::new(params)?.hamiltonian(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    PsiB,
    XiB,
    PsiBprime,
    PsiF,
    XiF,
    UpsilonF,
}

impl StateLabel {
    pub const ALL: [StateLabel; 6] = [
        StateLabel::PsiB,
        StateLabel::XiB,
        StateLabel::PsiBprime,
        StateLabel::PsiF,
        StateLabel::XiF,
        StateLabel::UpsilonF,
    ];

    pub fn statistics(self) -> Statistics {
        match self {
            StateLabel::PsiB | StateLabel::XiB | StateLabel::PsiBprime => Statistics::Bose,
            StateLabel::PsiF | StateLabel::XiF | StateLabel::UpsilonF => Statistics::Fermi,
        }
    }

    /// Terms `(coefficient, creation operators left to right)` before normalisation.
    fn terms(self) -> Vec<(f64, [usize; 2])> {
        match self {
            // b†_3 b†_1 + b†_4 b†_2
            StateLabel::PsiB => vec![(1.0, [2, 0]), (1.0, [3, 1])],
            // b†_4 b†_1 + b†_4 b†_2
            StateLabel::XiB => vec![(1.0, [3, 0]), (1.0, [3, 1])],
            // b†_1 b†_3 + √3 b†_2 b†_4
            StateLabel::PsiBprime => vec![(1.0, [0, 2]), (3f64.sqrt(), [1, 3])],
            StateLabel::PsiF => vec![(1.0, [L_UP, L_DOWN]), (1.0, [R_UP, R_DOWN])],
            // (c†_{L↑} + c†_{R↑}) c†_{R↓}
            StateLabel::XiF => vec![(1.0, [L_UP, R_DOWN]), (1.0, [R_UP, R_DOWN])],
            StateLabel::UpsilonF => vec![(1.0, [L_UP, R_DOWN]), (1.0, [R_UP, L_DOWN])],
        }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StateLabel::PsiB => "PsiB",
            StateLabel::XiB => "XiB",
            StateLabel::PsiBprime => "PsiBprime",
            StateLabel::PsiF => "PsiF",
            StateLabel::XiF => "XiF",
            StateLabel::UpsilonF => "UpsilonF",
        };
        f.write_str(s)
    }
}

impl FromStr for StateLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StateLabel::ALL
            .into_iter()
            .find(|l| l.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown state label {s:?}")))
    }
}

/// Normalised initial state; `label` is `None` for custom amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    label: Option<StateLabel>,
    amplitudes: CVector,
}

impl InitialState {
    pub fn custom(basis: &FockBasis, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("state has zero norm".into()));
        }
        Ok(Self {
            label: None,
            amplitudes: amplitudes / C64::new(norm, 0.0),
        })
    }

    pub fn label(&self) -> Option<StateLabel> {
        self.label
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }
}

pub fn initial_state(label: StateLabel, basis: &FockBasis) -> Result<InitialState> {
    let expected = label.statistics();
    if basis.statistics() != expected || basis.modes() != 4 || basis.particles() != 2 {
        return Err(Error::IncompatibleState {
            label: label.to_string(),
            expected,
        });
    }
    let mut psi = CVector::zeros(basis.dim());
    for (coef, ops) in label.terms() {
        psi += create_state(basis, &ops)? * C64::new(coef, 0.0);
    }
    let mut state = InitialState::custom(basis, psi)?;
    state.label = Some(label);
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::A => "A",
            Party::B => "B",
        })
    }
}

impl FromStr for Party {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Party::A),
            "B" | "b" => Ok(Party::B),
            _ => Err(Error::InvalidParameter(format!("unknown party {s:?}"))),
        }
    }
}

/// Split of the modes into two parties of exactly two modes each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    party_a: [usize; 2],
    party_b: [usize; 2],
}

impl Bipartition {
    pub fn new(party_a: &[usize], party_b: &[usize], modes: usize) -> Result<Self> {
        if party_a.len() != 2 || party_b.len() != 2 {
            return Err(Error::InvalidParameter(
                "each party must control exactly two modes".into(),
            ));
        }
        let mut all: Vec<usize> = party_a.iter().chain(party_b).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != 4 || modes != 4 || all.iter().any(|&m| m >= modes) {
            return Err(Error::InvalidParameter(format!(
                "parties {party_a:?} and {party_b:?} do not partition {modes} modes"
            )));
        }
        let mut a = [party_a[0], party_a[1]];
        let mut b = [party_b[0], party_b[1]];
        a.sort_unstable();
        b.sort_unstable();
        Ok(Self { party_a: a, party_b: b })
    }

    /// `A = {site1, site2}`, `B = {site3, site4}`.
    pub fn bose_default() -> Self {
        Self {
            party_a: [0, 1],
            party_b: [2, 3],
        }
    }

    /// `A = {L↑, R↑}`, `B = {L↓, R↓}`.
    pub fn fermi_default() -> Self {
        Self {
            party_a: [L_UP, R_UP],
            party_b: [L_DOWN, R_DOWN],
        }
    }

    /// Modes of a party in ascending order; position is the register qubit value.
    pub fn modes(&self, party: Party) -> [usize; 2] {
        match party {
            Party::A => self.party_a,
            Party::B => self.party_b,
        }
    }

    pub fn party_of(&self, mode: usize) -> Party {
        if self.party_a.contains(&mode) {
            Party::A
        } else {
            Party::B
        }
    }

    /// Number of particles party A holds in an occupation vector.
    pub fn count_a(&self, occupations: &[u8]) -> usize {
        self.party_a.iter().map(|&m| occupations[m] as usize).sum()
    }
}

/// `S_z = ½ Σ_i (n_{i↑} - n_{i↓})` on the dimer basis.
pub fn spin_z(basis: &FockBasis) -> OperatorMatrix {
    let diag = basis.states().iter().map(|occ| {
        let up = (occ[L_UP] + occ[R_UP]) as f64;
        let down = (occ[L_DOWN] + occ[R_DOWN]) as f64;
        C64::new(0.5 * (up - down), 0.0)
    });
    OperatorMatrix::new(CMatrix::from_diagonal(&CVector::from_iterator(basis.dim(), diag)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::total_number_op;
    use nalgebra::SymmetricEigen;

    fn spectrum(h: &OperatorMatrix) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(h.matrix().clone()).eigenvalues.iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn bose_diagonal_elements() {
        let p = HubbardParams::new(1.0, 3.0, Lattice::BOSE_RING_4).unwrap();
        let h = bose_hubbard(p, &[0.3, -0.2, 1.0, 0.5]).unwrap();
        let b = lattice_basis(p.lattice()).unwrap();
        let d = b.index_of(&[2, 0, 0, 0]).unwrap();
        assert!((h.matrix()[(d, d)].re - 3.0).abs() < 1e-15);
        let s = b.index_of(&[1, 1, 0, 0]).unwrap();
        assert_eq!(h.matrix()[(s, s)].re, 0.0);
    }

    #[test]
    fn free_ring_spectrum_is_pair_sums() {
        // Oracle: single-particle ring energies -2cos(2πk/4) = {-2, 0, 0, 2};
        // two bosons occupy any multiset of two levels.
        let single: Vec<f64> = (0..4)
            .map(|k| -2.0 * (2.0 * std::f64::consts::PI * k as f64 / 4.0).cos())
            .collect();
        let mut expected = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                expected.push(single[i] + single[j]);
            }
        }
        expected.sort_by(f64::total_cmp);
        let p = HubbardParams::new(1.0, 0.0, Lattice::BOSE_RING_4).unwrap();
        let ev = spectrum(&bose_hubbard(p, &[1.0; 4]).unwrap());
        for (a, b) in ev.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?} vs {expected:?}");
        }
    }

    #[test]
    fn fermi_matrix_elements() {
        let p = HubbardParams::new(1.5, 4.0, Lattice::FermiDimer).unwrap();
        let q = [0.7, -0.4];
        let h = fermi_hubbard(p, &q).unwrap();
        let b = lattice_basis(Lattice::FermiDimer).unwrap();
        let doublon = b.index_of(&[1, 1, 0, 0]).unwrap();
        assert!((h.matrix()[(doublon, doublon)].re - 2.0).abs() < 1e-15);
        // <L↑ R↓| H |R↑ R↓>: moving the up fermion R→L, no modes in between are occupied.
        let bra = b.index_of(&[1, 0, 0, 1]).unwrap();
        let ket = b.index_of(&[0, 0, 1, 1]).unwrap();
        assert!((h.matrix()[(bra, ket)].re - (-1.5 * 0.7)).abs() < 1e-15);
    }

    #[test]
    fn fermi_hamiltonian_conserves_spin() {
        let p = HubbardParams::new(1.0, 2.0, Lattice::FermiDimer).unwrap();
        let h = fermi_hubbard(p, &[0.3, -0.9]).unwrap();
        let sz = spin_z(&lattice_basis(Lattice::FermiDimer).unwrap());
        assert_eq!(sz.commutator_norm(&h), 0.0);
    }

    #[test]
    fn hermitian_and_number_conserving() {
        for lattice in [Lattice::BOSE_RING_4, Lattice::FermiDimer] {
            let model = HubbardModel::new(HubbardParams::new(-0.8, 5.0, lattice).unwrap()).unwrap();
            let q: Vec<f64> = (0..model.channels()).map(|c| 0.9 - 0.5 * c as f64).collect();
            let h = model.hamiltonian(&q).unwrap();
            assert!(h.hermiticity_defect() <= 1e-14);
            assert!(total_number_op(model.basis()).commutator_norm(&h) <= 1e-12);
        }
    }

    #[test]
    fn spectrum_scales_with_hopping() {
        for lattice in [Lattice::BOSE_RING_4, Lattice::FermiDimer] {
            let q = [0.4, -1.0, 0.25, 0.8];
            let n = HubbardModel::new(HubbardParams::new(1.0, 1.0, lattice).unwrap()).unwrap().channels();
            let h1 = HubbardModel::new(HubbardParams::new(1.3, 2.1, lattice).unwrap()).unwrap();
            let h2 = HubbardModel::new(HubbardParams::new(2.6, 4.2, lattice).unwrap()).unwrap();
            let s1 = spectrum(&h1.hamiltonian(&q[..n]).unwrap());
            let s2 = spectrum(&h2.hamiltonian(&q[..n]).unwrap());
            for (a, b) in s1.iter().zip(&s2) {
                assert!((2.0 * a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn noise_values_are_validated() {
        let model = HubbardModel::new(HubbardParams::relative(0.0, Lattice::FermiDimer).unwrap()).unwrap();
        assert!(model.hamiltonian(&[1.2, 0.0]).is_err());
        assert!(model.hamiltonian(&[1.0]).is_err());
        assert!(HubbardParams::new(0.0, 1.0, Lattice::FermiDimer).is_err());
        assert!(HubbardParams::new(1.0, 1.0, Lattice::BoseRing { sites: 2 }).is_err());
    }

    #[test]
    fn general_rings_are_supported() {
        let model = HubbardModel::new(HubbardParams::relative(1.0, Lattice::BoseRing { sites: 6 }).unwrap()).unwrap();
        assert_eq!(model.channels(), 6);
        assert_eq!(model.dim(), 21);
        assert!(model.noiseless_hamiltonian().hermiticity_defect() < 1e-15);
    }

    #[test]
    fn initial_states_are_normalised() {
        for label in StateLabel::ALL {
            let lattice = match label.statistics() {
                Statistics::Bose => Lattice::BOSE_RING_4,
                Statistics::Fermi => Lattice::FermiDimer,
            };
            let basis = lattice_basis(lattice).unwrap();
            let s = initial_state(label, &basis).unwrap();
            assert!((s.amplitudes().norm() - 1.0).abs() < 1e-15, "{label}");
            assert_eq!(s.label(), Some(label));
        }
    }

    #[test]
    fn psi_f_is_renormalised_from_half_prefactor() {
        let basis = lattice_basis(Lattice::FermiDimer).unwrap();
        let s = initial_state(StateLabel::PsiF, &basis).unwrap();
        let i = basis.index_of(&[1, 1, 0, 0]).unwrap();
        let j = basis.index_of(&[0, 0, 1, 1]).unwrap();
        assert!((s.amplitudes()[i].re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((s.amplitudes()[j].re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn labels_must_match_statistics() {
        let bose = lattice_basis(Lattice::BOSE_RING_4).unwrap();
        assert!(matches!(
            initial_state(StateLabel::PsiF, &bose),
            Err(Error::IncompatibleState { .. })
        ));
        let fermi = lattice_basis(Lattice::FermiDimer).unwrap();
        assert!(initial_state(StateLabel::XiB, &fermi).is_err());
    }

    #[test]
    fn labels_parse_round_trip() {
        for label in StateLabel::ALL {
            assert_eq!(label.to_string().parse::<StateLabel>().unwrap(), label);
        }
        assert!("Phi".parse::<StateLabel>().is_err());
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(&[0, 1], &[2, 3], 4).is_ok());
        assert!(Bipartition::new(&[0, 1], &[1, 3], 4).is_err());
        assert!(Bipartition::new(&[0], &[1, 2, 3], 4).is_err());
        let p = Bipartition::new(&[2, 0], &[3, 1], 4).unwrap();
        assert_eq!(p, Bipartition::fermi_default());
        assert_eq!(p.party_of(1), Party::B);
    }
}
