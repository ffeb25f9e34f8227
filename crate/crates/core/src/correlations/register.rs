// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Local particle-number sectors and the two-qubit register view.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};

use crate::density::{shannon_bits, DensityMatrix};
use crate::error::{Error, Result};
use crate::fockspace::{FockBasis, Statistics};
use crate::model::{Bipartition, Party};
use crate::{CMatrix, C64};

/// Below this the (1,1) sector is treated as empty.
pub const EMPTY_SECTOR: f64 = 1e-14;

/// Projection of a state onto the sectors `(k, N-k)`.
#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    probabilities: Vec<f64>,
    states: Vec<Option<DensityMatrix>>,
}

impl SectorDecomposition {
    /// `P_{k,N-k}` indexed by the particle count `k` of party A.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.probabilities.get(k).copied().unwrap_or(0.0)
    }

    /// Normalised sector state in the full Fock basis; `None` for empty sectors.
    pub fn state(&self, k: usize) -> Option<&DensityMatrix> {
        self.states.get(k).and_then(Option::as_ref)
    }

    pub fn p11(&self) -> f64 {
        self.probability(1)
    }
}

fn check_dim(rho: &DensityMatrix, basis: &FockBasis) -> Result<()> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

pub fn sector_decompose(rho: &DensityMatrix, basis: &FockBasis, partition: &Bipartition) -> Result<SectorDecomposition> {
    check_dim(rho, basis)?;
    let n = basis.particles();
    let counts: Vec<usize> = basis.states().iter().map(|occ| partition.count_a(occ)).collect();
    let m = rho.matrix();
    let mut probabilities = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut block = CMatrix::zeros(basis.dim(), basis.dim());
        for (i, &ki) in counts.iter().enumerate() {
            if ki != k {
                continue;
            }
            for (j, &kj) in counts.iter().enumerate() {
                if kj == k {
                    block[(i, j)] = m[(i, j)];
                }
            }
        }
        let p = block.trace().re.max(0.0);
        probabilities.push(p);
        states.push(if p > EMPTY_SECTOR {
            Some(DensityMatrix::from_unnormalized(block)?)
        } else {
            None
        });
    }
    Ok(SectorDecomposition { probabilities, states })
}

/// Fock indices and signs of the four register basis states `|q_A q_B⟩`.
///
/// Register state `|q_A q_B⟩` is `a†_{A[q_A]} a†_{B[q_B]} |0⟩`, party A's
/// operator written first. For fermions this differs from the canonical Fock
/// state by `-1` whenever the B mode precedes the A mode, so local mode
/// transformations act as local register unitaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterMap {
    indices: [usize; 4],
    signs: [i8; 4],
}

impl RegisterMap {
    pub fn new(basis: &FockBasis, partition: &Bipartition) -> Result<Self> {
        if basis.particles() != 2 || basis.modes() != 4 {
            return Err(Error::InvalidParameter(
                "registers need two particles in four modes".into(),
            ));
        }
        let a = partition.modes(Party::A);
        let b = partition.modes(Party::B);
        let mut indices = [0; 4];
        let mut signs = [1; 4];
        for qa in 0..2 {
            for qb in 0..2 {
                let r = 2 * qa + qb;
                let mut occ = vec![0u8; 4];
                occ[a[qa]] = 1;
                occ[b[qb]] = 1;
                indices[r] = basis
                    .index_of(&occ)
                    .ok_or_else(|| Error::InvalidParameter(format!("occupation {occ:?} missing from basis")))?;
                if basis.statistics() == Statistics::Fermi && b[qb] < a[qa] {
                    signs[r] = -1;
                }
            }
        }
        Ok(Self { indices, signs })
    }

    pub fn indices(&self) -> [usize; 4] {
        self.indices
    }

    pub fn signs(&self) -> [i8; 4] {
        self.signs
    }

    /// Unnormalised (1,1) block `Π₁₁ ρ Π₁₁` in register coordinates.
    pub fn block(&self, m: &CMatrix) -> Matrix4<C64> {
        Matrix4::from_fn(|r, s| {
            m[(self.indices[r], self.indices[s])] * (self.signs[r] * self.signs[s]) as f64
        })
    }

    /// `(P₁₁, ρ₁₁)` of a Fock-space state, or `None` for an empty sector.
    pub fn project(&self, rho: &DensityMatrix) -> Option<(f64, TwoQubitState)> {
        let block = self.block(rho.matrix());
        let p = block.trace().re;
        (p > EMPTY_SECTOR).then(|| (p, TwoQubitState::new_unchecked(hermitize(block / C64::new(p, 0.0)))))
    }

    /// Embeds a register state back into the Fock basis.
    pub fn embed(&self, state: &TwoQubitState, dim: usize) -> DensityMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for r in 0..4 {
            for s in 0..4 {
                m[(self.indices[r], self.indices[s])] = state.matrix()[(r, s)] * (self.signs[r] * self.signs[s]) as f64;
            }
        }
        DensityMatrix::new_unchecked(m)
    }
}

fn hermitize(m: Matrix4<C64>) -> Matrix4<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Maps a state supported on the (1,1) sector onto the register basis.
pub fn to_register(rho11: &DensityMatrix, basis: &FockBasis, partition: &Bipartition) -> Result<TwoQubitState> {
    check_dim(rho11, basis)?;
    let map = RegisterMap::new(basis, partition)?;
    let idx = map.indices();
    let m = rho11.matrix();
    let mut outside = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !(idx.contains(&i) && idx.contains(&j)) {
                outside += m[(i, j)].norm();
            }
        }
    }
    if outside > 1e-10 {
        return Err(Error::OutsideSector(outside));
    }
    TwoQubitState::new(map.block(m))
}

/// Density matrix of two distinguishable qubits, index `2 q_A + q_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Matrix4<C64>,
}

impl TwoQubitState {
    pub fn new(matrix: Matrix4<C64>) -> Result<Self> {
        let checked = DensityMatrix::from_matrix(CMatrix::from_fn(4, 4, |i, j| matrix[(i, j)]))?;
        Ok(Self {
            matrix: Matrix4::from_fn(|i, j| checked.matrix()[(i, j)]),
        })
    }

    pub(crate) fn new_unchecked(matrix: Matrix4<C64>) -> Self {
        Self { matrix }
    }

    pub fn from_pure(amplitudes: [C64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(amplitudes);
        let norm2 = v.norm_squared();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidParameter("zero register state".into()));
        }
        Ok(Self {
            matrix: v * v.adjoint() / C64::new(norm2, 0.0),
        })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Matrix4::identity() * C64::new(0.25, 0.0),
        }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(CMatrix::from_fn(4, 4, |i, j| self.matrix[(i, j)]))
    }

    /// Exchanges the roles of the two qubits.
    pub fn swapped(&self) -> Self {
        let p = |r: usize| 2 * (r % 2) + r / 2;
        Self {
            matrix: Matrix4::from_fn(|r, s| self.matrix[(p(r), p(s))]),
        }
    }

    pub fn reduced(&self, party: Party) -> Matrix2<C64> {
        let m = &self.matrix;
        match party {
            Party::A => Matrix2::from_fn(|a, b| m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)]),
            Party::B => Matrix2::from_fn(|a, b| m[(a, b)] + m[(2 + a, 2 + b)]),
        }
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = SymmetricEigen::new(self.matrix).eigenvalues;
        [e[0], e[1], e[2], e[3]]
    }

    pub fn entropy(&self) -> f64 {
        shannon_bits(self.eigenvalues().into_iter())
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `p · S(block / p)` in bits for a 2×2 Hermitian PSD block of trace `p`.
pub(crate) fn weighted_entropy2(block: &Matrix2<C64>) -> f64 {
    let a = block[(0, 0)].re;
    let d = block[(1, 1)].re;
    let p = a + d;
    if p <= 0.0 {
        return 0.0;
    }
    let r = (0.25 * (a - d) * (a - d) + block[(0, 1)].norm_sqr()).sqrt();
    let mut s = 0.0;
    for l in [0.5 * p + r, 0.5 * p - r] {
        if l > 0.0 {
            s -= l * (l / p).log2();
        }
    }
    s
}

pub(crate) fn entropy2(m: &Matrix2<C64>) -> f64 {
    weighted_entropy2(m)
}

/// Reduced state of one party in its own Fock space, all local particle numbers.
///
/// Local basis: the party's `n`-particle states for `n = 0..=N`, each block in
/// ascending lexicographic order. Fermionic amplitudes are reordered to put
/// party A's operators first before tracing.
pub fn party_reduced_state(rho: &DensityMatrix, basis: &FockBasis, partition: &Bipartition, party: Party) -> Result<DensityMatrix> {
    check_dim(rho, basis)?;
    let own = partition.modes(party);
    let other = partition.modes(party.other());
    let fermi = basis.statistics() == Statistics::Fermi;
    let a_modes = partition.modes(Party::A);
    let b_modes = partition.modes(Party::B);

    let mut local: Vec<Vec<u8>> = Vec::new();
    for n in 0..=basis.particles() {
        if let Ok(b) = FockBasis::new(basis.statistics(), own.len(), n) {
            local.extend(b.states().iter().cloned());
        }
    }
    let pos = |occ: &[u8]| -> usize {
        let key: Vec<u8> = own.iter().map(|&m| occ[m]).collect();
        local.iter().position(|s| *s == key).expect("local occupation enumerated")
    };
    let env = |occ: &[u8]| -> Vec<u8> { other.iter().map(|&m| occ[m]).collect() };
    let sign = |occ: &[u8]| -> f64 {
        if !fermi {
            return 1.0;
        }
        let mut swaps = 0;
        for &b in &b_modes {
            for &a in &a_modes {
                if b < a && occ[a] == 1 && occ[b] == 1 {
                    swaps += 1;
                }
            }
        }
        if swaps % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };

    let states = basis.states();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(local.len(), local.len());
    for (i, oi) in states.iter().enumerate() {
        let ei = env(oi);
        for (j, oj) in states.iter().enumerate() {
            if env(oj) == ei {
                out[(pos(oi), pos(oj))] += m[(i, j)] * (sign(oi) * sign(oj));
            }
        }
    }
    DensityMatrix::from_unnormalized(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::create_state;
    use crate::model::{initial_state, lattice_basis, Lattice, StateLabel};
    use crate::CVector;

    fn bose() -> FockBasis {
        lattice_basis(Lattice::BOSE_RING_4).unwrap()
    }

    fn fermi() -> FockBasis {
        lattice_basis(Lattice::FermiDimer).unwrap()
    }

    fn pure(basis: &FockBasis, psi: CVector) -> DensityMatrix {
        let _ = basis;
        DensityMatrix::from_pure(&psi).unwrap()
    }

    #[test]
    fn psi_b_lives_in_the_balanced_sector() {
        let b = bose();
        let psi = initial_state(StateLabel::PsiB, &b).unwrap().into_amplitudes();
        let d = sector_decompose(&pure(&b, psi), &b, &Bipartition::bose_default()).unwrap();
        assert!((d.p11() - 1.0).abs() < 1e-14);
        assert!(d.state(0).is_none() && d.state(2).is_none());
        assert!((d.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubly_occupied_party_is_sector_two() {
        let b = bose();
        let psi = create_state(&b, &[0, 1]).unwrap();
        let d = sector_decompose(&pure(&b, psi), &b, &Bipartition::bose_default()).unwrap();
        assert!((d.probability(2) - 1.0).abs() < 1e-14);
        assert_eq!(d.p11(), 0.0);
    }

    #[test]
    fn basis_state_maps_to_register_basis_state() {
        let b = bose();
        let psi = create_state(&b, &[0, 3]).unwrap();
        let reg = to_register(&pure(&b, psi), &b, &Bipartition::bose_default()).unwrap();
        // site1 is qubit A = 0, site4 is qubit B = 1
        assert!((reg.matrix()[(1, 1)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn outside_support_is_rejected() {
        let b = bose();
        let psi = create_state(&b, &[0, 0]).unwrap();
        assert!(matches!(
            to_register(&pure(&b, psi), &b, &Bipartition::bose_default()),
            Err(Error::OutsideSector(_))
        ));
    }

    #[test]
    fn fermion_signs_follow_mode_order() {
        let map = RegisterMap::new(&fermi(), &Bipartition::fermi_default()).unwrap();
        // A = {L↑, R↑}, B = {L↓, R↓}; only |R↑ L↓⟩ has B before A.
        assert_eq!(map.signs(), [1, 1, -1, 1]);
    }

    #[test]
    fn embed_round_trips() {
        let b = fermi();
        let map = RegisterMap::new(&b, &Bipartition::fermi_default()).unwrap();
        let s = TwoQubitState::from_pure([C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(-0.5, 0.0), C64::new(0.5, 0.0)]).unwrap();
        let rho = map.embed(&s, b.dim());
        let (p, back) = map.project(&rho).unwrap();
        assert!((p - 1.0).abs() < 1e-14);
        assert!((back.matrix() - s.matrix()).norm() < 1e-14);
    }

    #[test]
    fn swapped_reduced_states() {
        let s = TwoQubitState::from_pure([C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        // |0⟩_A ⊗ |+⟩_B
        assert!((s.reduced(Party::A)[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((s.reduced(Party::B)[(0, 1)].re - 0.5).abs() < 1e-14);
        let t = s.swapped();
        assert!((t.reduced(Party::B)[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((t.reduced(Party::A)[(0, 1)].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn closed_form_entropy() {
        let half = Matrix2::identity() * C64::new(0.5, 0.0);
        assert!((entropy2(&half) - 1.0).abs() < 1e-14);
        let scaled = half * C64::new(0.4, 0.0);
        assert!((weighted_entropy2(&scaled) - 0.4).abs() < 1e-14);
    }

    #[test]
    fn party_state_of_maximally_entangled_pair() {
        let b = bose();
        let psi = initial_state(StateLabel::PsiB, &b).unwrap().into_amplitudes();
        let rb = party_reduced_state(&pure(&b, psi), &b, &Bipartition::bose_default(), Party::B).unwrap();
        assert_eq!(rb.dim(), 6);
        assert!((rb.entropy_bits() - 1.0).abs() < 1e-12);
    }
}
