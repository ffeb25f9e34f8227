// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Random test states, the structural property suite for the particle
//! correlation measures, and small brute-force oracles.

use nalgebra::{Matrix4, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::correlations::{
    concurrence, discord_details, party_reduced_state, sigma_yy,
    CorrelationAnalyzer, DiscordSettings, RegisterMap, TwoQubitState, DISCORD_GRID_TOLERANCE,
};
use crate::density::DensityMatrix;
use crate::error::Result;
use crate::fockspace::{hop_op, FockBasis, OperatorMatrix};
use crate::model::{initial_state, lattice_basis, Bipartition, HubbardModel, HubbardParams, Lattice, Party, StateLabel};
use crate::noise::{NoiseChannelSet, NoiseKind, NoiseOptions};
use crate::propagator::{evolve_history, evolve_path, step_unitary, EvolutionConfig};
use crate::{seed, CMatrix, CVector, C64};

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `G G† / Tr` with a complex Gaussian `G`; full rank almost surely.
pub fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    DensityMatrix::from_unnormalized(&g * g.adjoint()).expect("Ginibre state")
}

pub fn random_pure(dim: usize, rng: &mut ChaCha8Rng) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

pub fn random_two_qubit(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let d = random_density(4, rng);
    TwoQubitState::new(Matrix4::from_fn(|i, j| d.matrix()[(i, j)])).expect("valid register state")
}

pub fn random_two_qubit_pure(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let v = random_pure(4, rng);
    TwoQubitState::from_pure([v[0], v[1], v[2], v[3]]).expect("nonzero")
}

fn random_unitary2(rng: &mut ChaCha8Rng) -> nalgebra::Matrix2<C64> {
    let g = nalgebra::Matrix2::from_fn(|_, _| gaussian(rng));
    g.qr().q()
}

/// `Σ_i p_i |e_i⟩⟨e_i| ⊗ ρ_i`, classical on the first qubit in a random basis.
pub fn random_classical_quantum(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let u = random_unitary2(rng);
    let p: f64 = rng.random_range(0.05..0.95);
    let mut m = Matrix4::zeros();
    for (i, w) in [p, 1.0 - p].into_iter().enumerate() {
        let e = u.column(i);
        let r = random_density(2, rng);
        for a in 0..2 {
            for a2 in 0..2 {
                for b in 0..2 {
                    for b2 in 0..2 {
                        m[(2 * a + b, 2 * a2 + b2)] += e[a] * e[a2].conj() * r.matrix()[(b, b2)] * w;
                    }
                }
            }
        }
    }
    TwoQubitState::new((m + m.adjoint()) * C64::new(0.5, 0.0)).expect("valid register state")
}

/// Mixture of a (1,1) register state with weight `P₁₁` and random states of
/// the sectors where one party holds both particles.
pub fn random_sector_mixture(basis: &FockBasis, partition: &Bipartition, register: &TwoQubitState, p11: f64, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    let map = RegisterMap::new(basis, partition)?;
    let mut m = map.embed(register, basis.dim()).matrix() * C64::new(p11, 0.0);
    let rest = 1.0 - p11;
    if rest > 0.0 {
        let counts: Vec<usize> = basis.states().iter().map(|o| partition.count_a(o)).collect();
        let w: f64 = rng.random_range(0.0..1.0);
        for (k, weight) in [(0usize, w), (2usize, 1.0 - w)] {
            let idx: Vec<usize> = (0..basis.dim()).filter(|&i| counts[i] == k).collect();
            let r = random_density(idx.len(), rng);
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    m[(i, j)] += r.matrix()[(a, b)] * rest * weight;
                }
            }
        }
    }
    DensityMatrix::from_unnormalized(m)
}

/// `exp(-i Σ h_ij a†_i a_j)` with independent random Hermitian `h` on each
/// party's modes; conserves the particle number of every party.
pub fn random_local_mode_unitary(basis: &FockBasis, partition: &Bipartition, rng: &mut ChaCha8Rng) -> Result<OperatorMatrix> {
    let mut g = OperatorMatrix::zeros(basis.dim(), basis.dim());
    for party in [Party::A, Party::B] {
        let modes = partition.modes(party);
        let h = nalgebra::Matrix2::from_fn(|_, _| gaussian(rng));
        let h = (h + h.adjoint()) * C64::new(0.5, 0.0);
        for (i, &mi) in modes.iter().enumerate() {
            for (j, &mj) in modes.iter().enumerate() {
                let term = OperatorMatrix::new(hop_op(basis, mi, mj)?.matrix() * h[(i, j)]);
                g = &g + &term;
            }
        }
    }
    step_unitary(&g, 1.0)
}

pub fn conjugate(rho: &DensityMatrix, u: &OperatorMatrix) -> DensityMatrix {
    let m = u.matrix() * rho.matrix() * u.matrix().adjoint();
    DensityMatrix::from_unnormalized(m).expect("unitary conjugation")
}

/// Concurrence through `η = √ρ ρ̃ √ρ` with an explicit matrix square root.
pub fn concurrence_sqrt_form(state: &TwoQubitState) -> f64 {
    let eig = SymmetricEigen::new(*state.matrix());
    let sqrt_vals = eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    let sqrt_rho = v * Matrix4::from_diagonal(&sqrt_vals) * v.adjoint();
    let y = sigma_yy();
    let tilde = y * state.matrix().conjugate() * y;
    let eta = sqrt_rho * tilde * sqrt_rho;
    let eta = (eta + eta.adjoint()) * C64::new(0.5, 0.0);
    let mut roots: Vec<f64> = SymmetricEigen::new(eta)
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

/// Concurrence from the (non-Hermitian) spectrum of `ρ ρ̃`.
pub fn concurrence_spectrum_form(state: &TwoQubitState) -> f64 {
    let y = sigma_yy();
    let prod = state.matrix() * y * state.matrix().conjugate() * y;
    let ev = nalgebra::Schur::new(prod).eigenvalues().expect("4x4 Schur form converges");
    let mut roots: Vec<f64> = ev.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

/// `e^{-iHt} ψ` by exact diagonalization of the noiseless Hamiltonian.
pub fn exact_evolution(model: &HubbardModel, state: &CVector, t: f64) -> Result<CVector> {
    let u = step_unitary(&model.noiseless_hamiltonian(), t)?;
    Ok(u.apply(state))
}

/// `|⟨ψ(0)|ψ(τ)⟩|²` for the Trotterized noiseless evolution of Ψ_B on the ring.
pub fn revival_fidelity(v: f64, tau: f64, dt: f64) -> Result<f64> {
    let model = HubbardModel::new(HubbardParams::relative(v, Lattice::BOSE_RING_4)?)?;
    let psi0 = initial_state(StateLabel::PsiB, model.basis())?.into_amplitudes();
    let steps = (tau / dt).round() as usize;
    let config = EvolutionConfig::new(tau / steps as f64, steps, 1, steps.max(1))?;
    let mut set = NoiseChannelSet::for_history(NoiseKind::Noiseless, model.channels(), 0, 0, NoiseOptions::default())?;
    let traj = evolve_history(&model, &mut set, &psi0, &config)?;
    let last = traj.last().expect("nonempty trajectory");
    Ok(psi0.dotc(last).norm_sqr())
}

/// Kolmogorov-Smirnov distance between samples and a continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at significance 1%.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Largest violation seen (or smallest margin for existence checks).
    pub worst: f64,
    pub tolerance: f64,
}

impl PropertyReport {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            checked: 0,
            failures: 0,
            worst: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, violation: f64) {
        self.checked += 1;
        self.worst = self.worst.max(violation);
        if !(violation <= self.tolerance) {
            self.failures += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failures == 0
    }
}

/// Runs every structural property on `samples` random states per property.
pub fn run_property_suite(samples: usize, master_seed: u64, settings: &DiscordSettings) -> Result<Vec<PropertyReport>> {
    let mut rng = seed::stream(&[master_seed, 0x70_726f_7073]);
    let setups: Vec<(FockBasis, Bipartition)> = vec![
        (lattice_basis(Lattice::BOSE_RING_4)?, Bipartition::bose_default()),
        (lattice_basis(Lattice::FermiDimer)?, Bipartition::fermi_default()),
    ];
    let analyzers = setups
        .iter()
        .map(|(b, p)| {
            Ok((
                CorrelationAnalyzer::new(b, p, Party::A, *settings)?,
                CorrelationAnalyzer::new(b, p, Party::B, *settings)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut nonneg = PropertyReport::new("discord non-negative", 1e-9);
    let mut asym = PropertyReport::new("measured-party asymmetry", 0.0);
    let mut local = PropertyReport::new("local mode unitary invariance", 1e-9);
    let mut pure = PropertyReport::new("pure states: E_P = D_P", DISCORD_GRID_TOLERANCE);
    let mut cq = PropertyReport::new("classical-quantum: D_P = 0", DISCORD_GRID_TOLERANCE);
    let mut bound = PropertyReport::new("D_P(B) <= S(rho_B)", 1e-9);
    let mut range = PropertyReport::new("E_P, D_P in [0,1], zero without (1,1) weight", 1e-12);
    let mut conc = PropertyReport::new("concurrence: sqrt form = spectrum form", 1e-10);

    // Existence witness: |0⟩⟨0|⊗|0⟩⟨0| and |1⟩⟨1|⊗|+⟩⟨+| mixed equally.
    {
        let h = C64::new(0.5, 0.0);
        let mut m = Matrix4::zeros();
        m[(0, 0)] = h;
        let plus = [C64::new(0.5, 0.0), C64::new(0.5, 0.0)];
        for b in 0..2 {
            for b2 in 0..2 {
                m[(2 + b, 2 + b2)] += plus[b] * plus[b2] * C64::new(1.0, 0.0);
            }
        }
        let w = TwoQubitState::new(m)?;
        let da = discord_details(&w, Party::A, settings).discord;
        let db = discord_details(&w, Party::B, settings).discord;
        asym.checked += 1;
        asym.worst = db - da;
        if !(da < DISCORD_GRID_TOLERANCE && db - da > 10.0 * DISCORD_GRID_TOLERANCE) {
            asym.failures += 1;
        }
    }

    for n in 0..samples {
        let which = n % 2;
        let (basis, partition) = &setups[which];
        let (an_a, an_b) = &analyzers[which];
        let map = an_b.register_map();

        // Mixed register embedded with other sectors.
        let reg = random_two_qubit(&mut rng);
        let d = discord_details(&reg, Party::B, settings);
        nonneg.record(-(d.mutual_information - d.classical));
        let c1 = concurrence_sqrt_form(&reg);
        let c2 = concurrence(&reg);
        let c3 = concurrence_spectrum_form(&reg);
        conc.record((c1 - c2).abs().max((c1 - c3).abs()));

        let p11: f64 = rng.random_range(0.0..1.0);
        let rho = random_sector_mixture(basis, partition, &reg, p11, &mut rng)?;
        let s = an_b.analyze(&rho);
        let out = |x: f64| (x - 1.0).max(-x).max(0.0);
        range.record(out(s.e_p).max(out(s.d_p)));
        let s_b = party_reduced_state(&rho, basis, partition, Party::B)?.entropy_bits();
        bound.record(s.d_p - s_b);

        // Generic Fock-space state, not block-diagonal in the sectors.
        let global = random_density(basis.dim(), &mut rng);
        let u = random_local_mode_unitary(basis, partition, &mut rng)?;
        let moved = conjugate(&global, &u);
        for an in [an_a, an_b] {
            let (x, y) = (an.analyze(&global), an.analyze(&moved));
            local.record((x.p11 - y.p11).abs().max((x.e_p - y.e_p).abs()).max((x.d_p - y.d_p).abs()));
        }
        let sg = an_b.analyze(&global);
        nonneg.record(-sg.d_p);
        let s_bg = party_reduced_state(&global, basis, partition, Party::B)?.entropy_bits();
        bound.record(sg.d_p - s_bg);

        // Global pure state: entanglement of formation equals the register's
        // entropy of entanglement and its discord.
        let psi = random_pure(basis.dim(), &mut rng);
        let rho_p = DensityMatrix::from_pure(&psi)?;
        let sp = an_b.analyze(&rho_p);
        let vn = map
            .project(&rho_p)
            .map(|(p, r)| p * entropy_of(&r))
            .unwrap_or(0.0);
        pure.record((sp.e_p - sp.d_p).abs().max((sp.e_p - vn).abs()));
        // Zero (1,1) weight.
        if p11 < 0.05 {
            let empty = random_sector_mixture(basis, partition, &reg, 0.0, &mut rng)?;
            let se = an_b.analyze(&empty);
            range.record(se.e_p.abs().max(se.d_p.abs()));
        }

        // Classical on A: vanishes when A is measured, for any sector weight.
        let cqs = random_classical_quantum(&mut rng);
        let p11c: f64 = rng.random_range(0.1..1.0);
        let rho_c = random_sector_mixture(basis, partition, &cqs, p11c, &mut rng)?;
        cq.record(an_a.analyze(&rho_c).d_p);
    }

    Ok(vec![nonneg, asym, local, pure, cq, bound, range, conc])
}

/// Brute-force cross-checks on the small instances.
pub fn run_oracle_suite(samples: usize, master_seed: u64) -> Result<Vec<PropertyReport>> {
    let mut rng = seed::stream(&[master_seed, 0x6f_7261_636c]);
    let mut conc = PropertyReport::new("concurrence: sqrt form = spectrum form", 1e-10);
    for _ in 0..samples {
        if rng.random::<bool>() {
            let reg = random_two_qubit(&mut rng);
            let c = concurrence_sqrt_form(&reg);
            conc.record((c - concurrence_spectrum_form(&reg)).abs().max((c - concurrence(&reg)).abs()));
        } else {
            // Square roots of rank-deficient spectra amplify roundoff, so pure
            // states use the amplitude form 2|ad - bc|.
            let v = random_pure(4, &mut rng);
            let reg = TwoQubitState::from_pure([v[0], v[1], v[2], v[3]]).expect("nonzero");
            let c = 2.0 * (v[0] * v[3] - v[1] * v[2]).norm();
            conc.record((c - concurrence(&reg)).abs());
        }
    }

    let mut diag = PropertyReport::new("noiseless stepping = exact diagonalization", 1e-9);
    let config = EvolutionConfig::new(0.01, 500, 1, 50)?;
    for (lattice, labels) in [
        (Lattice::BOSE_RING_4, [StateLabel::PsiB, StateLabel::XiB, StateLabel::PsiBprime]),
        (Lattice::FermiDimer, [StateLabel::PsiF, StateLabel::XiF, StateLabel::UpsilonF]),
    ] {
        for v in [0.0, 2.0, -2.0, 20.0] {
            let model = HubbardModel::new(HubbardParams::relative(v, lattice)?)?;
            for label in labels {
                let psi0 = initial_state(label, model.basis())?.into_amplitudes();
                let mut set = NoiseChannelSet::for_history(NoiseKind::Noiseless, model.channels(), 0, 0, NoiseOptions::default())?;
                let traj = evolve_history(&model, &mut set, &psi0, &config)?;
                for (psi, t) in traj.iter().zip(config.sample_times()) {
                    diag.record((psi - exact_evolution(&model, &psi0, t)?).norm());
                }
            }
        }
    }

    let mut piecewise = PropertyReport::new("switch-resolved stepping = segment-wise exponentials", 1e-10);
    for h in 0..samples.clamp(1, 20) as u64 {
        let v = rng.random_range(-5.0..5.0);
        let model = HubbardModel::new(HubbardParams::relative(v, Lattice::BOSE_RING_4)?)?;
        let psi0 = random_pure(model.dim(), &mut rng);
        let kind = if h % 2 == 0 { NoiseKind::Rtn { rate: 2.0 } } else { NoiseKind::pink(4) };
        let mut set = NoiseChannelSet::for_history(kind, model.channels(), master_seed, h, NoiseOptions::default())?;
        let config = EvolutionConfig::new(0.05, 40, 1, 40)?;
        let path = config.noise_path(&mut set)?;
        let last = evolve_path(&model, &path, &psi0, &config)?.pop().expect("samples");
        let times = path.switch_times();
        let (mut psi, mut t) = (psi0, 0.0);
        for k in 0..=times.len() {
            let end = times.get(k).copied().unwrap_or(config.horizon());
            let q: Vec<f64> = path.segment(k).iter().map(|&s| s as f64 / path.scale() as f64).collect();
            psi = step_unitary(&model.hamiltonian(&q)?, end - t)?.apply(&psi);
            t = end;
        }
        piecewise.record((psi - last).norm());
    }

    let mut revival = PropertyReport::new("noiseless v=0 revival fidelity at pi", 1e-3);
    revival.record(1.0 - revival_fidelity(0.0, std::f64::consts::PI, 0.01)?);

    Ok(vec![conc, diag, piecewise, revival])
}

fn entropy_of(reg: &TwoQubitState) -> f64 {
    let a = reg.reduced(Party::A);
    crate::density::shannon_bits(SymmetricEigen::new(a).eigenvalues.iter().copied())
}
