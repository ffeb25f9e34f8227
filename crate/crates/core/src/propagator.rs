// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Trotterized evolution under the stochastic Hamiltonian and Monte-Carlo
//! averaging of the resulting pure states into a density matrix.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::density::{trace_distance, DensityMatrix};
use crate::error::{Error, Result};
use crate::fockspace::OperatorMatrix;
use crate::model::HubbardModel;
use crate::noise::{NoiseChannelSet, NoiseKind, NoiseOptions, NoisePath};
use crate::{CMatrix, CVector, C64};

/// Histories per parallel work unit; fixed so sums never depend on thread count.
const CHUNK: usize = 32;
/// Work units merged per sequential batch.
const BATCH: usize = 16;
const CACHE_CAP: usize = 1 << 16;

/// How the noise enters each step's Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepSampling {
    /// `q(t_j)` held for the whole step: a switch inside the step is applied
    /// at the next step boundary.
    Start,
    /// `q(t_j + δt/2)` held for the whole step.
    Midpoint,
    /// Steps containing switches are split at the switch times, so the
    /// piecewise-constant Hamiltonian is propagated exactly.
    #[default]
    Exact,
}

impl StepSampling {
    fn offset(self, dt: f64) -> f64 {
        match self {
            StepSampling::Midpoint => 0.5 * dt,
            _ => 0.0,
        }
    }
}

impl fmt::Display for StepSampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepSampling::Start => "start",
            StepSampling::Midpoint => "midpoint",
            StepSampling::Exact => "exact",
        })
    }
}

impl FromStr for StepSampling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "start" => Ok(StepSampling::Start),
            "midpoint" => Ok(StepSampling::Midpoint),
            "exact" => Ok(StepSampling::Exact),
            _ => Err(Error::InvalidParameter(format!("unknown step sampling {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    dt: f64,
    n_steps: usize,
    histories: usize,
    record_stride: usize,
    sampling: StepSampling,
}

impl EvolutionConfig {
    pub fn new(dt: f64, n_steps: usize, histories: usize, record_stride: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        if histories == 0 {
            return Err(Error::InvalidParameter("at least one history is required".into()));
        }
        if record_stride == 0 {
            return Err(Error::InvalidParameter("record stride must be at least 1".into()));
        }
        Ok(Self {
            dt,
            n_steps,
            histories,
            record_stride,
            sampling: StepSampling::default(),
        })
    }

    /// Covers `[0, tmax]` with roughly `target_samples` recorded points.
    ///
    /// The step count is rounded up to a multiple of the stride so the last
    /// sample lands at or just past `tmax`.
    pub fn for_horizon(dt: f64, tmax: f64, histories: usize, target_samples: usize) -> Result<Self> {
        if !(tmax >= 0.0 && tmax.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon {tmax} must be >= 0")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        let steps = (tmax / dt - 1e-9).ceil().max(0.0) as usize;
        let stride = steps.div_ceil(target_samples.max(1)).max(1);
        Self::new(dt, steps.div_ceil(stride) * stride, histories, stride)
    }

    pub fn with_stride(self, record_stride: usize) -> Result<Self> {
        Ok(Self {
            sampling: self.sampling,
            ..Self::new(self.dt, self.n_steps, self.histories, record_stride)?
        })
    }

    pub fn with_histories(self, histories: usize) -> Result<Self> {
        Ok(Self {
            sampling: self.sampling,
            ..Self::new(self.dt, self.n_steps, histories, self.record_stride)?
        })
    }

    pub fn with_sampling(mut self, sampling: StepSampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn sampling(&self) -> StepSampling {
        self.sampling
    }

    /// End of the last step.
    pub fn horizon(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// Draws every switch of a channel set over this grid's horizon.
    pub fn noise_path(&self, channels: &mut NoiseChannelSet) -> Result<NoisePath> {
        channels.path(self.horizon())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn histories(&self) -> usize {
        self.histories
    }

    pub fn record_stride(&self) -> usize {
        self.record_stride
    }

    pub fn n_samples(&self) -> usize {
        self.n_steps / self.record_stride + 1
    }

    pub fn sample_times(&self) -> Vec<f64> {
        (0..self.n_samples())
            .map(|k| (k * self.record_stride) as f64 * self.dt)
            .collect()
    }
}

/// `exp(-i H δt)` from the eigendecomposition of a Hermitian `H`.
pub fn step_unitary(h: &OperatorMatrix, dt: f64) -> Result<OperatorMatrix> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::NotHermitian(defect));
    }
    let m = h.matrix();
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let phases = eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * dt));
    let v = &eig.eigenvectors;
    Ok(OperatorMatrix::new(v * CMatrix::from_diagonal(&phases) * v.adjoint()))
}

/// Same as [`step_unitary`] for a real symmetric matrix.
pub(crate) fn real_step_unitary(h: &DMatrix<f64>, dt: f64) -> CMatrix {
    let n = h.nrows();
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let mut u = CMatrix::zeros(n, n);
    for k in 0..n {
        let phase = C64::from_polar(1.0, -eig.eigenvalues[k] * dt);
        for j in 0..n {
            let vj = v[(j, k)] * phase;
            for i in 0..n {
                u[(i, j)] += vj * v[(i, k)];
            }
        }
    }
    u
}

/// Eigendecomposition of a real symmetric Hamiltonian.
struct Spectrum {
    vectors: DMatrix<f64>,
    energies: DVector<f64>,
}

impl Spectrum {
    /// `ψ ← V e^{-iEτ} Vᵀ ψ`.
    fn apply(&self, tau: f64, psi: &mut CVector, work: &mut CVector) {
        let n = self.energies.len();
        let v = self.vectors.as_slice();
        for (k, w) in work.iter_mut().enumerate() {
            let col = &v[k * n..(k + 1) * n];
            let mut z = C64::new(0.0, 0.0);
            for (p, &c) in psi.iter().zip(col) {
                z += p * c;
            }
            *w = z * C64::from_polar(1.0, -self.energies[k] * tau);
        }
        psi.fill(C64::new(0.0, 0.0));
        for (k, &w) in work.iter().enumerate() {
            let col = &v[k * n..(k + 1) * n];
            for (p, &c) in psi.iter_mut().zip(col) {
                *p += w * c;
            }
        }
    }
}

/// Bounded memo table; emptied when full, which keeps recent entries cheap
/// without bookkeeping. Values depend only on the key, so eviction never
/// changes results.
struct Memo<V> {
    map: RwLock<HashMap<Vec<i32>, Arc<V>>>,
}

impl<V> Memo<V> {
    fn new() -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
        }
    }

    fn get_or(&self, key: &[i32], make: impl FnOnce() -> V) -> Arc<V> {
        if let Some(v) = self.map.read().expect("cache lock").get(key) {
            return Arc::clone(v);
        }
        let v = Arc::new(make());
        let mut map = self.map.write().expect("cache lock");
        if map.len() >= CACHE_CAP {
            map.clear();
        }
        Arc::clone(map.entry(key.to_vec()).or_insert(v))
    }
}

/// Step unitaries and spectra keyed by the integer channel sums.
struct StepCache {
    model: HubbardModel,
    dt: f64,
    scale: f64,
    unitaries: Memo<CMatrix>,
    spectra: Memo<Spectrum>,
}

impl StepCache {
    fn new(model: HubbardModel, dt: f64, scale: i32) -> Self {
        Self {
            model,
            dt,
            scale: scale as f64,
            unitaries: Memo::new(),
            spectra: Memo::new(),
        }
    }

    fn hamiltonian(&self, sums: &[i32]) -> DMatrix<f64> {
        let q: Vec<f64> = sums.iter().map(|&s| s as f64 / self.scale).collect();
        self.model.real_hamiltonian(&q)
    }

    fn unitary(&self, sums: &[i32]) -> Arc<CMatrix> {
        self.unitaries
            .get_or(sums, || real_step_unitary(&self.hamiltonian(sums), self.dt))
    }

    fn spectrum(&self, sums: &[i32]) -> Arc<Spectrum> {
        self.spectra.get_or(sums, || {
            let eig = SymmetricEigen::new(self.hamiltonian(sums));
            Spectrum {
                vectors: eig.eigenvectors,
                energies: eig.eigenvalues,
            }
        })
    }
}

fn check_state(model: &HubbardModel, state: &CVector) -> Result<()> {
    if state.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: state.len(),
        });
    }
    Ok(())
}

fn check_path(model: &HubbardModel, path: &NoisePath) -> Result<()> {
    if path.channels() != model.channels() {
        return Err(Error::DimensionMismatch {
            expected: model.channels(),
            found: path.channels(),
        });
    }
    Ok(())
}

fn propagate(cache: &StepCache, path: &NoisePath, state0: &CVector, config: &EvolutionConfig, mut record: impl FnMut(usize, &CVector)) -> Result<()> {
    let mut psi = state0.clone();
    let mut next = psi.clone();
    record(0, &psi);
    let dt = config.dt;
    let signals = match config.sampling {
        StepSampling::Exact => None,
        s => Some(path.sample(s.offset(dt), dt, config.n_steps)?),
    };
    let times = path.switch_times();
    let mut k = 0;
    for j in 0..config.n_steps {
        match &signals {
            Some(sig) => {
                cache.unitary(sig.step(j)).mul_to(&psi, &mut next);
                std::mem::swap(&mut psi, &mut next);
            }
            None => {
                let t1 = (j + 1) as f64 * dt;
                if k == times.len() || times[k] >= t1 {
                    cache.unitary(path.segment(k)).mul_to(&psi, &mut next);
                    std::mem::swap(&mut psi, &mut next);
                } else {
                    let mut t = j as f64 * dt;
                    while k < times.len() && times[k] < t1 {
                        let ts = times[k].max(t);
                        cache.spectrum(path.segment(k)).apply(ts - t, &mut psi, &mut next);
                        t = ts;
                        k += 1;
                    }
                    cache.spectrum(path.segment(k)).apply(t1 - t, &mut psi, &mut next);
                }
            }
        }
        if (j + 1) % config.record_stride == 0 {
            record((j + 1) / config.record_stride, &psi);
        }
    }
    Ok(())
}

/// Pure state of a single history at every recorded sample.
pub fn evolve_path(model: &HubbardModel, path: &NoisePath, state0: &CVector, config: &EvolutionConfig) -> Result<Vec<CVector>> {
    check_state(model, state0)?;
    check_path(model, path)?;
    let cache = StepCache::new(model.clone(), config.dt, path.scale());
    let mut out = Vec::with_capacity(config.n_samples());
    propagate(&cache, path, state0, config, |_, psi| out.push(psi.clone()))?;
    Ok(out)
}

/// Draws the switches of `channels` and evolves one history.
pub fn evolve_history(model: &HubbardModel, channels: &mut NoiseChannelSet, state0: &CVector, config: &EvolutionConfig) -> Result<Vec<CVector>> {
    let path = config.noise_path(channels)?;
    evolve_path(model, &path, state0, config)
}

/// `(1/M) Σ_k |ψ_k(t)⟩⟨ψ_k(t)|` at every sample.
pub fn average_density(trajectories: &[Vec<CVector>]) -> Result<Vec<DensityMatrix>> {
    let first = trajectories.first().ok_or(Error::EmptyHistories)?;
    let n = first.len();
    if let Some(bad) = trajectories.iter().find(|t| t.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    (0..n)
        .map(|s| {
            let dim = first[s].len();
            let mut acc = CMatrix::zeros(dim, dim);
            for t in trajectories {
                acc.ger_rank1(&t[s]);
            }
            DensityMatrix::from_unnormalized(acc)
        })
        .collect()
}

trait Rank1 {
    fn ger_rank1(&mut self, v: &CVector);
}

impl Rank1 for CMatrix {
    fn ger_rank1(&mut self, v: &CVector) {
        let n = v.len();
        for j in 0..n {
            let c = v[j].conj();
            for i in 0..n {
                self[(i, j)] += v[i] * c;
            }
        }
    }
}

/// Ensemble-averaged density matrices on the sample grid.
#[derive(Debug, Clone)]
pub struct EnsembleAverage {
    pub times: Vec<f64>,
    pub densities: Vec<DensityMatrix>,
    /// Averages over the first `histories / 2` histories, when `histories ≥ 2`.
    pub half: Option<Vec<DensityMatrix>>,
    pub histories: usize,
}

impl EnsembleAverage {
    /// Trace distance between the full and half-ensemble averages.
    pub fn convergence(&self) -> Vec<f64> {
        match &self.half {
            None => vec![0.0; self.densities.len()],
            Some(half) => self
                .densities
                .iter()
                .zip(half)
                .map(|(a, b)| trace_distance(a, b).unwrap_or(f64::NAN))
                .collect(),
        }
    }
}

/// Options for [`run_ensemble`] beyond the evolution grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnsembleOptions {
    pub master_seed: u64,
    pub noise: NoiseOptions,
}

struct Sums {
    full: Vec<Vec<CMatrix>>,
    half: Vec<Vec<CMatrix>>,
}

impl Sums {
    fn zeros(models: usize, samples: usize, dim: usize) -> Self {
        let z = || vec![vec![CMatrix::zeros(dim, dim); samples]; models];
        Self { full: z(), half: z() }
    }

    fn add(&mut self, other: &Sums) {
        for (a, b) in self.full.iter_mut().zip(&other.full).chain(self.half.iter_mut().zip(&other.half)) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }
}

/// Runs `config.histories()` noise histories and averages every model.
///
/// All models see the same noise histories (common random numbers), so they
/// must share the Fock basis and channel count. Histories are seeded by index,
/// grouped into fixed chunks and merged in chunk order, which makes the
/// result independent of the number of worker threads.
pub fn run_ensemble(models: &[HubbardModel], noise: NoiseKind, state0: &CVector, config: &EvolutionConfig, options: EnsembleOptions) -> Result<Vec<EnsembleAverage>> {
    let first = models.first().ok_or_else(|| Error::InvalidParameter("no models to evolve".into()))?;
    for m in models {
        check_state(m, state0)?;
        if m.channels() != first.channels() {
            return Err(Error::DimensionMismatch {
                expected: first.channels(),
                found: m.channels(),
            });
        }
    }
    noise.validate()?;
    let dim = first.dim();
    let samples = config.n_samples();
    let times = config.sample_times();
    let m_total = config.histories;

    // Every noiseless history is the same trajectory.
    if matches!(noise, NoiseKind::Noiseless) {
        let mut set = NoiseChannelSet::for_history(noise, first.channels(), options.master_seed, 0, options.noise)?;
        let path = config.noise_path(&mut set)?;
        return models
            .iter()
            .map(|m| {
                let traj = evolve_path(m, &path, state0, config)?;
                let densities = average_density(std::slice::from_ref(&traj))?;
                Ok(EnsembleAverage {
                    times: times.clone(),
                    half: (m_total >= 2).then(|| densities.clone()),
                    densities,
                    histories: m_total,
                })
            })
            .collect();
    }

    let caches: Vec<StepCache> = models
        .iter()
        .map(|m| StepCache::new(m.clone(), config.dt, noise.scale()))
        .collect();
    let half_count = m_total / 2;
    let n_chunks = m_total.div_ceil(CHUNK);

    let run_chunk = |c: usize| -> Result<Sums> {
        let mut sums = Sums::zeros(models.len(), samples, dim);
        for h in c * CHUNK..((c + 1) * CHUNK).min(m_total) {
            let mut set = NoiseChannelSet::for_history(noise, first.channels(), options.master_seed, h as u64, options.noise)?;
            let path = config.noise_path(&mut set)?;
            for (mi, cache) in caches.iter().enumerate() {
                let in_half = h < half_count;
                let (full, half) = (&mut sums.full[mi], &mut sums.half[mi]);
                propagate(cache, &path, state0, config, |s, psi| {
                    full[s].ger_rank1(psi);
                    if in_half {
                        half[s].ger_rank1(psi);
                    }
                })?;
            }
        }
        Ok(sums)
    };

    let mut total = Sums::zeros(models.len(), samples, dim);
    for start in (0..n_chunks).step_by(BATCH) {
        let end = (start + BATCH).min(n_chunks);
        let parts: Vec<Result<Sums>> = (start..end).into_par_iter().map(run_chunk).collect();
        for p in parts {
            total.add(&p?);
        }
    }

    let Sums { full, half } = total;
    full.into_iter()
        .zip(half)
        .map(|(f, h)| {
            let densities = f
                .into_iter()
                .map(DensityMatrix::from_unnormalized)
                .collect::<Result<Vec<_>>>()?;
            let half = if half_count > 0 {
                Some(h.into_iter().map(DensityMatrix::from_unnormalized).collect::<Result<Vec<_>>>()?)
            } else {
                None
            };
            Ok(EnsembleAverage {
                times: times.clone(),
                densities,
                half,
                histories: m_total,
            })
        })
        .collect()
}
