// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical stochastic modulation of the hopping amplitudes.
//!
//! A random-telegraph fluctuator flips between `-1` and `+1` with exponential
//! waiting times of mean `1/γ`; switches are generated event by event and
//! the signal is read on the time grid. Colored noise averages `N_f`
//! fluctuators whose rates follow `p(γ) ∝ γ^-α` on `[γ_inf, γ_sup]`:
//!
//! * α = 1: `p(γ) = 1/(γ ln(γ_sup/γ_inf))`
//! * α = 2: `p(γ) = 1/(γ² (1/γ_inf - 1/γ_sup))`

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::seed;

const RATE_STREAM: u64 = 0x7261_7465;

/// Rate interval `[γ_inf, γ_sup]`, in units of |T|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBand {
    lower: f64,
    upper: f64,
}

impl RateBand {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && upper > lower && upper.is_finite()) {
            return Err(Error::InvalidBand { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Analytic CDF of `p(γ) ∝ γ^-α` on the band.
    pub fn cdf(&self, alpha: u8, rate: f64) -> f64 {
        let g = rate.clamp(self.lower, self.upper);
        match alpha {
            1 => (g / self.lower).ln() / (self.upper / self.lower).ln(),
            _ => (1.0 / self.lower - 1.0 / g) / (1.0 / self.lower - 1.0 / self.upper),
        }
    }
}

impl Default for RateBand {
    fn default() -> Self {
        Self {
            lower: 1.25e-4,
            upper: 1.25e2,
        }
    }
}

fn check_alpha(alpha: u8) -> Result<()> {
    if alpha == 1 || alpha == 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("spectral exponent must be 1 or 2, got {alpha}")))
    }
}

/// Inverse CDF of the rate distribution at `u ∈ [0, 1]`.
pub fn rate_from_uniform(alpha: u8, band: RateBand, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let u = u.clamp(0.0, 1.0);
    let (lo, hi) = (band.lower, band.upper);
    let rate = match alpha {
        1 => lo * (hi / lo).powf(u),
        _ => 1.0 / (1.0 / lo - u * (1.0 / lo - 1.0 / hi)),
    };
    Ok(rate.clamp(lo, hi))
}

pub fn sample_rates<R: Rng + ?Sized>(alpha: u8, band: RateBand, count: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if count == 0 {
        return Err(Error::InvalidParameter("an ensemble needs at least one fluctuator".into()));
    }
    (0..count)
        .map(|_| rate_from_uniform(alpha, band, rng.random::<f64>()))
        .collect()
}

/// Sign of each fluctuator at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialSign {
    /// `±1` with probability ½: the stationary telegraph process.
    Random,
    /// `+1`: every hopping starts at its nominal value when the noise is
    /// switched on.
    #[default]
    Positive,
}

impl fmt::Display for InitialSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialSign::Random => "random",
            InitialSign::Positive => "positive",
        })
    }
}

impl std::str::FromStr for InitialSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(InitialSign::Random),
            "positive" | "plus" | "+1" => Ok(InitialSign::Positive),
            _ => Err(Error::InvalidParameter(format!("unknown initial sign {s:?}"))),
        }
    }
}

/// Single bistable fluctuator.
#[derive(Debug, Clone)]
pub struct RtnFluctuator {
    rate: f64,
    value: i8,
    next_switch: f64,
    switches: u64,
    rng: ChaCha8Rng,
}

impl RtnFluctuator {
    /// Initial sign is `±1` with probability ½.
    pub fn new(rate: f64, rng: ChaCha8Rng) -> Result<Self> {
        Self::with_initial(rate, InitialSign::Random, rng)
    }

    /// The random sign is drawn for both policies so that the switching
    /// sequence does not depend on the policy.
    pub fn with_initial(rate: f64, initial: InitialSign, mut rng: ChaCha8Rng) -> Result<Self> {
        let coin = rng.random::<bool>();
        let value = match initial {
            InitialSign::Random if !coin => -1,
            _ => 1,
        };
        Self::with_value(rate, value, rng)
    }

    pub fn with_value(rate: f64, value: i8, mut rng: ChaCha8Rng) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("switching rate {rate} must be finite and >= 0")));
        }
        if value != 1 && value != -1 {
            return Err(Error::InvalidParameter("fluctuator value must be ±1".into()));
        }
        let next_switch = waiting_time(rate, &mut rng);
        Ok(Self {
            rate,
            value,
            next_switch,
            switches: 0,
            rng,
        })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn value(&self) -> i8 {
        self.value
    }

    pub fn switches(&self) -> u64 {
        self.switches
    }

    /// Time of the next switch after the current one.
    pub fn next_switch(&self) -> f64 {
        self.next_switch
    }

    /// Value at time `t`; calls must use non-decreasing times.
    pub fn value_at(&mut self, t: f64) -> i8 {
        while self.next_switch <= t {
            self.value = -self.value;
            self.switches += 1;
            self.next_switch += waiting_time(self.rate, &mut self.rng);
        }
        self.value
    }
}

impl RtnFluctuator {
    /// Performs the next switch and returns its time.
    fn switch_once(&mut self) -> f64 {
        let t = self.next_switch;
        self.value = -self.value;
        self.switches += 1;
        self.next_switch += waiting_time(self.rate, &mut self.rng);
        t
    }
}

fn waiting_time(rate: f64, rng: &mut ChaCha8Rng) -> f64 {
    if rate == 0.0 {
        f64::INFINITY
    } else {
        Exp::new(rate).expect("positive rate").sample(rng)
    }
}

fn check_grid(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time step {dt} must be positive")))
    }
}

/// Values at `t_j = j·dt`, `j = 0..n_steps`.
pub fn rtn_signal(fluctuator: &mut RtnFluctuator, dt: f64, n_steps: usize) -> Result<Vec<i8>> {
    check_grid(dt)?;
    Ok((0..n_steps).map(|j| fluctuator.value_at(j as f64 * dt)).collect())
}

/// `q(t) = (1/N_f) Σ_j η_j(t)`.
#[derive(Debug, Clone)]
pub struct FluctuatorEnsemble {
    fluctuators: Vec<RtnFluctuator>,
    alpha: Option<u8>,
    band: Option<RateBand>,
}

impl FluctuatorEnsemble {
    /// Fluctuator `j` draws from the stream `keys ++ [j]`.
    pub fn from_rates(rates: &[f64], keys: &[u64], initial: InitialSign) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidParameter("an ensemble needs at least one fluctuator".into()));
        }
        let fluctuators = rates
            .iter()
            .enumerate()
            .map(|(j, &rate)| {
                let mut k = keys.to_vec();
                k.push(j as u64);
                RtnFluctuator::with_initial(rate, initial, seed::stream(&k))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            fluctuators,
            alpha: None,
            band: None,
        })
    }

    pub fn sample<R: Rng + ?Sized>(alpha: u8, band: RateBand, count: usize, rate_rng: &mut R, keys: &[u64], initial: InitialSign) -> Result<Self> {
        let rates = sample_rates(alpha, band, count, rate_rng)?;
        let mut e = Self::from_rates(&rates, keys, initial)?;
        e.alpha = Some(alpha);
        e.band = Some(band);
        Ok(e)
    }

    pub fn from_fluctuators(fluctuators: Vec<RtnFluctuator>) -> Result<Self> {
        if fluctuators.is_empty() {
            return Err(Error::InvalidParameter("an ensemble needs at least one fluctuator".into()));
        }
        Ok(Self {
            fluctuators,
            alpha: None,
            band: None,
        })
    }

    pub fn len(&self) -> usize {
        self.fluctuators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fluctuators.is_empty()
    }

    pub fn alpha(&self) -> Option<u8> {
        self.alpha
    }

    pub fn band(&self) -> Option<RateBand> {
        self.band
    }

    pub fn rates(&self) -> Vec<f64> {
        self.fluctuators.iter().map(RtnFluctuator::rate).collect()
    }

    /// `Σ_j η_j(t)`, an integer in `[-N_f, N_f]`.
    pub fn sum_at(&mut self, t: f64) -> i32 {
        self.fluctuators.iter_mut().map(|f| f.value_at(t) as i32).sum()
    }

    pub fn value_at(&mut self, t: f64) -> f64 {
        self.sum_at(t) as f64 / self.len() as f64
    }
}

pub fn ensemble_signal(ensemble: &mut FluctuatorEnsemble, dt: f64, n_steps: usize) -> Result<Vec<f64>> {
    check_grid(dt)?;
    Ok((0..n_steps).map(|j| ensemble.value_at(j as f64 * dt)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    Noiseless,
    Rtn { rate: f64 },
    Pink { fluctuators: usize, band: RateBand },
    Brown { fluctuators: usize, band: RateBand },
}

impl NoiseKind {
    pub fn pink(fluctuators: usize) -> Self {
        NoiseKind::Pink {
            fluctuators,
            band: RateBand::default(),
        }
    }

    pub fn brown(fluctuators: usize) -> Self {
        NoiseKind::Brown {
            fluctuators,
            band: RateBand::default(),
        }
    }

    /// Denominator turning integer channel sums into `q ∈ [-1, 1]`.
    pub fn scale(&self) -> i32 {
        match *self {
            NoiseKind::Noiseless | NoiseKind::Rtn { .. } => 1,
            NoiseKind::Pink { fluctuators, .. } | NoiseKind::Brown { fluctuators, .. } => fluctuators as i32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseKind::Noiseless => Ok(()),
            NoiseKind::Rtn { rate } if rate >= 0.0 && rate.is_finite() => Ok(()),
            NoiseKind::Rtn { rate } => Err(Error::InvalidParameter(format!("RTN rate {rate} must be >= 0"))),
            NoiseKind::Pink { fluctuators, band } | NoiseKind::Brown { fluctuators, band } => {
                if fluctuators == 0 {
                    return Err(Error::InvalidParameter("N_f must be at least 1".into()));
                }
                RateBand::new(band.lower, band.upper).map(|_| ())
            }
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseKind::Noiseless => write!(f, "none"),
            NoiseKind::Rtn { rate } => write!(f, "rtn(gamma0={rate})"),
            NoiseKind::Pink { fluctuators, band } => {
                write!(f, "pink(nf={fluctuators}, band=[{}, {}])", band.lower, band.upper)
            }
            NoiseKind::Brown { fluctuators, band } => {
                write!(f, "brown(nf={fluctuators}, band=[{}, {}])", band.lower, band.upper)
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Channel {
    Constant,
    Fluctuating(FluctuatorEnsemble),
}

/// How the channels of one history are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseOptions {
    /// Draw fresh 1/f^α rates for every history.
    pub redraw_rates: bool,
    pub initial_sign: InitialSign,
}

impl Default for NoiseOptions {
    fn default() -> Self {
        Self {
            redraw_rates: true,
            initial_sign: InitialSign::default(),
        }
    }
}

/// Independent noise sources for one history, one per bond or spin.
#[derive(Debug, Clone)]
pub struct NoiseChannelSet {
    kind: NoiseKind,
    channels: Vec<Channel>,
}

impl NoiseChannelSet {
    /// Channel `c` of history `h` uses streams keyed by `(master_seed, h, c)`.
    ///
    /// With `redraw_rates = false` the colored-noise rates come from a stream
    /// shared by all histories, so only the switching sequences differ.
    pub fn for_history(kind: NoiseKind, channels: usize, master_seed: u64, history: u64, options: NoiseOptions) -> Result<Self> {
        let initial = options.initial_sign;
        kind.validate()?;
        let channels = (0..channels as u64)
            .map(|c| -> Result<Channel> {
                let keys = [master_seed, history, c];
                Ok(match kind {
                    NoiseKind::Noiseless => Channel::Constant,
                    NoiseKind::Rtn { rate } => Channel::Fluctuating(FluctuatorEnsemble::from_rates(&[rate], &keys, initial)?),
                    NoiseKind::Pink { fluctuators, band } | NoiseKind::Brown { fluctuators, band } => {
                        let alpha = if matches!(kind, NoiseKind::Pink { .. }) { 1 } else { 2 };
                        let rate_history = if options.redraw_rates { history } else { seed::SHARED };
                        let mut rate_rng = seed::stream(&[master_seed, rate_history, c, RATE_STREAM]);
                        Channel::Fluctuating(FluctuatorEnsemble::sample(alpha, band, fluctuators, &mut rate_rng, &keys, initial)?)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { kind, channels })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn scale(&self) -> i32 {
        self.kind.scale()
    }

    pub fn rates(&self, channel: usize) -> Vec<f64> {
        match &self.channels[channel] {
            Channel::Constant => Vec::new(),
            Channel::Fluctuating(e) => e.rates(),
        }
    }

    /// Integer channel sums at time `t` (non-decreasing across calls).
    pub fn sums_at(&mut self, t: f64, out: &mut [i32]) {
        let scale = self.kind.scale();
        for (slot, ch) in out.iter_mut().zip(self.channels.iter_mut()) {
            *slot = match ch {
                Channel::Constant => scale,
                Channel::Fluctuating(e) => e.sum_at(t),
            };
        }
    }

    pub fn values_at(&mut self, t: f64) -> Vec<f64> {
        let mut sums = vec![0; self.len()];
        self.sums_at(t, &mut sums);
        let scale = self.scale() as f64;
        sums.into_iter().map(|s| s as f64 / scale).collect()
    }

    /// Samples every channel at the start of each of `n_steps` steps.
    pub fn signals(&mut self, dt: f64, n_steps: usize) -> Result<NoiseSignals> {
        self.signals_from(0.0, dt, n_steps)
    }

    /// Samples every channel at `t0 + j·dt`, `j = 0..n_steps`.
    pub fn signals_from(&mut self, t0: f64, dt: f64, n_steps: usize) -> Result<NoiseSignals> {
        check_grid(dt)?;
        let n = self.len();
        let mut sums = vec![0; n * n_steps];
        for (j, row) in sums.chunks_mut(n.max(1)).enumerate().take(n_steps) {
            self.sums_at(t0 + j as f64 * dt, row);
        }
        Ok(NoiseSignals {
            channels: n,
            scale: self.scale(),
            sums,
        })
    }
}

impl NoiseChannelSet {
    /// Every switch in `(0, horizon]`, merged across channels in time order.
    pub fn path(&mut self, horizon: f64) -> Result<NoisePath> {
        if !(horizon >= 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon {horizon} must be >= 0")));
        }
        let n = self.len();
        let mut initial = vec![0; n];
        self.sums_at(0.0, &mut initial);
        let mut events: Vec<(f64, usize, i32)> = Vec::new();
        for (c, ch) in self.channels.iter_mut().enumerate() {
            if let Channel::Fluctuating(e) = ch {
                for f in &mut e.fluctuators {
                    while f.next_switch <= horizon {
                        let before = f.value as i32;
                        let t = f.switch_once();
                        events.push((t, c, -2 * before));
                    }
                }
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut sums = Vec::with_capacity(n * (events.len() + 1));
        sums.extend_from_slice(&initial);
        let mut row = initial;
        let mut times = Vec::with_capacity(events.len());
        for (t, c, delta) in events {
            row[c] += delta;
            times.push(t);
            sums.extend_from_slice(&row);
        }
        Ok(NoisePath {
            channels: n,
            scale: self.scale(),
            times,
            sums,
        })
    }
}

/// Piecewise-constant channel sums of one history: the value at `t = 0`
/// followed by the value after each switch.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    channels: usize,
    scale: i32,
    times: Vec<f64>,
    sums: Vec<i32>,
}

impl NoisePath {
    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn scale(&self) -> i32 {
        self.scale
    }

    /// Switch times in non-decreasing order.
    pub fn switch_times(&self) -> &[f64] {
        &self.times
    }

    /// Sums on the `k`-th constant segment; segment 0 starts at `t = 0`.
    pub fn segment(&self, k: usize) -> &[i32] {
        &self.sums[k * self.channels..(k + 1) * self.channels]
    }

    pub fn sums_at(&self, t: f64) -> &[i32] {
        self.segment(self.times.partition_point(|&s| s <= t))
    }

    /// Reads the path at `t0 + j·dt`, `j = 0..n_steps`.
    pub fn sample(&self, t0: f64, dt: f64, n_steps: usize) -> Result<NoiseSignals> {
        check_grid(dt)?;
        let mut sums = Vec::with_capacity(self.channels * n_steps);
        let mut k = 0;
        for j in 0..n_steps {
            let t = t0 + j as f64 * dt;
            while k < self.times.len() && self.times[k] <= t {
                k += 1;
            }
            sums.extend_from_slice(self.segment(k));
        }
        Ok(NoiseSignals {
            channels: self.channels,
            scale: self.scale,
            sums,
        })
    }
}

/// Step-major table of integer channel sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseSignals {
    channels: usize,
    scale: i32,
    sums: Vec<i32>,
}

impl NoiseSignals {
    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn scale(&self) -> i32 {
        self.scale
    }

    pub fn steps(&self) -> usize {
        self.sums.len().checked_div(self.channels).unwrap_or(0)
    }

    pub fn step(&self, j: usize) -> &[i32] {
        &self.sums[j * self.channels..(j + 1) * self.channels]
    }

    pub fn values(&self, j: usize) -> Vec<f64> {
        self.step(j).iter().map(|&s| s as f64 / self.scale as f64).collect()
    }

    pub fn channel(&self, c: usize) -> Vec<f64> {
        (0..self.steps()).map(|j| self.step(j)[c] as f64 / self.scale as f64).collect()
    }
}

/// `count` independent single-channel realizations of the stationary process.
pub fn sample_signals(kind: NoiseKind, count: usize, dt: f64, n_samples: usize, master_seed: u64) -> Result<Vec<Vec<f64>>> {
    let options = NoiseOptions {
        redraw_rates: true,
        initial_sign: InitialSign::Random,
    };
    (0..count as u64)
        .map(|r| {
            let mut set = NoiseChannelSet::for_history(kind, 1, master_seed, r, options)?;
            Ok(set.signals(dt, n_samples)?.channel(0))
        })
        .collect()
}

/// One-sided power spectral density estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub frequencies: Vec<f64>,
    pub psd: Vec<f64>,
}

/// Hann-windowed periodogram averaged over realizations of equal length.
///
/// Each realization has its mean removed. Frequencies are cyclic, `k/(nΔ)`
/// for `k = 1..=n/2`.
pub fn averaged_periodogram(signals: &[Vec<f64>], sample_interval: f64) -> Result<Periodogram> {
    check_grid(sample_interval)?;
    let n = signals.first().map(Vec::len).unwrap_or(0);
    if n < 8 {
        return Err(Error::InvalidParameter("need realizations of at least 8 samples".into()));
    }
    if signals.iter().any(|s| s.len() != n) {
        return Err(Error::InvalidParameter("realizations must share one length".into()));
    }
    let window: Vec<f64> = (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect();
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let fft: Arc<dyn rustfft::Fft<f64>> = FftPlanner::new().plan_fft_forward(n);
    let half = n / 2;
    let mut acc = vec![0.0; half];
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for s in signals {
        let mean = s.iter().sum::<f64>() / n as f64;
        for ((b, &x), &w) in buf.iter_mut().zip(s).zip(&window) {
            *b = Complex::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k + 1].norm_sqr();
        }
    }
    let norm = 2.0 * sample_interval / (window_power * signals.len() as f64);
    let total = n as f64 * sample_interval;
    Ok(Periodogram {
        frequencies: (1..=half).map(|k| k as f64 / total).collect(),
        psd: acc.into_iter().map(|a| a * norm).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    /// Fitted exponent α̂ in `S(f) ∝ f^-α̂`.
    pub alpha: f64,
    pub intercept: f64,
    pub bins: usize,
}

/// Least-squares slope of `log S` against `log f` over `[f1, f2]`.
pub fn fit_slope(periodogram: &Periodogram, band: (f64, f64)) -> Result<SlopeFit> {
    let (f1, f2) = band;
    let fmin = periodogram.frequencies.first().copied().unwrap_or(0.0);
    let fmax = periodogram.frequencies.last().copied().unwrap_or(0.0);
    // The lowest bins are dominated by the window's main lobe.
    let resolvable = 4.0 * fmin;
    if !(f1 < f2 && f1 >= resolvable && f2 <= fmax) {
        return Err(Error::UnresolvableBand {
            lower: f1,
            upper: f2,
            min: resolvable,
            max: fmax,
        });
    }
    let points: Vec<(f64, f64)> = periodogram
        .frequencies
        .iter()
        .zip(&periodogram.psd)
        .filter(|(&f, &p)| f >= f1 && f <= f2 && p > 0.0)
        .map(|(&f, &p)| (f.ln(), p.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::UnresolvableBand {
            lower: f1,
            upper: f2,
            min: resolvable,
            max: fmax,
        });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(SlopeFit {
        alpha: -slope,
        intercept: my - slope * mx,
        bins: points.len(),
    })
}

pub fn spectral_slope(signals: &[Vec<f64>], sample_interval: f64, band: (f64, f64)) -> Result<SlopeFit> {
    fit_slope(&averaged_periodogram(signals, sample_interval)?, band)
}
