// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario orchestration: model, noise and initial state in, correlation
//! time series out.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::{CorrelationAnalyzer, DiscordSettings};
use crate::error::{Error, Result};
use crate::model::{initial_state, Bipartition, HubbardModel, HubbardParams, Lattice, Party, StateLabel};
use crate::noise::{InitialSign, NoiseKind, NoiseOptions};
use crate::propagator::{run_ensemble, EnsembleAverage, EnsembleOptions, EvolutionConfig};

/// Trace distance above which an ensemble average is flagged as unconverged.
pub const CONVERGENCE_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    BoseRing4,
    FermiDimer,
}

impl ModelKind {
    pub fn lattice(self) -> Lattice {
        match self {
            ModelKind::BoseRing4 => Lattice::BOSE_RING_4,
            ModelKind::FermiDimer => Lattice::FermiDimer,
        }
    }

    pub fn default_partition(self) -> Bipartition {
        match self {
            ModelKind::BoseRing4 => Bipartition::bose_default(),
            ModelKind::FermiDimer => Bipartition::fermi_default(),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::BoseRing4 => "bose",
            ModelKind::FermiDimer => "fermi",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bose" | "boson" | "bosering4" => Ok(ModelKind::BoseRing4),
            "fermi" | "fermion" | "fermidimer" => Ok(ModelKind::FermiDimer),
            _ => Err(Error::InvalidParameter(format!("unknown model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelKind,
    pub state: StateLabel,
    /// Interaction strengths `V/|T|`; all share the same noise histories.
    pub v: Vec<f64>,
    /// RTN rates are given as `γ₀ τ_s`; with `|T| = 1` that is `γ₀` itself.
    pub noise: NoiseKind,
    pub evolution: EvolutionConfig,
    pub partition: Bipartition,
    pub measured: Party,
    pub seed: u64,
    pub discord: DiscordSettings,
    /// Draw fresh 1/f^α rates for every history.
    pub redraw_rates: bool,
    pub initial_sign: InitialSign,
}

impl Scenario {
    pub fn new(model: ModelKind, state: StateLabel, v: Vec<f64>, noise: NoiseKind, evolution: EvolutionConfig) -> Self {
        Self {
            model,
            state,
            v,
            noise,
            evolution,
            partition: model.default_partition(),
            measured: Party::B,
            seed: 0,
            discord: DiscordSettings::default(),
            redraw_rates: true,
            initial_sign: InitialSign::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_measured(mut self, party: Party) -> Self {
        self.measured = party;
        self
    }

    pub fn with_discord(mut self, settings: DiscordSettings) -> Self {
        self.discord = settings;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.v.is_empty() {
            return Err(Error::InvalidParameter("at least one v value is required".into()));
        }
        if let Some(bad) = self.v.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("v = {bad} is not finite")));
        }
        self.noise.validate()?;
        self.discord.validate()?;
        let stats = crate::model::lattice_basis(self.model.lattice())?.statistics();
        if self.state.statistics() != stats {
            return Err(Error::IncompatibleState {
                label: self.state.to_string(),
                expected: stats,
            });
        }
        Ok(())
    }
}

/// One row of output: every quantity at a single time sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    /// Dimensionless time `|T| t`.
    pub tau: f64,
    pub p11: f64,
    pub e_modes: f64,
    pub e_p: f64,
    pub d_p: f64,
    pub purity: f64,
    pub s_d: f64,
    /// Trace distance between the `M` and `M/2` history averages.
    pub conv: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub v: f64,
    pub histories: usize,
    pub records: Vec<CorrelationRecord>,
}

impl ScenarioRun {
    pub fn max_convergence(&self) -> f64 {
        self.records.iter().map(|r| r.conv).fold(0.0, f64::max)
    }

    pub fn flagged(&self) -> bool {
        self.max_convergence() > CONVERGENCE_THRESHOLD
    }

    pub fn series(&self, f: impl Fn(&CorrelationRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub distances: Vec<f64>,
    pub threshold: f64,
    pub flagged: bool,
}

pub fn convergence_report(average: &EnsembleAverage) -> Result<ConvergenceReport> {
    if average.histories < 2 {
        return Err(Error::InvalidParameter("convergence needs at least two histories".into()));
    }
    let distances = average.convergence();
    let flagged = distances.iter().any(|&d| d > CONVERGENCE_THRESHOLD);
    Ok(ConvergenceReport {
        distances,
        threshold: CONVERGENCE_THRESHOLD,
        flagged,
    })
}

pub fn run_scenario(scenario: &Scenario) -> Result<Vec<ScenarioRun>> {
    scenario.validate()?;
    let lattice = scenario.model.lattice();
    let models = scenario
        .v
        .iter()
        .map(|&v| HubbardModel::new(HubbardParams::relative(v, lattice)?))
        .collect::<Result<Vec<_>>>()?;
    let basis = models[0].basis().clone();
    let psi0 = initial_state(scenario.state, &basis)?.into_amplitudes();
    let analyzer = CorrelationAnalyzer::new(&basis, &scenario.partition, scenario.measured, scenario.discord)?;
    let options = EnsembleOptions {
        master_seed: scenario.seed,
        noise: NoiseOptions {
            redraw_rates: scenario.redraw_rates,
            initial_sign: scenario.initial_sign,
        },
    };
    let averages = run_ensemble(&models, scenario.noise, &psi0, &scenario.evolution, options)?;

    Ok(scenario
        .v
        .iter()
        .zip(averages)
        .map(|(&v, avg)| {
            let conv = avg.convergence();
            let records = avg
                .densities
                .par_iter()
                .zip(avg.times.par_iter())
                .zip(conv.par_iter())
                .map(|((rho, &tau), &conv)| {
                    let s = analyzer.analyze(rho);
                    CorrelationRecord {
                        tau,
                        p11: s.p11,
                        e_modes: s.e_modes,
                        e_p: s.e_p,
                        d_p: s.d_p,
                        purity: s.purity,
                        s_d: s.s_d,
                        conv,
                    }
                })
                .collect();
            ScenarioRun {
                v,
                histories: avg.histories,
                records,
            }
        })
        .collect())
}
