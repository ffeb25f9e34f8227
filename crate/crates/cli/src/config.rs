// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Flat TOML run configuration, overlaid by command-line flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use partcorr::correlations::DiscordSettings;
use partcorr::{EvolutionConfig, InitialSign, ModelKind, NoiseKind, Party, RateBand, Scenario, StateLabel};
use serde::Deserialize;

use crate::format::g12;

/// Samples per scenario when no stride is given.
pub const TARGET_SAMPLES: usize = 400;

/// Every key is optional; missing keys fall back to the defaults below.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub state: Option<String>,
    pub noise: Option<String>,
    pub gamma0: Option<f64>,
    pub nf: Option<usize>,
    pub alpha: Option<u8>,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
    pub v: Option<Vec<f64>>,
    pub histories: Option<usize>,
    pub dt: Option<f64>,
    pub tmax: Option<f64>,
    pub stride: Option<usize>,
    pub measured_party: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub sampling: Option<String>,
    pub initial_sign: Option<String>,
    pub redraw_rates: Option<bool>,
    pub theta_points: Option<usize>,
    pub phi_points: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Keys set in `over` replace the ones in `self`.
    pub fn overlay(self, over: FileConfig) -> Self {
        macro_rules! pick {
            ($($f:ident),*) => { FileConfig { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            model, state, noise, gamma0, nf, alpha, gamma_min, gamma_max, v, histories, dt, tmax, stride,
            measured_party, seed, out, sampling, initial_sign, redraw_rates, theta_points, phi_points
        )
    }
}

/// Fully resolved `run` configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub tmax: f64,
    pub out: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow::anyhow!("{key}: {e}"))
}

pub fn noise_kind(cfg: &FileConfig) -> Result<NoiseKind> {
    let name = cfg.noise.as_deref().unwrap_or("none").to_ascii_lowercase();
    let band = RateBand::new(
        cfg.gamma_min.unwrap_or(RateBand::default().lower()),
        cfg.gamma_max.unwrap_or(RateBand::default().upper()),
    )?;
    let fluctuators = cfg.nf.unwrap_or(20);
    let expect_alpha = |a: u8| -> Result<()> {
        match cfg.alpha {
            Some(x) if x != a => bail!("alpha = {x} contradicts noise = {name}"),
            _ => Ok(()),
        }
    };
    let kind = match name.as_str() {
        "none" | "noiseless" => NoiseKind::Noiseless,
        "rtn" => NoiseKind::Rtn {
            rate: cfg.gamma0.unwrap_or(0.1),
        },
        "pink" => {
            expect_alpha(1)?;
            NoiseKind::Pink { fluctuators, band }
        }
        "brown" => {
            expect_alpha(2)?;
            NoiseKind::Brown { fluctuators, band }
        }
        "colored" | "coloured" => match cfg.alpha {
            Some(1) => NoiseKind::Pink { fluctuators, band },
            Some(2) => NoiseKind::Brown { fluctuators, band },
            _ => bail!("colored noise needs alpha = 1 or 2"),
        },
        other => bail!("unknown noise {other:?} (expected none, rtn, pink or brown)"),
    };
    kind.validate()?;
    Ok(kind)
}

impl RunConfig {
    pub fn resolve(cfg: &FileConfig) -> Result<Self> {
        let model: ModelKind = parse("model", cfg.model.as_deref().unwrap_or("bose"))?;
        let state: StateLabel = match &cfg.state {
            Some(s) => parse("state", s)?,
            None => match model {
                ModelKind::BoseRing4 => StateLabel::PsiB,
                ModelKind::FermiDimer => StateLabel::PsiF,
            },
        };
        let noise = noise_kind(cfg)?;
        let colored = matches!(noise, NoiseKind::Pink { .. } | NoiseKind::Brown { .. });
        let tmax = cfg.tmax.unwrap_or(if colored { 50.0 } else { 20.0 });
        let dt = cfg.dt.unwrap_or(0.01);
        let histories = cfg.histories.unwrap_or(2000);
        let mut evolution = EvolutionConfig::for_horizon(dt, tmax, histories, TARGET_SAMPLES)?;
        if let Some(stride) = cfg.stride {
            let steps = evolution.n_steps().div_ceil(stride) * stride;
            evolution = EvolutionConfig::new(dt, steps, histories, stride)?;
        }
        if let Some(s) = &cfg.sampling {
            evolution = evolution.with_sampling(parse("sampling", s)?);
        }
        let v = cfg.v.clone().unwrap_or_else(|| vec![0.0]);
        let mut discord = DiscordSettings::default();
        discord.theta_points = cfg.theta_points.unwrap_or(discord.theta_points);
        discord.phi_points = cfg.phi_points.unwrap_or(discord.phi_points);
        let mut scenario = Scenario::new(model, state, v, noise, evolution)
            .with_seed(cfg.seed.unwrap_or(0))
            .with_discord(discord);
        if let Some(p) = &cfg.measured_party {
            scenario = scenario.with_measured(parse::<Party>("measured_party", p)?);
        }
        if let Some(s) = &cfg.initial_sign {
            scenario.initial_sign = parse::<InitialSign>("initial_sign", s)?;
        }
        scenario.redraw_rates = cfg.redraw_rates.unwrap_or(true);
        scenario.validate()?;
        Ok(Self {
            scenario,
            tmax,
            out: cfg.out.clone(),
        })
    }

    /// `# key = value` lines describing everything needed to rerun.
    pub fn header(&self) -> String {
        let s = &self.scenario;
        let e = &s.evolution;
        let mut h = String::new();
        let q = |x: &dyn std::fmt::Display| format!("\"{x}\"");
        let _ = writeln!(h, "# partcorr {}", env!("CARGO_PKG_VERSION"));
        let mut line = |k: &str, v: String| {
            let _ = writeln!(h, "# {k} = {v}");
        };
        line("model", q(&s.model));
        line("state", q(&s.state));
        match s.noise {
            NoiseKind::Noiseless => line("noise", q(&"none")),
            NoiseKind::Rtn { rate } => {
                line("noise", q(&"rtn"));
                line("gamma0", g12(rate));
            }
            NoiseKind::Pink { fluctuators, band } | NoiseKind::Brown { fluctuators, band } => {
                let (name, alpha) = if matches!(s.noise, NoiseKind::Pink { .. }) { ("pink", 1) } else { ("brown", 2) };
                line("noise", q(&name));
                line("alpha", alpha.to_string());
                line("nf", fluctuators.to_string());
                line("gamma_min", g12(band.lower()));
                line("gamma_max", g12(band.upper()));
                line("redraw_rates", s.redraw_rates.to_string());
            }
        }
        line("v", format!("[{}]", s.v.iter().map(|&x| g12(x)).collect::<Vec<_>>().join(", ")));
        line("histories", e.histories().to_string());
        line("dt", g12(e.dt()));
        line("tmax", g12(self.tmax));
        line("stride", e.record_stride().to_string());
        line("sampling", q(&e.sampling()));
        line("initial_sign", q(&s.initial_sign));
        line("measured_party", q(&s.measured));
        line("theta_points", s.discord.theta_points.to_string());
        line("phi_points", s.discord.phi_points.to_string());
        line("seed", s.seed.to_string());
        h
    }
}

/// Output path for one `v` when several are run.
pub fn per_v_path(base: &Path, v: f64) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_v{}.{ext}", g12(v)),
        None => format!("{stem}_v{}", g12(v)),
    };
    base.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use partcorr::StepSampling;

    #[test]
    fn overlay_prefers_flags() {
        let file = FileConfig {
            model: Some("fermi".into()),
            seed: Some(3),
            ..Default::default()
        };
        let flags = FileConfig {
            seed: Some(9),
            ..Default::default()
        };
        let c = file.overlay(flags);
        assert_eq!(c.model.as_deref(), Some("fermi"));
        assert_eq!(c.seed, Some(9));
    }

    #[test]
    fn defaults_resolve() {
        let r = RunConfig::resolve(&FileConfig::default()).unwrap();
        assert_eq!(r.scenario.model, ModelKind::BoseRing4);
        assert_eq!(r.scenario.state, StateLabel::PsiB);
        assert_eq!(r.scenario.evolution.n_samples(), 401);
        assert_eq!(r.scenario.evolution.sampling(), StepSampling::Exact);
    }

    #[test]
    fn alpha_must_match_noise() {
        let c = FileConfig {
            noise: Some("pink".into()),
            alpha: Some(2),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&c).is_err());
        let c = FileConfig {
            noise: Some("colored".into()),
            alpha: Some(2),
            ..Default::default()
        };
        assert!(matches!(noise_kind(&c).unwrap(), NoiseKind::Brown { .. }));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("modle = \"bose\"").is_err());
        let c: FileConfig = toml::from_str("model = \"fermi\"\nv = [0.0, 20.0]\nseed = 4").unwrap();
        assert_eq!(c.v, Some(vec![0.0, 20.0]));
    }

    #[test]
    fn per_v_paths() {
        assert_eq!(per_v_path(Path::new("/tmp/run.csv"), -2.0), PathBuf::from("/tmp/run_v-2.csv"));
        assert_eq!(per_v_path(Path::new("run"), 0.5), PathBuf::from("run_v0.5"));
    }
}
