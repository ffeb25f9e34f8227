// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use partcorr::correlations::DiscordSettings;
use partcorr::experiment::CONVERGENCE_THRESHOLD;
use partcorr::noise::{averaged_periodogram, fit_slope, sample_signals};
use partcorr::validation::{run_oracle_suite, run_property_suite, PropertyReport};
use partcorr::{run_scenario, ScenarioRun};

mod config;
mod format;

use config::{noise_kind, per_v_path, FileConfig, RunConfig};
use format::g12;

#[derive(Debug, Parser)]
#[command(name = "partcorr", version, about = "Entanglement and discord of two particles in noisy Hubbard lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a scenario and write the correlation time series as CSV.
    Run(RunArgs),
    /// Estimate the power spectrum of a noise source.
    Spectrum(SpectrumArgs),
    /// Check the structural properties of the correlation quantifiers on random states.
    Props(CheckArgs),
    /// Cross-check the solvers against brute-force oracles on small instances.
    Oracle(CheckArgs),
}

/// Flags mirror the config keys; a flag beats its environment variable,
/// which beats the config file.
#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, env = "PARTCORR_CONFIG")]
    config: Option<PathBuf>,
    /// bose | fermi
    #[arg(long, env = "PARTCORR_MODEL")]
    model: Option<String>,
    /// PsiB | XiB | PsiBprime | PsiF | XiF | UpsilonF
    #[arg(long, env = "PARTCORR_STATE")]
    state: Option<String>,
    /// none | rtn | pink | brown
    #[arg(long, env = "PARTCORR_NOISE")]
    noise: Option<String>,
    /// RTN switching rate in units of |T|.
    #[arg(long, env = "PARTCORR_GAMMA0")]
    gamma0: Option<f64>,
    /// Fluctuators per colored-noise channel.
    #[arg(long, env = "PARTCORR_NF")]
    nf: Option<usize>,
    /// Spectral exponent of colored noise: 1 (pink) or 2 (brown).
    #[arg(long, env = "PARTCORR_ALPHA")]
    alpha: Option<u8>,
    #[arg(long, env = "PARTCORR_GAMMA_MIN")]
    gamma_min: Option<f64>,
    #[arg(long, env = "PARTCORR_GAMMA_MAX")]
    gamma_max: Option<f64>,
    /// Interaction strengths V/|T|, comma separated.
    #[arg(long, env = "PARTCORR_V", value_delimiter = ',', allow_hyphen_values = true)]
    v: Option<Vec<f64>>,
    #[arg(long, env = "PARTCORR_HISTORIES")]
    histories: Option<usize>,
    #[arg(long, env = "PARTCORR_DT")]
    dt: Option<f64>,
    #[arg(long, env = "PARTCORR_TMAX")]
    tmax: Option<f64>,
    /// Steps between recorded samples.
    #[arg(long, env = "PARTCORR_STRIDE")]
    stride: Option<usize>,
    /// A | B
    #[arg(long, env = "PARTCORR_MEASURED_PARTY")]
    measured_party: Option<String>,
    #[arg(long, env = "PARTCORR_SEED")]
    seed: Option<u64>,
    /// Output CSV; with several v values each gets a `_v{v}` suffix.
    #[arg(long, env = "PARTCORR_OUT")]
    out: Option<PathBuf>,
    /// exact | start | midpoint
    #[arg(long, env = "PARTCORR_SAMPLING")]
    sampling: Option<String>,
    /// positive | random
    #[arg(long, env = "PARTCORR_INITIAL_SIGN")]
    initial_sign: Option<String>,
    #[arg(long, env = "PARTCORR_REDRAW_RATES")]
    redraw_rates: Option<bool>,
    #[arg(long, env = "PARTCORR_THETA_POINTS")]
    theta_points: Option<usize>,
    #[arg(long, env = "PARTCORR_PHI_POINTS")]
    phi_points: Option<usize>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let flags = FileConfig {
            model: self.model,
            state: self.state,
            noise: self.noise,
            gamma0: self.gamma0,
            nf: self.nf,
            alpha: self.alpha,
            gamma_min: self.gamma_min,
            gamma_max: self.gamma_max,
            v: self.v,
            histories: self.histories,
            dt: self.dt,
            tmax: self.tmax,
            stride: self.stride,
            measured_party: self.measured_party,
            seed: self.seed,
            out: self.out,
            sampling: self.sampling,
            initial_sign: self.initial_sign,
            redraw_rates: self.redraw_rates,
            theta_points: self.theta_points,
            phi_points: self.phi_points,
        };
        RunConfig::resolve(&file.overlay(flags))
    }
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// rtn | pink | brown
    #[arg(long, env = "PARTCORR_NOISE", default_value = "pink")]
    noise: String,
    #[arg(long, env = "PARTCORR_GAMMA0")]
    gamma0: Option<f64>,
    #[arg(long, env = "PARTCORR_NF")]
    nf: Option<usize>,
    #[arg(long, env = "PARTCORR_ALPHA")]
    alpha: Option<u8>,
    #[arg(long, env = "PARTCORR_GAMMA_MIN")]
    gamma_min: Option<f64>,
    #[arg(long, env = "PARTCORR_GAMMA_MAX")]
    gamma_max: Option<f64>,
    /// Sampling interval.
    #[arg(long, env = "PARTCORR_DT", default_value_t = 0.01)]
    dt: f64,
    /// Samples per realization.
    #[arg(long, default_value_t = 1 << 16)]
    samples: usize,
    #[arg(long, default_value_t = 200)]
    realizations: usize,
    /// Frequency band of the slope fit, `f1,f2`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.01, 0.1])]
    fit_band: Vec<f64>,
    #[arg(long, env = "PARTCORR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "PARTCORR_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Random states per property.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, env = "PARTCORR_SEED", default_value_t = 0)]
    seed: u64,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_run(w: &mut dyn Write, header: &str, run: &ScenarioRun) -> Result<()> {
    w.write_all(header.as_bytes())?;
    writeln!(w, "# run_v = {}", g12(run.v))?;
    writeln!(
        w,
        "# max_conv = {} (threshold {}{})",
        g12(run.max_convergence()),
        g12(CONVERGENCE_THRESHOLD),
        if run.flagged() { ", not converged" } else { "" }
    )?;
    writeln!(w, "tau,P11,E_modes,E_P,D_P,purity,S_D,conv")?;
    for r in &run.records {
        // `+ 0.0` folds negative zeros from clamped quantities into `0`.
        let row = [r.tau, r.p11, r.e_modes, r.e_p, r.d_p, r.purity, r.s_d, r.conv].map(|x| g12(x + 0.0));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let cfg = args.resolve()?;
    let header = cfg.header();
    let runs = run_scenario(&cfg.scenario)?;
    let several = runs.len() > 1;
    for r in &runs {
        let path = match (&cfg.out, several) {
            (Some(p), true) => Some(per_v_path(p, r.v)),
            (p, _) => p.clone(),
        };
        let mut w = output(path.as_ref())?;
        write_run(&mut *w, &header, r)?;
        w.flush()?;
        if r.flagged() {
            eprintln!(
                "warning: v = {}: ensemble average not converged (max trace distance {} > {})",
                g12(r.v),
                g12(r.max_convergence()),
                g12(CONVERGENCE_THRESHOLD)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn spectrum(args: SpectrumArgs) -> Result<ExitCode> {
    let cfg = FileConfig {
        noise: Some(args.noise),
        gamma0: args.gamma0,
        nf: args.nf,
        alpha: args.alpha,
        gamma_min: args.gamma_min,
        gamma_max: args.gamma_max,
        ..FileConfig::default()
    };
    let kind = noise_kind(&cfg)?;
    let signals = sample_signals(kind, args.realizations, args.dt, args.samples, args.seed)?;
    let p = averaged_periodogram(&signals, args.dt)?;
    let band = (args.fit_band[0], args.fit_band[1]);
    let fit = fit_slope(&p, band)?;
    let mut w = output(args.out.as_ref())?;
    writeln!(w, "# partcorr {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# noise = {kind}")?;
    writeln!(w, "# dt = {}", g12(args.dt))?;
    writeln!(w, "# samples = {}", args.samples)?;
    writeln!(w, "# realizations = {}", args.realizations)?;
    writeln!(w, "# seed = {}", args.seed)?;
    writeln!(w, "# fit_band = [{}, {}]", g12(band.0), g12(band.1))?;
    writeln!(w, "# fitted_alpha = {} ({} bins)", g12(fit.alpha), fit.bins)?;
    writeln!(w, "frequency,psd")?;
    for (f, s) in p.frequencies.iter().zip(&p.psd) {
        writeln!(w, "{},{}", g12(*f), g12(*s))?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn report(reports: &[PropertyReport]) -> ExitCode {
    let mut ok = true;
    for r in reports {
        ok &= r.passed();
        println!(
            "{} {:<55} checked {:>5}  failures {:>4}  worst {:>12}  tol {}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.checked,
            r.failures,
            g12(r.worst),
            g12(r.tolerance)
        );
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Props(a) => run_property_suite(a.samples, a.seed, &DiscordSettings::default())
            .map(|r| report(&r))
            .map_err(Into::into),
        Command::Oracle(a) => run_oracle_suite(a.samples, a.seed).map(|r| report(&r)).map_err(Into::into),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
