// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! The config file is the single source of truth; flags override single
//! fields on top of it (`--grid` replaces the sweep, `--n-max` the cutoff,
//! `--seed` every random seed). Without `--config` the built-in default
//! configuration of the subcommand is used.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{fit_fringe, fringe_frequency_ratio, quantum_advantage, visibility_vs_transmission};
use crate::error::{Error, Result};
use crate::experiment::{
    linspace, noon_parity, run_classical_sweep, run_noon_protocol, run_quantum_sweep, ExperimentConfig, Port, SweepSpec,
};
use crate::gaussian::{fft_doubling, run_gaussian_sweep};
use crate::io::{write_dataset, write_json, write_table, FitRecord};
use crate::lockin::lockin_sweep;

#[derive(Debug, Parser)]
#[command(
    name = "tpsense",
    version,
    about = "Two-photon phase sensing with single-photon detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed for every random process (lock-in noise, phase drift).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sweep override `start:stop:count` (degrees of tilt; radians for `noon`).
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    /// Fock cutoff override.
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected start:stop:count, got `{s}`"));
    };
    let start = a.trim().parse().map_err(|_| format!("bad start `{a}`"))?;
    let stop = b.trim().parse().map_err(|_| format!("bad stop `{b}`"))?;
    let count = n.trim().parse().map_err(|_| format!("bad count `{n}`"))?;
    if count < 2 {
        return Err("count must be ≥ 2".into());
    }
    Ok(Grid { start, stop, count })
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PortArg {
    Plus,
    Minus,
}

impl From<PortArg> for Port {
    fn from(p: PortArg) -> Self {
        match p {
            PortArg::Plus => Port::Plus,
            PortArg::Minus => Port::Minus,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum and classical tilt sweeps.
    Simulate(Common),
    /// Fit a dataset CSV and print the fit as JSON.
    Fit {
        csv: PathBuf,
        #[arg(long, value_enum, default_value = "plus")]
        port: PortArg,
        /// Also write the report and a manifest into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantum versus classical fringes and their frequency ratio.
    Fig3(Common),
    /// Quantum fringes read out through the photodiode lock-in chain.
    Fig4(Common),
    /// Visibility versus inter-source transmission and high-gain doubling.
    Supp1 {
        #[command(flatten)]
        common: Common,
        /// Number of transmission values in [0, 1].
        #[arg(long, default_value_t = 21)]
        eta_points: usize,
    },
    /// N-photon protocol fringes and parity.
    Noon {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_path: Option<String>,
    pub subcommand: String,
    pub output_dir: String,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    fn new(subcommand: &str, config: Option<&Path>, out: &Path, seed: Option<u64>) -> Self {
        Self {
            config_path: config.map(|p| p.display().to_string()),
            subcommand: subcommand.into(),
            output_dir: out.display().to_string(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }
}

fn load_config(common: &Common, fallback: ExperimentConfig) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => fallback,
    };
    if let Some(g) = common.grid {
        cfg.sweep = SweepSpec::range(g.start, g.stop, g.count);
    }
    if let Some(n) = common.n_max {
        cfg.n_max = n;
    }
    if let Some(seed) = common.seed {
        if let Some(l) = cfg.lockin.as_mut() {
            l.rng_seed = seed;
        }
        if let Some(d) = cfg.phase_drift.as_mut() {
            d.seed = seed;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn prepare_out(dir: &Path, subcommand: &str, common: &Common) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_json(
        &dir.join("manifest.json"),
        &RunManifest::new(subcommand, common.config.as_deref(), dir, common.seed),
    )
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(c) => simulate(&c),
        Command::Fit { csv, port, out } => fit(&csv, port.into(), out.as_deref()),
        Command::Fig3(c) => fig3(&c),
        Command::Fig4(c) => fig4(&c),
        Command::Supp1 { common, eta_points } => supp1(&common, eta_points),
        Command::Noon { common, n } => noon(&common, n),
    }
}

fn simulate(c: &Common) -> Result<()> {
    let cfg = load_config(c, ExperimentConfig::default())?;
    prepare_out(&c.out, "simulate", c)?;
    let q = run_quantum_sweep(&cfg)?;
    let cl = run_classical_sweep(&cfg)?;
    write_dataset(&c.out.join("quantum.csv"), &q)?;
    write_dataset(&c.out.join("classical.csv"), &cl)?;
    log::info!("wrote {} sweep points to {}", q.len(), c.out.display());
    Ok(())
}

fn fit(csv: &Path, port: Port, out: Option<&Path>) -> Result<()> {
    let ds = crate::io::read_dataset(csv)?;
    let rec = FitRecord::from(&fit_fringe(&ds, port)?);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("fit.json"), &rec)?;
        write_json(
            &dir.join("manifest.json"),
            &RunManifest {
                config_path: Some(csv.display().to_string()),
                ..RunManifest::new("fit", None, dir, None)
            },
        )?;
    }
    println!("{}", serde_json::to_string_pretty(&rec)?);
    Ok(())
}

#[derive(Serialize)]
struct Fig3Report {
    quantum_fit: FitRecord,
    classical_fit: FitRecord,
    frequency_ratio: f64,
    expected_ratio: f64,
    quantum_advantage: crate::analysis::QuantumAdvantage,
}

fn fig3(c: &Common) -> Result<()> {
    let cfg = load_config(c, ExperimentConfig::default())?;
    prepare_out(&c.out, "fig3", c)?;
    let q = run_quantum_sweep(&cfg)?;
    let cl = run_classical_sweep(&cfg)?;
    let qf = fit_fringe(&q, Port::Plus)?;
    let cf = fit_fringe(&cl, Port::Plus)?;
    write_dataset(&c.out.join("quantum.csv"), &q)?;
    write_dataset(&c.out.join("classical.csv"), &cl)?;
    let phase = q.phase_axis()?;
    let rows: Vec<Vec<f64>> = (0..q.len())
        .map(|i| vec![q.x[i], phase[i], q.i_plus[i], q.i_minus[i], cl.i_plus[i], cl.i_minus[i]])
        .collect();
    write_table(
        &c.out.join("fig3.csv"),
        &[
            "x",
            "phase",
            "quantum_plus",
            "quantum_minus",
            "classical_plus",
            "classical_minus",
        ],
        &rows,
    )?;
    let report = Fig3Report {
        quantum_fit: (&qf).into(),
        classical_fit: (&cf).into(),
        frequency_ratio: fringe_frequency_ratio(&qf, &cf),
        expected_ratio: cfg.frequency_ratio(),
        quantum_advantage: quantum_advantage(qf.v, 2),
    };
    write_json(&c.out.join("fig3_report.json"), &report)?;
    log::info!("frequency ratio {:.6}, V = {:.4}", report.frequency_ratio, qf.v);
    Ok(())
}

#[derive(Serialize)]
struct Fig4Report {
    input_fit: FitRecord,
    lockin_fit: FitRecord,
    signal_power_fw: f64,
    throughput: f64,
}

fn fig4(c: &Common) -> Result<()> {
    let mut cfg = load_config(c, ExperimentConfig::fig4())?;
    let lockin = *cfg
        .lockin
        .get_or_insert_with(|| ExperimentConfig::fig4().lockin.expect("preset has lock-in"));
    prepare_out(&c.out, "fig4", c)?;
    let q = run_quantum_sweep(&cfg)?;
    let read = lockin_sweep(&q, &lockin)?;
    write_dataset(&c.out.join("fig4.csv"), &read)?;
    let input = fit_fringe(&q, Port::Plus)?;
    let measured = fit_fringe(&read, Port::Plus)?;
    measured.require_significant(3.0)?;
    write_json(
        &c.out.join("fig4_report.json"),
        &Fig4Report {
            input_fit: (&input).into(),
            lockin_fit: (&measured).into(),
            signal_power_fw: lockin.signal_power_fw,
            throughput: lockin.throughput,
        },
    )?;
    log::info!("lock-in visibility {:.3} (input {:.3})", measured.v, input.v);
    Ok(())
}

fn supp1(c: &Common, eta_points: usize) -> Result<()> {
    if eta_points < 2 {
        return Err(Error::Config("--eta-points must be ≥ 2".into()));
    }
    let cfg = load_config(c, ExperimentConfig::default())?;
    prepare_out(&c.out, "supp1", c)?;
    let curve = visibility_vs_transmission(&linspace(0.0, 1.0, eta_points), &cfg)?;
    let rows: Vec<Vec<f64>> = curve.iter().map(|&(e, v)| vec![e, v]).collect();
    write_table(&c.out.join("supp1_visibility.csv"), &["eta", "visibility"], &rows)?;
    let mut reports = vec![];
    for r in [0.1, 0.5, 1.0, 1.5] {
        let high = ExperimentConfig {
            r1: r,
            r2: r,
            ..cfg.clone()
        };
        write_dataset(&c.out.join(format!("gaussian_r{r}.csv")), &run_gaussian_sweep(&high)?)?;
        reports.push(fft_doubling(&high, 32, 1024)?);
    }
    write_json(&c.out.join("supp1_gaussian.json"), &reports)?;
    Ok(())
}

#[derive(Serialize)]
struct ParitySample {
    phi: f64,
    parity: f64,
    cos_n_phi: f64,
}

#[derive(Serialize)]
struct NoonReport {
    n: usize,
    fit: FitRecord,
    parity: Vec<ParitySample>,
}

fn noon(c: &Common, n: usize) -> Result<()> {
    let grid = c.grid.map_or_else(|| linspace(0.0, 6.0 * PI, 240), |g| g.points());
    std::fs::create_dir_all(&c.out)?;
    let ds = run_noon_protocol(n, &grid)?;
    let f = fit_fringe(&ds, Port::Plus)?;
    let parity = linspace(0.0, PI, 9)
        .into_iter()
        .map(|phi| {
            Ok(ParitySample {
                phi,
                parity: noon_parity(n, phi)?,
                cos_n_phi: (n as f64 * phi).cos(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    prepare_out(&c.out, "noon", c)?;
    write_dataset(&c.out.join(format!("noon_{n}.csv")), &ds)?;
    write_json(
        &c.out.join(format!("noon_{n}_report.json")),
        &NoonReport {
            n,
            fit: (&f).into(),
            parity,
        },
    )?;
    Ok(())
}
