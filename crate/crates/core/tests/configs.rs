// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use tpsense::analysis::fit_fringe;
use tpsense::experiment::{run_quantum_sweep, ExperimentConfig, Port};

fn config(name: &str) -> ExperimentConfig {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name]
        .iter()
        .collect();
    ExperimentConfig::load(&path).unwrap()
}

#[test]
fn shipped_configs_load_and_match_presets() {
    assert_eq!(config("default.toml"), ExperimentConfig::default());
    assert_eq!(config("ideal.toml"), ExperimentConfig::ideal());
    let fig4 = config("fig4.toml");
    assert_eq!(fig4.lockin, ExperimentConfig::fig4().lockin);
}

#[test]
fn optional_knobs_in_default_config_parse() {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", "default.toml"]
        .iter()
        .collect();
    let text = std::fs::read_to_string(path).unwrap();
    let enabled: String = text
        .lines()
        .map(|l| {
            l.strip_prefix("# ")
                .filter(|s| s.contains('=') || s.starts_with('['))
                .unwrap_or(l)
        })
        .map(|l| l.split("  #").next().unwrap().trim_end().to_owned() + "\n")
        .collect();
    let cfg = ExperimentConfig::from_toml_str(&enabled).unwrap();
    assert!(cfg.overlap_profile.is_some() && cfg.phase_drift.is_some());
    assert_eq!(cfg.pbs_extinction_db, Some(30.0));
}

#[test]
fn calibrated_config_reproduces_the_target_visibility() {
    let v = fit_fringe(&run_quantum_sweep(&config("calibrated.toml")).unwrap(), Port::Plus)
        .unwrap()
        .v;
    assert!((0.74..=0.80).contains(&v), "V = {v}");
    assert!((v - 0.79).abs() < 1e-6);
}
