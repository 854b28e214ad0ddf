// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::OracleParams;
use tpsense::analysis::{fit_fringe, visibility_vs_transmission};
use tpsense::experiment::{run_quantum_sweep, ExperimentConfig, Port, QuantumPipeline};
use tpsense::gaussian::GaussianPipeline;

fn config_for(p: &OracleParams) -> ExperimentConfig {
    ExperimentConfig {
        n_max: p.n_max,
        r1: p.r1,
        r2: p.r2,
        pump_relative_phase: p.pump_relative_phase,
        eta_t: p.eta_t,
        eta_aux: p.eta_aux,
        overlap: p.overlap,
        ..ExperimentConfig::default()
    }
}

#[test]
fn oracle_agrees_with_gaussian_engine_at_high_cutoff() {
    // Both methods are exact up to truncation; a generous cutoff makes the
    // Fock reference converge onto the covariance-matrix result.
    for (r, eta_t, eta_aux, overlap) in [(0.05, 1.0, 1.0, 1.0), (0.1, 0.6, 0.8, 0.7)] {
        let p = OracleParams {
            n_max: 7,
            r1: r,
            r2: r,
            eta_t,
            eta_aux,
            overlap,
            ..Default::default()
        };
        let gauss = GaussianPipeline::new(&config_for(&p)).unwrap();
        for (phi_t, phi_aux) in [(0.0, 0.0), (1.3, -0.4)] {
            let (ga, gb) = gauss.ports(phi_t, phi_aux, overlap).unwrap();
            let (oa, ob) = common::ports(&p, phi_t, phi_aux);
            let scale = oa + ob;
            assert!((ga - oa).abs() < 1e-9 * scale, "r = {r}: {ga} vs {oa}");
            assert!((gb - ob).abs() < 1e-9 * scale, "r = {r}: {gb} vs {ob}");
        }
    }
}

#[test]
fn lossless_visibility_deviates_from_unity_at_fourth_order() {
    for r in [0.02f64, 0.05, 0.1] {
        let p = OracleParams {
            r1: r,
            r2: r,
            n_max: 5,
            ..Default::default()
        };
        let deficit = 1.0 - common::visibility(&p);
        assert!(deficit > 0.0 && deficit < r.powi(4), "r = {r}: 1 - V = {deficit}");
    }
}

#[test]
fn fitted_visibility_matches_oracle_across_transmission() {
    for eta in [0.25, 0.5, 0.75, 1.0] {
        let p = OracleParams {
            eta_t: eta,
            eta_aux: eta,
            ..Default::default()
        };
        let fit = fit_fringe(&run_quantum_sweep(&config_for(&p)).unwrap(), Port::Plus).unwrap();
        let oracle = common::visibility(&p);
        assert!(
            (fit.v - oracle).abs() < 1e-9,
            "η = {eta}: fit {} oracle {oracle}",
            fit.v
        );
    }
}

#[test]
fn transmission_curve_matches_oracle_and_endpoints() {
    let cfg = ExperimentConfig::ideal();
    let curve = visibility_vs_transmission(&[0.0, 0.5, 1.0], &cfg).unwrap();
    assert!(curve[0].1.abs() < 1e-6);
    assert!((curve[2].1 - 1.0).abs() < 1e-6);
    let oracle = common::visibility(&OracleParams {
        r1: cfg.r1,
        r2: cfg.r2,
        eta_t: 0.5,
        eta_aux: 0.5,
        ..Default::default()
    });
    assert!((curve[1].1 - oracle).abs() < 1e-9);
}

#[test]
fn port_intensities_match_oracle_pointwise() {
    let cases = [
        OracleParams {
            eta_t: 0.6,
            eta_aux: 0.8,
            overlap: 0.7,
            pump_relative_phase: 0.4,
            ..Default::default()
        },
        OracleParams {
            r1: 0.05,
            r2: 0.025,
            eta_t: 0.9,
            ..Default::default()
        },
    ];
    for p in cases {
        let pipe = QuantumPipeline::new(&config_for(&p)).unwrap();
        for (phi_t, phi_aux) in [(0.0, 0.0), (1.1, 0.3), (2.5, -0.7), (4.0, 2.0)] {
            let (a, b) = pipe.ports(phi_t, phi_aux, p.overlap).unwrap();
            let (oa, ob) = common::ports(&p, phi_t, phi_aux);
            let scale = oa + ob;
            assert!((a - oa).abs() < 1e-12 * scale, "{a} vs {oa}");
            assert!((b - ob).abs() < 1e-12 * scale, "{b} vs {ob}");
        }
    }
}

#[test]
fn unbalanced_sources_follow_oracle() {
    for ratio in [1.0, 0.5, 0.25] {
        let p = OracleParams {
            r2: 0.05 * ratio,
            ..Default::default()
        };
        let fit = fit_fringe(&run_quantum_sweep(&config_for(&p)).unwrap(), Port::Plus).unwrap();
        assert!((fit.v - common::visibility(&p)).abs() < 1e-9);
    }
}
