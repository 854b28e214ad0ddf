// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria, one line of output each. Exits nonzero if any fails.

#[path = "common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::OracleParams;
use tpsense::analysis::{fit_fringe, fringe_frequency_ratio, quantum_advantage};
use tpsense::experiment::{
    linspace, noon_parity, run_classical_sweep, run_noon_protocol, run_quantum_sweep, ExperimentConfig, Port,
    QuantumPipeline, SweepSpec,
};
use tpsense::gaussian::{fft_doubling, run_gaussian_sweep};
use tpsense::lockin::{lockin_sweep, LockinChain, LockinConfig};

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn configs_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn fringe_doubling() -> Check {
    let cfg = ExperimentConfig {
        n_max: 3,
        sweep: SweepSpec::range(3.0, 12.0, 200),
        ..ExperimentConfig::ideal()
    };
    let start = Instant::now();
    let q = run_quantum_sweep(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let c = run_classical_sweep(&cfg).map_err(|e| e.to_string())?;
    let qf = fit_fringe(&q, Port::Plus).map_err(|e| e.to_string())?;
    let cf = fit_fringe(&c, Port::Plus).map_err(|e| e.to_string())?;
    let ratio = fringe_frequency_ratio(&qf, &cf);
    let expected = 1560.0 * (1.0 / 1563.0 + 1.0 / 1557.0);
    let rel = (ratio / expected - 1.0).abs();
    ensure(
        rel < 1e-4 && elapsed < 10.0,
        format!("ratio {ratio:.7} vs {expected:.7} (rel {rel:.1e}), 200-point sweep in {elapsed:.2} s"),
    )
}

fn visibility_reproduction() -> Check {
    let cfg = ExperimentConfig::load(&configs_dir().join("calibrated.toml")).map_err(|e| e.to_string())?;
    let v = fit_fringe(&run_quantum_sweep(&cfg).map_err(|e| e.to_string())?, Port::Plus)
        .map_err(|e| e.to_string())?
        .v;
    let ideal = fit_fringe(
        &run_quantum_sweep(&ExperimentConfig::ideal()).map_err(|e| e.to_string())?,
        Port::Plus,
    )
    .map_err(|e| e.to_string())?
    .v;
    ensure(
        (0.74..=0.80).contains(&v) && (ideal - 1.0).abs() < 1e-6,
        format!("calibrated V = {v:.6}, ideal V = {ideal:.9}"),
    )
}

fn loss_model_oracle() -> Check {
    let mut worst: f64 = 0.0;
    let mut fitted = vec![];
    for eta in [0.25, 0.5, 0.75, 1.0] {
        let p = OracleParams {
            eta_t: eta,
            eta_aux: eta,
            ..Default::default()
        };
        let cfg = ExperimentConfig {
            n_max: p.n_max,
            r1: p.r1,
            r2: p.r2,
            pump_relative_phase: p.pump_relative_phase,
            eta_t: p.eta_t,
            eta_aux: p.eta_aux,
            overlap: p.overlap,
            ..ExperimentConfig::default()
        };
        let v = fit_fringe(&run_quantum_sweep(&cfg).map_err(|e| e.to_string())?, Port::Plus)
            .map_err(|e| e.to_string())?
            .v;
        worst = worst.max((v - common::visibility(&p)).abs());
        fitted.push(v);
    }
    let monotone = fitted.windows(2).all(|w| w[1] > w[0]);
    ensure(
        worst < 1e-9 && monotone,
        format!("max |V_fit − V_oracle| = {worst:.1e}, V(η) = {fitted:.6?}"),
    )
}

fn phase_transfer_purity() -> Check {
    let cfg = ExperimentConfig::ideal();
    let pipe = QuantumPipeline::new(&cfg).map_err(|e| e.to_string())?;
    let target = pipe.modes().target();
    let reference = pipe.auxiliary_state(0.0, 0.0).map_err(|e| e.to_string())?;
    let (mut purity_dev, mut aux_dev): (f64, f64) = (0.0, 0.0);
    for tilt in cfg.tilts().map_err(|e| e.to_string())? {
        let (phi_t, phi_aux) = pipe.plate_phases(tilt);
        let single = pipe
            .target_state(phi_t, phi_aux, 1.0)
            .and_then(|rho| rho.postselect_photon_number(&target, 1))
            .map_err(|e| e.to_string())?;
        purity_dev = purity_dev.max((single.purity() - 1.0).abs());
        let aux = pipe.auxiliary_state(phi_t, phi_aux).map_err(|e| e.to_string())?;
        aux_dev = aux_dev.max((aux.rho() - reference.rho()).camax());
    }
    ensure(
        purity_dev < 1e-9 && aux_dev < 1e-10,
        format!("max |purity − 1| = {purity_dev:.1e}, max aux change = {aux_dev:.1e}"),
    )
}

fn noon_engine() -> Check {
    let grid = linspace(0.0, 4.0 * PI, 240);
    let (mut k_dev, mut parity_dev): (f64, f64) = (0.0, 0.0);
    for n in 1..=4 {
        let fit = fit_fringe(&run_noon_protocol(n, &grid).map_err(|e| e.to_string())?, Port::Plus)
            .map_err(|e| e.to_string())?;
        k_dev = k_dev.max((fit.k - n as f64).abs());
        for phi in linspace(0.0, 2.0 * PI, 17) {
            let p = noon_parity(n, phi).map_err(|e| e.to_string())?;
            parity_dev = parity_dev.max((p - (n as f64 * phi).cos()).abs());
        }
    }
    ensure(
        k_dev < 1e-9 && parity_dev < 1e-9,
        format!("max |k − N| = {k_dev:.1e}, max |parity − cos Nφ| = {parity_dev:.1e}"),
    )
}

fn high_gain_persistence() -> Check {
    let mut bins = vec![];
    let mut doubled = true;
    for r in [0.1, 0.5, 1.0, 1.5] {
        let cfg = ExperimentConfig {
            r1: r,
            r2: r,
            ..ExperimentConfig::ideal()
        };
        let report = fft_doubling(&cfg, 32, 1024).map_err(|e| e.to_string())?;
        doubled &= report.doubled && report.classical_bin == 32;
        bins.push((r, report.quantum_bin));
    }
    let cfg = ExperimentConfig {
        sweep: SweepSpec::range(3.0, 12.0, 50),
        ..ExperimentConfig::ideal()
    };
    let fock = run_quantum_sweep(&cfg).map_err(|e| e.to_string())?;
    let gauss = run_gaussian_sweep(&cfg).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..fock.len() {
        for (f, g) in [(fock.i_plus[i], gauss.i_plus[i]), (fock.i_minus[i], gauss.i_minus[i])] {
            worst = worst.max((f - g).abs() / f.abs().max(g.abs()));
        }
    }
    ensure(
        doubled && worst < 1e-5,
        format!("quantum FFT bins (classical 32) {bins:?}, low-gain max rel diff {worst:.1e}"),
    )
}

fn quantum_advantage_criterion() -> Check {
    let a = quantum_advantage(0.77, 2);
    let b = quantum_advantage(0.70, 2);
    let c = quantum_advantage(1.0, 1);
    let ok = (a.value - 1.1858).abs() < 1e-12
        && a.pass
        && (b.value - 0.98).abs() < 1e-12
        && !b.pass
        && c.value == 1.0
        && !c.pass;
    ensure(
        ok,
        format!(
            "(0.77,2) = {:.4} {}, (0.70,2) = {:.2} {}, (1,1) = {} {}",
            a.value, a.pass, b.value, b.pass, c.value, c.pass
        ),
    )
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

fn lockin_regime() -> Check {
    let cfg = ExperimentConfig::fig4();
    let lockin = cfg.lockin.ok_or("fig4 preset lacks a lock-in section")?;
    let input = run_quantum_sweep(&cfg).map_err(|e| e.to_string())?;
    let truth = fit_fringe(&input, Port::Plus).map_err(|e| e.to_string())?.v;

    let mut vs = vec![];
    for seed in 0..50 {
        let c = LockinConfig {
            rng_seed: seed,
            ..lockin
        };
        let read = lockin_sweep(&input, &c).map_err(|e| e.to_string())?;
        vs.push(fit_fringe(&read, Port::Plus).map_err(|e| e.to_string())?.v);
    }
    let mean_v = mean(&vs);

    let bright = LockinConfig {
        signal_power_fw: 1e9,
        ..lockin
    };
    let read = lockin_sweep(&input, &bright).map_err(|e| e.to_string())?;
    let v_bright = fit_fringe(&read, Port::Plus).map_err(|e| e.to_string())?.v;

    let mut var_tau = vec![];
    for tau in [0.3, 3.0, 30.0] {
        let c = LockinConfig {
            time_constant_s: tau,
            duration_s: (6.0 * tau).max(15.0),
            ..LockinConfig::default()
        };
        let chain = LockinChain::new(&c).map_err(|e| e.to_string())?;
        let mut re = vec![];
        let mut im = vec![];
        for s in 0..400 {
            let z = chain
                .synthesize(300.0, s)
                .and_then(|x| chain.output(&x))
                .map_err(|e| e.to_string())?;
            re.push(z.re);
            im.push(z.im);
        }
        var_tau.push(0.5 * (variance(&re) + variance(&im)) * tau);
    }
    let spread = var_tau.iter().map(|x| (x / var_tau[1] - 1.0).abs()).fold(0.0, f64::max);

    ensure(
        (100.0..1000.0).contains(&lockin.signal_power_fw)
            && (0.35..=0.70).contains(&mean_v)
            && (v_bright - truth).abs() < 1e-3
            && spread < 0.25,
        format!(
            "{} fW: mean V {mean_v:.3} over 50 seeds; 1 µW: V {v_bright:.6} vs input {truth:.6}; var·τ spread {:.1} %",
            lockin.signal_power_fw,
            100.0 * spread
        ),
    )
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = configs_dir().join("fig4.toml");
    let mut outputs = vec![];
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        for (sub, target) in [("simulate", "sim"), ("fig4", "fig4")] {
            let status = Command::new(env!("CARGO_BIN_EXE_tpsense"))
                .args([sub, "--seed", "11", "--config"])
                .arg(&config)
                .arg("--out")
                .arg(out.join(target))
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(format!("{sub} failed: {}", String::from_utf8_lossy(&status.stderr)));
            }
        }
        outputs.push(out);
    }
    let files = ["sim/quantum.csv", "sim/classical.csv", "fig4/fig4.csv"];
    for f in files {
        let a = std::fs::read(outputs[0].join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(outputs[1].join(f)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{f} differs between runs"));
        }
    }
    Ok(format!("{} CSVs byte-identical across two runs", files.len()))
}

fn main() -> ExitCode {
    let checks: [Criterion; 9] = [
        ("AC1", "fringe doubling", fringe_doubling),
        ("AC2", "visibility reproduction", visibility_reproduction),
        ("AC3", "loss-model oracle", loss_model_oracle),
        ("AC4", "phase-transfer purity", phase_transfer_purity),
        ("AC5", "N00N engine", noon_engine),
        ("AC6", "high-gain persistence", high_gain_persistence),
        ("AC7", "quantum-advantage criterion", quantum_advantage_criterion),
        ("AC8", "lock-in regime", lockin_regime),
        ("AC9", "determinism", determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name}: {detail}");
            }
        }
    }
    println!("acceptance: {}/{} passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
