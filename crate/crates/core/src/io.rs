// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Dataset and report files.
//!
//! Datasets are CSV with the header `x,i_plus,i_minus`, `.` as decimal
//! separator and `\n` line endings, accompanied by a JSON sidecar with the
//! same stem holding [`DatasetMeta`]. Fit reports are JSON objects with the
//! fields `a, v, k, x0, err_v, err_k, rms`.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::FringeFit;
use crate::error::{Error, Result};
use crate::experiment::{DatasetMeta, FringeDataset, XUnit};

pub const DATASET_HEADER: [&str; 3] = ["x", "i_plus", "i_minus"];

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

/// Write a table of floats with a header row.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::DimensionMismatch {
                expected: header.len(),
                actual: row.len(),
            });
        }
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Write the dataset CSV and its metadata sidecar.
pub fn write_dataset(path: &Path, ds: &FringeDataset) -> Result<()> {
    ds.validate()?;
    let rows: Vec<Vec<f64>> = (0..ds.len())
        .map(|i| vec![ds.x[i], ds.i_plus[i], ds.i_minus[i]])
        .collect();
    write_table(path, &DATASET_HEADER, &rows)?;
    write_json(&sidecar_path(path), &ds.meta)
}

/// Read a dataset CSV. Without a sidecar the sweep variable is taken to be
/// a phase in radians.
pub fn read_dataset(path: &Path) -> Result<FringeDataset> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != DATASET_HEADER {
        return Err(Error::Config(format!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            DATASET_HEADER.join(","),
            header.join(",")
        )));
    }
    let (mut x, mut i_plus, mut i_minus) = (vec![], vec![], vec![]);
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| {
                Error::Config(format!(
                    "{}: row {}: `{}` is not a number",
                    path.display(),
                    line + 2,
                    &rec[i]
                ))
            })
        };
        x.push(parse(0)?);
        i_plus.push(parse(1)?);
        i_minus.push(parse(2)?);
    }
    let side = sidecar_path(path);
    let meta = if side.exists() {
        serde_json::from_reader(File::open(side)?)?
    } else {
        DatasetMeta {
            experiment: "external".into(),
            x_unit: XUnit::PhaseRad,
            signal_unit: "arbitrary".into(),
            phase_map: None,
        }
    };
    FringeDataset::new(x, i_plus, i_minus, meta)
}

/// Fit report with pinned field names.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub a: f64,
    pub v: f64,
    pub k: f64,
    pub x0: f64,
    pub err_v: f64,
    pub err_k: f64,
    pub rms: f64,
}

impl From<&FringeFit> for FitRecord {
    fn from(f: &FringeFit) -> Self {
        Self {
            a: f.a,
            v: f.v,
            k: f.k,
            x0: f.x0,
            err_v: f.err_v,
            err_k: f.err_k,
            rms: f.rms,
        }
    }
}
