//! CSV tables for trajectories, ensembles, phase diagrams, spectra and the
//! reshaping protocol. Floats are written in scientific notation with 12
//! significant digits, so a parsed table re-emits byte for byte.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dynamics::{EnsemblePoint, Trajectory};
use crate::error::{Error, Result};
use crate::floquet::{FloquetSample, Shape, StroboscopicRecord};
use crate::quantum::Spectrum;
use crate::stationary::sweep::PhaseDiagram;
use crate::stationary::Stability;

pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// One row of a fixed-schema table.
pub trait CsvRow: DeserializeOwned {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn write_rows<W: Write, T: CsvRow>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Parse a table, rejecting any header other than `T::HEADER`.
pub fn read_rows<R: Read, T: CsvRow>(input: R) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(T::HEADER.iter().copied()) {
        return Err(Error::Parse(format!(
            "header {:?}, expected {:?}",
            header.iter().collect::<Vec<_>>(),
            T::HEADER
        )));
    }
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| Error::Parse(format!("row {}: {e}", i + 1))))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub e_body: f64,
    pub j_sq: f64,
}

impl CsvRow for TrajectoryRow {
    const HEADER: &'static [&'static str] = &["t", "j1", "j2", "j3", "e_body", "j_sq"];
    fn fields(&self) -> Vec<String> {
        [self.t, self.j1, self.j2, self.j3, self.e_body, self.j_sq].map(fmt_float).to_vec()
    }
}

pub fn trajectory_rows(tr: &Trajectory) -> Vec<TrajectoryRow> {
    tr.samples
        .iter()
        .map(|s| TrajectoryRow {
            t: s.t,
            j1: s.state.0.x,
            j2: s.state.0.y,
            j3: s.state.0.z,
            e_body: s.e_body,
            j_sq: s.j_sq,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub t: f64,
    pub var_major: f64,
    pub var_minor: f64,
    pub tilt_rad: f64,
}

impl CsvRow for EnsembleRow {
    const HEADER: &'static [&'static str] = &["t", "var_major", "var_minor", "tilt_rad"];
    fn fields(&self) -> Vec<String> {
        [self.t, self.var_major, self.var_minor, self.tilt_rad].map(fmt_float).to_vec()
    }
}

pub fn ensemble_rows(points: &[EnsemblePoint]) -> Vec<EnsembleRow> {
    points
        .iter()
        .map(|p| EnsembleRow {
            t: p.t,
            var_major: p.ellipse.major,
            var_minor: p.ellipse.minor,
            tilt_rad: p.ellipse.tilt,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub omega_mag: f64,
    pub point_id: usize,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub energy: f64,
    pub stability: Stability,
}

impl CsvRow for PhaseRow {
    const HEADER: &'static [&'static str] = &["omega_mag", "point_id", "j1", "j2", "j3", "energy", "stability"];
    fn fields(&self) -> Vec<String> {
        let mut f = vec![fmt_float(self.omega_mag), self.point_id.to_string()];
        f.extend([self.j1, self.j2, self.j3, self.energy].map(fmt_float));
        f.push(self.stability.tag().to_string());
        f
    }
}

pub fn phase_rows(diagram: &PhaseDiagram) -> Vec<PhaseRow> {
    diagram
        .samples
        .iter()
        .flat_map(|s| {
            s.set.points.iter().enumerate().map(move |(id, p)| PhaseRow {
                omega_mag: s.omega_mag,
                point_id: id,
                j1: p.j.0.x,
                j2: p.j.0.y,
                j3: p.j.0.z,
                energy: p.energy,
                stability: p.stability,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub omega_mag: f64,
    pub level_index: usize,
    pub energy: f64,
}

impl CsvRow for SpectrumRow {
    const HEADER: &'static [&'static str] = &["omega_mag", "level_index", "energy"];
    fn fields(&self) -> Vec<String> {
        vec![fmt_float(self.omega_mag), self.level_index.to_string(), fmt_float(self.energy)]
    }
}

/// Levels of each spectrum, labelled by `|Omega|` of its configuration.
pub fn spectrum_rows(spectra: &[Spectrum]) -> Vec<SpectrumRow> {
    spectra
        .iter()
        .flat_map(|s| {
            let mag = s.config.omega().norm();
            s.energies.iter().enumerate().map(move |(k, &e)| SpectrumRow {
                omega_mag: mag,
                level_index: k,
                energy: e,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StroboscopicRow {
    pub period_index: usize,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

impl CsvRow for StroboscopicRow {
    const HEADER: &'static [&'static str] = &["period_index", "j1", "j2", "j3"];
    fn fields(&self) -> Vec<String> {
        let mut f = vec![self.period_index.to_string()];
        f.extend([self.j1, self.j2, self.j3].map(fmt_float));
        f
    }
}

pub fn stroboscopic_rows(rec: &StroboscopicRecord) -> Vec<StroboscopicRow> {
    rec.samples
        .iter()
        .enumerate()
        .map(|(k, s)| StroboscopicRow { period_index: k, j1: s.0.x, j2: s.0.y, j3: s.0.z })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetTrajectoryRow {
    pub t: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub e_body: f64,
    pub j_sq: f64,
    pub shape: Shape,
}

impl CsvRow for FloquetTrajectoryRow {
    const HEADER: &'static [&'static str] = &["t", "j1", "j2", "j3", "e_body", "j_sq", "shape"];
    fn fields(&self) -> Vec<String> {
        let mut f = [self.t, self.j1, self.j2, self.j3, self.e_body, self.j_sq].map(fmt_float).to_vec();
        f.push(self.shape.tag().to_string());
        f
    }
}

pub fn floquet_rows(samples: &[FloquetSample]) -> Vec<FloquetTrajectoryRow> {
    samples
        .iter()
        .map(|s| FloquetTrajectoryRow {
            t: s.t,
            j1: s.state.0.x,
            j2: s.state.0.y,
            j3: s.state.0.z,
            e_body: s.e_body,
            j_sq: s.state.0.norm_squared(),
            shape: s.shape,
        })
        .collect()
}
