use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use eulertop::correspondence::{classical_from_quantum, quantum_from_classical};
use eulertop::dynamics::{ensemble_squeeze, integrate, BodyState, EnsembleCone};
use eulertop::floquet::{norm_drift, run_protocol, FloquetProtocol};
use eulertop::io::{self, CsvRow};
use eulertop::quantum::{spectral_singularities, spectrum, spectrum_sweep};
use eulertop::stationary::sweep::{linear_grid, phase_sweep};
use eulertop::stationary::stationary_points;
use eulertop::Vec3;
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, Kind};
use crate::error::CliError;

/// Files written by one experiment.
pub struct Outputs {
    prefix: String,
    pub paths: Vec<PathBuf>,
}

impl Outputs {
    fn path(&mut self, suffix: &str) -> PathBuf {
        let p = PathBuf::from(format!("{}_{suffix}", self.prefix));
        self.paths.push(p.clone());
        p
    }

    fn csv<T: CsvRow>(&mut self, suffix: &str, rows: &[T]) -> Result<(), CliError> {
        let f = File::create(self.path(suffix))?;
        io::write_rows(BufWriter::new(f), rows)?;
        Ok(())
    }

    fn json<T: Serialize>(&mut self, suffix: &str, value: &T) -> Result<(), CliError> {
        let path = self.path(suffix);
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn grid(cfg: &ExperimentConfig) -> Option<(Vec3, Vec<f64>)> {
    Some((
        vec3(cfg.direction?),
        linear_grid(cfg.omega_min?, cfg.omega_max?, cfg.samples?),
    ))
}

/// Run a resolved config, writing every output under `prefix`.
pub fn execute(cfg: &ExperimentConfig, prefix: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Outputs { prefix: prefix.to_string(), paths: Vec::new() };
    match cfg.kind {
        Kind::Simulate => {
            let body = cfg.inertia.unwrap();
            let j0 = BodyState(vec3(cfg.initial.unwrap()));
            let tr = integrate(&j0, &body, cfg.dt.unwrap(), cfg.steps.unwrap(), cfg.renormalize.unwrap())?;
            let (de, dj) = tr.conservation_drift();
            out.csv("trajectory.csv", &io::trajectory_rows(&tr))?;
            out.json(
                "summary.json",
                &json!({
                    "method": tr.method.tag(),
                    "energy_drift": de,
                    "j_sq_drift": dj,
                    "sign_flips": [tr.sign_flips(0), tr.sign_flips(1), tr.sign_flips(2)],
                }),
            )?;
        }
        Kind::Ensemble => {
            let body = cfg.inertia.unwrap();
            let center = vec3(cfg.initial.unwrap());
            let cone = EnsembleCone::ring(center, center.norm(), cfg.half_angle.unwrap(), cfg.members.unwrap())?;
            let pts = ensemble_squeeze(&cone, &body, cfg.dt.unwrap(), cfg.steps.unwrap(), cfg.every.unwrap())?;
            out.csv("ensemble.csv", &io::ensemble_rows(&pts))?;
        }
        Kind::Stationary => {
            let big_j = cfg.big_j.unwrap();
            let set = match (&cfg.inertia, &cfg.twisting) {
                (Some(c), _) => stationary_points(c, big_j)?,
                (_, Some(q)) => stationary_points(q, big_j)?,
                _ => unreachable!("resolved config carries a system"),
            };
            out.json("stationary.json", &json!({ "big_j": big_j, "points": set.points, "rings": set.rings }))?;
        }
        Kind::Sweep => {
            let (dir, g) = grid(cfg).expect("resolved sweep has a grid");
            let diagram = phase_sweep(&cfg.twisting.unwrap(), &dir, &g, cfg.big_j.unwrap())?;
            out.csv("phase.csv", &io::phase_rows(&diagram))?;
            let intervals: Vec<_> = diagram
                .intervals
                .iter()
                .map(|iv| json!({ "lo": iv.lo, "hi": iv.hi, "zone": iv.zone(), "signature": iv.signature }))
                .collect();
            out.json(
                "criticals.json",
                &json!({
                    "big_j": diagram.big_j,
                    "criticals": diagram.criticals,
                    "normalized": diagram.normalized_criticals(),
                    "intervals": intervals,
                }),
            )?;
        }
        Kind::Spectrum => {
            let q = cfg.twisting.unwrap();
            let spectra = match grid(cfg) {
                Some((dir, g)) => spectrum_sweep(&q, &dir, &g)?,
                None => vec![spectrum(&q)?],
            };
            out.csv("spectrum.csv", &io::spectrum_rows(&spectra))?;
            if cfg.singularities.unwrap() {
                let reports = spectra
                    .iter()
                    .map(|s| {
                        let set = stationary_points(&s.config, s.config.spin())?;
                        let report = spectral_singularities(s, &set.points)?;
                        Ok(json!({ "omega_mag": s.config.omega().norm(), "report": report }))
                    })
                    .collect::<Result<Vec<_>, eulertop::Error>>()?;
                out.json("singularities.json", &reports)?;
            }
        }
        Kind::Floquet => {
            let plate = cfg.plate.unwrap();
            let mut p = FloquetProtocol::plate(plate.i0, plate.k3, cfg.tau0.unwrap(), cfg.tau_swap.unwrap())?;
            p.dt = cfg.dt.unwrap();
            p.record_stride = cfg.record_stride.unwrap();
            let (full, rec) = run_protocol(&p, &BodyState(vec3(cfg.initial.unwrap())), cfg.periods.unwrap())?;
            out.csv("floquet.csv", &io::floquet_rows(&full))?;
            out.csv("stroboscopic.csv", &io::stroboscopic_rows(&rec))?;
            out.json(
                "floquet.json",
                &json!({
                    "drive_period": p.period(),
                    "period_multiple": rec.period_multiple,
                    "subharmonic_period": rec.subharmonic_period,
                    "alternation_breaks": rec.alternation_breaks,
                    "escaped": rec.escaped,
                    "first_escape": rec.first_escape,
                    "diverged": rec.diverged,
                    "cluster_radii": rec.cluster_radii(rec.period_multiple.unwrap_or(1)),
                    "norm_drift": norm_drift(&rec),
                }),
            )?;
        }
        Kind::Correspond => {
            let value = match (&cfg.inertia, &cfg.twisting) {
                (Some(c), _) => json!({ "twisting": quantum_from_classical(c) }),
                (_, Some(q)) => {
                    let (body, gauge) = classical_from_quantum(q);
                    json!({ "inertia": body, "gauge": gauge })
                }
                _ => unreachable!("resolved config carries a system"),
            };
            out.json("correspond.json", &value)?;
        }
    }
    Ok(out.paths)
}
