use std::path::Path;

use eulertop::floquet::swap_time;
use eulertop::{InertiaConfig, TwistingConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Simulate,
    Stationary,
    Sweep,
    Spectrum,
    Floquet,
    Ensemble,
    Correspond,
}

/// Plate-shaped body of the reshaping protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plate {
    pub i0: f64,
    pub k3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub inertia: Option<InertiaConfig>,
    pub twisting: Option<TwistingConfig>,
    pub plate: Option<Plate>,
    pub initial: Option<[f64; 3]>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    /// Output stride for ensembles.
    pub every: Option<usize>,
    pub renormalize: Option<bool>,
    pub half_angle: Option<f64>,
    pub members: Option<usize>,
    pub big_j: Option<f64>,
    pub direction: Option<[f64; 3]>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub samples: Option<usize>,
    pub singularities: Option<bool>,
    pub tau0: Option<f64>,
    pub tau_swap: Option<f64>,
    pub periods: Option<usize>,
    pub record_stride: Option<usize>,
    /// Output path prefix; `--out` takes precedence.
    pub output: Option<String>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn need<T: Copy>(v: Option<T>, name: &str, kind: Kind) -> Result<T, CliError> {
    v.ok_or_else(|| bad(format!("`{name}` is required for kind {kind:?}")))
}

fn positive(v: f64, name: &str) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("`{name}` must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    /// Parse JSON text; schema errors carry the line and column.
    pub fn parse(text: &str, origin: &Path) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            bad(format!("{}:{}:{}: {e}", origin.display(), e.line(), e.column()))
        })
    }

    /// Check kind-specific fields and fill in defaults.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let kind = self.kind;
        let systems = [self.inertia.is_some(), self.twisting.is_some(), self.plate.is_some()];
        if systems.iter().filter(|&&s| s).count() != 1 {
            return Err(bad("exactly one of `inertia`, `twisting`, `plate` must be given"));
        }
        let wants = match kind {
            Kind::Simulate | Kind::Ensemble => "inertia",
            Kind::Sweep | Kind::Spectrum => "twisting",
            Kind::Floquet => "plate",
            Kind::Stationary | Kind::Correspond => "",
        };
        let has = ["inertia", "twisting", "plate"][systems.iter().position(|&s| s).unwrap()];
        if !wants.is_empty() && wants != has {
            return Err(bad(format!("kind {kind:?} needs `{wants}`, got `{has}`")));
        }
        if kind == Kind::Stationary && has == "plate" || kind == Kind::Correspond && has == "plate" {
            return Err(bad(format!("kind {kind:?} needs `inertia` or `twisting`")));
        }
        if let Some(c) = &self.inertia {
            c.validate().map_err(|e| bad(format!("inertia: {e}")))?;
        }
        if let Some(c) = &self.twisting {
            c.validate().map_err(|e| bad(format!("twisting: {e}")))?;
        }
        if let Some(j) = self.initial {
            if j.iter().any(|v| !v.is_finite()) || j.iter().all(|&v| v == 0.0) {
                return Err(bad("`initial` must be finite and nonzero"));
            }
        }
        match kind {
            Kind::Simulate => {
                need(self.initial, "initial", kind)?;
                positive(need(self.dt, "dt", kind)?, "dt")?;
                if need(self.steps, "steps", kind)? == 0 {
                    return Err(bad("`steps` must be at least 1"));
                }
                self.renormalize.get_or_insert(false);
            }
            Kind::Ensemble => {
                need(self.initial, "initial", kind)?;
                positive(need(self.dt, "dt", kind)?, "dt")?;
                let h = positive(need(self.half_angle, "half_angle", kind)?, "half_angle")?;
                if h > 0.2 {
                    return Err(bad(format!("`half_angle` must not exceed 0.2 rad, got {h}")));
                }
                if need(self.steps, "steps", kind)? == 0 {
                    return Err(bad("`steps` must be at least 1"));
                }
                if *self.members.get_or_insert(64) < 3 {
                    return Err(bad("`members` must be at least 3"));
                }
                if *self.every.get_or_insert(1) == 0 {
                    return Err(bad("`every` must be at least 1"));
                }
            }
            Kind::Stationary | Kind::Sweep => {
                if self.big_j.is_none() {
                    self.big_j = match (&self.twisting, self.initial) {
                        (Some(q), _) if q.n > 0 => Some(q.spin()),
                        (_, Some(j)) => Some(j.iter().map(|v| v * v).sum::<f64>().sqrt()),
                        _ => None,
                    };
                }
                positive(need(self.big_j, "big_j", kind)?, "big_j")?;
                if kind == Kind::Sweep {
                    self.check_grid(true)?;
                }
            }
            Kind::Spectrum => {
                if self.twisting.map_or(0, |q| q.n) == 0 {
                    return Err(bad("spectrum needs `twisting.n` >= 1"));
                }
                self.check_grid(false)?;
                self.singularities.get_or_insert(false);
            }
            Kind::Floquet => {
                let plate = self.plate.unwrap();
                positive(plate.i0, "plate.i0")?;
                need(self.initial, "initial", kind)?;
                positive(need(self.tau0, "tau0", kind)?, "tau0")?;
                if self.tau_swap.is_none() {
                    self.tau_swap = Some(swap_time(plate.i0, plate.k3).map_err(|e| bad(e.to_string()))?);
                }
                positive(self.tau_swap.unwrap(), "tau_swap")?;
                if need(self.periods, "periods", kind)? == 0 {
                    return Err(bad("`periods` must be at least 1"));
                }
                let period = self.tau0.unwrap() + self.tau_swap.unwrap();
                positive(*self.dt.get_or_insert(period / eulertop::floquet::STEPS_PER_PERIOD), "dt")?;
                if *self.record_stride.get_or_insert(100) == 0 {
                    return Err(bad("`record_stride` must be at least 1"));
                }
            }
            Kind::Correspond => {}
        }
        Ok(self)
    }

    fn check_grid(&self, required: bool) -> Result<(), CliError> {
        let parts = [
            self.direction.is_some(),
            self.omega_min.is_some(),
            self.omega_max.is_some(),
            self.samples.is_some(),
        ];
        if !required && parts.iter().all(|&p| !p) {
            return Ok(());
        }
        if parts.iter().any(|&p| !p) {
            return Err(bad("`direction`, `omega_min`, `omega_max` and `samples` go together"));
        }
        let d = self.direction.unwrap();
        if d.iter().any(|v| !v.is_finite()) || d.iter().all(|&v| v == 0.0) {
            return Err(bad("`direction` must be finite and nonzero"));
        }
        let (lo, hi) = (self.omega_min.unwrap(), self.omega_max.unwrap());
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(bad(format!("need omega_min <= omega_max, got {lo} and {hi}")));
        }
        if self.samples.unwrap() < 2 {
            return Err(bad("`samples` must be at least 2"));
        }
        Ok(())
    }

    /// Resolved config as JSON with unset fields left out.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.retain(|_, x| !x.is_null());
        }
        v
    }
}
