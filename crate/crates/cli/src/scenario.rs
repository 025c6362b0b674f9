//! Scenario files: JSON descriptions of a run, shared by all subcommands.

use levisqueeze::{InitialConditions, PhysicalSetup, SystemParams, ThermalBathParams};
use serde::{Deserialize, Serialize};

/// Dimensionless time grid: `samples` points, evenly spaced in `(0, t_max]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct TimeSpec {
    pub t_max: f64,
    pub samples: usize,
}

impl TimeSpec {
    pub fn grid(&self) -> Result<Vec<f64>, String> {
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return Err(format!("time.t_max must be positive and finite, got {}", self.t_max));
        }
        if self.samples == 0 {
            return Err("time.samples must be at least 1".into());
        }
        let n = self.samples;
        Ok((1..=n).map(|k| self.t_max * k as f64 / n as f64).collect())
    }
}

/// An axis of a map or sweep: explicit values, or a linear/log range.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        n: usize,
        #[serde(default)]
        log: bool,
    },
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            Axis::Values(v) => {
                if v.is_empty() {
                    return Err("axis value list is empty".into());
                }
                Ok(v.clone())
            }
            Axis::Range { min, max, n, log } => {
                if *n < 1 {
                    return Err("axis range needs n >= 1".into());
                }
                if !(min.is_finite() && max.is_finite() && max > min) {
                    return Err(format!("bad axis range [{min}, {max}]"));
                }
                if *log && *min <= 0.0 {
                    return Err("log axis needs a positive lower end".into());
                }
                let vals = (0..*n)
                    .map(|k| {
                        let f = if *n == 1 { 0.0 } else { k as f64 / (*n - 1) as f64 };
                        if *log {
                            (min.ln() + f * (max.ln() - min.ln())).exp()
                        } else {
                            min + f * (max - min)
                        }
                    })
                    .collect();
                Ok(vals)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct WignerSpec {
    /// Snapshot time (units of unit_scale).
    pub t: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapSpec {
    /// Stability classification over `(omega/delta, g/delta)`.
    Stability { omega_over_delta: Axis, g_over_delta: Axis },
    /// Asymptotic squeezing at optimal detuning over dissipation rates
    /// (units of omega). `thermal` switches the noise axis from the
    /// displacement-noise rate to `n_bar * gamma` of a thermal bath.
    Squeezing {
        g_over_omega: f64,
        kappa_over_omega: Axis,
        noise_over_omega: Axis,
        #[serde(default)]
        thermal: bool,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepSpec {
    /// Cavity lengths (m).
    pub l_c: Axis,
    /// Initial mechanical occupations, one simulation per value.
    pub n_bar_b: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct OptimizeSpec {
    /// Explicit rates (units of omega = 1). When absent, the rates come from
    /// the physical `setup` section instead.
    pub omega: Option<f64>,
    pub g: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma_disp: Option<f64>,
    /// Thermal-bath product `n_bar * gamma`; used with `--thermal-bath`.
    pub n_bar_gamma: Option<f64>,
}

/// A run description. Subcommands read the sections they need and reject
/// scenarios missing them.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SystemParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConditions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermal_bath: Option<ThermalBathParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setup: Option<PhysicalSetup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner: Option<WignerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeSpec>,
}

impl Scenario {
    pub fn from_path(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| {
            format!("config {}: parse error at line {}, column {}: {e}", path.display(), e.line(), e.column())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_variants() {
        let v = Axis::Values(vec![1.0, 2.0]).values().unwrap();
        assert_eq!(v, vec![1.0, 2.0]);
        let lin = Axis::Range { min: 0.0, max: 1.0, n: 3, log: false }.values().unwrap();
        assert_eq!(lin, vec![0.0, 0.5, 1.0]);
        let lg = Axis::Range { min: 1.0, max: 100.0, n: 3, log: true }.values().unwrap();
        assert!((lg[1] - 10.0).abs() < 1e-12);
        assert!(Axis::Values(vec![]).values().is_err());
        assert!(Axis::Range { min: -1.0, max: 1.0, n: 2, log: true }.values().is_err());
    }

    #[test]
    fn axis_json_forms() {
        let a: Axis = serde_json::from_str("[1.0, 2.0]").unwrap();
        assert_eq!(a.values().unwrap().len(), 2);
        let a: Axis = serde_json::from_str(r#"{"min":1.0,"max":10.0,"n":4,"log":true}"#).unwrap();
        assert_eq!(a.values().unwrap().len(), 4);
    }

    #[test]
    fn time_grid_validation() {
        assert!(TimeSpec { t_max: 0.0, samples: 5 }.grid().is_err());
        assert!(TimeSpec { t_max: 10.0, samples: 0 }.grid().is_err());
        let g = TimeSpec { t_max: 10.0, samples: 4 }.grid().unwrap();
        assert_eq!(g, vec![2.5, 5.0, 7.5, 10.0]);
    }
}
