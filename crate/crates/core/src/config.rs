//! Run configuration: strict TOML ingestion, validation, and resolution.
//!
//! Every section and key is optional — omitted values take engineering
//! defaults — but unknown keys anywhere in the tree are rejected with the
//! offending key named, and invalid values are reported with their dotted
//! config path. Two values resolve at load time rather than having fixed
//! defaults: the base entropy `entropy.s0` (solved from the calibration
//! equality unless given explicitly, in which case it must satisfy the
//! equality to 1e-12 relative) and the plateau level `thresholds.phi_cc`
//! (10% of the initial plateau unless given explicitly).

use crate::entropy::{EntropyCalibration, EntropyMode};
use crate::error::{Error, Result};
use crate::evolution::{ParamSchedule, RegimeThresholds};
use crate::potential::PotentialSpec;
use crate::quad::QuadratureSettings;
use crate::soundspeed::KineticFamily;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Hard cap on `t_end/dt`; larger grids are refused at validation.
pub const MAX_GRID_STEPS: f64 = 5e6;

/// Emitted time-series format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    /// Comma-separated values with the frozen header.
    #[serde(rename = "csv")]
    Csv,
    /// Line-delimited JSON objects, one record per line, same field set.
    #[serde(rename = "records")]
    Records,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Records => "records",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "records" => Ok(OutputFormat::Records),
            other => Err(format!("unknown format `{other}` (expected csv or records)")),
        }
    }
}

/// Time grid and quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    pub dt: f64,
    pub t_end: f64,
    pub quad_tol: f64,
}

impl NumericsConfig {
    /// Quadrature settings derived from the configured tolerance.
    pub fn quadrature(&self) -> QuadratureSettings {
        QuadratureSettings {
            rel_tol: self.quad_tol,
            max_depth: 40,
        }
    }

    fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, &'static str, bool); 3] = [
            ("dt", self.dt, "dt > 0", self.dt > 0.0),
            ("t_end", self.t_end, "t_end >= 0", self.t_end >= 0.0),
            ("quad_tol", self.quad_tol, "quad_tol > 0", self.quad_tol > 0.0),
        ];
        for (name, value, constraint, ok) in checks {
            if !value.is_finite() || !ok {
                return Err(Error::Config {
                    key: format!("numerics.{name}"),
                    message: format!("value {value} violates `{constraint}`"),
                });
            }
        }
        if self.t_end / self.dt > MAX_GRID_STEPS {
            return Err(Error::Config {
                key: "numerics.t_end".into(),
                message: format!(
                    "grid has {} steps, above the budget of {}",
                    self.t_end / self.dt,
                    MAX_GRID_STEPS
                ),
            });
        }
        Ok(())
    }
}

/// Where and how time series are written.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub format: OutputFormat,
    /// Default output path; a CLI `--out` overrides it, absent both the
    /// series goes to stdout.
    pub path: Option<String>,
    /// Significant digits for numeric fields (3..=17).
    pub precision: usize,
}

/// Fully resolved, validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub schedule: ParamSchedule,
    pub potential: PotentialSpec,
    pub calibration: EntropyCalibration,
    /// Scalar background entering the fluctuation split at every step.
    pub phi0: f64,
    pub entropy_mode: EntropyMode,
    pub kinetic: KineticFamily,
    pub thresholds: RegimeThresholds,
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
}

// ---------------------------------------------------------------------------
// Raw (serde) layer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawEntropy {
    phi0: f64,
    hbar: f64,
    kappa: f64,
    beta: f64,
    temperature: f64,
    area: f64,
    s0: Option<f64>,
    mode: EntropyMode,
}

impl Default for RawEntropy {
    fn default() -> Self {
        RawEntropy {
            phi0: 10.0,
            hbar: 1.0,
            kappa: 1.0,
            beta: 1.0,
            temperature: 1.0,
            area: 1.0,
            s0: None,
            mode: EntropyMode::FirstOrder,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawThresholds {
    theta_thin: f64,
    theta_entropy: f64,
    phi_cc: Option<f64>,
    eps_v: f64,
}

impl Default for RawThresholds {
    fn default() -> Self {
        RawThresholds {
            theta_thin: 0.2,
            theta_entropy: 0.05,
            phi_cc: None,
            eps_v: 0.05,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawNumerics {
    dt: f64,
    t_end: f64,
    quad_tol: f64,
}

impl Default for RawNumerics {
    fn default() -> Self {
        RawNumerics {
            dt: 0.01,
            t_end: 20.0,
            quad_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOutput {
    format: OutputFormat,
    path: Option<String>,
    precision: usize,
}

impl Default for RawOutput {
    fn default() -> Self {
        RawOutput {
            format: OutputFormat::Csv,
            path: None,
            precision: 12,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConfig {
    schedule: ParamSchedule,
    potential: PotentialSpec,
    entropy: RawEntropy,
    kinetic: KineticFamily,
    thresholds: RawThresholds,
    numerics: RawNumerics,
    output: RawOutput,
}

/// Rewrite bare-field errors from component validators into dotted-path
/// config errors.
fn at_key(prefix: &str, e: Error) -> Error {
    match e {
        Error::Domain {
            name,
            value,
            constraint,
        } => Error::Config {
            key: format!("{prefix}.{name}"),
            message: format!("value {value} violates `{constraint}`"),
        },
        Error::NonFinite { name, value } => Error::Config {
            key: format!("{prefix}.{name}"),
            message: format!("must be finite, got {value}"),
        },
        other => other,
    }
}

impl RawConfig {
    fn resolve(self) -> Result<(RunConfig, Vec<String>)> {
        self.schedule.validate().map_err(|e| at_key("schedule", e))?;
        self.potential.validate().map_err(|e| at_key("potential", e))?;
        self.kinetic.validate().map_err(|e| at_key("kinetic", e))?;

        let e = &self.entropy;
        if !e.phi0.is_finite() || e.phi0 <= 0.0 {
            return Err(Error::Config {
                key: "entropy.phi0".into(),
                message: format!("value {} violates `phi0 > 0`", e.phi0),
            });
        }
        let calibration = match e.s0 {
            None => EntropyCalibration::auto_calibrated(
                e.area,
                e.beta,
                e.temperature,
                e.hbar,
                e.kappa,
                e.phi0,
            )
            .map_err(|err| at_key("entropy", err))?,
            Some(s0) => {
                let cal =
                    EntropyCalibration::new(s0, e.area, e.beta, e.temperature, e.hbar, e.kappa)
                        .map_err(|err| at_key("entropy", err))?;
                cal.ensure_calibrated(e.phi0).map_err(|err| Error::Config {
                    key: "entropy.s0".into(),
                    message: err.to_string(),
                })?;
                cal
            }
        };

        let phi_cc = match self.thresholds.phi_cc {
            Some(v) => v,
            None => {
                let plateau0 = self
                    .schedule
                    .eval(0.0)
                    .map_err(|err| at_key("schedule", err))?
                    .diagnostics()
                    .plateau;
                let v = 0.1 * plateau0;
                if v.is_nan() || v <= 0.0 {
                    return Err(Error::Config {
                        key: "thresholds.phi_cc".into(),
                        message: format!(
                            "auto-resolution from 10% of the initial plateau gave {v}; \
                             set thresholds.phi_cc explicitly"
                        ),
                    });
                }
                v
            }
        };
        let thresholds = RegimeThresholds {
            theta_thin: self.thresholds.theta_thin,
            theta_entropy: self.thresholds.theta_entropy,
            phi_cc,
            eps_v: self.thresholds.eps_v,
        };
        thresholds.validate().map_err(|e| at_key("thresholds", e))?;

        let numerics = NumericsConfig {
            dt: self.numerics.dt,
            t_end: self.numerics.t_end,
            quad_tol: self.numerics.quad_tol,
        };
        numerics.validate()?;

        if !(3..=17).contains(&self.output.precision) {
            return Err(Error::Config {
                key: "output.precision".into(),
                message: format!(
                    "value {} violates `3 <= precision <= 17`",
                    self.output.precision
                ),
            });
        }

        let warnings = self.potential.warnings();
        let cfg = RunConfig {
            schedule: self.schedule,
            potential: self.potential,
            calibration,
            phi0: e.phi0,
            entropy_mode: e.mode,
            kinetic: self.kinetic,
            thresholds,
            numerics,
            output: OutputConfig {
                format: self.output.format,
                path: self.output.path,
                precision: self.output.precision,
            },
        };
        Ok((cfg, warnings))
    }
}

impl RunConfig {
    /// Parse and resolve a TOML document. Returns the validated config plus
    /// non-fatal warnings. Unknown keys and syntax errors surface as
    /// [`Error::ConfigParse`] with the parser's line/column context.
    pub fn from_toml_str(text: &str) -> Result<(RunConfig, Vec<String>)> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
            message: e.to_string(),
        })?;
        raw.resolve()
    }

    /// Re-check all invariants of an already resolved config (public fields
    /// may have been mutated since resolution).
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate().map_err(|e| at_key("schedule", e))?;
        self.potential.validate().map_err(|e| at_key("potential", e))?;
        self.kinetic.validate().map_err(|e| at_key("kinetic", e))?;
        self.thresholds
            .validate()
            .map_err(|e| at_key("thresholds", e))?;
        self.numerics.validate()?;
        if !self.phi0.is_finite() || self.phi0 <= 0.0 {
            return Err(Error::Config {
                key: "entropy.phi0".into(),
                message: format!("value {} violates `phi0 > 0`", self.phi0),
            });
        }
        self.calibration.ensure_calibrated(self.phi0)?;
        Ok(())
    }
}

impl Default for RunConfig {
    /// The shipped engineering defaults, fully resolved (auto-calibrated
    /// entropy base, plateau-derived cosmological-constant threshold).
    fn default() -> Self {
        RawConfig::default()
            .resolve()
            .expect("default configuration is valid")
            .0
    }
}
