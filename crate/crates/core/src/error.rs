//! Error types shared across the simulator core.
//!
//! The taxonomy mirrors how failures surface to callers: domain errors for
//! invalid inputs, singularities for vanishing denominators, quadrature
//! failures that still carry the best estimate achieved, calibration
//! violations that print both sides of the violated equality, and config
//! errors that name the offending key path.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("non-finite input: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// A finite input violated a documented domain constraint.
    #[error("domain error: {name} = {value} violates `{constraint}`")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A denominator vanished (or crossed zero) during evaluation.
    #[error("singular denominator in {context} (denominator = {denominator})")]
    Singularity {
        context: &'static str,
        denominator: f64,
    },

    /// The effective potential was differentiated exactly at the point where
    /// the late branch crosses the constant floor; the derivative is only
    /// defined one-sidedly there and both slopes are reported.
    #[error(
        "potential slope undefined at floor crossing phi = {phi}: \
         left slope {left}, right slope {right}"
    )]
    FloorKink { phi: f64, left: f64, right: f64 },

    /// Adaptive quadrature exhausted its subdivision budget before meeting
    /// the requested tolerance. The best estimate and its error bound are
    /// attached so callers can decide whether to accept them.
    #[error(
        "quadrature did not converge: estimate {estimate} with error bound \
         {error_bound} exceeds tolerance {tolerance}"
    )]
    Quadrature {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
    },

    /// The holographic and gravitational sides of the calibration equality
    /// disagree beyond the pinned relative tolerance.
    #[error(
        "calibration violated: holographic side {holographic} != \
         gravitational side {gravitational} (relative error {rel_err:.3e}, \
         tolerance {tolerance:.1e})"
    )]
    Uncalibrated {
        holographic: f64,
        gravitational: f64,
        rel_err: f64,
        tolerance: f64,
    },

    /// The field fluctuation reached or exceeded the background in magnitude;
    /// the background/fluctuation split is no longer meaningful.
    #[error(
        "field fluctuation |{phi_tilde}| is not smaller than the background \
         {phi0}; the background/fluctuation split breaks down"
    )]
    FluctuationTooLarge { phi_tilde: f64, phi0: f64 },

    /// A configuration value failed validation; `key` is the dotted path.
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    /// The configuration text could not be parsed at all (syntax error or
    /// unknown key); the message carries line/column from the parser.
    #[error("config parse error: {message}")]
    ConfigParse { message: String },

    /// A simulation step failed; wraps the cause with the failing time.
    #[error("simulation step at t = {t} failed: {source}")]
    Step {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors that originate in configuration handling (used by the
    /// CLI to choose its exit code).
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::ConfigParse { .. })
    }

    /// Wrap an error with the simulation time at which it occurred.
    pub fn at_step(self, t: f64) -> Error {
        Error::Step {
            t,
            source: Box::new(self),
        }
    }
}

/// Require a finite value, naming the input on failure.
pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_names_the_offending_key() {
        let err = Error::Config {
            key: "potential.v1".into(),
            message: "must be positive".into(),
        };
        let text = err.to_string();
        assert!(text.contains("potential.v1"), "got: {text}");
    }

    #[test]
    fn step_error_carries_time_and_cause() {
        let cause = Error::NonFinite {
            name: "x",
            value: f64::NAN,
        };
        let err = cause.at_step(1.25);
        let text = err.to_string();
        assert!(text.contains("t = 1.25"), "got: {text}");
        assert!(text.contains("non-finite"), "got: {text}");
    }

    #[test]
    fn ensure_finite_accepts_and_rejects() {
        assert!(ensure_finite("x", 3.0).is_ok());
        assert!(ensure_finite("x", f64::INFINITY).is_err());
        assert!(ensure_finite("x", f64::NAN).is_err());
    }
}
