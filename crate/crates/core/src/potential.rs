//! Two-regime effective potential with a constant late-time floor.
//!
//! Early regime: `V1*(1 - cos(phi)) + V2*(phi - phi_star)^2` (periodic well
//! plus quadratic confinement). Late regime: `V3*m^2*phi^2 / (1 + V4*m^3*phi^3)`,
//! clamped from below by the constant floor `V0`. A time-dependent blend
//! (hard switch or linear ramp) selects between the two.

use crate::error::{ensure_finite, Error, Result};
use serde::{Deserialize, Serialize};

/// How the early and late branches are combined over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlendMode {
    /// Early branch strictly before `t_switch`, late branch from `t_switch` on.
    #[serde(rename = "hard-switch")]
    HardSwitch,
    /// Linear ramp of the late-branch weight from 0 to 1 over `blend_width`,
    /// centered at `t_switch`. A zero width degenerates to the hard switch.
    #[serde(rename = "linear-blend")]
    LinearBlend,
}

/// Blend timing parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlendSpec {
    pub mode: BlendMode,
    pub t_switch: f64,
    pub blend_width: f64,
}

impl Default for BlendSpec {
    fn default() -> Self {
        BlendSpec {
            mode: BlendMode::LinearBlend,
            t_switch: 10.0,
            blend_width: 2.0,
        }
    }
}

/// Full potential parameter set (both regimes, floor, blend).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PotentialSpec {
    pub v1: f64,
    pub v2: f64,
    pub phi_star: f64,
    pub v3: f64,
    pub v4: f64,
    pub m: f64,
    pub v0: f64,
    pub blend: BlendSpec,
}

impl Default for PotentialSpec {
    fn default() -> Self {
        PotentialSpec {
            v1: 10.0,
            v2: 0.1,
            phi_star: 0.0,
            v3: 1.0,
            v4: 0.01,
            m: 1.0,
            v0: 0.05,
            blend: BlendSpec::default(),
        }
    }
}

impl PotentialSpec {
    /// Check parameter invariants. Errors name the bare field so callers can
    /// prefix the config path.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("v1", self.v1),
            ("v2", self.v2),
            ("phi_star", self.phi_star),
            ("v3", self.v3),
            ("v4", self.v4),
            ("m", self.m),
            ("v0", self.v0),
            ("blend.t_switch", self.blend.t_switch),
            ("blend.blend_width", self.blend.blend_width),
        ] {
            ensure_finite(name, value)?;
        }
        let checks: [(&'static str, f64, &'static str, bool); 7] = [
            ("v1", self.v1, "v1 >= 0", self.v1 >= 0.0),
            ("v2", self.v2, "v2 >= 0", self.v2 >= 0.0),
            ("v3", self.v3, "v3 > 0", self.v3 > 0.0),
            ("v4", self.v4, "v4 >= 0", self.v4 >= 0.0),
            ("m", self.m, "m > 0", self.m > 0.0),
            ("v0", self.v0, "v0 >= 0", self.v0 >= 0.0),
            (
                "blend.t_switch",
                self.blend.t_switch,
                "t_switch >= 0",
                self.blend.t_switch >= 0.0,
            ),
        ];
        for (name, value, constraint, ok) in checks {
            if !ok {
                return Err(Error::Domain {
                    name,
                    value,
                    constraint,
                });
            }
        }
        if self.blend.blend_width < 0.0 {
            return Err(Error::Domain {
                name: "blend.blend_width",
                value: self.blend.blend_width,
                constraint: "blend_width >= 0",
            });
        }
        Ok(())
    }

    /// Non-fatal parameter smells, reported as human-readable strings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.v1 <= self.v2 {
            out.push(format!(
                "potential: v1 ({}) <= v2 ({}); the quadratic term dominates the \
                 periodic well, which is usually unintended",
                self.v1, self.v2
            ));
        }
        out
    }

    /// Early-regime value: `V1*(1 - cos(phi)) + V2*(phi - phi_star)^2`.
    pub fn v_early(&self, phi: f64) -> Result<f64> {
        ensure_finite("phi", phi)?;
        let d = phi - self.phi_star;
        Ok(self.v1 * (1.0 - phi.cos()) + self.v2 * d * d)
    }

    /// Early-regime slope: `V1*sin(phi) + 2*V2*(phi - phi_star)`.
    pub fn dv_early(&self, phi: f64) -> Result<f64> {
        ensure_finite("phi", phi)?;
        Ok(self.v1 * phi.sin() + 2.0 * self.v2 * (phi - self.phi_star))
    }

    /// Late-regime value: `V3*m^2*phi^2 / (1 + V4*m^3*phi^3)`, defined for
    /// `phi >= 0` (where the denominator is >= 1). A non-positive denominator
    /// is reported as a singularity, negative `phi` with a safe denominator
    /// as a domain error.
    pub fn v_late(&self, phi: f64) -> Result<f64> {
        ensure_finite("phi", phi)?;
        let m = self.m;
        let denom = 1.0 + self.v4 * m * m * m * phi * phi * phi;
        if denom <= 0.0 {
            return Err(Error::Singularity {
                context: "late-regime potential denominator 1 + v4*m^3*phi^3",
                denominator: denom,
            });
        }
        if phi < 0.0 {
            return Err(Error::Domain {
                name: "phi",
                value: phi,
                constraint: "phi >= 0 in the late regime",
            });
        }
        Ok(self.v3 * m * m * phi * phi / denom)
    }

    /// Late-regime slope:
    /// `V3*m^2 * (2*phi - V4*m^3*phi^4) / (1 + V4*m^3*phi^3)^2`.
    pub fn dv_late(&self, phi: f64) -> Result<f64> {
        ensure_finite("phi", phi)?;
        let m = self.m;
        let c = self.v4 * m * m * m;
        let denom = 1.0 + c * phi * phi * phi;
        if denom <= 0.0 {
            return Err(Error::Singularity {
                context: "late-regime potential denominator 1 + v4*m^3*phi^3",
                denominator: denom,
            });
        }
        if phi < 0.0 {
            return Err(Error::Domain {
                name: "phi",
                value: phi,
                constraint: "phi >= 0 in the late regime",
            });
        }
        let phi4 = phi * phi * phi * phi;
        Ok(self.v3 * m * m * (2.0 * phi - c * phi4) / (denom * denom))
    }

    /// Weight of the late branch at time `t`, in [0, 1].
    pub fn blend_weight(&self, t: f64) -> f64 {
        let b = &self.blend;
        let hard = |t: f64| if t < b.t_switch { 0.0 } else { 1.0 };
        match b.mode {
            BlendMode::HardSwitch => hard(t),
            BlendMode::LinearBlend => {
                if b.blend_width == 0.0 {
                    hard(t)
                } else {
                    let start = b.t_switch - 0.5 * b.blend_width;
                    ((t - start) / b.blend_width).clamp(0.0, 1.0)
                }
            }
        }
    }

    /// Floored late branch: `max(v_late(phi), V0)`.
    pub fn v_late_floored(&self, phi: f64) -> Result<f64> {
        Ok(self.v_late(phi)?.max(self.v0))
    }

    /// Effective potential at `(phi, t)`: the blend of the early branch and
    /// the floored late branch. The inactive branch is never evaluated, so
    /// e.g. negative `phi` is fine while the early branch is fully active.
    pub fn v_effective(&self, phi: f64, t: f64) -> Result<f64> {
        ensure_finite("t", t)?;
        let w = self.blend_weight(t);
        if w == 0.0 {
            self.v_early(phi)
        } else if w == 1.0 {
            self.v_late_floored(phi)
        } else {
            Ok((1.0 - w) * self.v_early(phi)? + w * self.v_late_floored(phi)?)
        }
    }

    /// Slope of the effective potential with respect to `phi` at fixed `t`.
    ///
    /// On the floor (`v_late < V0`) the late contribution is 0; off the floor
    /// it is the closed-form `dv_late`. Exactly at a floor crossing the
    /// derivative does not exist and a [`Error::FloorKink`] carrying both
    /// one-sided slopes is returned.
    pub fn dv_effective(&self, phi: f64, t: f64) -> Result<f64> {
        ensure_finite("t", t)?;
        let w = self.blend_weight(t);
        if w == 0.0 {
            return self.dv_early(phi);
        }
        let early = if w < 1.0 { self.dv_early(phi)? } else { 0.0 };
        let vl = self.v_late(phi)?;
        let late_slope = if vl > self.v0 {
            self.dv_late(phi)?
        } else if vl < self.v0 {
            0.0
        } else {
            // Exactly on the floor boundary: a kink unless the branch is
            // tangent (zero slope) there.
            let dvl = self.dv_late(phi)?;
            if dvl == 0.0 {
                0.0
            } else {
                let (left, right) = if dvl > 0.0 { (0.0, dvl) } else { (dvl, 0.0) };
                return Err(Error::FloorKink {
                    phi,
                    left: (1.0 - w) * early + w * left,
                    right: (1.0 - w) * early + w * right,
                });
            }
        };
        Ok((1.0 - w) * early + w * late_slope)
    }
}
