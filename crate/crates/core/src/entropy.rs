//! Entropy / Planck-length / scalar-background chain.
//!
//! Two independent routes define a squared minimum length:
//!
//! * holographic: `l_p^2 = (S/A)^-1 / (sqrt(3)*beta*T)` from an entropy `S`
//!   on a bounding area `A`;
//! * gravitational: `l_p = hbar * G` with `G = kappa / (phi0 + phi_tilde)`
//!   set by a scalar background `phi0` carrying a small fluctuation
//!   `phi_tilde`.
//!
//! A calibration ties the two routes together at zero fluctuation:
//! `(S0/A)^-1 / (sqrt(3)*beta*T) = (hbar*kappa/phi0)^2`. Once calibrated, a
//! fluctuation `phi_tilde` maps deterministically to a relative entropy shift
//! `dS/S0` (first-order `2*phi_tilde/phi0`, or the unexpanded exact form),
//! and the shifted holographic length reproduces `(hbar*G)^2` identically.

use crate::error::{ensure_finite, Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance pinned for the calibration equality.
pub const CALIBRATION_REL_TOL: f64 = 1e-12;

/// Fluctuation ratio above which the background/fluctuation split is
/// considered dominated (reported as a warning, not an error).
pub const DOMINANCE_RATIO: f64 = 0.1;

/// Which solution of the entropy-shift equation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntropyMode {
    /// First-order expansion: `dS/S0 = 2*phi_tilde/phi0`.
    #[serde(rename = "first-order")]
    FirstOrder,
    /// Unexpanded form: `dS/S0 = 1 - (phi0/(phi0+phi_tilde))^2`.
    #[serde(rename = "exact")]
    Exact,
}

/// Background field plus a small fluctuation, with the rate and interval
/// that produced the fluctuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSplit {
    phi0: f64,
    phi_tilde: f64,
    phi_dot: f64,
    delta_t: f64,
}

/// Fluctuation magnitude over an interval: `phi_tilde = delta_t * phi_dot`.
pub fn phi_tilde_from_rate(delta_t: f64, phi_dot: f64) -> Result<f64> {
    ensure_finite("delta_t", delta_t)?;
    ensure_finite("phi_dot", phi_dot)?;
    if delta_t < 0.0 {
        return Err(Error::Domain {
            name: "delta_t",
            value: delta_t,
            constraint: "delta_t >= 0",
        });
    }
    Ok(delta_t * phi_dot)
}

impl FieldSplit {
    /// Validate and build a split. The background must be positive and the
    /// fluctuation strictly smaller in magnitude; otherwise the expansion in
    /// `phi_tilde/phi0` is meaningless and a hard error is raised.
    pub fn new(phi0: f64, phi_tilde: f64, phi_dot: f64, delta_t: f64) -> Result<Self> {
        ensure_finite("phi0", phi0)?;
        ensure_finite("phi_tilde", phi_tilde)?;
        ensure_finite("phi_dot", phi_dot)?;
        ensure_finite("delta_t", delta_t)?;
        if phi0 <= 0.0 {
            return Err(Error::Domain {
                name: "phi0",
                value: phi0,
                constraint: "phi0 > 0",
            });
        }
        if delta_t < 0.0 {
            return Err(Error::Domain {
                name: "delta_t",
                value: delta_t,
                constraint: "delta_t >= 0",
            });
        }
        if phi_tilde.abs() >= phi0 {
            return Err(Error::FluctuationTooLarge { phi_tilde, phi0 });
        }
        Ok(FieldSplit {
            phi0,
            phi_tilde,
            phi_dot,
            delta_t,
        })
    }

    /// Build a split whose fluctuation is `delta_t * phi_dot`.
    pub fn from_rate(phi0: f64, phi_dot: f64, delta_t: f64) -> Result<Self> {
        let phi_tilde = phi_tilde_from_rate(delta_t, phi_dot)?;
        FieldSplit::new(phi0, phi_tilde, phi_dot, delta_t)
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn phi_tilde(&self) -> f64 {
        self.phi_tilde
    }

    pub fn phi_dot(&self) -> f64 {
        self.phi_dot
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// Total field value `phi0 + phi_tilde` (> 0 by construction).
    pub fn total(&self) -> f64 {
        self.phi0 + self.phi_tilde
    }

    /// `|phi_tilde| / phi0`, in [0, 1).
    pub fn fluctuation_ratio(&self) -> f64 {
        self.phi_tilde.abs() / self.phi0
    }

    /// True when the fluctuation exceeds the dominance ratio and first-order
    /// treatment is suspect. Callers should surface this as a warning.
    pub fn dominance_exceeded(&self) -> bool {
        self.fluctuation_ratio() > DOMINANCE_RATIO
    }
}

/// Constants tying the holographic and gravitational length routes together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyCalibration {
    /// Base entropy at zero fluctuation.
    pub s0: f64,
    /// Bounding area carrying the entropy.
    pub area: f64,
    /// Inverse-temperature-like factor in the holographic route.
    pub beta: f64,
    /// Temperature in the holographic route.
    pub temperature: f64,
    /// Reduced quantum of action.
    pub hbar: f64,
    /// Coupling in `G = kappa / (phi0 + phi_tilde)`.
    pub kappa: f64,
}

impl EntropyCalibration {
    /// Validate and build a calibration. All members must be finite and
    /// strictly positive.
    pub fn new(
        s0: f64,
        area: f64,
        beta: f64,
        temperature: f64,
        hbar: f64,
        kappa: f64,
    ) -> Result<Self> {
        let fields = [
            ("s0", s0),
            ("area", area),
            ("beta", beta),
            ("temperature", temperature),
            ("hbar", hbar),
            ("kappa", kappa),
        ];
        for (name, value) in fields {
            ensure_finite(name, value)?;
            if value <= 0.0 {
                return Err(Error::Domain {
                    name,
                    value,
                    constraint: "must be > 0",
                });
            }
        }
        Ok(EntropyCalibration {
            s0,
            area,
            beta,
            temperature,
            hbar,
            kappa,
        })
    }

    /// Build a calibration whose `s0` is solved from the calibration
    /// equality at background `phi0`:
    /// `s0 = area * phi0^2 / (sqrt(3) * beta * T * (hbar*kappa)^2)`.
    pub fn auto_calibrated(
        area: f64,
        beta: f64,
        temperature: f64,
        hbar: f64,
        kappa: f64,
        phi0: f64,
    ) -> Result<Self> {
        ensure_finite("phi0", phi0)?;
        if phi0 <= 0.0 {
            return Err(Error::Domain {
                name: "phi0",
                value: phi0,
                constraint: "phi0 > 0",
            });
        }
        let hk = hbar * kappa;
        let s0 = area * phi0 * phi0 / (3.0_f64.sqrt() * beta * temperature * hk * hk);
        EntropyCalibration::new(s0, area, beta, temperature, hbar, kappa)
    }

    /// Holographic squared length at entropy `s`: `(s/area)^-1 / (sqrt(3)*beta*T)`.
    pub fn planck_length_sq_holo(&self, s: f64) -> Result<f64> {
        ensure_finite("s", s)?;
        if s <= 0.0 {
            return Err(Error::Domain {
                name: "s",
                value: s,
                constraint: "entropy s > 0",
            });
        }
        Ok((self.area / s) / (3.0_f64.sqrt() * self.beta * self.temperature))
    }

    /// Gravitational length: `l_p = hbar * g`.
    pub fn planck_length_grav(&self, g: f64) -> Result<f64> {
        ensure_finite("g", g)?;
        if g < 0.0 {
            return Err(Error::Domain {
                name: "g",
                value: g,
                constraint: "g >= 0",
            });
        }
        Ok(self.hbar * g)
    }

    /// Scalar-controlled coupling `G = kappa / (phi0 + phi_tilde)`.
    /// Infallible: the split guarantees a positive denominator.
    pub fn g_brans_dicke(&self, split: &FieldSplit) -> f64 {
        self.kappa / split.total()
    }

    /// First-order expansion of the squared gravitational length in the
    /// fluctuation: `(hbar/phi0)^2 * (1 - 2*phi_tilde/phi0)`.
    pub fn lhs_first_order(&self, split: &FieldSplit) -> f64 {
        let base = self.hbar / split.phi0();
        base * base * (1.0 - 2.0 * (split.phi_tilde() / split.phi0()))
    }

    /// Left side of the calibration equality, `(s0/area)^-1 / (sqrt(3)*beta*T)`.
    pub fn holographic_side(&self) -> f64 {
        (self.area / self.s0) / (3.0_f64.sqrt() * self.beta * self.temperature)
    }

    /// Right side of the calibration equality, `(hbar*kappa/phi0)^2`.
    pub fn gravitational_side(&self, phi0: f64) -> f64 {
        let g0 = self.hbar * self.kappa / phi0;
        g0 * g0
    }

    /// Relative mismatch between the two sides of the calibration equality.
    pub fn calibration_residual(&self, phi0: f64) -> f64 {
        let holo = self.holographic_side();
        let grav = self.gravitational_side(phi0);
        (holo - grav).abs() / grav.abs().max(f64::MIN_POSITIVE)
    }

    /// True when the calibration equality holds to [`CALIBRATION_REL_TOL`].
    pub fn is_calibrated(&self, phi0: f64) -> bool {
        self.calibration_residual(phi0) <= CALIBRATION_REL_TOL
    }

    /// Error unless calibrated, reporting both sides of the equality.
    pub fn ensure_calibrated(&self, phi0: f64) -> Result<()> {
        if self.is_calibrated(phi0) {
            Ok(())
        } else {
            Err(Error::Uncalibrated {
                holographic: self.holographic_side(),
                gravitational: self.gravitational_side(phi0),
                rel_err: self.calibration_residual(phi0),
                tolerance: CALIBRATION_REL_TOL,
            })
        }
    }

    /// Relative entropy shift driven by the fluctuation. Requires a
    /// calibrated setup (checked against the split's background).
    ///
    /// First-order mode returns exactly `2 * (phi_tilde/phi0)`; exact mode
    /// returns `1 - (phi0/(phi0+phi_tilde))^2`. Both are strictly increasing
    /// in `phi_tilde` and agree to second order in the fluctuation ratio.
    pub fn delta_s_over_s(&self, split: &FieldSplit, mode: EntropyMode) -> Result<f64> {
        self.ensure_calibrated(split.phi0())?;
        Ok(match mode {
            EntropyMode::FirstOrder => 2.0 * (split.phi_tilde() / split.phi0()),
            EntropyMode::Exact => {
                let r = split.phi0() / split.total();
                1.0 - r * r
            }
        })
    }

    /// Absolute entropy shift `dS = s0 * (dS/S0)`.
    pub fn delta_s_abs(&self, split: &FieldSplit, mode: EntropyMode) -> Result<f64> {
        Ok(self.s0 * self.delta_s_over_s(split, mode)?)
    }

    /// Entropy whose holographic squared length equals `(hbar*G)^2` at this
    /// fluctuation: `s0 / (1 - dS/S0)` with the exact-mode shift. This is the
    /// entropy state realizing the calibrated chain away from zero
    /// fluctuation.
    pub fn shifted_entropy(&self, split: &FieldSplit) -> Result<f64> {
        let ds = self.delta_s_over_s(split, EntropyMode::Exact)?;
        Ok(self.s0 / (1.0 - ds))
    }
}

/// Minimum-length admissibility: `delta_l >= l_p` (inclusive). Negative
/// lengths are domain errors.
pub fn min_length_ok(delta_l: f64, l_p: f64) -> Result<bool> {
    ensure_finite("delta_l", delta_l)?;
    ensure_finite("l_p", l_p)?;
    if delta_l < 0.0 {
        return Err(Error::Domain {
            name: "delta_l",
            value: delta_l,
            constraint: "delta_l >= 0",
        });
    }
    if l_p < 0.0 {
        return Err(Error::Domain {
            name: "l_p",
            value: l_p,
            constraint: "l_p >= 0",
        });
    }
    Ok(delta_l >= l_p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Frozen with mpmath at 50 digits: (1/100)/sqrt(3).
    const HOLO_AT_S100: f64 = 5.773502691896258e-3;
    // Frozen with mpmath at 50 digits: 1/10.1.
    const G_BD_10_01: f64 = 9.900990099009901e-2;
    // Frozen with mpmath at 50 digits: 1 - (10/10.1)^2.
    const DS_EXACT_10_01: f64 = 1.970395059307911e-2;
    // Frozen with mpmath at 50 digits: auto s0 at unit constants, phi0 = 10.
    const S0_AUTO_PHI0_10: f64 = 57.735026918962576;

    fn unit_cal(s0: f64) -> EntropyCalibration {
        EntropyCalibration::new(s0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    fn split(phi0: f64, phi_tilde: f64) -> FieldSplit {
        FieldSplit::new(phi0, phi_tilde, 0.0, 0.0).unwrap()
    }

    #[test]
    fn holographic_length_matches_frozen_oracle() {
        let cal = unit_cal(100.0);
        assert_relative_eq!(
            cal.planck_length_sq_holo(100.0).unwrap(),
            HOLO_AT_S100,
            max_relative = 1e-14
        );
        assert!(cal.planck_length_sq_holo(0.0).is_err());
        assert!(cal.planck_length_sq_holo(-5.0).is_err());
    }

    #[test]
    fn gravitational_length_is_hbar_times_g() {
        let cal = unit_cal(1.0);
        assert_eq!(cal.planck_length_grav(0.5).unwrap(), 0.5);
        assert!(cal.planck_length_grav(-0.5).is_err());
    }

    #[test]
    fn brans_dicke_coupling_matches_frozen_oracle() {
        let cal = unit_cal(1.0);
        assert_relative_eq!(
            cal.g_brans_dicke(&split(10.0, 0.1)),
            G_BD_10_01,
            max_relative = 1e-14
        );
    }

    #[test]
    fn first_order_lhs_matches_hand_value() {
        let cal = unit_cal(1.0);
        // (1/100)*(1 - 0.02) = 0.0098
        assert_relative_eq!(
            cal.lhs_first_order(&split(10.0, 0.1)),
            0.0098,
            max_relative = 1e-14
        );
    }

    #[test]
    fn first_order_lhs_within_taylor_remainder_of_exact() {
        let cal = unit_cal(1.0);
        let phi0 = 10.0;
        for ratio in [1e-3, 1e-2, 1e-1] {
            let s = split(phi0, ratio * phi0);
            let exact = {
                let l = cal.hbar / s.total();
                l * l
            };
            let bound = 3.0 * (cal.hbar / phi0).powi(2) * ratio * ratio;
            let err = (cal.lhs_first_order(&s) - exact).abs();
            assert!(
                err <= bound,
                "ratio {ratio}: remainder {err} exceeds {bound}"
            );
        }
    }

    #[test]
    fn auto_calibration_satisfies_the_equality() {
        let cal = EntropyCalibration::auto_calibrated(1.0, 1.0, 1.0, 1.0, 1.0, 10.0).unwrap();
        assert_relative_eq!(cal.s0, S0_AUTO_PHI0_10, max_relative = 1e-14);
        assert!(cal.is_calibrated(10.0));
        assert!(cal.calibration_residual(10.0) < 1e-14);
        // Perturbing s0 breaks it, and the error names both sides.
        let bad = unit_cal(cal.s0 * 1.001);
        match bad.ensure_calibrated(10.0) {
            Err(Error::Uncalibrated { rel_err, .. }) => assert!(rel_err > 1e-4),
            other => panic!("expected calibration error, got {other:?}"),
        }
    }

    #[test]
    fn delta_s_requires_calibration() {
        let uncal = unit_cal(3.0);
        assert!(uncal
            .delta_s_over_s(&split(10.0, 0.1), EntropyMode::FirstOrder)
            .is_err());
    }

    #[test]
    fn delta_s_first_order_constant_is_exactly_two() {
        let cal = EntropyCalibration::auto_calibrated(1.0, 1.0, 1.0, 1.0, 1.0, 10.0).unwrap();
        for phi_tilde in [1e-6, 3.7e-3, 0.25] {
            let s = split(10.0, phi_tilde);
            let ds = cal.delta_s_over_s(&s, EntropyMode::FirstOrder).unwrap();
            assert_eq!(ds / (phi_tilde / 10.0), 2.0);
        }
    }

    #[test]
    fn delta_s_exact_matches_frozen_oracle_and_stays_close_to_first_order() {
        let cal = EntropyCalibration::auto_calibrated(1.0, 1.0, 1.0, 1.0, 1.0, 10.0).unwrap();
        let s = split(10.0, 0.1);
        let exact = cal.delta_s_over_s(&s, EntropyMode::Exact).unwrap();
        assert_relative_eq!(exact, DS_EXACT_10_01, max_relative = 1e-14);
        for ratio in [1e-3, 1e-2, 1e-1] {
            let s = split(10.0, ratio * 10.0);
            let fo = cal.delta_s_over_s(&s, EntropyMode::FirstOrder).unwrap();
            let ex = cal.delta_s_over_s(&s, EntropyMode::Exact).unwrap();
            assert!(
                (fo - ex).abs() <= 3.0 * ratio * ratio,
                "modes disagree beyond O(ratio^2) at ratio {ratio}"
            );
        }
    }

    #[test]
    fn delta_s_is_signed_and_increasing_in_the_fluctuation() {
        let cal = EntropyCalibration::auto_calibrated(1.0, 1.0, 1.0, 1.0, 1.0, 10.0).unwrap();
        for mode in [EntropyMode::FirstOrder, EntropyMode::Exact] {
            let mut last = f64::NEG_INFINITY;
            for phi_tilde in [-0.5, -0.1, 0.0, 0.1, 0.5] {
                let ds = cal.delta_s_over_s(&split(10.0, phi_tilde), mode).unwrap();
                assert!(ds > last, "not increasing at {phi_tilde} ({mode:?})");
                if phi_tilde == 0.0 {
                    assert_eq!(ds, 0.0);
                }
                last = ds;
            }
        }
    }

    #[test]
    fn shifted_entropy_closes_the_chain_identically() {
        for (kappa, phi0, phi_tilde) in
            [(1.0, 10.0, 0.5), (1.0, 10.0, -0.8), (2.0, 4.0, 0.3), (0.5, 7.0, 0.07)]
        {
            let cal =
                EntropyCalibration::auto_calibrated(1.0, 1.0, 1.0, 1.0, kappa, phi0).unwrap();
            let s = split(phi0, phi_tilde);
            let shifted = cal.shifted_entropy(&s).unwrap();
            let holo = cal.planck_length_sq_holo(shifted).unwrap();
            let g = cal.g_brans_dicke(&s);
            let grav = cal.planck_length_grav(g).unwrap().powi(2);
            assert_relative_eq!(holo, grav, max_relative = 1e-12);
        }
    }

    #[test]
    fn delta_s_abs_scales_the_ratio_by_s0() {
        let cal = EntropyCalibration::auto_calibrated(1.0, 1.0, 1.0, 1.0, 1.0, 10.0).unwrap();
        let s = split(10.0, 0.1);
        let ratio = cal.delta_s_over_s(&s, EntropyMode::FirstOrder).unwrap();
        let abs = cal.delta_s_abs(&s, EntropyMode::FirstOrder).unwrap();
        assert_relative_eq!(abs, cal.s0 * ratio, max_relative = 1e-15);
    }

    #[test]
    fn phi_tilde_from_rate_multiplies_interval_and_rate() {
        assert_abs_diff_eq!(phi_tilde_from_rate(0.1, 0.2).unwrap(), 0.02, epsilon = 1e-17);
        assert_eq!(phi_tilde_from_rate(0.0, 5.0).unwrap(), 0.0);
        assert!(phi_tilde_from_rate(-0.1, 0.2).is_err());
        let s = FieldSplit::from_rate(10.0, -1.5, 0.01).unwrap();
        assert_relative_eq!(s.phi_tilde(), -0.015, max_relative = 1e-15);
    }

    #[test]
    fn split_enforces_hard_bound_and_reports_dominance() {
        assert!(FieldSplit::new(10.0, 10.0, 0.0, 0.0).is_err());
        assert!(FieldSplit::new(10.0, -12.0, 0.0, 0.0).is_err());
        assert!(FieldSplit::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(split(10.0, 2.0).dominance_exceeded());
        assert!(!split(10.0, 0.5).dominance_exceeded());
        // Boundary: exactly 0.1 is not yet dominance.
        assert!(!split(10.0, 1.0).dominance_exceeded());
    }

    #[test]
    fn min_length_comparison_is_inclusive() {
        assert!(min_length_ok(2e-3, 1e-3).unwrap());
        assert!(min_length_ok(1e-3, 1e-3).unwrap());
        assert!(!min_length_ok(5e-4, 1e-3).unwrap());
        assert!(min_length_ok(-1.0, 1e-3).is_err());
        assert!(min_length_ok(1e-3, -1.0).is_err());
    }

    #[test]
    fn composed_min_length_from_the_gravitational_route() {
        // l_p = hbar*kappa/phi0 = 0.5 at phi0 = 2; a probe length of twice
        // that passes the inclusive check.
        let cal = unit_cal(1.0);
        let s = split(2.0, 0.0);
        let l_p = cal.planck_length_grav(cal.g_brans_dicke(&s)).unwrap();
        assert_eq!(l_p, 0.5);
        assert!(min_length_ok(1.0, l_p).unwrap());
    }
}
