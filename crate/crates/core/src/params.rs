//! Per-vehicle constants.
//!
//! Defaults reproduce the reference parameter table. Constants that the
//! table leaves open (`c_d`, `tau`, `b_d`, `s_n`, `phi`, `window`,
//! `lane_change_cost`) carry documented engineering defaults.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VehicleParams {
    /// Vehicle length L.
    #[serde(rename = "length_m")]
    pub length: f64,
    /// Minimum standstill clearance L0.
    #[serde(rename = "clearance_m")]
    pub clearance: f64,
    #[serde(rename = "a_max_mps2")]
    pub a_max: f64,
    /// Ratio between the comfortable and the maximum stopping time, > 1.
    pub lambda: f64,
    pub c_r: f64,
    pub c_s: f64,
    pub c_c: f64,
    /// Interaction-distance gain (not in the reference table; defaults to 1).
    pub c_d: f64,
    /// Interaction time headway T_D.
    #[serde(rename = "t_d_s")]
    pub t_d: f64,
    #[serde(rename = "v_des_mps")]
    pub v_des: f64,
    #[serde(rename = "v_max_mps")]
    pub v_max: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha4: f64,
    /// Floor gain for finite-time convergence.
    #[serde(rename = "epsilon_mps2")]
    pub epsilon: f64,
    /// Reference distance of the modified GHR law.
    #[serde(rename = "g_m")]
    pub g: f64,
    /// Steering angle used for lane changes.
    #[serde(rename = "phi_rad")]
    pub phi: f64,
    /// IDM time gap used by the lane-change laws.
    #[serde(rename = "tau_s")]
    pub tau: f64,
    /// IDM comfortable deceleration.
    #[serde(rename = "b_d_mps2")]
    pub b_d: f64,
    /// IDM jam distance.
    #[serde(rename = "s_n_m")]
    pub s_n: f64,
    /// Communication radius; also the fictitious-leader anchor distance.
    #[serde(rename = "delta_max_m")]
    pub delta_max: f64,
    /// Fixed utility cost of a lane change.
    #[serde(rename = "lane_change_cost_m")]
    pub lane_change_cost: f64,
    /// Averaging window of the utilities and of the variance integral.
    #[serde(rename = "window_s")]
    pub window: f64,
    pub alpha_t_min: f64,
    pub alpha_t_max: f64,
    /// Sensitivity of the variance-driven headway integral.
    pub gamma: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            length: 4.5,
            clearance: 0.5,
            a_max: 5.0,
            lambda: 2.0,
            c_r: 0.2,
            c_s: 0.2,
            c_c: 10.0,
            c_d: 1.0,
            t_d: 20.0,
            v_des: 30.0,
            v_max: 36.0,
            alpha1: 0.1,
            alpha2: 0.1,
            alpha4: 1.0,
            epsilon: 0.1,
            g: 500.0,
            phi: 0.1,
            tau: 1.5,
            b_d: 3.0,
            s_n: 5.0,
            delta_max: 500.0,
            lane_change_cost: 10.0,
            window: 10.0,
            alpha_t_min: 0.2,
            alpha_t_max: 2.2,
            gamma: 4.0,
        }
    }
}

impl VehicleParams {
    /// Collision distance s = L + L0.
    pub fn s(&self) -> f64 {
        self.length + self.clearance
    }

    pub fn with_v_des(self, v_des: f64) -> Self {
        Self { v_des, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("length_m", self.length),
            ("clearance_m", self.clearance),
            ("a_max_mps2", self.a_max),
            ("lambda", self.lambda),
            ("c_r", self.c_r),
            ("c_s", self.c_s),
            ("c_c", self.c_c),
            ("c_d", self.c_d),
            ("t_d_s", self.t_d),
            ("v_des_mps", self.v_des),
            ("v_max_mps", self.v_max),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("alpha4", self.alpha4),
            ("epsilon_mps2", self.epsilon),
            ("g_m", self.g),
            ("phi_rad", self.phi),
            ("tau_s", self.tau),
            ("b_d_mps2", self.b_d),
            ("s_n_m", self.s_n),
            ("delta_max_m", self.delta_max),
            ("lane_change_cost_m", self.lane_change_cost),
            ("window_s", self.window),
            ("alpha_t_min", self.alpha_t_min),
            ("alpha_t_max", self.alpha_t_max),
            ("gamma", self.gamma),
        ];
        for (field, value) in named {
            if !value.is_finite() || value < 0.0 {
                return Err(invalid(field, format!("must be finite and nonnegative, got {value}")));
            }
        }
        if self.a_max <= 0.0 {
            return Err(invalid("a_max_mps2", "must be positive"));
        }
        if self.lambda <= 1.0 {
            return Err(invalid("lambda", format!("must exceed 1, got {}", self.lambda)));
        }
        if self.c_s < self.c_r {
            return Err(invalid("c_s", "must be at least c_r"));
        }
        if self.epsilon <= 0.0 || self.epsilon >= self.a_max / self.lambda {
            return Err(invalid(
                "epsilon_mps2",
                format!("must lie in (0, a_max/lambda) = (0, {})", self.a_max / self.lambda),
            ));
        }
        // Equality is admitted: the reference table sets G = delta_max.
        if self.g < self.delta_max {
            return Err(invalid("g_m", "must be at least delta_max_m"));
        }
        if self.v_max <= 0.0 || self.v_des > self.v_max {
            return Err(invalid("v_des_mps", "must not exceed a positive v_max_mps"));
        }
        if self.phi <= 0.0 || self.phi >= std::f64::consts::FRAC_PI_2 {
            return Err(invalid("phi_rad", "must lie in (0, pi/2)"));
        }
        if self.b_d <= 0.0 {
            return Err(invalid("b_d_mps2", "must be positive"));
        }
        if self.window <= 0.0 {
            return Err(invalid("window_s", "must be positive"));
        }
        if !(self.alpha_t_min < 1.0 && 1.0 < self.alpha_t_max) {
            return Err(invalid("alpha_t_min", "bounds must satisfy alpha_t_min < 1 < alpha_t_max"));
        }
        if self.s() <= 0.0 {
            return Err(invalid("length_m", "length plus clearance must be positive"));
        }
        Ok(())
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        field,
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = VehicleParams::default();
        p.validate().unwrap();
        assert_eq!(p.s(), 5.0);
    }

    #[test]
    fn lambda_must_exceed_one() {
        let p = VehicleParams {
            lambda: 1.0,
            ..Default::default()
        };
        assert!(matches!(p.validate(), Err(Error::InvalidParam { field: "lambda", .. })));
    }

    #[test]
    fn epsilon_bounded_by_comfort_deceleration() {
        let p = VehicleParams {
            epsilon: 2.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn c_s_at_least_c_r() {
        let p = VehicleParams {
            c_r: 0.3,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }
}
