use serde::{Deserialize, Serialize};

use super::{sign, ContinuousState, LowMode, Mode};
use crate::error::{Error, Result};
use crate::params::VehicleParams;

/// Variant of the closing-in GHR law in lane-keeping modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Q4Law {
    /// Constant-deceleration kinematics: negative while the follower is faster.
    #[default]
    Corrected,
    /// Leading minus kept as printed; the minimum then caps at `-epsilon`.
    Verbatim,
}

/// Acceleration command for `mode` at `x`, clamped to `[-a_max, a_max]`.
///
/// `p.v_des` is the desired speed in force at the time of evaluation.
pub fn control_accel(mode: Mode, x: &ContinuousState, p: &VehicleParams, q4: Q4Law) -> Result<f64> {
    let v = x.own_speed();
    let keeping = mode.high.is_lane_keeping();
    let u = match mode.low {
        LowMode::FreeDriving if keeping => {
            // The floor acts on the magnitude, so convergence is finite-time
            // from above as well as from below.
            let err = p.v_des - v;
            sign(err) * (p.alpha1 * err.abs()).max(p.epsilon)
        }
        LowMode::FreeDriving => p.a_max * (1.0 - (v / p.v_des).powi(4)),
        LowMode::FollowingI if keeping => {
            let num = p.alpha2 * (p.v_des + x.rel_speed) * v;
            let den = p.g - x.gap;
            if den == 0.0 {
                // Left limit at the singular gap x1 = G.
                sign(num) * p.a_max
            } else {
                num / den
            }
        }
        LowMode::FollowingI => {
            let ratio = desired_gap(v, p) / x.gap;
            p.a_max * (1.0 - (v / p.v_des).powi(4) - ratio * ratio)
        }
        LowMode::FollowingII => 0.0,
        LowMode::ClosingIn if keeping => {
            let x3 = x.leader_speed;
            let ghr = p.alpha4 * (x3 * x3 - v * v)
                / (2.0 * (x.gap + p.s() + p.c_s * p.lambda / p.a_max * x3 * x3));
            let ghr = match q4 {
                Q4Law::Corrected => ghr,
                Q4Law::Verbatim => -ghr,
            };
            ghr.min(p.epsilon * sign(x.rel_speed))
        }
        LowMode::ClosingIn => {
            let ratio = desired_gap(v, p) / x.gap;
            -p.a_max * ratio * ratio
        }
        LowMode::Danger => -p.a_max,
        LowMode::Unsafe => return Err(Error::UnsafeMode(LowMode::Unsafe)),
    };
    Ok(u.clamp(-p.a_max, p.a_max))
}

/// IDM-style desired gap s* used by the lane-change laws.
fn desired_gap(v: f64, p: &VehicleParams) -> f64 {
    p.s_n + v * p.tau + v / (2.0 * (p.a_max * p.b_d).sqrt())
}

#[cfg(test)]
mod tests {
    use super::super::HighMode;
    use super::*;

    fn accel(high: HighMode, low: LowMode, x: ContinuousState) -> f64 {
        control_accel(Mode::new(high, low), &x, &VehicleParams::default(), Q4Law::Corrected).unwrap()
    }

    /// State with the given own speed and a leader far ahead.
    fn free(v: f64) -> ContinuousState {
        ContinuousState::longitudinal(600.0, 30.0 - v, 30.0)
    }

    #[test]
    fn free_driving_lane_keeping() {
        assert_eq!(accel(HighMode::R, LowMode::FreeDriving, free(30.0)), 0.0);
        assert!((accel(HighMode::R, LowMode::FreeDriving, free(20.0)) - 1.0).abs() < 1e-12);
        assert!((accel(HighMode::R, LowMode::FreeDriving, free(29.5)) - 0.1).abs() < 1e-12);
        assert!((accel(HighMode::R, LowMode::FreeDriving, free(30.5)) + 0.1).abs() < 1e-12);
        assert!((accel(HighMode::R, LowMode::FreeDriving, free(35.0)) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn free_driving_lane_change_uses_idm_free_term() {
        let u = accel(HighMode::R2l, LowMode::FreeDriving, free(24.0));
        assert!((u - 2.952).abs() < 1e-12);
        assert_eq!(accel(HighMode::R2l, LowMode::FreeDriving, free(30.0)), 0.0);
    }

    #[test]
    fn following_one_modified_ghr() {
        let u = accel(HighMode::R, LowMode::FollowingI, ContinuousState::longitudinal(100.0, -5.0, 20.0));
        assert!((u - 0.15625).abs() < 1e-12);
    }

    #[test]
    fn following_one_singular_gap_saturates() {
        let u = accel(HighMode::R, LowMode::FollowingI, ContinuousState::longitudinal(500.0, -6.0, 30.0));
        assert_eq!(u, 5.0);
    }

    #[test]
    fn closing_in_corrected_sign() {
        let u = accel(HighMode::R, LowMode::ClosingIn, ContinuousState::longitudinal(30.0, -5.0, 20.0));
        assert!((u - (-225.0 / 134.0)).abs() < 1e-12);
        assert!((u + 1.679).abs() < 1e-3);
        let u = accel(HighMode::R, LowMode::ClosingIn, ContinuousState::longitudinal(30.0, -1e-9, 20.0));
        assert!((u + 0.1).abs() < 1e-12);
    }

    #[test]
    fn closing_in_verbatim_caps_at_epsilon() {
        let x = ContinuousState::longitudinal(30.0, -5.0, 20.0);
        let u = control_accel(
            Mode::new(HighMode::R, LowMode::ClosingIn),
            &x,
            &VehicleParams::default(),
            Q4Law::Verbatim,
        )
        .unwrap();
        assert!((u + 0.1).abs() < 1e-12);
    }

    #[test]
    fn closing_in_lane_change_idm_interaction_term() {
        let u = accel(HighMode::L2r, LowMode::ClosingIn, ContinuousState::longitudinal(100.0, 5.0, 30.0));
        let s_star = 5.0 + 25.0 * 1.5 + 25.0 / (2.0 * 15f64.sqrt());
        assert!((u + 5.0 * (s_star / 100.0).powi(2)).abs() < 1e-12);
        assert!((u + 1.046).abs() < 1e-3);
    }

    #[test]
    fn coasting_and_danger() {
        for h in HighMode::ALL {
            assert_eq!(accel(h, LowMode::FollowingII, free(12.0)), 0.0);
            assert_eq!(accel(h, LowMode::Danger, free(12.0)), -5.0);
        }
    }

    #[test]
    fn unsafe_mode_has_no_law() {
        let r = control_accel(
            Mode::new(HighMode::R, LowMode::Unsafe),
            &free(10.0),
            &VehicleParams::default(),
            Q4Law::Corrected,
        );
        assert!(matches!(r, Err(Error::UnsafeMode(_))));
    }
}
