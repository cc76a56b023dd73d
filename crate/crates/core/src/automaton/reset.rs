use serde::{Deserialize, Serialize};

use super::ContinuousState;
use crate::error::{Error, Result};
use crate::params::VehicleParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LaneChange {
    ToLeft,
    ToRight,
}

/// New-leader reset. Own speed is preserved: x2+ = v_L - (x3- - x2-).
pub fn reset_new_leader(x: &ContinuousState, gap: f64, leader_speed: f64) -> Result<ContinuousState> {
    if gap <= 0.0 || gap.is_nan() {
        return Err(Error::NonPositiveLeaderGap(gap));
    }
    Ok(ContinuousState {
        gap,
        rel_speed: leader_speed - x.own_speed(),
        leader_speed,
        ..*x
    })
}

/// Lane-exit reset: own speed is rotated by the steering angle.
pub fn reset_lane_exit(x: &ContinuousState, p: &VehicleParams, direction: LaneChange) -> Result<ContinuousState> {
    if x.steering != 0.0 {
        return Err(Error::ManeuverInProgress { steering: x.steering });
    }
    let (sin, cos) = p.phi.sin_cos();
    let toward = match direction {
        LaneChange::ToLeft => 1.0,
        LaneChange::ToRight => -1.0,
    };
    Ok(ContinuousState {
        rel_speed: cos * x.rel_speed + (1.0 - cos) * x.leader_speed,
        lateral_speed: toward * sin * x.own_speed(),
        steering: -toward * p.phi,
        ..*x
    })
}

/// Midline reset: lateral speed is folded back into the longitudinal one.
pub fn reset_midline(x: &ContinuousState) -> ContinuousState {
    let v = x.own_speed().hypot(x.lateral_speed);
    ContinuousState {
        rel_speed: x.leader_speed - v,
        lateral_speed: 0.0,
        steering: 0.0,
        ..*x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(phi: f64) -> VehicleParams {
        VehicleParams {
            phi,
            ..Default::default()
        }
    }

    #[test]
    fn new_leader_keeps_own_speed() {
        let x = ContinuousState {
            lateral_pos: 2.0,
            ..ContinuousState::longitudinal(100.0, -5.0, 20.0)
        };
        let y = reset_new_leader(&x, 60.0, 28.0).unwrap();
        assert_eq!(y.to_array(), [60.0, 3.0, 28.0, 2.0, 0.0, 0.0]);
        assert_eq!(reset_new_leader(&x, x.gap, x.leader_speed).unwrap(), x);
        assert!(reset_new_leader(&x, 0.0, 10.0).is_err());
    }

    #[test]
    fn lane_exit_left() {
        let x = ContinuousState {
            lateral_pos: 2.0,
            ..ContinuousState::longitudinal(45.0, 0.0, 24.0)
        };
        let y = reset_lane_exit(&x, &params(0.1), LaneChange::ToLeft).unwrap();
        assert!((y.rel_speed - 24.0 * (1.0 - 0.1f64.cos())).abs() < 1e-12);
        assert!((y.rel_speed - 0.1199).abs() < 1e-4);
        assert!((y.lateral_speed - 2.396).abs() < 1e-3);
        assert_eq!(y.steering, -0.1);
        assert!((y.own_speed() - 24.0 * 0.1f64.cos()).abs() < 1e-12);
        let r = reset_lane_exit(&x, &params(0.1), LaneChange::ToRight).unwrap();
        assert_eq!(r.lateral_speed, -y.lateral_speed);
        assert_eq!(r.steering, 0.1);
    }

    #[test]
    fn lane_exit_with_zero_angle_is_identity() {
        let x = ContinuousState::longitudinal(45.0, -2.0, 24.0);
        let mut p = params(0.1);
        p.phi = 0.0;
        assert_eq!(reset_lane_exit(&x, &p, LaneChange::ToLeft).unwrap(), x);
    }

    #[test]
    fn lane_exit_rejected_mid_maneuver() {
        let x = ContinuousState {
            steering: -0.1,
            ..ContinuousState::longitudinal(45.0, 0.0, 24.0)
        };
        assert!(matches!(
            reset_lane_exit(&x, &params(0.1), LaneChange::ToLeft),
            Err(Error::ManeuverInProgress { .. })
        ));
    }

    #[test]
    fn midline_restores_speed() {
        let x = ContinuousState::longitudinal(45.0, 0.0, 24.0);
        let exit = reset_lane_exit(&x, &params(0.1), LaneChange::ToLeft).unwrap();
        let back = reset_midline(&exit);
        assert!(back.rel_speed.abs() < 1e-12);
        assert_eq!((back.lateral_speed, back.steering), (0.0, 0.0));
        let plain = ContinuousState::longitudinal(45.0, -3.0, 24.0);
        assert_eq!(reset_midline(&plain).rel_speed, -3.0);
    }
}
