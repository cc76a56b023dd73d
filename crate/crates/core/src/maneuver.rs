//! Lane-change decision: utilities, required gaps, the exit trigger and
//! line-crossing detection.

use serde::{Deserialize, Serialize};

use crate::automaton::HighMode;
use crate::error::{Error, Result};
use crate::params::VehicleParams;
use crate::window::TimeWindow;

/// Speed samples of the vehicle a utility is computed from.
pub type SpeedHistory = TimeWindow;

/// Lateral layout of the two-lane road.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaneGeometry {
    /// Right-lane midline.
    #[serde(rename = "y_right_m")]
    pub y_right: f64,
    /// Left-lane midline.
    #[serde(rename = "y_left_m")]
    pub y_left: f64,
    /// Separation line between the lanes.
    #[serde(rename = "y_sep_m")]
    pub y_sep: f64,
}

impl Default for LaneGeometry {
    fn default() -> Self {
        Self {
            y_right: 2.0,
            y_left: 7.0,
            y_sep: 4.5,
        }
    }
}

impl LaneGeometry {
    pub fn validate(&self) -> Result<()> {
        let ordered = self.y_right < self.y_sep && self.y_sep < self.y_left;
        if !(ordered && self.y_right.is_finite() && self.y_left.is_finite()) {
            return Err(Error::scenario(
                "geometry",
                "lane lines must satisfy y_right_m < y_sep_m < y_left_m",
            ));
        }
        Ok(())
    }

    /// Distance between the two midlines.
    pub fn lane_spacing(&self) -> f64 {
        self.y_left - self.y_right
    }

    pub fn midline(&self, lane: crate::automaton::Lane) -> f64 {
        match lane {
            crate::automaton::Lane::Right => self.y_right,
            crate::automaton::Lane::Left => self.y_left,
        }
    }
}

/// Integral of `min(v_des, v)` over the history window. An empty history
/// stands for a vehicle that never limits the speed.
pub fn utility(hist: &SpeedHistory, v_des: f64) -> f64 {
    hist.integral_of(|v| v.min(v_des))
        .unwrap_or(v_des * hist.span())
}

fn required_gap(v_n: f64, v_other: f64, p: &VehicleParams) -> f64 {
    let s = p.s();
    if v_other > v_n {
        s + p.c_r * (v_n / p.a_max) * v_other
    } else {
        let dv = v_other - v_n;
        s + (2.0 * p.c_r * v_n * v_other + dv * dv) / (2.0 * p.a_max)
    }
}

/// Minimum distance to the vehicle ahead in the target lane.
pub fn gap_ahead_required(v_n: f64, v_j: f64, p: &VehicleParams, delta_p: f64) -> f64 {
    required_gap(v_n, v_j, p) + delta_p
}

/// Minimum distance to the vehicle behind in the target lane.
pub fn gap_behind_required(v_n: f64, v_i: f64, p: &VehicleParams) -> f64 {
    required_gap(v_n, v_i, p)
}

/// Gap erosion during a lane change if `j` brakes at `a_max` from the start.
///
/// The maneuver lasts `(y_l - y_r) / (v_n sin(phi))`; over that time `n`
/// covers `v_n cos(phi) T` longitudinally while `j` covers its braked travel.
pub fn compute_delta_p(v_n: f64, v_j: f64, p: &VehicleParams, g: &LaneGeometry) -> f64 {
    if v_n <= 0.0 || p.phi <= 0.0 {
        return 0.0;
    }
    let duration = g.lane_spacing() / (v_n * p.phi.sin());
    let v_j = v_j.max(0.0);
    let stop_time = v_j / p.a_max;
    let braked = if stop_time >= duration {
        v_j * duration - 0.5 * p.a_max * duration * duration
    } else {
        v_j * v_j / (2.0 * p.a_max)
    };
    (v_n * p.phi.cos() * duration - braked).max(0.0)
}

/// Inputs of the lane-exit decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerInput {
    /// Utility of staying in the current lane.
    pub own_utility: f64,
    /// Utility of the target lane.
    pub target_utility: f64,
    /// `p_j - p_n`, or `None` when the target lane is empty ahead.
    pub gap_ahead: Option<f64>,
    /// `p_n - p_i`, or `None` when the target lane is empty behind.
    pub gap_behind: Option<f64>,
    pub required_ahead: f64,
    pub required_behind: f64,
    pub steering: f64,
    pub alpha_own: f64,
    pub alpha_target: f64,
    /// Lane-change cost c.
    pub cost: f64,
    pub mesoscopic: bool,
}

/// Which utility clause admitted a lane change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriggerClause {
    /// Target lane better by at least the cost.
    Utility,
    /// Within the cost, but better once both sides are weighted by their
    /// flow factors.
    FlowWeighted,
}

/// Evaluates the lane-exit event. Returns the clause that fired, if any.
pub fn lane_change_clause(input: &TriggerInput) -> Option<TriggerClause> {
    if input.steering != 0.0 {
        return None;
    }
    let ahead_ok = input.gap_ahead.is_none_or(|g| g >= input.required_ahead);
    let behind_ok = input.gap_behind.is_none_or(|g| g >= input.required_behind);
    if !(ahead_ok && behind_ok) {
        return None;
    }
    let (u, ut, c) = (input.own_utility, input.target_utility, input.cost);
    if u <= ut - c {
        return Some(TriggerClause::Utility);
    }
    // Strict on the weighted comparison: equal lanes with equal flow factors
    // must not trigger, otherwise a vehicle alternates between two empty
    // lanes.
    let weighted = ut - c < u && u <= ut && input.alpha_own * u < input.alpha_target * ut;
    (input.mesoscopic && weighted).then_some(TriggerClause::FlowWeighted)
}

pub fn lane_change_trigger(input: &TriggerInput) -> bool {
    lane_change_clause(input).is_some()
}

/// Line whose crossing ends the current maneuver phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingKind {
    /// Separation line crossed (r2l -> l2l, l2r -> r2r).
    Separation,
    /// Target midline reached (l2l -> l, r2r -> r).
    Midline,
}

/// Detects whether the lateral position `y_now` has reached the line that
/// ends phase `h`. Lateral motion is monotone within a phase, so being on or
/// past the line is the same as having crossed it since the last step.
pub fn detect_line_crossing(y_now: f64, h: HighMode, g: &LaneGeometry) -> Option<CrossingKind> {
    match h {
        HighMode::R2l if y_now >= g.y_sep => Some(CrossingKind::Separation),
        HighMode::L2r if y_now <= g.y_sep => Some(CrossingKind::Separation),
        HighMode::L2l if y_now >= g.y_left => Some(CrossingKind::Midline),
        HighMode::R2r if y_now <= g.y_right => Some(CrossingKind::Midline),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> VehicleParams {
        VehicleParams::default()
    }

    fn constant_history(v: f64) -> SpeedHistory {
        let mut h = SpeedHistory::new(10.0);
        for k in 0..=100 {
            h.push(k as f64 * 0.1, v);
        }
        h
    }

    #[test]
    fn utility_examples() {
        assert!((utility(&constant_history(20.0), 30.0) - 200.0).abs() < 1e-9);
        assert!((utility(&constant_history(36.0), 30.0) - 300.0).abs() < 1e-9);
        assert_eq!(utility(&SpeedHistory::new(10.0), 30.0), 300.0);
    }

    #[test]
    fn required_gap_examples() {
        let p = p();
        assert!((gap_ahead_required(24.0, 26.0, &p, 0.0) - 29.96).abs() < 1e-9);
        assert!((gap_ahead_required(24.0, 24.0, &p, 0.0) - 28.04).abs() < 1e-9);
        assert_eq!(gap_ahead_required(0.0, 0.0, &p, 0.0), 5.0);
        assert!((gap_behind_required(24.0, 30.0, &p) - 33.8).abs() < 1e-9);
        assert!((gap_behind_required(24.0, 24.0, &p) - 28.04).abs() < 1e-9);
        assert_eq!(gap_behind_required(0.0, 0.0, &p), 5.0);
    }

    #[test]
    fn delta_p_example() {
        let dp = compute_delta_p(24.0, 24.0, &p(), &LaneGeometry::default());
        // Hand value ~10.65 with rounded intermediates.
        assert!((dp - 10.65).abs() < 0.05, "{dp}");
        assert_eq!(compute_delta_p(0.0, 24.0, &p(), &LaneGeometry::default()), 0.0);
    }

    #[test]
    fn delta_p_decreases_with_steering_angle() {
        let g = LaneGeometry::default();
        let mut last = f64::INFINITY;
        for k in 1..15 {
            let params = VehicleParams {
                phi: 0.1 * k as f64,
                ..p()
            };
            let dp = compute_delta_p(24.0, 30.0, &params, &g);
            assert!(dp <= last + 1e-12);
            last = dp;
        }
    }

    fn input(u: f64, ut: f64, a: f64, at: f64) -> TriggerInput {
        TriggerInput {
            own_utility: u,
            target_utility: ut,
            gap_ahead: Some(1000.0),
            gap_behind: Some(1000.0),
            required_ahead: 30.0,
            required_behind: 30.0,
            steering: 0.0,
            alpha_own: a,
            alpha_target: at,
            cost: 10.0,
            mesoscopic: false,
        }
    }

    #[test]
    fn trigger_examples() {
        let base = input(200.0, 250.0, 1.0, 1.0);
        assert!(lane_change_trigger(&base));
        assert!(lane_change_trigger(&TriggerInput { mesoscopic: true, ..base }));
        assert!(!lane_change_trigger(&TriggerInput { steering: 0.1, ..base }));

        let close = input(245.0, 250.0, 1.5, 1.0);
        assert!(!lane_change_trigger(&close));
        assert!(!lane_change_trigger(&TriggerInput { mesoscopic: true, ..close }));

        let weighted = input(245.0, 250.0, 1.0, 1.2);
        assert!(!lane_change_trigger(&weighted));
        let meso = TriggerInput { mesoscopic: true, ..weighted };
        assert_eq!(lane_change_clause(&meso), Some(TriggerClause::FlowWeighted));
    }

    #[test]
    fn symmetric_lanes_stall_in_both_variants() {
        let tie = input(250.0, 250.0, 1.0, 1.0);
        assert!(!lane_change_trigger(&tie));
        assert!(!lane_change_trigger(&TriggerInput { mesoscopic: true, ..tie }));
    }

    #[test]
    fn absent_neighbors_never_block() {
        let base = TriggerInput {
            gap_ahead: Some(10.0),
            ..input(200.0, 250.0, 1.0, 1.0)
        };
        assert!(!lane_change_trigger(&base));
        assert!(lane_change_trigger(&TriggerInput { gap_ahead: None, ..base }));
    }

    #[test]
    fn crossing_examples() {
        let g = LaneGeometry::default();
        assert_eq!(detect_line_crossing(4.6, HighMode::R2l, &g), Some(CrossingKind::Separation));
        assert_eq!(detect_line_crossing(4.45, HighMode::R2l, &g), None);
        assert_eq!(detect_line_crossing(7.0, HighMode::L2l, &g), Some(CrossingKind::Midline));
        assert_eq!(detect_line_crossing(4.4, HighMode::L2r, &g), Some(CrossingKind::Separation));
        assert_eq!(detect_line_crossing(1.99, HighMode::R2r, &g), Some(CrossingKind::Midline));
        for y in [0.0, 2.0, 4.5, 7.0, 9.0] {
            assert_eq!(detect_line_crossing(y, HighMode::R, &g), None);
            assert_eq!(detect_line_crossing(y, HighMode::L, &g), None);
        }
    }
}
