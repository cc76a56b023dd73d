//! Per-vehicle hybrid automaton: relative continuous state, discrete modes,
//! headway thresholds and domains, control laws, flow field and resets.

mod control;
mod dynamics;
mod reset;
mod thresholds;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use control::{control_accel, Q4Law};
pub use dynamics::derivative;
pub use reset::{reset_lane_exit, reset_midline, reset_new_leader, LaneChange};
pub use thresholds::{
    classify_domain, classify_detailed, compute_headways, compute_thresholds, in_domain,
    init_check, Classification, HeadwaySet, ThresholdSet,
};

/// Relative state of a follower with respect to its leader.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ContinuousState {
    /// x1: distance to the leader (m).
    pub gap: f64,
    /// x2: leader speed minus own speed (m/s).
    pub rel_speed: f64,
    /// x3: leader speed (m/s).
    pub leader_speed: f64,
    /// x4: lateral position (m).
    pub lateral_pos: f64,
    /// x5: lateral speed (m/s).
    pub lateral_speed: f64,
    /// x6: steering angle (rad).
    pub steering: f64,
}

impl ContinuousState {
    /// Longitudinal state only; lateral components zero.
    pub fn longitudinal(gap: f64, rel_speed: f64, leader_speed: f64) -> Self {
        Self {
            gap,
            rel_speed,
            leader_speed,
            ..Default::default()
        }
    }

    /// Own longitudinal speed v^n = x3 - x2.
    pub fn own_speed(&self) -> f64 {
        self.leader_speed - self.rel_speed
    }

    pub fn to_array(self) -> [f64; 6] {
        [
            self.gap,
            self.rel_speed,
            self.leader_speed,
            self.lateral_pos,
            self.lateral_speed,
            self.steering,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            gap: a[0],
            rel_speed: a[1],
            leader_speed: a[2],
            lateral_pos: a[3],
            lateral_speed: a[4],
            steering: a[5],
        }
    }
}

/// Lane of a two-lane road.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lane {
    #[serde(rename = "r")]
    Right,
    #[serde(rename = "l")]
    Left,
}

impl Lane {
    pub fn other(self) -> Lane {
        match self {
            Lane::Right => Lane::Left,
            Lane::Left => Lane::Right,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Lane::Right => 0,
            Lane::Left => 1,
        }
    }
}

/// High-level lane-cycle mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HighMode {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "r2l")]
    R2l,
    #[serde(rename = "l2l")]
    L2l,
    #[serde(rename = "l")]
    L,
    #[serde(rename = "l2r")]
    L2r,
    #[serde(rename = "r2r")]
    R2r,
}

impl HighMode {
    pub const ALL: [HighMode; 6] = [
        HighMode::R,
        HighMode::R2l,
        HighMode::L2l,
        HighMode::L,
        HighMode::L2r,
        HighMode::R2r,
    ];

    /// Successor along r -> r2l -> l2l -> l -> l2r -> r2r -> r.
    pub fn next(self) -> HighMode {
        match self {
            HighMode::R => HighMode::R2l,
            HighMode::R2l => HighMode::L2l,
            HighMode::L2l => HighMode::L,
            HighMode::L => HighMode::L2r,
            HighMode::L2r => HighMode::R2r,
            HighMode::R2r => HighMode::R,
        }
    }

    /// Lane the vehicle is nominally in. `r2l` is still in the right lane,
    /// `l2l` is already in the left one.
    pub fn lane(self) -> Lane {
        match self {
            HighMode::R | HighMode::R2l | HighMode::R2r => Lane::Right,
            HighMode::L | HighMode::L2l | HighMode::L2r => Lane::Left,
        }
    }

    pub fn is_lane_keeping(self) -> bool {
        matches!(self, HighMode::R | HighMode::L)
    }

    pub fn is_lane_changing(self) -> bool {
        !self.is_lane_keeping()
    }

    pub fn keeping(lane: Lane) -> HighMode {
        match lane {
            Lane::Right => HighMode::R,
            Lane::Left => HighMode::L,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HighMode::R => "r",
            HighMode::R2l => "r2l",
            HighMode::L2l => "l2l",
            HighMode::L => "l",
            HighMode::L2r => "l2r",
            HighMode::R2r => "r2r",
        }
    }
}

impl fmt::Display for HighMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HighMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HighMode::ALL
            .into_iter()
            .find(|h| h.as_str() == s)
            .ok_or_else(|| format!("unknown high mode `{s}`"))
    }
}

/// Low-level car-following regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LowMode {
    /// w1
    FreeDriving,
    /// w2
    FollowingI,
    /// w3
    FollowingII,
    /// w4
    ClosingIn,
    /// w5
    Danger,
    /// w6
    Unsafe,
}

impl LowMode {
    pub const ALL: [LowMode; 6] = [
        LowMode::FreeDriving,
        LowMode::FollowingI,
        LowMode::FollowingII,
        LowMode::ClosingIn,
        LowMode::Danger,
        LowMode::Unsafe,
    ];

    /// 1-based index i of w_i.
    pub fn index(self) -> u8 {
        match self {
            LowMode::FreeDriving => 1,
            LowMode::FollowingI => 2,
            LowMode::FollowingII => 3,
            LowMode::ClosingIn => 4,
            LowMode::Danger => 5,
            LowMode::Unsafe => 6,
        }
    }

    pub fn from_index(i: u8) -> Option<LowMode> {
        LowMode::ALL.get(usize::from(i).checked_sub(1)?).copied()
    }

    pub fn as_str(self) -> &'static str {
        ["w1", "w2", "w3", "w4", "w5", "w6"][usize::from(self.index() - 1)]
    }

    /// State-triggered transitions of the low-level graph (no external event).
    pub fn is_state_transition(from: LowMode, to: LowMode) -> bool {
        use LowMode::*;
        matches!(
            (from, to),
            (FreeDriving, FollowingI)
                | (FreeDriving, FollowingII)
                | (FreeDriving, ClosingIn)
                | (FollowingI, FreeDriving)
                | (FollowingI, FollowingII)
                | (FollowingI, ClosingIn)
                | (FollowingII, FreeDriving)
                | (FollowingII, FollowingI)
                | (FollowingII, ClosingIn)
                | (FollowingII, Danger)
                | (ClosingIn, FreeDriving)
                | (ClosingIn, FollowingI)
                | (ClosingIn, FollowingII)
                | (ClosingIn, Danger)
                | (Danger, FollowingII)
                | (Danger, ClosingIn)
        )
    }
}

impl fmt::Display for LowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LowMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LowMode::ALL
            .into_iter()
            .find(|w| w.as_str() == s)
            .ok_or_else(|| format!("unknown low mode `{s}`"))
    }
}

/// Discrete state (high, low).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub high: HighMode,
    pub low: LowMode,
}

impl Mode {
    pub fn new(high: HighMode, low: LowMode) -> Self {
        Self { high, low }
    }
}

/// sign with sign(0) = 0.
pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
