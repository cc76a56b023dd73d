use std::fmt;

use super::neighborhood::{neighborhood, resolve_leader, Kinematics, Leader};
use super::{AlphaMode, ClusterState, EngineConfig, VehicleRuntime};
use crate::automaton::{
    classify_detailed, compute_thresholds, reset_lane_exit, reset_midline, Classification,
    ContinuousState, Lane, LaneChange, LowMode,
};
use crate::error::Result;
use crate::maneuver::{
    compute_delta_p, detect_line_crossing, gap_ahead_required, gap_behind_required,
    lane_change_trigger, utility, CrossingKind, TriggerInput,
};

/// Leader a vehicle will follow after this step's events, with its gap and
/// speed read from the step-start snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaderView {
    pub leader: Leader,
    pub gap: f64,
    pub speed: f64,
}

/// Events of one vehicle at one step, applied as crossing, exit, new leader.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventBundle {
    pub crossing: Option<CrossingKind>,
    pub exit: Option<LaneChange>,
    /// Leader after the high-mode update. Always present so the relative
    /// frame can be rebuilt.
    pub leader: LeaderView,
    /// The leader identity changed for a reason other than a separation-line
    /// crossing, whose own re-anchoring already covers it.
    pub new_leader: bool,
}

impl EventBundle {
    pub fn is_empty(&self) -> bool {
        self.crossing.is_none() && self.exit.is_none() && !self.new_leader
    }
}

/// An event as recorded in the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiredEvent {
    Crossing(CrossingKind),
    Exit(LaneChange),
    NewLeader,
}

impl FiredEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            FiredEvent::Crossing(CrossingKind::Separation) => "c_sep",
            FiredEvent::Crossing(CrossingKind::Midline) => "c_mid",
            FiredEvent::Exit(LaneChange::ToLeft) => "ex_l",
            FiredEvent::Exit(LaneChange::ToRight) => "ex_r",
            FiredEvent::NewLeader => "nl",
        }
    }

    pub fn parse(s: &str) -> Option<FiredEvent> {
        Some(match s {
            "c_sep" => FiredEvent::Crossing(CrossingKind::Separation),
            "c_mid" => FiredEvent::Crossing(CrossingKind::Midline),
            "ex_l" => FiredEvent::Exit(LaneChange::ToLeft),
            "ex_r" => FiredEvent::Exit(LaneChange::ToRight),
            "nl" => FiredEvent::NewLeader,
            _ => return None,
        })
    }
}

impl fmt::Display for FiredEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relative frame of `k` with respect to `view`.
pub(crate) fn relative_state(k: &Kinematics, view: &LeaderView) -> ContinuousState {
    ContinuousState {
        gap: view.gap,
        rel_speed: view.speed - k.v,
        leader_speed: view.speed,
        lateral_pos: k.py,
        lateral_speed: k.vy,
        steering: k.phi,
    }
}

pub(crate) fn leader_view(snap: &[Kinematics], p_n: f64, leader: Leader, radius: f64, v_des: f64) -> LeaderView {
    match leader {
        Leader::Fictitious => LeaderView {
            leader,
            gap: radius,
            speed: v_des,
        },
        Leader::Vehicle(m) => LeaderView {
            leader,
            gap: snap[m].p - p_n,
            speed: snap[m].v,
        },
    }
}

/// Flow factor vehicle `vr` applies to headways in `lane`.
pub(crate) fn alpha_for(mode: AlphaMode, vr: &VehicleRuntime, lane: Lane) -> f64 {
    match mode {
        AlphaMode::Off => 1.0,
        AlphaMode::Forced(a) => a,
        AlphaMode::Vdt => vr.flow[lane.index()].alpha,
    }
}

/// Collects the events of vehicle `n` from the step-start snapshot.
pub fn gather_events(cs: &ClusterState, n: usize) -> EventBundle {
    let snap = cs.current();
    let veh = &cs.vehicles[n];
    let k = snap[n];
    let radius = veh.params.delta_max;
    let mut high = k.high;
    let mut crossing = None;
    let mut exit = None;
    if high.is_lane_changing() {
        crossing = detect_line_crossing(k.py, high, &cs.config.geometry);
        if crossing.is_some() {
            high = high.next();
        }
    } else if cs.config.lane_changes {
        exit = exit_decision(cs, n);
        if exit.is_some() {
            high = high.next();
        }
    }
    let leader = resolve_leader(snap, n, k.p, high.lane(), radius);
    let view = leader_view(snap, k.p, leader, radius, veh.v_des);
    EventBundle {
        crossing,
        exit,
        leader: view,
        new_leader: leader != veh.leader && crossing != Some(CrossingKind::Separation),
    }
}

/// Evaluates the lane-exit trigger for a lane-keeping vehicle.
fn exit_decision(cs: &ClusterState, n: usize) -> Option<LaneChange> {
    let veh = &cs.vehicles[n];
    let k = cs.current()[n];
    if k.phi != 0.0 || k.v <= 0.0 {
        return None;
    }
    let obs = cs.observed();
    let p = veh.params.with_v_des(veh.v_des);
    let geometry = &cs.config.geometry;
    let lane = k.lane();
    let target = lane.other();
    let nb = neighborhood(obs, n, k.p, lane, p.delta_max);
    let ahead = nb.j.map(|j| {
        let dp = compute_delta_p(k.v, obs[j].v, &p, geometry);
        (obs[j].p - k.p, gap_ahead_required(k.v, obs[j].v, &p, dp))
    });
    let behind = nb
        .i
        .map(|i| (k.p - obs[i].p, gap_behind_required(k.v, obs[i].v, &p)));
    let input = TriggerInput {
        own_utility: utility(&veh.history[lane.index()], p.v_des),
        target_utility: utility(&veh.history[target.index()], p.v_des),
        gap_ahead: ahead.map(|a| a.0),
        gap_behind: behind.map(|b| b.0),
        required_ahead: ahead.map_or(0.0, |a| a.1),
        required_behind: behind.map_or(0.0, |b| b.1),
        steering: k.phi,
        alpha_own: alpha_for(cs.config.alpha, veh, lane),
        alpha_target: alpha_for(cs.config.alpha, veh, target),
        cost: p.lane_change_cost,
        mesoscopic: cs.config.alpha == AlphaMode::Vdt,
    };
    lane_change_trigger(&input).then_some(match lane {
        Lane::Right => LaneChange::ToLeft,
        Lane::Left => LaneChange::ToRight,
    })
}

/// Applies `eb` to `vr`: crossing first, then lane exit, then the new leader,
/// and finally reclassifies the low mode.
///
/// The relative frame is rebuilt from the leader view, which for a changed
/// leader is exactly the new-leader reset (own speed preserved).
pub fn apply_events(vr: &mut VehicleRuntime, eb: &EventBundle, cfg: &EngineConfig) -> Result<Classification> {
    let p = vr.params.with_v_des(vr.v_des);
    let mut x = relative_state(&vr.kin, &eb.leader);
    if let Some(kind) = eb.crossing {
        vr.kin.high = vr.kin.high.next();
        if kind == CrossingKind::Midline {
            x = reset_midline(&x);
        }
        vr.fired.push(FiredEvent::Crossing(kind));
    }
    if let Some(dir) = eb.exit {
        x = reset_lane_exit(&x, &p, dir)?;
        vr.kin.high = vr.kin.high.next();
        vr.fired.push(FiredEvent::Exit(dir));
    }
    if eb.crossing == Some(CrossingKind::Midline) || eb.exit.is_some() {
        vr.kin.v = x.own_speed();
        vr.kin.vy = x.lateral_speed;
        vr.kin.phi = x.steering;
    }
    if eb.new_leader {
        vr.fired.push(FiredEvent::NewLeader);
    }
    vr.leader = eb.leader.leader;
    vr.x = x;
    vr.alpha = alpha_for(cfg.alpha, vr, vr.kin.lane());
    let class = if vr.leader == Leader::Fictitious {
        // Far virtual leader: the vehicle only tracks its desired speed.
        Classification {
            mode: LowMode::FreeDriving,
            matches: 1,
        }
    } else {
        classify_detailed(&x, &compute_thresholds(&x, &p, vr.alpha))
    };
    vr.low = class.mode;
    Ok(class)
}
