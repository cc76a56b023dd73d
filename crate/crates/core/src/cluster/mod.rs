//! Synchronous N-vehicle engine.
//!
//! Each step first decides, for every vehicle and from the same step-start
//! snapshot, which events fire, which low mode applies and which
//! acceleration to command. It then integrates all absolute states with
//! explicit Euler and samples the speed histories and flow statistics.

mod events;
mod neighborhood;

use std::collections::VecDeque;

pub use events::{apply_events, gather_events, EventBundle, FiredEvent, LeaderView};
pub use neighborhood::{collision_check, neighborhood, resolve_leader, Kinematics, Leader, Neighborhood};

use crate::automaton::{
    classify_detailed, compute_thresholds, control_accel, init_check, ContinuousState, Lane, LowMode, Mode, Q4Law,
};
use crate::error::{Error, Result};
use crate::maneuver::{LaneGeometry, SpeedHistory};
use crate::mesoscopic::FlowStatistic;
use crate::params::VehicleParams;
use crate::scenario::{summarize, RunSummary, Scenario, TraceRecord};

/// How the flow factor enters headways and the lane-change test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMode {
    /// Microscopic model: factor 1, statistics not computed.
    Off,
    /// Mesoscopic model: factor from the speed spread ahead.
    Vdt,
    /// Fixed factor with the microscopic lane-change test. Statistics are
    /// still computed but not used.
    Forced(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub dt: f64,
    pub alpha: AlphaMode,
    pub q4: Q4Law,
    /// Age in steps of the data about non-leader neighbors.
    pub info_delay_steps: usize,
    pub geometry: LaneGeometry,
    pub lane_changes: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            alpha: AlphaMode::Off,
            q4: Q4Law::default(),
            info_delay_steps: 0,
            geometry: LaneGeometry::default(),
            lane_changes: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleRuntime {
    pub id: u32,
    pub params: VehicleParams,
    /// `(t, v_des)` pairs sorted by time.
    pub schedule: Vec<(f64, f64)>,
    pub kin: Kinematics,
    pub low: LowMode,
    /// Relative frame at the last decision.
    pub x: ContinuousState,
    pub leader: Leader,
    /// Commanded acceleration from the last decision.
    pub u: f64,
    /// Flow factor applied at the last decision.
    pub alpha: f64,
    /// Desired speed in force.
    pub v_des: f64,
    /// Flow statistics per lane, indexed by [`Lane::index`].
    pub flow: [FlowStatistic; 2],
    /// Speed of the closest vehicle ahead per lane, indexed by [`Lane::index`].
    pub history: [SpeedHistory; 2],
    /// Events not yet drained into a trace record.
    pub fired: Vec<FiredEvent>,
}

impl VehicleRuntime {
    pub fn new(id: u32, params: VehicleParams, mut schedule: Vec<(f64, f64)>, kin: Kinematics) -> Self {
        schedule.sort_by(|a, b| a.0.total_cmp(&b.0));
        let window = params.window;
        let mut vr = Self {
            id,
            params,
            schedule,
            kin,
            low: LowMode::FreeDriving,
            x: ContinuousState::default(),
            leader: Leader::Fictitious,
            u: 0.0,
            alpha: 1.0,
            v_des: params.v_des,
            flow: [FlowStatistic::new(window), FlowStatistic::new(window)],
            history: [SpeedHistory::new(window), SpeedHistory::new(window)],
            fired: Vec::new(),
        };
        vr.v_des = vr.v_des_at(0.0);
        vr
    }

    pub fn mode(&self) -> Mode {
        Mode::new(self.kin.high, self.low)
    }

    /// Desired speed from the schedule at time `t`.
    pub fn v_des_at(&self, t: f64) -> f64 {
        self.schedule
            .iter()
            .rev()
            .find(|&&(ts, _)| ts <= t + 1e-9)
            .map_or(self.params.v_des, |&(_, v)| v)
    }
}

/// Counters the trace alone cannot reconstruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    /// Decisions that landed in the unsafe mode.
    pub unsafe_decisions: u64,
    /// Classifications settled by the precedence rule.
    pub precedence_resolutions: u64,
    /// Steps after which some same-lane pair was within collision distance.
    pub collision_steps: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState {
    pub vehicles: Vec<VehicleRuntime>,
    pub t: f64,
    pub config: EngineConfig,
    pub diagnostics: Diagnostics,
    steps: u64,
    /// Step-end snapshots, newest last, holding `info_delay_steps + 1` entries.
    snapshots: VecDeque<Vec<Kinematics>>,
}

impl ClusterState {
    /// Builds the initial state and checks that every vehicle starts outside
    /// the unsafe domain.
    pub fn new(vehicles: Vec<VehicleRuntime>, config: EngineConfig) -> Result<Self> {
        if !(config.dt > 0.0 && config.dt.is_finite()) {
            return Err(Error::scenario("dt_s", "must be positive"));
        }
        let mut cs = Self {
            vehicles,
            t: 0.0,
            config,
            diagnostics: Diagnostics::default(),
            steps: 0,
            snapshots: VecDeque::new(),
        };
        cs.snapshots.push_back(cs.snapshot());
        let snap = cs.current().to_vec();
        for n in 0..cs.vehicles.len() {
            let radius = cs.vehicles[n].params.delta_max;
            let k = snap[n];
            let leader = resolve_leader(&snap, n, k.p, k.lane(), radius);
            let view = events::leader_view(&snap, k.p, leader, radius, cs.vehicles[n].v_des);
            let vr = &mut cs.vehicles[n];
            let p = vr.params.with_v_des(vr.v_des);
            vr.leader = leader;
            vr.x = events::relative_state(&k, &view);
            vr.alpha = match cs.config.alpha {
                AlphaMode::Forced(a) => a,
                _ => 1.0,
            };
            let th = compute_thresholds(&vr.x, &p, vr.alpha);
            let admissible = if leader == Leader::Fictitious {
                vr.low = LowMode::FreeDriving;
                true
            } else {
                let class = classify_detailed(&vr.x, &th);
                vr.low = class.mode;
                // A state on a seam belongs to the boundary of the chosen
                // domain rather than to its interior.
                init_check(vr.mode(), &vr.x, &th) || (class.resolved_by_precedence() && class.mode != LowMode::Unsafe)
            };
            if !admissible {
                return Err(Error::InitCheck {
                    id: vr.id,
                    reason: format!(
                        "initial state {:?} lies in the unsafe domain (gap {:.3} m)",
                        vr.mode(),
                        vr.x.gap
                    ),
                });
            }
        }
        cs.sample();
        Ok(cs)
    }

    pub fn snapshot(&self) -> Vec<Kinematics> {
        self.vehicles.iter().map(|v| v.kin).collect()
    }

    /// Snapshot at the start of the current step.
    pub fn current(&self) -> &[Kinematics] {
        self.snapshots.back().expect("snapshot buffer is never empty")
    }

    /// Snapshot seen through the information delay.
    pub fn observed(&self) -> &[Kinematics] {
        self.snapshots.front().expect("snapshot buffer is never empty")
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    /// Events, low modes and controls for the current instant. Mutates only
    /// the per-vehicle decision fields; every read comes from the snapshot.
    pub fn decide(&mut self) -> Result<()> {
        let t = self.t;
        for v in &mut self.vehicles {
            v.v_des = v.v_des_at(t);
        }
        let bundles: Vec<EventBundle> = (0..self.vehicles.len()).map(|n| gather_events(self, n)).collect();
        let dt = self.config.dt;
        for (vr, eb) in self.vehicles.iter_mut().zip(&bundles) {
            let class = apply_events(vr, eb, &self.config)?;
            if class.resolved_by_precedence() {
                self.diagnostics.precedence_resolutions += 1;
            }
            let p = vr.params.with_v_des(vr.v_des);
            let mut u = match control_accel(vr.mode(), &vr.x, &p, self.config.q4) {
                Ok(u) => u,
                Err(Error::UnsafeMode(_)) => {
                    self.diagnostics.unsafe_decisions += 1;
                    -p.a_max
                }
                Err(e) => return Err(e),
            };
            if vr.low == LowMode::FreeDriving && vr.kin.high.is_lane_keeping() {
                u = land_on_target(u, vr.v_des - vr.kin.v, dt);
            }
            vr.u = u;
        }
        Ok(())
    }

    /// Integrates one step with the decided controls and samples statistics.
    pub fn advance(&mut self) {
        let dt = self.config.dt;
        for vr in &mut self.vehicles {
            let k = &mut vr.kin;
            let (sin, cos) = k.phi.sin_cos();
            k.p += k.v * dt;
            k.py += k.vy * dt;
            k.v = (k.v + vr.u * cos * dt).clamp(0.0, vr.params.v_max);
            k.vy -= vr.u * sin * dt;
        }
        self.steps += 1;
        self.t = self.steps as f64 * dt;
        let snap = self.snapshot();
        self.snapshots.push_back(snap);
        while self.snapshots.len() > self.config.info_delay_steps + 1 {
            self.snapshots.pop_front();
        }
        if !self.collisions().is_empty() {
            self.diagnostics.collision_steps += 1;
        }
        self.sample();
    }

    pub fn step_mut(&mut self) -> Result<()> {
        self.decide()?;
        self.advance();
        Ok(())
    }

    /// Functional form of [`step_mut`](Self::step_mut).
    pub fn step(&self) -> Result<Self> {
        let mut next = self.clone();
        next.step_mut()?;
        Ok(next)
    }

    pub fn collisions(&self) -> Vec<(usize, usize, f64)> {
        let s: Vec<f64> = self.vehicles.iter().map(|v| v.params.s()).collect();
        collision_check(self.current(), &s, &self.config.geometry)
    }

    /// Pushes the current sample into every history and flow statistic.
    fn sample(&mut self) {
        let t = self.t;
        let computes_flow = self.config.alpha != AlphaMode::Off;
        let obs = self.observed().to_vec();
        let cur = self.current().to_vec();
        for (n, vr) in self.vehicles.iter_mut().enumerate() {
            let k = cur[n];
            let lane = k.lane();
            let radius = vr.params.delta_max;
            let nb = neighborhood(&obs, n, k.p, lane, radius);
            let speed_of = |idx: Option<usize>| idx.map_or(vr.params.v_max, |i| obs[i].v);
            vr.history[lane.index()].push(t, speed_of(nb.m));
            vr.history[lane.other().index()].push(t, speed_of(nb.j));
            if computes_flow {
                for target in [Lane::Right, Lane::Left] {
                    let ahead: Vec<f64> = obs
                        .iter()
                        .enumerate()
                        .filter(|&(i, o)| {
                            let d = o.p - k.p;
                            let in_front = if target == lane { d > 0.0 } else { d >= 0.0 };
                            i != n && o.lane() == target && in_front && d <= radius
                        })
                        .map(|(_, o)| o.v)
                        .collect();
                    vr.flow[target.index()].update(t, &ahead, k.v, &vr.params);
                }
            }
        }
    }

    /// Trace records for the current instant; drains pending events.
    pub fn records(&mut self) -> Vec<TraceRecord> {
        let t = self.t;
        let ids: Vec<u32> = self.vehicles.iter().map(|v| v.id).collect();
        self.vehicles
            .iter_mut()
            .map(|vr| TraceRecord {
                t,
                id: vr.id,
                hmode: vr.kin.high,
                wmode: vr.low,
                p: vr.kin.p,
                v: vr.kin.v,
                py: vr.kin.py,
                vy: vr.kin.vy,
                phi: vr.kin.phi,
                u: vr.u,
                alpha: vr.alpha,
                leader: match vr.leader {
                    Leader::Fictitious => None,
                    Leader::Vehicle(m) => Some(ids[m]),
                },
                events: std::mem::take(&mut vr.fired),
            })
            .collect()
    }
}

/// Sampled-data form of the free-driving law: if one step of `u` would carry
/// the speed past its target, command exactly the remaining error instead.
fn land_on_target(u: f64, err: f64, dt: f64) -> f64 {
    if err != 0.0 && u * err > 0.0 && (u * dt).abs() > err.abs() {
        err / dt
    } else {
        u
    }
}

/// Result of a full scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub trace: Vec<TraceRecord>,
    pub summary: RunSummary,
    pub diagnostics: Diagnostics,
}

/// Runs `sc` to its horizon, sampling records every `sample_interval`.
pub fn run(sc: &Scenario) -> Result<RunOutput> {
    let mut cs = sc.build()?;
    let dt = sc.dt;
    let n_steps = (sc.duration / dt).round() as u64;
    let stride = ((sc.sample_interval / dt).round() as u64).max(1);
    let mut trace = Vec::with_capacity((n_steps / stride + 2) as usize * cs.vehicles.len());
    for k in 0..=n_steps {
        cs.decide()?;
        if k % stride == 0 || k == n_steps {
            trace.extend(cs.records());
        }
        if k == n_steps {
            break;
        }
        cs.advance();
        if sc.flags.fail_fast {
            if let Some(&(a, b, gap)) = cs.collisions().first() {
                return Err(Error::Collision {
                    t: cs.t,
                    a: cs.vehicles[a].id,
                    b: cs.vehicles[b].id,
                    gap,
                });
            }
        }
    }
    let summary = summarize(&trace, sc);
    Ok(RunOutput {
        trace,
        summary,
        diagnostics: cs.diagnostics,
    })
}
