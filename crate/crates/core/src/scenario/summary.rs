use std::collections::BTreeMap;

use serde::Serialize;

use super::{Scenario, TraceRecord};
use crate::analysis::{equilibrium_check, instants, switch_stats, EquilibriumTolerance};
use crate::automaton::Lane;
use crate::cluster::{collision_check, AlphaMode, FiredEvent, Kinematics};
use crate::maneuver::CrossingKind;

/// Acceleration below which a vehicle counts as decelerating.
pub const ONSET_THRESHOLD: f64 = -0.2;
/// How long the deceleration must last to count as an onset.
pub const ONSET_HOLD_S: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionSample {
    pub t: f64,
    pub a: u32,
    pub b: u32,
    pub gap: f64,
}

/// Smallest distance between two vehicles over the samples where they
/// shared a lane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairGap {
    pub a: u32,
    pub b: u32,
    pub min_gap: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VehicleSummary {
    pub id: u32,
    pub convergence_time: Option<f64>,
    pub switches: u32,
    pub max_switches_per_second: u32,
    pub e2_violations: u32,
    /// Shortest time between two new-leader events.
    pub min_new_leader_dwell: Option<f64>,
    pub lane_changes: u32,
    /// First time the acceleration stays below the onset threshold for the
    /// hold time.
    pub deceleration_onset: Option<f64>,
    /// Sign changes of the commanded acceleration, zeros skipped.
    pub accel_sign_changes: u32,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub mesoscopic: bool,
    pub samples: usize,
    pub collision_count: usize,
    /// First collision samples (at most 100).
    pub collisions: Vec<CollisionSample>,
    pub min_gaps: Vec<PairGap>,
    pub vehicles: Vec<VehicleSummary>,
    pub max_switches_per_second: u32,
    pub e2_violations: u32,
    pub unsafe_samples: u32,
    pub all_converged: bool,
}

impl RunSummary {
    pub fn vehicle(&self, id: u32) -> Option<&VehicleSummary> {
        self.vehicles.iter().find(|v| v.id == id)
    }

    pub fn min_same_lane_gap(&self) -> f64 {
        self.min_gaps.iter().map(|g| g.min_gap).fold(f64::INFINITY, f64::min)
    }

    /// No collision, no unsafe mode and no off-graph switch.
    pub fn clean(&self) -> bool {
        self.collision_count == 0 && self.unsafe_samples == 0 && self.e2_violations == 0
    }
}

fn kinematics(r: &TraceRecord) -> Kinematics {
    Kinematics {
        p: r.p,
        v: r.v,
        py: r.py,
        vy: r.vy,
        phi: r.phi,
        high: r.hmode,
    }
}

/// First start of a run of samples with `u` below the threshold lasting at
/// least the hold time.
pub fn deceleration_onset(records: &[&TraceRecord]) -> Option<f64> {
    let mut start: Option<f64> = None;
    for r in records {
        if r.u < ONSET_THRESHOLD {
            let t0 = *start.get_or_insert(r.t);
            if r.t - t0 >= ONSET_HOLD_S - 1e-9 {
                return Some(t0);
            }
        } else {
            start = None;
        }
    }
    None
}

/// Sign changes of the acceleration, ignoring values within 1e-9 of zero.
pub fn sign_changes(records: &[&TraceRecord]) -> u32 {
    let mut last = 0.0f64;
    let mut count = 0;
    for r in records {
        if r.u.abs() <= 1e-9 {
            continue;
        }
        let s = r.u.signum();
        if last != 0.0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Statistics of a trace produced from `sc`.
pub fn summarize(trace: &[TraceRecord], sc: &Scenario) -> RunSummary {
    let g = sc.geometry;
    let mut collisions = Vec::new();
    let mut collision_count = 0;
    let mut pairs: BTreeMap<(u32, u32), PairGap> = BTreeMap::new();
    let groups = instants(trace);
    for group in &groups {
        let snap: Vec<Kinematics> = group.iter().map(kinematics).collect();
        let s: Vec<f64> = group
            .iter()
            .map(|r| sc.vehicle(r.id).map_or(0.0, |v| v.params.s()))
            .collect();
        for (a, b, gap) in collision_check(&snap, &s, &g) {
            collision_count += 1;
            if collisions.len() < 100 {
                collisions.push(CollisionSample {
                    t: group[a].t,
                    a: group[a].id,
                    b: group[b].id,
                    gap,
                });
            }
        }
        for a in 0..snap.len() {
            for b in a + 1..snap.len() {
                let shared = [Lane::Right, Lane::Left]
                    .into_iter()
                    .any(|l| snap[a].occupies(l, &g) && snap[b].occupies(l, &g));
                if !shared {
                    continue;
                }
                let (ia, ib) = (group[a].id.min(group[b].id), group[a].id.max(group[b].id));
                let gap = (snap[a].p - snap[b].p).abs();
                let entry = pairs.entry((ia, ib)).or_insert(PairGap {
                    a: ia,
                    b: ib,
                    min_gap: f64::INFINITY,
                    t: group[a].t,
                });
                if gap < entry.min_gap {
                    entry.min_gap = gap;
                    entry.t = group[a].t;
                }
            }
        }
    }

    let switches = switch_stats(trace);
    let convergence = equilibrium_check(trace, sc, &EquilibriumTolerance::default());
    let mut by_vehicle: BTreeMap<u32, Vec<&TraceRecord>> = BTreeMap::new();
    for r in trace {
        by_vehicle.entry(r.id).or_default().push(r);
    }
    let vehicles: Vec<VehicleSummary> = sc
        .vehicles
        .iter()
        .filter_map(|spec| {
            let recs = by_vehicle.get(&spec.id)?;
            let sw = switches.vehicles.iter().find(|v| v.id == spec.id)?;
            let nl_times: Vec<f64> = recs
                .iter()
                .filter(|r| r.events.contains(&FiredEvent::NewLeader))
                .map(|r| r.t)
                .collect();
            let min_new_leader_dwell = nl_times.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
            let lane_changes = recs
                .iter()
                .flat_map(|r| &r.events)
                .filter(|e| **e == FiredEvent::Crossing(CrossingKind::Midline))
                .count() as u32;
            Some(VehicleSummary {
                id: spec.id,
                convergence_time: convergence.iter().find(|c| c.id == spec.id).and_then(|c| c.time),
                switches: sw.switches,
                max_switches_per_second: sw.max_per_second,
                e2_violations: sw.e2_violations,
                min_new_leader_dwell,
                lane_changes,
                deceleration_onset: deceleration_onset(recs),
                accel_sign_changes: sign_changes(recs),
                alpha_min: recs.iter().map(|r| r.alpha).fold(f64::INFINITY, f64::min),
                alpha_max: recs.iter().map(|r| r.alpha).fold(f64::NEG_INFINITY, f64::max),
            })
        })
        .collect();
    RunSummary {
        scenario: sc.name.clone(),
        mesoscopic: sc.alpha_mode() == AlphaMode::Vdt,
        samples: groups.len(),
        collision_count,
        collisions,
        min_gaps: pairs.into_values().collect(),
        all_converged: convergence.iter().all(|c| c.converged()),
        vehicles,
        max_switches_per_second: switches.max_per_second,
        e2_violations: switches.e2_violations,
        unsafe_samples: switches.unsafe_samples,
    }
}
