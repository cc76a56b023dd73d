use std::collections::HashMap;

use serde::Serialize;

use crate::automaton::{compute_thresholds, ContinuousState};
use crate::scenario::{Scenario, TraceRecord};

/// Tolerances of the equilibrium test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumTolerance {
    /// On `|v - v_des|` (free equilibrium) and on `|x2|` (following).
    pub speed: f64,
    /// Slack on the following band `[risky, safe]`.
    pub gap: f64,
    /// On the lateral speed.
    pub lateral: f64,
}

impl Default for EquilibriumTolerance {
    fn default() -> Self {
        Self {
            speed: 0.1,
            gap: 0.5,
            lateral: 1e-6,
        }
    }
}

/// Distance of the terminal state from the equilibrium set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TerminalState {
    pub speed_error: f64,
    /// `None` with a fictitious leader.
    pub rel_speed: Option<f64>,
    /// Signed excess of the gap over the toleranced following band (0 inside).
    pub band_excess: Option<f64>,
    pub lateral_speed: f64,
    pub steering: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub id: u32,
    /// Earliest sample time from which the vehicle stays in equilibrium.
    pub time: Option<f64>,
    pub terminal: TerminalState,
}

impl Convergence {
    pub fn converged(&self) -> bool {
        self.time.is_some()
    }
}

/// Groups consecutive records with the same time stamp.
pub(crate) fn instants(trace: &[TraceRecord]) -> Vec<&[TraceRecord]> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=trace.len() {
        if k == trace.len() || trace[k].t != trace[start].t {
            if k > start {
                out.push(&trace[start..k]);
            }
            start = k;
        }
    }
    out
}

/// Membership test and terminal distance for one record.
fn assess(r: &TraceRecord, at: &HashMap<u32, &TraceRecord>, sc: &Scenario, tol: &EquilibriumTolerance) -> (bool, TerminalState) {
    let spec = sc.vehicle(r.id).expect("trace ids come from the scenario");
    let v_des = spec.v_des_at(r.t);
    let p = spec.params.with_v_des(v_des);
    let speed_error = r.v - v_des;
    let lateral_ok = r.vy.abs() <= tol.lateral && r.phi == 0.0;
    let free = speed_error.abs() <= tol.speed;
    let (following, rel_speed, band_excess) = match r.leader.and_then(|l| at.get(&l)) {
        Some(l) => {
            let x = ContinuousState::longitudinal(l.p - r.p, l.v - r.v, l.v);
            let th = compute_thresholds(&x, &p, r.alpha);
            let lo = th.risky - tol.gap;
            let hi = th.safe + tol.gap;
            let excess = if x.gap < lo {
                x.gap - lo
            } else if x.gap > hi {
                x.gap - hi
            } else {
                0.0
            };
            (x.rel_speed.abs() <= tol.speed && excess == 0.0, Some(x.rel_speed), Some(excess))
        }
        None => (false, None, None),
    };
    let terminal = TerminalState {
        speed_error,
        rel_speed,
        band_excess,
        lateral_speed: r.vy,
        steering: r.phi,
    };
    (lateral_ok && (free || following), terminal)
}

/// Per-vehicle time after which the state stays in the toleranced
/// equilibrium set for the rest of the trace.
pub fn equilibrium_check(trace: &[TraceRecord], sc: &Scenario, tol: &EquilibriumTolerance) -> Vec<Convergence> {
    let mut since: HashMap<u32, Option<f64>> = HashMap::new();
    let mut terminal: HashMap<u32, TerminalState> = HashMap::new();
    let mut order: Vec<u32> = Vec::new();
    for group in instants(trace) {
        let at: HashMap<u32, &TraceRecord> = group.iter().map(|r| (r.id, r)).collect();
        for r in group {
            if !since.contains_key(&r.id) {
                order.push(r.id);
            }
            let (inside, term) = assess(r, &at, sc, tol);
            let entry = since.entry(r.id).or_insert(None);
            *entry = match (inside, *entry) {
                (true, None) => Some(r.t),
                (true, t) => t,
                (false, _) => None,
            };
            terminal.insert(r.id, term);
        }
    }
    order
        .into_iter()
        .map(|id| Convergence {
            id,
            time: since[&id],
            terminal: terminal[&id],
        })
        .collect()
}
