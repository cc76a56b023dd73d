use std::collections::BTreeMap;

use serde::Serialize;

use crate::automaton::LowMode;
use crate::scenario::TraceRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VehicleSwitches {
    pub id: u32,
    pub switches: u32,
    /// Largest number of low-mode changes within one whole simulated second.
    pub max_per_second: u32,
    /// Changes without an event that are not edges of the low-level graph.
    pub e2_violations: u32,
    /// Samples in the unsafe mode.
    pub unsafe_samples: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchReport {
    pub vehicles: Vec<VehicleSwitches>,
    pub max_per_second: u32,
    pub e2_violations: u32,
    pub unsafe_samples: u32,
}

/// Counts low-mode changes per vehicle and checks every change on a step
/// without events against the state-triggered edge set. Exact only for a
/// trace sampled at every step.
pub fn switch_stats(trace: &[TraceRecord]) -> SwitchReport {
    struct Acc {
        last: Option<LowMode>,
        switches: u32,
        bins: BTreeMap<i64, u32>,
        e2: u32,
        unsafe_samples: u32,
    }
    let mut per: BTreeMap<u32, Acc> = BTreeMap::new();
    let mut order = Vec::new();
    for r in trace {
        let acc = per.entry(r.id).or_insert_with(|| {
            order.push(r.id);
            Acc {
                last: None,
                switches: 0,
                bins: BTreeMap::new(),
                e2: 0,
                unsafe_samples: 0,
            }
        });
        if r.wmode == LowMode::Unsafe {
            acc.unsafe_samples += 1;
        }
        if let Some(prev) = acc.last {
            if prev != r.wmode {
                acc.switches += 1;
                *acc.bins.entry((r.t + 1e-9).floor() as i64).or_insert(0) += 1;
                if r.events.is_empty() && !LowMode::is_state_transition(prev, r.wmode) {
                    acc.e2 += 1;
                }
            }
        }
        acc.last = Some(r.wmode);
    }
    let vehicles: Vec<VehicleSwitches> = order
        .into_iter()
        .map(|id| {
            let a = &per[&id];
            VehicleSwitches {
                id,
                switches: a.switches,
                max_per_second: a.bins.values().copied().max().unwrap_or(0),
                e2_violations: a.e2,
                unsafe_samples: a.unsafe_samples,
            }
        })
        .collect();
    SwitchReport {
        max_per_second: vehicles.iter().map(|v| v.max_per_second).max().unwrap_or(0),
        e2_violations: vehicles.iter().map(|v| v.e2_violations).sum(),
        unsafe_samples: vehicles.iter().map(|v| v.unsafe_samples).sum(),
        vehicles,
    }
}
