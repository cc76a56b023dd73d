use serde::Serialize;

use super::{RunSummary, Scenario};
use crate::cluster::run;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VehicleComparison {
    pub id: u32,
    pub onset_meso: Option<f64>,
    pub onset_micro: Option<f64>,
    /// Micro onset minus meso onset; positive when the mesoscopic vehicle
    /// reacts earlier.
    pub onset_lead: Option<f64>,
    pub sign_changes_meso: u32,
    pub sign_changes_micro: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub scenario: String,
    pub vehicles: Vec<VehicleComparison>,
    pub meso: RunSummary,
    pub micro: RunSummary,
}

impl Comparison {
    pub fn vehicle(&self, id: u32) -> Option<&VehicleComparison> {
        self.vehicles.iter().find(|v| v.id == id)
    }
}

/// Runs `sc` with the mesoscopic flag on and off.
pub fn compare(sc: &Scenario) -> Result<Comparison> {
    let meso = run(&sc.clone().with_mesoscopic(true))?.summary;
    let micro = run(&sc.clone().with_mesoscopic(false))?.summary;
    let vehicles = meso
        .vehicles
        .iter()
        .filter_map(|a| {
            let b = micro.vehicle(a.id)?;
            Some(VehicleComparison {
                id: a.id,
                onset_meso: a.deceleration_onset,
                onset_micro: b.deceleration_onset,
                onset_lead: a.deceleration_onset.zip(b.deceleration_onset).map(|(x, y)| y - x),
                sign_changes_meso: a.accel_sign_changes,
                sign_changes_micro: b.accel_sign_changes,
            })
        })
        .collect();
    Ok(Comparison {
        scenario: sc.name.clone(),
        vehicles,
        meso,
        micro,
    })
}
