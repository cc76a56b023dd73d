use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::automaton::{HighMode, Lane, Q4Law};
use crate::cluster::{AlphaMode, ClusterState, EngineConfig, Kinematics, VehicleRuntime};
use crate::error::{Error, Result};
use crate::maneuver::LaneGeometry;
use crate::params::VehicleParams;

pub const SCHEMA_VERSION: u32 = 1;

const TABLE2: &str = include_str!("../../scenarios/table2.json");
const TABLE3: &str = include_str!("../../scenarios/table3.json");

/// Run-wide switches.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Flags {
    /// Flow-scaled headways and the flow-weighted lane-change clause.
    pub mesoscopic: bool,
    /// Pins the flow factor; overrides `mesoscopic`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_forced: Option<f64>,
    pub q4_variant: Q4Law,
    /// Abort the run at the first collision.
    pub fail_fast: bool,
    pub info_delay_steps: usize,
    /// Forbid lane exits (single-lane road).
    pub single_lane: bool,
}

/// One `(t, v_des)` entry of a desired-speed schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub t_s: f64,
    pub v_des_mps: f64,
}

/// Fully resolved initial condition of one vehicle.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleSpec {
    pub id: u32,
    pub lane: Lane,
    pub p0: f64,
    pub v0: f64,
    pub py0: f64,
    pub vy0: f64,
    pub phi0: f64,
    pub high_mode: HighMode,
    pub v_des_schedule: Vec<ScheduleEntry>,
    pub params: VehicleParams,
}

impl VehicleSpec {
    pub fn v_des_at(&self, t: f64) -> f64 {
        self.v_des_schedule
            .iter()
            .rev()
            .find(|e| e.t_s <= t + 1e-9)
            .map_or(self.params.v_des, |e| e.v_des_mps)
    }
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub dt: f64,
    pub duration: f64,
    pub sample_interval: f64,
    pub geometry: LaneGeometry,
    pub flags: Flags,
    pub vehicles: Vec<VehicleSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    schema_version: u32,
    #[serde(default)]
    name: String,
    #[serde(default = "default_dt")]
    dt_s: f64,
    duration_s: f64,
    #[serde(default = "default_sample")]
    sample_interval_s: f64,
    #[serde(default)]
    geometry: LaneGeometry,
    #[serde(default)]
    flags: Flags,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    params: Map<String, Value>,
    #[serde(default)]
    vehicles: Vec<VehicleDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VehicleDoc {
    id: u32,
    lane: Lane,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p0_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v0_mps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x1_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x2_mps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x3_mps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    py0_m: Option<f64>,
    #[serde(default)]
    vy0_mps: f64,
    #[serde(default)]
    phi0_rad: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    high_mode: Option<HighMode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    v_des_schedule: Vec<ScheduleEntry>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    params: Map<String, Value>,
}

fn default_dt() -> f64 {
    0.01
}

fn default_sample() -> f64 {
    0.1
}

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn load(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::scenario(path, e.into_inner().to_string())
        })?;
        let sc = resolve(doc)?;
        sc.build()?;
        Ok(sc)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::scenario(path.display().to_string(), e.to_string()))?;
        Self::load(&text)
    }

    /// Single-lane platoon with a late joiner.
    pub fn table2() -> Self {
        Self::load(TABLE2).expect("bundled table2 scenario is valid")
    }

    /// Two five-vehicle platoons and an overtaking sixth vehicle.
    pub fn table3() -> Self {
        Self::load(TABLE3).expect("bundled table3 scenario is valid")
    }

    /// Looks up a bundled scenario by name (`table2`, `table3`).
    pub fn bundled(name: &str) -> Option<Self> {
        match name.trim_end_matches(".json") {
            "table2" => Some(Self::table2()),
            "table3" => Some(Self::table3()),
            _ => None,
        }
    }

    /// Absolute-form document that [`load`](Self::load) maps back to `self`.
    pub fn to_json(&self) -> String {
        let doc = ScenarioDoc {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            dt_s: self.dt,
            duration_s: self.duration,
            sample_interval_s: self.sample_interval,
            geometry: self.geometry,
            flags: self.flags,
            params: Map::new(),
            vehicles: self
                .vehicles
                .iter()
                .map(|v| VehicleDoc {
                    id: v.id,
                    lane: v.lane,
                    p0_m: Some(v.p0),
                    v0_mps: Some(v.v0),
                    x1_m: None,
                    x2_mps: None,
                    x3_mps: None,
                    py0_m: Some(v.py0),
                    vy0_mps: v.vy0,
                    phi0_rad: v.phi0,
                    high_mode: Some(v.high_mode),
                    v_des_schedule: v.v_des_schedule.clone(),
                    params: match serde_json::to_value(v.params) {
                        Ok(Value::Object(m)) => m,
                        _ => unreachable!("parameters serialize to an object"),
                    },
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("scenario serializes")
    }

    pub fn alpha_mode(&self) -> AlphaMode {
        match (self.flags.alpha_forced, self.flags.mesoscopic) {
            (Some(a), _) => AlphaMode::Forced(a),
            (None, true) => AlphaMode::Vdt,
            (None, false) => AlphaMode::Off,
        }
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            dt: self.dt,
            alpha: self.alpha_mode(),
            q4: self.flags.q4_variant,
            info_delay_steps: self.flags.info_delay_steps,
            geometry: self.geometry,
            lane_changes: !self.flags.single_lane,
        }
    }

    pub fn with_mesoscopic(mut self, on: bool) -> Self {
        self.flags.mesoscopic = on;
        self
    }

    /// Initial engine state. Fails with the offending id if a vehicle starts
    /// in the unsafe domain.
    pub fn build(&self) -> Result<ClusterState> {
        let vehicles = self
            .vehicles
            .iter()
            .map(|v| {
                let kin = Kinematics {
                    p: v.p0,
                    v: v.v0,
                    py: v.py0,
                    vy: v.vy0,
                    phi: v.phi0,
                    high: v.high_mode,
                };
                let schedule = v.v_des_schedule.iter().map(|e| (e.t_s, e.v_des_mps)).collect();
                VehicleRuntime::new(v.id, v.params, schedule, kin)
            })
            .collect();
        ClusterState::new(vehicles, self.engine_config())
    }

    pub fn vehicle(&self, id: u32) -> Option<&VehicleSpec> {
        self.vehicles.iter().find(|v| v.id == id)
    }
}

fn resolve(doc: ScenarioDoc) -> Result<Scenario> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::scenario(
            "schema_version",
            format!("unsupported version {} (expected {SCHEMA_VERSION})", doc.schema_version),
        ));
    }
    positive("dt_s", doc.dt_s)?;
    positive("sample_interval_s", doc.sample_interval_s)?;
    if !(doc.duration_s >= 0.0 && doc.duration_s.is_finite()) {
        return Err(Error::scenario("duration_s", "must be finite and nonnegative"));
    }
    if doc.dt_s > doc.sample_interval_s {
        return Err(Error::scenario("sample_interval_s", "must not be shorter than dt_s"));
    }
    doc.geometry.validate()?;
    if let Some(a) = doc.flags.alpha_forced {
        positive("flags.alpha_forced", a)?;
    }

    let mut base = match serde_json::to_value(VehicleParams::default()) {
        Ok(Value::Object(m)) => m,
        _ => unreachable!("parameters serialize to an object"),
    };
    merge(&mut base, &doc.params);
    parse_params(&base, "params")?;

    let mut vehicles: Vec<VehicleSpec> = Vec::with_capacity(doc.vehicles.len());
    for (k, v) in doc.vehicles.into_iter().enumerate() {
        let at = |field: &str| format!("vehicles[{k}].{field}");
        if vehicles.iter().any(|o| o.id == v.id) {
            return Err(Error::scenario(at("id"), format!("duplicate id {}", v.id)));
        }
        let mut merged = base.clone();
        merge(&mut merged, &v.params);
        let params = parse_params(&merged, &at("params"))?;

        let prev = vehicles.iter().rev().find(|o| o.lane == v.lane);
        let (p0, v0) = match (v.p0_m, v.v0_mps, v.x1_m, v.x2_mps, v.x3_mps) {
            (Some(p0), Some(v0), None, None, None) => (p0, v0),
            (None, None, x1, Some(x2), Some(x3)) => {
                let v0 = x3 - x2;
                match prev {
                    None => (0.0, v0),
                    Some(prev) => {
                        let x1 = x1.ok_or_else(|| Error::scenario(at("x1_m"), "required for a follower"))?;
                        if (x3 - prev.v0).abs() > 1e-9 {
                            return Err(Error::scenario(
                                at("x3_mps"),
                                format!("leader speed {x3} differs from vehicle {}'s speed {}", prev.id, prev.v0),
                            ));
                        }
                        (prev.p0 - x1, v0)
                    }
                }
            }
            _ => {
                return Err(Error::scenario(
                    at("p0_m"),
                    "give either p0_m and v0_mps, or x2_mps and x3_mps (plus x1_m for followers)",
                ))
            }
        };
        if let Some(prev) = prev {
            if p0.is_nan() || p0 >= prev.p0 {
                return Err(Error::scenario(
                    at("p0_m"),
                    format!("positions must strictly decrease within a lane ({p0} after {})", prev.p0),
                ));
            }
        }
        if !(0.0..=params.v_max).contains(&v0) {
            return Err(Error::scenario(at("v0_mps"), format!("speed {v0} outside [0, v_max]")));
        }
        let high_mode = v.high_mode.unwrap_or(HighMode::keeping(v.lane));
        if high_mode.lane() != v.lane {
            return Err(Error::scenario(
                at("high_mode"),
                format!("mode {high_mode} is not in lane {:?}", v.lane),
            ));
        }
        for (s, e) in v.v_des_schedule.iter().enumerate() {
            if !(e.v_des_mps > 0.0 && e.v_des_mps <= params.v_max && e.t_s.is_finite()) {
                return Err(Error::scenario(
                    at(&format!("v_des_schedule[{s}]")),
                    "desired speed must lie in (0, v_max] at a finite time",
                ));
            }
        }
        vehicles.push(VehicleSpec {
            id: v.id,
            lane: v.lane,
            p0,
            v0,
            py0: v.py0_m.unwrap_or(doc.geometry.midline(v.lane)),
            vy0: v.vy0_mps,
            phi0: v.phi0_rad,
            high_mode,
            v_des_schedule: v.v_des_schedule,
            params,
        });
    }
    Ok(Scenario {
        name: doc.name,
        dt: doc.dt_s,
        duration: doc.duration_s,
        sample_interval: doc.sample_interval_s,
        geometry: doc.geometry,
        flags: doc.flags,
        vehicles,
    })
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::scenario(path, format!("must be positive, got {v}")))
    }
}

fn merge(base: &mut Map<String, Value>, overrides: &Map<String, Value>) {
    for (k, v) in overrides {
        base.insert(k.clone(), v.clone());
    }
}

fn parse_params(m: &Map<String, Value>, path: &str) -> Result<VehicleParams> {
    let params: VehicleParams = serde_path_to_error::deserialize(Value::Object(m.clone())).map_err(|e| {
        let inner = e.path().to_string();
        Error::scenario(format!("{path}.{inner}"), e.into_inner().to_string())
    })?;
    params.validate().map_err(|e| match e {
        Error::InvalidParam { field, reason } => Error::scenario(format!("{path}.{field}"), reason),
        other => other,
    })?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_load() {
        let t2 = Scenario::table2();
        assert_eq!(t2.vehicles.len(), 5);
        let p: Vec<f64> = t2.vehicles.iter().map(|v| v.p0).collect();
        assert_eq!(p, vec![0.0, -50.0, -100.0, -150.0, -650.0]);
        assert_eq!(t2.vehicles[4].v0, 36.0);
        let t3 = Scenario::table3();
        assert_eq!(t3.vehicles.len(), 11);
    }

    #[test]
    fn round_trip() {
        for sc in [Scenario::table2(), Scenario::table3()] {
            assert_eq!(Scenario::load(&sc.to_json()).unwrap(), sc);
        }
    }

    #[test]
    fn lambda_override_is_rejected_with_path() {
        let text = r#"{"schema_version":1,"duration_s":1,"params":{"lambda":0.9},"vehicles":[]}"#;
        let err = Scenario::load(text).unwrap_err().to_string();
        assert!(err.contains("params.lambda"), "{err}");
    }

    #[test]
    fn unknown_parameter_is_rejected_with_path() {
        let text = r#"{"schema_version":1,"duration_s":1,"vehicles":[
            {"id":1,"lane":"r","p0_m":0,"v0_mps":10,"params":{"lamda":3}}]}"#;
        let err = Scenario::load(text).unwrap_err().to_string();
        assert!(err.contains("vehicles[0].params"), "{err}");
    }

    #[test]
    fn schema_version_is_mandatory() {
        let err = Scenario::load(r#"{"duration_s":1}"#).unwrap_err().to_string();
        assert!(err.contains("schema_version"), "{err}");
    }

    #[test]
    fn dt_longer_than_sampling_is_rejected() {
        let text = r#"{"schema_version":1,"duration_s":1,"dt_s":0.2,"sample_interval_s":0.1}"#;
        assert!(Scenario::load(text).is_err());
    }

    #[test]
    fn unsafe_initial_state_names_the_vehicle() {
        let text = r#"{"schema_version":1,"duration_s":1,"vehicles":[
            {"id":1,"lane":"r","p0_m":0,"v0_mps":0},
            {"id":9,"lane":"r","p0_m":-4,"v0_mps":10}]}"#;
        let err = Scenario::load(text).unwrap_err();
        assert!(matches!(err, Error::InitCheck { id: 9, .. }), "{err}");
    }

    #[test]
    fn empty_scenario_is_valid() {
        let sc = Scenario::load(r#"{"schema_version":1,"duration_s":5}"#).unwrap();
        assert!(sc.vehicles.is_empty());
    }
}
