use mesoacc::analysis::switch_stats;
use mesoacc::automaton::{HighMode, LowMode};
use mesoacc::cluster::{run, FiredEvent};
use mesoacc::scenario::{summarize, trace_to_string, Scenario, TraceRecord, TRACE_HEADER};
use mesoacc::Error;

fn record(t: f64, w: LowMode, events: Vec<FiredEvent>) -> TraceRecord {
    TraceRecord {
        t,
        id: 7,
        hmode: HighMode::R,
        wmode: w,
        p: 0.0,
        v: 20.0,
        py: 2.0,
        vy: 0.0,
        phi: 0.0,
        u: 0.0,
        alpha: 1.0,
        leader: Some(1),
        events,
    }
}

#[test]
fn switch_stats_flags_an_injected_jump() {
    let trace = vec![
        record(0.0, LowMode::FreeDriving, vec![]),
        record(0.1, LowMode::FollowingI, vec![]),
        record(0.2, LowMode::Danger, vec![]),
        record(0.3, LowMode::FreeDriving, vec![FiredEvent::NewLeader]),
        record(1.5, LowMode::FreeDriving, vec![]),
    ];
    let s = switch_stats(&trace);
    assert_eq!(s.vehicles[0].switches, 3);
    // w2 -> w5 is not an edge; the jump back to w1 came with an event.
    assert_eq!(s.e2_violations, 1);
    assert_eq!(s.max_per_second, 3);
    assert_eq!(s.unsafe_samples, 0);
}

#[test]
fn table2_trace_has_one_line_per_vehicle_and_sample() {
    let out = run(&Scenario::table2()).unwrap();
    let csv = trace_to_string(&out.trace);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(TRACE_HEADER));
    // 1501 samples of 5 vehicles.
    assert_eq!(lines.count(), 7505);
    assert_eq!(out.summary.samples, 1501);
}

#[test]
fn summary_matches_its_trace() {
    let sc = Scenario::table3();
    let out = run(&sc).unwrap();
    assert_eq!(summarize(&out.trace, &sc), out.summary);
    let s = &out.summary;
    assert_eq!(s.vehicles.len(), sc.vehicles.len());
    assert_eq!(s.collision_count, 0);
    assert!(s.min_same_lane_gap() > 5.0);
    for v in &s.vehicles {
        assert!(v.alpha_min >= 0.2 && v.alpha_max <= 2.2, "vehicle {}", v.id);
    }
    let lane_changes: u32 = s.vehicles.iter().map(|v| v.lane_changes).sum();
    let midline_events = out
        .trace
        .iter()
        .flat_map(|r| &r.events)
        .filter(|e| e.as_str() == "c_mid")
        .count();
    assert_eq!(lane_changes as usize, midline_events);
}

#[test]
fn coasting_pair_keeps_its_lane() {
    let doc = r#"{
        "schema_version": 1, "name": "coast", "duration_s": 60.0,
        "vehicles": [
            { "id": 1, "lane": "r", "p0_m": 300.0, "v0_mps": 25.0, "params": { "v_des_mps": 25.0 } },
            { "id": 2, "lane": "r", "p0_m": 100.0, "v0_mps": 25.0, "params": { "v_des_mps": 25.0 } }
        ]
    }"#;
    for meso in [false, true] {
        let sc = Scenario::load(doc).unwrap().with_mesoscopic(meso);
        let out = run(&sc).unwrap();
        assert!(out.trace.iter().all(|r| r.hmode == HighMode::R), "meso {meso}");
        assert!(out.summary.clean());
        assert!(out.summary.all_converged);
    }
}

#[test]
fn fail_fast_stops_at_the_first_collision() {
    let doc = r#"{
        "schema_version": 1, "name": "crash", "duration_s": 30.0,
        "flags": { "fail_fast": true, "single_lane": true },
        "vehicles": [
            { "id": 1, "lane": "r", "p0_m": 30.0, "v0_mps": 0.0, "params": { "v_des_mps": 0.0 } },
            { "id": 2, "lane": "r", "p0_m": 0.0, "v0_mps": 36.0 }
        ]
    }"#;
    match Scenario::load(doc).and_then(|sc| run(&sc)) {
        Err(Error::Collision { .. }) | Err(Error::InitCheck { .. }) => {}
        other => panic!("expected a collision or an unsafe start, got {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected_with_their_path() {
    let doc = r#"{ "schema_version": 1, "duration_s": 1.0, "vehicles": [ { "id": 1, "lane": "r", "p0_m": 0.0, "v0_mps": 1.0, "speed": 3 } ] }"#;
    let msg = Scenario::load(doc).unwrap_err().to_string();
    assert!(msg.contains("vehicles[0]"), "{msg}");
}
