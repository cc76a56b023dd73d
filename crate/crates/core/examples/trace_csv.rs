//! Loads a scenario from JSON text, runs it and prints the head of the CSV
//! trace.

use mesoacc::cluster::run;
use mesoacc::scenario::{trace_to_string, Scenario};

const DOC: &str = r#"{
  "schema_version": 1,
  "name": "two-car",
  "dt_s": 0.01,
  "duration_s": 20.0,
  "sample_interval_s": 1.0,
  "flags": { "mesoscopic": true, "single_lane": true },
  "vehicles": [
    { "id": 1, "lane": "r", "p0_m": 200.0, "v0_mps": 20.0, "params": { "v_des_mps": 20.0 } },
    { "id": 2, "lane": "r", "p0_m": 100.0, "v0_mps": 28.0 }
  ]
}"#;

fn main() -> mesoacc::Result<()> {
    let sc = Scenario::load(DOC)?;
    let out = run(&sc)?;
    let csv = trace_to_string(&out.trace);
    for line in csv.lines().take(12) {
        println!("{line}");
    }
    println!("... {} records, {} collisions", out.trace.len(), out.summary.collision_count);
    Ok(())
}
