//! Runs the bundled overtaking scenario and prints the maneuver of the
//! overtaking vehicle.

use mesoacc::cluster::run;
use mesoacc::scenario::Scenario;

fn main() -> mesoacc::Result<()> {
    let out = run(&Scenario::table3())?;
    let mut last = None;
    for r in out.trace.iter().filter(|r| r.id == 11) {
        if last != Some(r.hmode) || !r.events.is_empty() {
            let events: Vec<&str> = r.events.iter().map(|e| e.as_str()).collect();
            println!(
                "t {:>6.1}  {:<4} {:<4} py {:.2}  v {:.2}  {}",
                r.t,
                r.hmode.as_str(),
                r.wmode.as_str(),
                r.py,
                r.v,
                events.join(" ")
            );
            last = Some(r.hmode);
        }
    }
    let s = &out.summary;
    println!("collisions {}  lane changes of 11: {}", s.collision_count, s.vehicle(11).map_or(0, |v| v.lane_changes));
    Ok(())
}
