//! Evaluates the acceleration command of every low mode in both lane-keeping
//! and lane-changing high modes.

use mesoacc::automaton::{control_accel, ContinuousState, HighMode, LowMode, Mode, Q4Law};
use mesoacc::VehicleParams;

fn main() -> mesoacc::Result<()> {
    let p = VehicleParams::default().with_v_des(30.0);
    let x = ContinuousState::longitudinal(40.0, -6.0, 20.0);
    println!("state: gap {} m, own speed {} m/s, leader {} m/s", x.gap, x.own_speed(), x.leader_speed);
    for high in [HighMode::R, HighMode::R2l] {
        for low in LowMode::ALL {
            let mode = Mode::new(high, low);
            if low == LowMode::Unsafe {
                // No law is defined there; the engine refuses to evaluate it.
                println!("  {:<4} {:<4} {}", high.as_str(), low.as_str(), control_accel(mode, &x, &p, Q4Law::Corrected).unwrap_err());
                continue;
            }
            let u = control_accel(mode, &x, &p, Q4Law::Corrected)?;
            let verbatim = control_accel(mode, &x, &p, Q4Law::Verbatim)?;
            println!("  {:<4} {:<4} u = {u:>7.3}  (verbatim closing-in law: {verbatim:>7.3})", high.as_str(), low.as_str());
        }
    }
    Ok(())
}
