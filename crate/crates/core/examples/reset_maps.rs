//! Applies the three reset maps to one state and prints what they preserve.

use mesoacc::automaton::{reset_lane_exit, reset_midline, reset_new_leader, ContinuousState, LaneChange};
use mesoacc::VehicleParams;

fn main() -> mesoacc::Result<()> {
    let p = VehicleParams::default();
    let x = ContinuousState {
        lateral_pos: 2.0,
        ..ContinuousState::longitudinal(80.0, -4.0, 22.0)
    };
    println!("start         {:?}  own speed {:.4}", x.to_array(), x.own_speed());

    let nl = reset_new_leader(&x, 35.0, 18.0)?;
    println!("new leader    {:?}  own speed {:.4}", nl.to_array(), nl.own_speed());

    let exit = reset_lane_exit(&x, &p, LaneChange::ToLeft)?;
    let planar = exit.own_speed().hypot(exit.lateral_speed);
    println!("lane exit     {:?}  planar speed {planar:.4}", exit.to_array());

    let mid = reset_midline(&exit);
    println!("midline       {:?}  own speed {:.4}", mid.to_array(), mid.own_speed());

    match reset_lane_exit(&exit, &p, LaneChange::ToRight) {
        Ok(_) => println!("second exit accepted"),
        Err(e) => println!("second exit during a maneuver is refused: {e}"),
    }
    Ok(())
}
