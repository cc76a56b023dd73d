//! Runs the worst-case brake oracle on a coarse grid.

use mesoacc::analysis::{worst_case_brake_oracle, OracleGrid};
use mesoacc::VehicleParams;

fn main() {
    let p = VehicleParams::default();
    let grid = OracleGrid {
        gap_points: 8,
        own_speed_points: 8,
        leader_speed_points: 8,
        refine_worst: 4,
        ..OracleGrid::default()
    };
    for alpha in [0.2, 1.0, 2.2] {
        let r = worst_case_brake_oracle(&grid, &p, alpha);
        println!(
            "alpha {alpha}: {} states (+{} refined), {} violations, min gap {:.2} m",
            r.states, r.refined_states, r.violation_count, r.min_gap
        );
        if let Some(w) = r.worst {
            println!("  worst start (gap, rel, leader) = {:?}", w.initial);
        }
    }
}
