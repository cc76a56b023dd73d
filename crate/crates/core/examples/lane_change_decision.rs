//! Builds the lane-exit decision from speed histories and neighbor gaps.

use mesoacc::maneuver::{
    compute_delta_p, gap_ahead_required, gap_behind_required, lane_change_clause, utility, LaneGeometry, SpeedHistory,
    TriggerInput,
};
use mesoacc::VehicleParams;

fn history(v: f64) -> SpeedHistory {
    let mut h = SpeedHistory::new(10.0);
    for k in 0..=100 {
        h.push(k as f64 * 0.1, v);
    }
    h
}

fn main() {
    let p = VehicleParams::default().with_v_des(30.0);
    let g = LaneGeometry::default();
    let (v_n, v_j, v_i) = (24.0, 26.0, 25.0);
    let dp = compute_delta_p(v_n, v_j, &p, &g);
    let need_ahead = gap_ahead_required(v_n, v_j, &p, dp);
    let need_behind = gap_behind_required(v_n, v_i, &p);
    println!("longitudinal travel during the maneuver {dp:.2} m");
    println!("required gaps: ahead {need_ahead:.2} m, behind {need_behind:.2} m");

    let own = utility(&history(24.0), p.v_des);
    for (target_speed, alpha_own, alpha_target) in [(30.0, 1.0, 1.0), (24.5, 1.0, 1.0), (24.5, 1.4, 0.8), (24.0, 1.0, 1.0)] {
        let target = utility(&history(target_speed), p.v_des);
        for mesoscopic in [false, true] {
            let input = TriggerInput {
                own_utility: own,
                target_utility: target,
                gap_ahead: Some(need_ahead + 1.0),
                gap_behind: Some(need_behind + 1.0),
                required_ahead: need_ahead,
                required_behind: need_behind,
                steering: 0.0,
                alpha_own,
                alpha_target,
                cost: p.lane_change_cost,
                mesoscopic,
            };
            println!(
                "U = {own:.0}, target {target:.0}, flow factors {alpha_own}/{alpha_target}, meso {mesoscopic:<5} -> {:?}",
                lane_change_clause(&input)
            );
        }
    }
}
