//! Feeds a speed pattern into the flow statistic and prints how the flow
//! factor reacts to a heterogeneous, slower flow ahead.

use mesoacc::mesoscopic::{variation_coefficient, FlowStatistic};
use mesoacc::VehicleParams;

fn main() {
    let p = VehicleParams::default();
    let mut stat = FlowStatistic::new(p.window);
    let dt = 0.1;
    for k in 0..=300 {
        let t = k as f64 * dt;
        // Homogeneous flow for 10 s, then a slow and spread-out platoon ahead,
        // then an observer slower than the flow.
        let (ahead, own) = if t < 10.0 {
            (vec![25.0, 25.0, 25.0], 25.0)
        } else if t < 20.0 {
            (vec![15.0, 22.0, 30.0], 27.0)
        } else {
            (vec![15.0, 22.0, 30.0], 18.0)
        };
        let alpha = stat.update(t, &ahead, own, &p);
        if k % 25 == 0 {
            println!(
                "t {t:>5.1}  cv {:.3}  z {:>7.3}  alpha {alpha:.3}",
                variation_coefficient(&ahead),
                stat.z
            );
        }
    }
}
