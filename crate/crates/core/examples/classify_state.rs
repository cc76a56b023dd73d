//! Classifies a few car-following states into low-level modes and shows the
//! gap thresholds that decided each one.

use mesoacc::automaton::{classify_detailed, compute_thresholds, ContinuousState};
use mesoacc::VehicleParams;

fn main() {
    let p = VehicleParams::default();
    // (gap, relative speed, leader speed)
    let states = [
        (600.0, 0.0, 30.0),
        (120.0, 0.0, 25.0),
        (60.0, -8.0, 20.0),
        (25.0, -10.0, 15.0),
        (8.0, -12.0, 10.0),
        (4.0, -2.0, 5.0),
    ];
    for alpha in [1.0, 0.5, 2.0] {
        println!("flow factor {alpha}");
        for (gap, rel, lead) in states {
            let x = ContinuousState::longitudinal(gap, rel, lead);
            let th = compute_thresholds(&x, &p, alpha);
            let c = classify_detailed(&x, &th);
            println!(
                "  x = ({gap:>5.1}, {rel:>5.1}, {lead:>4.1})  -> {:<4} [E {:.1}, R {:.1}, S {:.1}, I {:.1}, A {:.1}]",
                c.mode.as_str(),
                th.emergency,
                th.risky,
                th.safe,
                th.interaction,
                th.approaching
            );
        }
    }
}
