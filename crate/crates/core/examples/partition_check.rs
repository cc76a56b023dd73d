//! Samples random states and checks that each lies in exactly one domain.

use mesoacc::analysis::partition_check;
use mesoacc::VehicleParams;

fn main() {
    let p = VehicleParams::default();
    for alpha in [0.2, 1.0, 2.2] {
        let r = partition_check(100_000, &p, alpha, 7);
        println!(
            "alpha {alpha}: {}/{} in exactly one domain, {} resolved by precedence",
            r.exactly_one, r.samples, r.resolved_by_precedence
        );
    }
}
