use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::{classify_detailed, compute_thresholds, ContinuousState};
use crate::params::VehicleParams;

/// Tally of how often the literal domain predicates picked exactly one mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub samples: u64,
    pub exactly_one: u64,
    pub resolved_by_precedence: u64,
    /// First offending states (at most 32).
    pub offending: Vec<[f64; 3]>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.resolved_by_precedence == 0 && self.exactly_one == self.samples
    }
}

/// Samples `count` states uniformly over `x1 in (0, 1000]`,
/// `x2 in [-v_max, v_max]`, `x3 in [0, v_max]` and classifies each at
/// flow factor `alpha`.
pub fn partition_check(count: u64, p: &VehicleParams, alpha: f64, seed: u64) -> PartitionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PartitionReport {
        samples: count,
        exactly_one: 0,
        resolved_by_precedence: 0,
        offending: Vec::new(),
    };
    for _ in 0..count {
        let x1 = 1000.0 - rng.random_range(0.0..1000.0);
        let x2 = rng.random_range(-p.v_max..=p.v_max);
        let x3 = rng.random_range(0.0..=p.v_max);
        let x = ContinuousState::longitudinal(x1, x2, x3);
        let c = classify_detailed(&x, &compute_thresholds(&x, p, alpha));
        if c.resolved_by_precedence() {
            report.resolved_by_precedence += 1;
            if report.offending.len() < 32 {
                report.offending.push([x1, x2, x3]);
            }
        } else {
            report.exactly_one += 1;
        }
    }
    report
}
