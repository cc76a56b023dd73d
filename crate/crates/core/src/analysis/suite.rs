use serde::Serialize;

use super::{
    equilibrium_check, partition_check, switch_stats, worst_case_brake_oracle, BrakeOracleResult, Convergence,
    EquilibriumTolerance, OracleGrid, PartitionReport, SwitchReport,
};
use crate::cluster::run;
use crate::error::Result;
use crate::params::VehicleParams;
use crate::scenario::Scenario;

/// Flow factors at which the structural checks are repeated: both
/// saturation bounds and the microscopic value.
pub const CHECK_ALPHAS: [f64; 3] = [0.2, 1.0, 2.2];

/// Largest number of low-mode switches accepted per vehicle-second.
pub const MAX_SWITCHES_PER_SECOND: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Partition,
    Brake,
    Equilibrium,
    Switches,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Partition, Suite::Brake, Suite::Equilibrium, Suite::Switches];
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioConvergence {
    pub scenario: String,
    pub vehicles: Vec<Convergence>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioSwitches {
    pub scenario: String,
    pub mesoscopic: bool,
    pub report: SwitchReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "suite", rename_all = "snake_case")]
pub enum SuiteReport {
    Partition { passed: bool, runs: Vec<(f64, PartitionReport)> },
    Brake { passed: bool, runs: Vec<BrakeOracleResult> },
    Equilibrium { passed: bool, scenarios: Vec<ScenarioConvergence> },
    Switches { passed: bool, limit: u32, scenarios: Vec<ScenarioSwitches> },
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        match self {
            SuiteReport::Partition { passed, .. }
            | SuiteReport::Brake { passed, .. }
            | SuiteReport::Equilibrium { passed, .. }
            | SuiteReport::Switches { passed, .. } => *passed,
        }
    }

    /// One-line human summary.
    pub fn headline(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        match self {
            SuiteReport::Partition { runs, .. } => {
                let total: u64 = runs.iter().map(|(_, r)| r.samples).sum();
                let seams: u64 = runs.iter().map(|(_, r)| r.resolved_by_precedence).sum();
                format!("{verdict} partition: {total} states, {seams} resolved by precedence")
            }
            SuiteReport::Brake { runs, .. } => {
                let parts: Vec<String> = runs
                    .iter()
                    .map(|r| format!("alpha {}: {} of {} below s, min gap {:.3} m", r.alpha, r.violation_count, r.states, r.min_gap))
                    .collect();
                format!("{verdict} brake oracle: {}", parts.join("; "))
            }
            SuiteReport::Equilibrium { scenarios, .. } => {
                let parts: Vec<String> = scenarios
                    .iter()
                    .map(|s| {
                        let missing: Vec<String> =
                            s.vehicles.iter().filter(|c| !c.converged()).map(|c| c.id.to_string()).collect();
                        if missing.is_empty() {
                            format!("{} all converged", s.scenario)
                        } else {
                            format!("{} not converged: {}", s.scenario, missing.join(","))
                        }
                    })
                    .collect();
                format!("{verdict} equilibrium: {}", parts.join("; "))
            }
            SuiteReport::Switches { scenarios, limit, .. } => {
                let parts: Vec<String> = scenarios
                    .iter()
                    .map(|s| {
                        format!(
                            "{} {}: max {}/s, {} off-graph",
                            s.scenario,
                            if s.mesoscopic { "meso" } else { "micro" },
                            s.report.max_per_second,
                            s.report.e2_violations
                        )
                    })
                    .collect();
                format!("{verdict} switches (limit {limit}/s): {}", parts.join("; "))
            }
        }
    }
}

/// Random states per flow factor in the partition suite.
pub const PARTITION_SAMPLES: u64 = 1_000_000;

pub fn partition_suite(seed: u64, samples: u64) -> SuiteReport {
    let p = VehicleParams::default();
    let runs: Vec<(f64, PartitionReport)> = CHECK_ALPHAS
        .iter()
        .enumerate()
        .map(|(k, &a)| (a, partition_check(samples, &p, a, seed.wrapping_add(k as u64))))
        .collect();
    SuiteReport::Partition {
        passed: runs.iter().all(|(_, r)| r.passed()),
        runs,
    }
}

pub fn brake_suite(grid: &OracleGrid) -> SuiteReport {
    let p = VehicleParams::default();
    let runs: Vec<BrakeOracleResult> = CHECK_ALPHAS.iter().map(|&a| worst_case_brake_oracle(grid, &p, a)).collect();
    SuiteReport::Brake {
        passed: runs.iter().all(BrakeOracleResult::passed),
        runs,
    }
}

fn bundled() -> [Scenario; 2] {
    [Scenario::table2(), Scenario::table3()]
}

pub fn equilibrium_suite() -> Result<SuiteReport> {
    let mut scenarios = Vec::new();
    for sc in bundled() {
        let out = run(&sc)?;
        scenarios.push(ScenarioConvergence {
            scenario: sc.name.clone(),
            vehicles: equilibrium_check(&out.trace, &sc, &EquilibriumTolerance::default()),
        });
    }
    Ok(SuiteReport::Equilibrium {
        passed: scenarios.iter().all(|s| s.vehicles.iter().all(Convergence::converged)),
        scenarios,
    })
}

/// Bundled scenarios in both variants, traced at every step so that no
/// switch is hidden by the sampling.
pub fn switch_suite() -> Result<SuiteReport> {
    let mut scenarios = Vec::new();
    for base in bundled() {
        for meso in [true, false] {
            let mut sc = base.clone().with_mesoscopic(meso);
            sc.sample_interval = sc.dt;
            let out = run(&sc)?;
            scenarios.push(ScenarioSwitches {
                scenario: sc.name.clone(),
                mesoscopic: meso,
                report: switch_stats(&out.trace),
            });
        }
    }
    Ok(SuiteReport::Switches {
        passed: scenarios
            .iter()
            .all(|s| s.report.max_per_second <= MAX_SWITCHES_PER_SECOND && s.report.e2_violations == 0),
        limit: MAX_SWITCHES_PER_SECOND,
        scenarios,
    })
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    Ok(match suite {
        Suite::Partition => partition_suite(seed, PARTITION_SAMPLES),
        Suite::Brake => brake_suite(&OracleGrid::default()),
        Suite::Equilibrium => equilibrium_suite()?,
        Suite::Switches => switch_suite()?,
    })
}
