//! Empirical checks of the model's structural and safety claims.

mod equilibrium;
mod oracle;
mod partition;
mod suite;
mod switches;

pub use equilibrium::{equilibrium_check, Convergence, EquilibriumTolerance, TerminalState};
pub(crate) use equilibrium::instants;
pub use oracle::{simulate_brake, worst_case_brake_oracle, BrakeOracleResult, OracleCase, OracleGrid};
pub use partition::{partition_check, PartitionReport};
pub use suite::{
    brake_suite, equilibrium_suite, partition_suite, run_suite, switch_suite, ScenarioConvergence, ScenarioSwitches,
    Suite, SuiteReport, CHECK_ALPHAS, MAX_SWITCHES_PER_SECOND, PARTITION_SAMPLES,
};
pub use switches::{switch_stats, SwitchReport, VehicleSwitches};
