//! Mesoscopic hybrid-automaton adaptive cruise control on a two-lane road.
//!
//! Each vehicle runs a hybrid automaton whose high-level mode tracks the
//! lane-change cycle and whose low-level mode picks a car-following law from
//! headway thresholds. A flow factor derived from the spread of speeds ahead
//! scales those headways. [`cluster`] steps a whole platoon,
//! [`scenario`] loads configurations and writes traces, and [`analysis`]
//! checks the safety, determinism and convergence claims empirically.

pub mod analysis;
pub mod automaton;
pub mod cluster;
pub mod error;
pub mod maneuver;
pub mod mesoscopic;
pub mod params;
pub mod scenario;
pub mod window;

pub use error::{Error, Result};
pub use params::VehicleParams;
