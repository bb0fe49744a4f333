//! Scenario files, the command runner and built-in demos.

pub mod demo;
pub mod runner;
pub mod scenario;

pub use demo::{demo, DEMOS};
pub use runner::{run_scenario, verify_scenario, CommandResult, Overrides, Report, Status, OPS};
pub use scenario::{parse_scenario, scenario_to_string, Scenario};
