//! Experiment harness for the dcgraph engines: synthetic datasets, query
//! generation, batch replay under a modeled memory budget, metrics files,
//! summary reports and capacity sweeps.

pub mod config;
mod error;
pub mod generate;
pub mod metrics;
pub mod report;
pub mod runner;
pub mod sweep;

pub use config::{BloomSizing, EngineKind, QueryKind, QuerySource, RunConfig};
pub use error::{BenchError, Result};
pub use metrics::{parse_metrics, write_metrics, MetricsFile, MetricsRecord};
pub use report::{emit_report, summarize, RunSummary};
pub use runner::{prepare_workload, run_experiment, run_on_workload, QueryAnswer, RunOutcome, Workload};
pub use sweep::{capacity_sweep, max_feasible, sweep_csv, SweepRow};
