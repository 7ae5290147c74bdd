//! Experiment orchestration: configuration, the simulate/migrate/balance
//! loop, partitioner comparison and trace files.

mod config;
mod output;
mod run;

pub use config::{ConfigFile, Criterion, ExperimentSpec};
pub use output::{
    effort_csv, emit_comparison, emit_traces, events_csv, iterations_csv, summary_json, EFFORT_CSV,
    EVENTS_CSV, ITERATIONS_CSV, SUMMARY_JSON,
};
pub use run::{argmin_time, compare, run, Comparison, RunResult, Standing};
