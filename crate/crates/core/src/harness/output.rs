//! CSV and JSON trace files. Numbers use Rust's shortest round-trip decimal
//! form, so parsing a file back yields the exact values that were written.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::ExperimentSpec;
use super::run::{Comparison, RunResult, Standing};

pub const ITERATIONS_CSV: &str = "iterations.csv";
pub const EVENTS_CSV: &str = "events.csv";
pub const EFFORT_CSV: &str = "effort.csv";
pub const SUMMARY_JSON: &str = "summary.json";

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn iterations_csv(result: &RunResult) -> String {
    let per_rank = result.spec.per_rank;
    let mut s = String::from("iteration,max_work,mean_work,u,cumulative_u");
    if per_rank {
        for r in 0..result.spec.parts {
            let _ = write!(s, ",work_{r}");
        }
    }
    s.push('\n');
    for (rec, cum) in result.trace.iter().zip(result.cumulative_u()) {
        let _ = write!(s, "{},{},{},{},{}", rec.t, rec.max_w, rec.mu, rec.u, cum);
        if per_rank {
            for w in rec.work.as_slice() {
                let _ = write!(s, ",{w}");
            }
        }
        s.push('\n');
    }
    s
}

pub fn events_csv(result: &RunResult) -> String {
    let mut s = String::from("tau,cost,migrated,algorithm\n");
    for e in &result.events {
        let _ = writeln!(s, "{},{},{},{}", e.tau, e.cost, e.migrated, e.algorithm);
    }
    s
}

pub fn effort_csv(result: &RunResult) -> String {
    let mut s = String::from("tau_start,tau_end,effort\n");
    for iv in &result.effort.intervals {
        let _ = writeln!(s, "{},{},{}", iv.tau_start, iv.tau_end, iv.effort);
    }
    s
}

#[derive(Serialize)]
struct Summary<'a> {
    algorithm: String,
    modeled_time: f64,
    lb_call_count: usize,
    initial_cost: f64,
    final_cumulative_u: f64,
    seed: u64,
    config: &'a ExperimentSpec,
}

pub fn summary_json(result: &RunResult) -> Result<String> {
    let summary = Summary {
        algorithm: result.spec.partitioner.to_string(),
        modeled_time: result.modeled_time,
        lb_call_count: result.lb_call_count,
        initial_cost: result.initial.cost,
        final_cumulative_u: result.final_cumulative_u(),
        seed: result.spec.sim.seed,
        config: &result.spec,
    };
    let mut s = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::Config(format!("summary serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes iterations.csv, events.csv, effort.csv and summary.json into `dir`.
pub fn emit_traces(result: &RunResult, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    Ok(vec![
        write(dir.join(ITERATIONS_CSV), &iterations_csv(result))?,
        write(dir.join(EVENTS_CSV), &events_csv(result))?,
        write(dir.join(EFFORT_CSV), &effort_csv(result))?,
        write(dir.join(SUMMARY_JSON), &summary_json(result)?)?,
    ])
}

#[derive(Serialize)]
struct ComparisonSummary {
    winner: String,
    seed: u64,
    standings: Vec<Standing>,
}

/// One trace directory per algorithm plus ranking.csv and comparison.json.
pub fn emit_comparison(cmp: &Comparison, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for r in &cmp.results {
        let name = r.spec.partitioner.name();
        let k = seen.entry(name).or_insert(0usize);
        let sub = if *k == 0 {
            name.to_string()
        } else {
            format!("{name}_{k}")
        };
        *k += 1;
        written.extend(emit_traces(r, &dir.join(sub))?);
    }

    let width = cmp.results.len();
    let mut s = String::from("iteration");
    for i in 1..=width {
        let _ = write!(s, ",rank_{i}");
    }
    s.push('\n');
    for (k, order) in &cmp.rankings {
        let _ = write!(s, "{k}");
        for a in order {
            let _ = write!(s, ",{a}");
        }
        s.push('\n');
    }
    written.push(write(dir.join("ranking.csv"), &s)?);

    let summary = ComparisonSummary {
        winner: cmp.winner.to_string(),
        seed: cmp.results[0].spec.sim.seed,
        standings: cmp.standings(),
    };
    let mut json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::Config(format!("comparison serialization: {e}")))?;
    json.push('\n');
    written.push(write(dir.join("comparison.json"), &json)?);
    Ok(written)
}
