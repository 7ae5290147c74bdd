use serde::Serialize;

use crate::error::{Error, Result};
use crate::lb::{
    automatic_criterion, cumulative_imbalance, effort_series, lb_cost, modeled_parallel_time,
    periodic_criterion, rank_at, smooth, EffortSeries, IterationRecord, LbEvent,
};
use crate::nbody::{count_work, Simulation};
use crate::partition::{partition, PartitionParams, PartitionerKind};

use super::config::{Criterion, ExperimentSpec};

#[derive(Debug, Clone)]
pub struct RunResult {
    pub spec: ExperimentSpec,
    pub trace: Vec<IterationRecord>,
    /// Partition computed at iteration 0, before any imbalance exists.
    pub initial: LbEvent,
    /// Load-balancing calls fired by the criterion, in iteration order.
    pub events: Vec<LbEvent>,
    pub effort: EffortSeries,
    pub modeled_time: f64,
    pub lb_call_count: usize,
}

impl RunResult {
    pub fn u(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.u).collect()
    }

    pub fn cumulative_u(&self) -> Vec<f64> {
        cumulative_imbalance(&self.u())
    }

    pub fn final_cumulative_u(&self) -> f64 {
        self.cumulative_u().last().copied().unwrap_or(0.0)
    }

    /// The initial partition followed by every triggered call.
    pub fn all_events(&self) -> Vec<LbEvent> {
        std::iter::once(self.initial)
            .chain(self.events.iter().copied())
            .collect()
    }
}

/// Simulates `spec.sim.steps` iterations. Iteration 0 partitions the initial
/// state; every later iteration advances the physics one step, re-homes
/// particles against the standing tessellation, asks the criterion whether
/// to repartition, then records the per-rank work.
pub fn run(spec: &ExperimentSpec) -> Result<RunResult> {
    spec.validate()?;
    let mut sim = Simulation::new(spec.sim)?;
    let params = PartitionParams {
        threshold: spec.threshold,
        hilbert_order: spec.hilbert_order,
        domain: spec.sim.domain,
    };
    let n = sim.particles().len();
    let gamma = spec.sim.steps;
    let kind = spec.partitioner;

    let first = partition(kind, sim.particles(), spec.parts, &params)?;
    let mut tessellation = first.tessellation;
    let mut assignment = first.assignment;
    let initial = LbEvent {
        tau: 0,
        cost: lb_cost(n, 0, spec.cost_model),
        algorithm: kind,
        migrated: 0,
    };

    let mut trace = Vec::with_capacity(gamma);
    let mut u_since: Vec<f64> = Vec::new();
    let mut events = Vec::new();
    let mut last_cost = initial.cost;

    let work = count_work(sim.positions(), &assignment, sim.grid(), spec.sim.r_cut);
    trace.push(IterationRecord::new(0, work)?);

    for t in 1..gamma {
        sim.step();
        for (i, p) in sim.particles().iter().enumerate() {
            assignment.set(i, tessellation.locate(p.position, p.id));
        }

        let fire = match spec.criterion {
            Criterion::Periodic(period) => periodic_criterion(t, period),
            Criterion::Automatic if spec.smoothing > 1 => {
                automatic_criterion(&smooth(&u_since, spec.smoothing), last_cost)
            }
            Criterion::Automatic => automatic_criterion(&u_since, last_cost),
        };
        if fire {
            let next = partition(kind, sim.particles(), spec.parts, &params)?;
            let migrated = next.assignment.moved_from(&assignment);
            let cost = lb_cost(n, migrated, spec.cost_model);
            events.push(LbEvent {
                tau: t,
                cost,
                algorithm: kind,
                migrated,
            });
            tessellation = next.tessellation;
            assignment = next.assignment;
            last_cost = cost;
            u_since.clear();
        }

        let work = count_work(sim.positions(), &assignment, sim.grid(), spec.sim.r_cut);
        let record = IterationRecord::new(t, work)?;
        u_since.push(record.u);
        trace.push(record);
    }

    let all: Vec<LbEvent> = std::iter::once(initial)
        .chain(events.iter().copied())
        .collect();
    let u: Vec<f64> = trace.iter().map(|r| r.u).collect();
    let effort = effort_series(kind, &u, &all)?;
    let modeled_time = modeled_parallel_time(&trace, &all, gamma)?;
    Ok(RunResult {
        spec: spec.clone(),
        trace,
        initial,
        lb_call_count: events.len(),
        events,
        effort,
        modeled_time,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Standing {
    pub algorithm: PartitionerKind,
    pub modeled_time: f64,
    pub lb_call_count: usize,
    pub final_cumulative_u: f64,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub results: Vec<RunResult>,
    /// Algorithm with the lowest modeled parallel time (ties by name).
    pub winner: PartitionerKind,
    /// `(iteration, algorithms ordered by interval effort)`, every `rank_every` iterations.
    pub rankings: Vec<(usize, Vec<PartitionerKind>)>,
}

impl Comparison {
    pub fn standings(&self) -> Vec<Standing> {
        self.results
            .iter()
            .map(|r| Standing {
                algorithm: r.spec.partitioner,
                modeled_time: r.modeled_time,
                lb_call_count: r.lb_call_count,
                final_cumulative_u: r.final_cumulative_u(),
            })
            .collect()
    }

    pub fn result(&self, kind: PartitionerKind) -> Option<&RunResult> {
        self.results.iter().find(|r| r.spec.partitioner == kind)
    }
}

/// Lowest modeled time; equal times resolve to the lexicographically
/// smaller algorithm name.
pub fn argmin_time(results: &[(PartitionerKind, f64)]) -> Option<PartitionerKind> {
    results
        .iter()
        .min_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.name().cmp(b.0.name()))
        })
        .map(|x| x.0)
}

/// Runs every spec (concurrently, each internally sequential) on the same
/// physics and seed and ranks the partitioners.
pub fn compare(specs: &[ExperimentSpec]) -> Result<Comparison> {
    if specs.len() < 2 {
        return Err(Error::Config("compare needs at least two specs".into()));
    }
    let base = &specs[0];
    if let Some(bad) = specs.iter().find(|s| s.sim != base.sim) {
        return Err(Error::Config(format!(
            "simulation settings of {} differ from {}; compare needs identical physics and seed",
            bad.partitioner, base.partitioner
        )));
    }
    let outcomes: Vec<Result<RunResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = specs.iter().map(|s| scope.spawn(move || run(s))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread panicked"))
            .collect()
    });
    let results = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let times: Vec<_> = results
        .iter()
        .map(|r| (r.spec.partitioner, r.modeled_time))
        .collect();
    let winner = argmin_time(&times).expect("at least two results");
    let series: Vec<EffortSeries> = results.iter().map(|r| r.effort.clone()).collect();
    let gamma = base.sim.steps;
    let mut rankings = Vec::new();
    for k in (0..gamma).step_by(base.rank_every) {
        rankings.push((k, rank_at(k, &series)?));
    }
    Ok(Comparison {
        results,
        winner,
        rankings,
    })
}
