//! Load-imbalance bookkeeping: the per-iteration imbalance `u = max - mean`,
//! the periodic and automatic triggering criteria, the balancing cost model,
//! the interval effort metric, cumulative imbalance and the modeled parallel
//! time. Integrals over iterations are left Riemann sums, one sample per
//! iteration, in work units.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::WorkVector;
use crate::partition::PartitionerKind;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub t: usize,
    pub work: WorkVector,
    pub max_w: f64,
    pub mu: f64,
    pub u: f64,
}

impl IterationRecord {
    pub fn new(t: usize, work: WorkVector) -> Result<Self> {
        let (max_w, mu) = max_and_mean(work.as_slice())?;
        Ok(IterationRecord {
            t,
            work,
            max_w,
            mu,
            u: max_w - mu,
        })
    }
}

fn max_and_mean(work: &[f64]) -> Result<(f64, f64)> {
    if work.is_empty() {
        return Err(Error::Empty);
    }
    let max = work.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = work.iter().sum::<f64>() / work.len() as f64;
    // rounding in the mean must not push it above the max
    Ok((max, mean.min(max)))
}

/// Slowest rank's work minus the mean.
pub fn imbalance(work: &[f64]) -> Result<f64> {
    let (max, mean) = max_and_mean(work)?;
    Ok(max - mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbEvent {
    pub tau: usize,
    pub cost: f64,
    pub algorithm: PartitionerKind,
    pub migrated: usize,
}

/// Fires on every positive multiple of `period`; iteration 0 is the initial partition.
pub fn periodic_criterion(t: usize, period: usize) -> bool {
    period > 0 && t > 0 && t.is_multiple_of(period)
}

/// Discrete form of `τ u(τ) - ∫₀^τ u = C`, where `u_history` holds the
/// imbalance at offsets `1..=τ` since the last balancing. Fires once the
/// left side reaches `cost`; the left side must also be positive, so a flat
/// history never fires even at zero cost.
pub fn automatic_criterion(u_history: &[f64], cost: f64) -> bool {
    let Some(&last) = u_history.last() else {
        return false;
    };
    let tau = u_history.len() as f64;
    let integral: f64 = u_history.iter().sum();
    let lhs = tau * last - integral;
    lhs > 0.0 && lhs >= cost
}

/// Trailing moving average with the given window; window 1 is the identity.
pub fn smooth(u: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let mut out = Vec::with_capacity(u.len());
    let mut acc = 0.0;
    for i in 0..u.len() {
        acc += u[i];
        if i >= w {
            acc -= u[i - w];
        }
        out.push(acc / (i + 1).min(w) as f64);
    }
    out
}

/// Balancing cost in work units: a per-particle partitioning charge plus a
/// per-migrated-particle charge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub c_part: f64,
    pub c_mig: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            c_part: 1.0,
            c_mig: 10.0,
        }
    }
}

pub fn lb_cost(n: usize, migrated: usize, model: CostModel) -> f64 {
    model.c_part * n as f64 + model.c_mig * migrated as f64
}

/// Average per-iteration effort of one balancing interval: the imbalance
/// accumulated over the interval plus the balancing cost that opened it,
/// divided by the interval length.
pub fn effort(u_interval: &[f64], cost: f64) -> Result<f64> {
    if u_interval.is_empty() {
        return Err(Error::Empty);
    }
    let sum: f64 = u_interval.iter().sum();
    Ok((sum + cost) / u_interval.len() as f64)
}

pub fn cumulative_imbalance(u: &[f64]) -> Vec<f64> {
    u.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffortInterval {
    pub tau_start: usize,
    pub tau_end: usize,
    pub effort: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffortSeries {
    pub algorithm: PartitionerKind,
    pub intervals: Vec<EffortInterval>,
}

impl EffortSeries {
    /// Interval containing iteration `k`.
    pub fn at(&self, k: usize) -> Option<&EffortInterval> {
        let i = self.intervals.partition_point(|iv| iv.tau_end <= k);
        self.intervals.get(i).filter(|iv| iv.tau_start <= k)
    }

    pub fn horizon(&self) -> usize {
        self.intervals.last().map_or(0, |iv| iv.tau_end)
    }
}

/// Interval boundaries `[τ_i, τ_{i+1})` covering `[0, gamma)` with the cost
/// that opens each one. Without an event at 0 the first interval is free.
pub fn balancing_intervals(events: &[LbEvent], gamma: usize) -> Result<Vec<(usize, usize, f64)>> {
    for w in events.windows(2) {
        if w[1].tau <= w[0].tau {
            return Err(Error::InvalidParameter(format!(
                "events must be strictly increasing in tau: {} then {}",
                w[0].tau, w[1].tau
            )));
        }
    }
    if let Some(e) = events.iter().find(|e| e.tau >= gamma) {
        return Err(Error::InvalidParameter(format!(
            "event at tau {} lies beyond the horizon {gamma}",
            e.tau
        )));
    }
    if let Some(e) = events.iter().find(|e| e.cost.is_nan() || e.cost < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "event at tau {} has negative cost",
            e.tau
        )));
    }
    let mut out = Vec::with_capacity(events.len() + 1);
    let mut start = 0;
    let mut cost = 0.0;
    for e in events {
        if e.tau > start {
            out.push((start, e.tau, cost));
        }
        start = e.tau;
        cost = e.cost;
    }
    if gamma > start {
        out.push((start, gamma, cost));
    }
    Ok(out)
}

pub fn effort_series(
    algorithm: PartitionerKind,
    u: &[f64],
    events: &[LbEvent],
) -> Result<EffortSeries> {
    let intervals = balancing_intervals(events, u.len())?
        .into_iter()
        .map(|(s, e, c)| {
            Ok(EffortInterval {
                tau_start: s,
                tau_end: e,
                effort: effort(&u[s..e], c)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EffortSeries {
        algorithm,
        intervals,
    })
}

/// Algorithms ordered by the effort of their interval containing `k`,
/// lowest first; equal efforts order by algorithm name.
pub fn rank_at(k: usize, series: &[EffortSeries]) -> Result<Vec<PartitionerKind>> {
    let mut scored = Vec::with_capacity(series.len());
    for s in series {
        let iv = s.at(k).ok_or(Error::OutOfRange {
            index: k,
            len: s.horizon(),
        })?;
        scored.push((iv.effort, s.algorithm));
    }
    scored.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.1.name().cmp(b.1.name()))
    });
    Ok(scored.into_iter().map(|(_, a)| a).collect())
}

/// Accumulated imbalance, balancing costs and mean work over the whole run:
/// `Σ u(t) + Σ C_i + Σ μ(t)` for `t` in `[0, gamma)`.
pub fn modeled_parallel_time(
    trace: &[IterationRecord],
    events: &[LbEvent],
    gamma: usize,
) -> Result<f64> {
    if trace.len() != gamma {
        return Err(Error::InvalidParameter(format!(
            "trace holds {} iterations, expected {gamma}",
            trace.len()
        )));
    }
    balancing_intervals(events, gamma)?;
    let u: f64 = trace.iter().map(|r| r.u).sum();
    let c: f64 = events.iter().map(|e| e.cost).sum();
    let mu: f64 = trace.iter().map(|r| r.mu).sum();
    Ok(u + c + mu)
}
