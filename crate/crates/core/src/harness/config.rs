//! Experiment configuration: a flat TOML key/value file, every key optional.
//!
//! ```toml
//! scenario = "contraction"      # contraction_toy | contraction | gravity | rotation_contraction
//! n = 5000
//! steps = 3000
//! parts = 16
//! partitioner = "norcb"         # norcb | rcb | rib | hsfc
//! criterion = "periodic:600"    # periodic:<p> | auto
//! seed = 42
//! ```
//!
//! Unset keys fall back to the scenario defaults of [`SimConfig::for_scenario`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};
use crate::lb::CostModel;
use crate::nbody::{Scenario, SimConfig};
use crate::partition::{
    PartitionerKind, DEFAULT_HILBERT_ORDER, DEFAULT_VELOCITY_THRESHOLD, MAX_HILBERT_ORDER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Periodic(usize),
    Automatic,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Periodic(p) => write!(f, "periodic:{p}"),
            Criterion::Automatic => f.write_str("auto"),
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "auto" || s == "automatic" {
            return Ok(Criterion::Automatic);
        }
        if let Some(p) = s.strip_prefix("periodic:") {
            let period: usize = p
                .parse()
                .map_err(|_| Error::Config(format!("bad period in criterion '{s}'")))?;
            if period == 0 {
                return Err(Error::Config("period must be at least 1".into()));
            }
            return Ok(Criterion::Periodic(period));
        }
        Err(Error::Config(format!(
            "unknown criterion '{s}' (expected periodic:<p> or auto)"
        )))
    }
}

impl Serialize for Criterion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Criterion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub sim: SimConfig,
    pub parts: usize,
    pub partitioner: PartitionerKind,
    pub criterion: Criterion,
    pub cost_model: CostModel,
    pub threshold: f64,
    pub hilbert_order: u32,
    /// Trailing window applied to the imbalance history seen by the
    /// automatic criterion; 1 leaves it raw.
    pub smoothing: usize,
    /// Sampling stride of the effort ranking in comparisons.
    pub rank_every: usize,
    /// Add one work column per rank to iterations.csv.
    pub per_rank: bool,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    /// Desk-scale defaults: 5000 particles, 16 ranks, 3000 iterations.
    pub fn new(scenario: Scenario, partitioner: PartitionerKind) -> Self {
        ExperimentSpec {
            sim: SimConfig::for_scenario(scenario),
            parts: 16,
            partitioner,
            criterion: Criterion::Periodic(600),
            cost_model: CostModel::default(),
            threshold: DEFAULT_VELOCITY_THRESHOLD,
            hilbert_order: DEFAULT_HILBERT_ORDER,
            smoothing: 1,
            rank_every: 100,
            per_rank: false,
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sim.validate()?;
        if self.parts == 0 {
            return Err(Error::Config("parts must be at least 1".into()));
        }
        if self.partitioner.is_bisection() && !self.parts.is_power_of_two() {
            return Err(Error::Config(format!(
                "{} needs a power-of-two part count, got {}",
                self.partitioner, self.parts
            )));
        }
        if self.parts > self.sim.n {
            return Err(Error::Config(format!(
                "parts ({}) exceeds particle count ({})",
                self.parts, self.sim.n
            )));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::Config(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if !(1..=MAX_HILBERT_ORDER).contains(&self.hilbert_order) {
            return Err(Error::Config(format!(
                "hilbert_order must be in 1..={MAX_HILBERT_ORDER}"
            )));
        }
        let CostModel { c_part, c_mig } = self.cost_model;
        if !(c_part >= 0.0 && c_mig >= 0.0 && c_part.is_finite() && c_mig.is_finite()) {
            return Err(Error::Config(
                "cost coefficients must be non-negative".into(),
            ));
        }
        if self.smoothing == 0 || self.rank_every == 0 {
            return Err(Error::Config(
                "smoothing and rank_every must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// On-disk form; every key optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub n: Option<usize>,
    pub steps: Option<usize>,
    pub dt: Option<f64>,
    pub epsilon: Option<f64>,
    pub sigma: Option<f64>,
    pub r_cut: Option<f64>,
    pub force_strength: Option<f64>,
    pub omega: Option<f64>,
    pub v0: Option<f64>,
    pub disk_radius: Option<f64>,
    pub domain_width: Option<f64>,
    pub domain_height: Option<f64>,
    pub seed: Option<u64>,
    pub parts: Option<usize>,
    pub partitioner: Option<String>,
    pub criterion: Option<String>,
    pub c_part: Option<f64>,
    pub c_mig: Option<f64>,
    pub threshold: Option<f64>,
    pub hilbert_order: Option<u32>,
    pub smoothing: Option<usize>,
    pub rank_every: Option<usize>,
    pub per_rank: Option<bool>,
    pub output_dir: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn into_spec(self) -> Result<ExperimentSpec> {
        let scenario: Scenario = match &self.scenario {
            Some(s) => s.parse()?,
            None => Scenario::Contraction,
        };
        let partitioner = match &self.partitioner {
            Some(s) => s.parse()?,
            None => PartitionerKind::NoRcb,
        };
        let mut spec = ExperimentSpec::new(scenario, partitioner);
        let sim = &mut spec.sim;
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field { $target = v; })*
            };
        }
        set! {
            n => sim.n,
            steps => sim.steps,
            dt => sim.dt,
            epsilon => sim.epsilon,
            force_strength => sim.force_strength,
            omega => sim.omega,
            v0 => sim.v0,
            disk_radius => sim.disk_radius,
            seed => sim.seed,
        }
        if let Some(sigma) = self.sigma {
            sim.sigma = sigma;
            // keep the cut-off proportional unless it is set explicitly
            sim.r_cut = 2.5 * sigma;
        }
        if let Some(rc) = self.r_cut {
            sim.r_cut = rc;
        }
        if self.domain_width.is_some() || self.domain_height.is_some() {
            sim.domain = Rect::new(
                Vec2::ZERO,
                Vec2::new(
                    self.domain_width.unwrap_or(1.0),
                    self.domain_height.unwrap_or(1.0),
                ),
            )
            .map_err(|e| Error::Config(e.to_string()))?;
        }
        set! {
            parts => spec.parts,
            c_part => spec.cost_model.c_part,
            c_mig => spec.cost_model.c_mig,
            threshold => spec.threshold,
            hilbert_order => spec.hilbert_order,
            smoothing => spec.smoothing,
            rank_every => spec.rank_every,
            per_rank => spec.per_rank,
        }
        if let Some(c) = &self.criterion {
            spec.criterion = c.parse()?;
        }
        if let Some(dir) = self.output_dir {
            spec.output_dir = dir;
        }
        spec.validate()?;
        Ok(spec)
    }
}
