use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};

use super::{ExternalForce, Particle, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    ContractionToy,
    Contraction,
    Gravity,
    RotationContraction,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::ContractionToy => "contraction_toy",
            Scenario::Contraction => "contraction",
            Scenario::Gravity => "gravity",
            Scenario::RotationContraction => "rotation_contraction",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "contraction_toy" | "toy" => Ok(Scenario::ContractionToy),
            "contraction" => Ok(Scenario::Contraction),
            "gravity" => Ok(Scenario::Gravity),
            "rotation_contraction" => Ok(Scenario::RotationContraction),
            other => Err(Error::Config(format!("unknown scenario '{other}'"))),
        }
    }
}

/// Sampling attempts per particle before giving up on the minimum separation.
const MAX_ATTEMPTS_PER_PARTICLE: usize = 10_000;

/// Rejection sampler enforcing a minimum pair separation, backed by a hash
/// grid with cells of the separation size.
struct SpacedSampler {
    min_dist: f64,
    bins: std::collections::HashMap<(i64, i64), Vec<Vec2>>,
}

impl SpacedSampler {
    fn new(min_dist: f64) -> Self {
        SpacedSampler {
            min_dist,
            bins: Default::default(),
        }
    }

    fn key(&self, p: Vec2) -> (i64, i64) {
        if self.min_dist <= 0.0 {
            return (0, 0);
        }
        (
            (p.x / self.min_dist).floor() as i64,
            (p.y / self.min_dist).floor() as i64,
        )
    }

    fn try_insert(&mut self, p: Vec2) -> bool {
        if self.min_dist > 0.0 {
            let (kx, ky) = self.key(p);
            let d2 = self.min_dist * self.min_dist;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(bin) = self.bins.get(&(kx + dx, ky + dy)) {
                        if bin.iter().any(|q| (*q - p).norm_sq() < d2) {
                            return false;
                        }
                    }
                }
            }
        }
        let k = self.key(p);
        self.bins.entry(k).or_default().push(p);
        true
    }
}

fn sample_positions(
    n: usize,
    min_dist: f64,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec2,
) -> Result<Vec<Vec2>> {
    let mut sampler = SpacedSampler::new(min_dist);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut placed = false;
        for _ in 0..MAX_ATTEMPTS_PER_PARTICLE {
            let p = draw(rng);
            if sampler.try_insert(p) {
                out.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::Config(format!(
                "could not place particle {} of {n} with minimum separation {min_dist}; \
                 lower n or sigma",
                out.len()
            )));
        }
    }
    Ok(out)
}

fn uniform_disk(center: Vec2, radius: f64) -> impl FnMut(&mut ChaCha8Rng) -> Vec2 {
    move |rng| {
        let r = radius * rng.gen::<f64>().sqrt();
        let theta = TAU * rng.gen::<f64>();
        center + Vec2::new(r * theta.cos(), r * theta.sin())
    }
}

/// Initial particles and the external field for `config`. Positions keep a
/// minimum separation of `config.min_separation()`.
pub fn make_scenario(config: &SimConfig) -> Result<(Vec<Particle>, ExternalForce)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let d = &config.domain;
    let center = d.center();
    let min_dist = config.min_separation();
    let (positions, external) = match config.scenario {
        Scenario::ContractionToy | Scenario::Contraction | Scenario::RotationContraction => {
            let radius = config.disk_radius;
            let pos = sample_positions(config.n, min_dist, &mut rng, uniform_disk(center, radius))?;
            (
                pos,
                ExternalForce::Central {
                    center,
                    strength: config.force_strength,
                },
            )
        }
        Scenario::Gravity => {
            let slab = Rect {
                min: d.min,
                max: Vec2::new(d.min.x + 0.5 * d.width(), d.max.y),
            };
            let pos = sample_positions(config.n, min_dist, &mut rng, move |rng| {
                Vec2::new(
                    rng.gen_range(slab.min.x..=slab.max.x),
                    rng.gen_range(slab.min.y..=slab.max.y),
                )
            })?;
            (
                pos,
                ExternalForce::Uniform(Vec2::new(0.0, -config.force_strength)),
            )
        }
    };
    let particles = positions
        .into_iter()
        .enumerate()
        .map(|(id, position)| {
            let velocity = match config.scenario {
                Scenario::ContractionToy | Scenario::Contraction => Vec2::ZERO,
                Scenario::Gravity => Vec2::new(
                    rng.gen_range(-config.v0..=config.v0),
                    rng.gen_range(-config.v0..=config.v0),
                ),
                // omega * perp(unit(x - c)) * |x - c|
                Scenario::RotationContraction => (position - center).perp() * config.omega,
            };
            Particle {
                id,
                position,
                velocity,
            }
        })
        .collect();
    Ok((particles, external))
}
