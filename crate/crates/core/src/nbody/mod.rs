//! Deterministic 2D short-range N-body engine: truncated Lennard-Jones pairs
//! on a cell list, a uniform or central external field, velocity-Verlet
//! time stepping and reflective walls. Masses are one.

mod cell;
mod force;
mod scenario;
mod work;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};

pub use cell::CellGrid;
pub use force::{lj_force, lj_potential, CLAMP_FRACTION};
pub use scenario::{make_scenario, Scenario};
pub use work::{count_work, WorkVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub id: usize,
    pub position: Vec2,
    pub velocity: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExternalForce {
    None,
    Uniform(Vec2),
    /// Constant-magnitude pull toward `center`.
    Central {
        center: Vec2,
        strength: f64,
    },
}

impl ExternalForce {
    pub fn at(&self, p: Vec2) -> Vec2 {
        match *self {
            ExternalForce::None => Vec2::ZERO,
            ExternalForce::Uniform(g) => g,
            ExternalForce::Central { center, strength } => match (center - p).unit() {
                Ok(dir) => dir * strength,
                Err(_) => Vec2::ZERO,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub domain: Rect,
    pub n: usize,
    pub dt: f64,
    /// Iterations to run (γ). Iteration 0 is the initial state.
    pub steps: usize,
    pub epsilon: f64,
    pub sigma: f64,
    pub r_cut: f64,
    pub force_strength: f64,
    /// Angular velocity of the rotating disk.
    pub omega: f64,
    /// Half-width of the uniform initial velocity box (gravity).
    pub v0: f64,
    pub disk_radius: f64,
    pub seed: u64,
}

impl SimConfig {
    pub const DEFAULT_SIGMA: f64 = 5e-3;

    pub fn for_scenario(scenario: Scenario) -> Self {
        let sigma = Self::DEFAULT_SIGMA;
        let base = SimConfig {
            scenario,
            domain: Rect::unit(),
            n: 5000,
            dt: 5e-4,
            steps: 3000,
            epsilon: 0.01,
            sigma,
            r_cut: 2.5 * sigma,
            force_strength: 0.3,
            omega: 0.0,
            v0: 0.1,
            disk_radius: 0.4,
            seed: 42,
        };
        match scenario {
            Scenario::ContractionToy | Scenario::Contraction => base,
            Scenario::Gravity => SimConfig {
                force_strength: 0.5,
                ..base
            },
            Scenario::RotationContraction => SimConfig { omega: 1.0, ..base },
        }
    }

    /// Initial particles are placed no closer than the pair-potential minimum.
    pub fn min_separation(&self) -> f64 {
        2f64.powf(1.0 / 6.0) * self.sigma
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if self.steps == 0 {
            return bad("steps must be at least 1".into());
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.r_cut >= self.sigma && self.r_cut.is_finite()) {
            return bad(format!(
                "r_cut ({}) must be at least sigma ({})",
                self.r_cut, self.sigma
            ));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            ));
        }
        for (name, v) in [
            ("force_strength", self.force_strength),
            ("omega", self.omega),
            ("v0", self.v0),
            ("disk_radius", self.disk_radius),
        ] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        if !(self.domain.width() > 0.0 && self.domain.height() > 0.0) {
            return bad("domain must have positive area".into());
        }
        let c = self.domain.center();
        if c.x - self.disk_radius < self.domain.min.x
            || c.x + self.disk_radius > self.domain.max.x
            || c.y - self.disk_radius < self.domain.min.y
            || c.y + self.disk_radius > self.domain.max.y
        {
            return bad(format!(
                "disk radius {} does not fit in the domain",
                self.disk_radius
            ));
        }
        Ok(())
    }
}

/// Particle state plus the cached accelerations velocity Verlet carries
/// between steps.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    external: ExternalForce,
    particles: Vec<Particle>,
    positions: Vec<Vec2>,
    accel: Vec<Vec2>,
    grid: CellGrid,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        let (particles, external) = make_scenario(&config)?;
        Ok(Self::from_particles(config, particles, external))
    }

    pub fn from_particles(
        config: SimConfig,
        particles: Vec<Particle>,
        external: ExternalForce,
    ) -> Self {
        let positions: Vec<Vec2> = particles.iter().map(|p| p.position).collect();
        let grid = CellGrid::build(&config.domain, config.r_cut, &positions);
        let mut sim = Simulation {
            config,
            external,
            accel: vec![Vec2::ZERO; particles.len()],
            particles,
            positions,
            grid,
        };
        sim.compute_forces();
        sim
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn positions(&self) -> &[Vec2] {
        &self.positions
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn accelerations(&self) -> &[Vec2] {
        &self.accel
    }

    fn compute_forces(&mut self) {
        let SimConfig {
            epsilon,
            sigma,
            r_cut,
            ..
        } = self.config;
        for (a, &p) in self.accel.iter_mut().zip(&self.positions) {
            *a = self.external.at(p);
        }
        let accel = &mut self.accel;
        self.grid
            .for_each_pair(&self.positions, r_cut, |i, j, d, r2| {
                if r2 == 0.0 {
                    return;
                }
                let f = force::lj_force_r2(d, r2, epsilon, sigma, r_cut);
                accel[i] += f;
                accel[j] -= f;
            });
    }

    /// One velocity-Verlet step: half kick, drift, wall reflection, force
    /// refresh on the rebuilt cell grid, half kick.
    pub fn step(&mut self) {
        let dt = self.config.dt;
        let half = 0.5 * dt;
        let domain = self.config.domain;
        for (p, &a) in self.particles.iter_mut().zip(&self.accel) {
            p.velocity += a * half;
            p.position += p.velocity * dt;
            reflect(p, &domain);
        }
        for (slot, p) in self.positions.iter_mut().zip(&self.particles) {
            *slot = p.position;
        }
        self.grid.rebuild(&self.positions);
        self.compute_forces();
        for (p, &a) in self.particles.iter_mut().zip(&self.accel) {
            p.velocity += a * half;
        }
    }

    pub fn kinetic_energy(&self) -> f64 {
        self.particles
            .iter()
            .map(|p| 0.5 * p.velocity.norm_sq())
            .sum()
    }

    /// Truncated pair energy summed over all interacting pairs.
    pub fn pair_energy(&self) -> f64 {
        let SimConfig {
            epsilon,
            sigma,
            r_cut,
            ..
        } = self.config;
        let mut e = 0.0;
        self.grid
            .for_each_pair(&self.positions, r_cut, |_, _, _, r2| {
                e += lj_potential(r2.sqrt(), epsilon, sigma, r_cut);
            });
        e
    }
}

/// Mirrors a particle that left the domain back inside and flips the
/// matching velocity component.
fn reflect(p: &mut Particle, domain: &Rect) {
    fn axis(x: &mut f64, v: &mut f64, lo: f64, hi: f64) {
        if *x < lo {
            *x = 2.0 * lo - *x;
            *v = -*v;
        } else if *x > hi {
            *x = 2.0 * hi - *x;
            *v = -*v;
        }
        // a jump longer than the domain still has to end up inside
        *x = x.clamp(lo, hi);
    }
    axis(
        &mut p.position.x,
        &mut p.velocity.x,
        domain.min.x,
        domain.max.x,
    );
    axis(
        &mut p.position.y,
        &mut p.velocity.y,
        domain.min.y,
        domain.max.y,
    );
}
