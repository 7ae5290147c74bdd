//! Recursive bisection partitioners: velocity-informed (NoRCB), coordinate
//! (RCB) and inertial (RIB). They differ only in how each subdomain picks
//! its cut direction; the exact-median split and rank layout are shared.

use crate::error::{Error, Result};
use crate::geometry::{across, Cut, Rect, Vec2};
use crate::nbody::Particle;
use crate::selection::{split_at_median, KeyedItem};

use super::tree::{Node, PartitionTree};
use super::Assignment;

/// Relative eigengap below which the inertia tensor has no principal axis.
pub const RIB_EIGENGAP_TOL: f64 = 1e-12;

/// Mean velocity of `particles`, or a unit vector orthogonal to the longest
/// side of `bbox` when the mean's norm does not exceed `threshold`.
pub fn mean_velocity_axis(particles: &[Particle], bbox: &Rect, threshold: f64) -> Result<Vec2> {
    if particles.is_empty() {
        return Err(Error::Empty);
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "velocity threshold must be positive, got {threshold}"
        )));
    }
    let mean = mean_velocity(particles.iter());
    if mean.norm() > threshold {
        Ok(mean)
    } else {
        Ok(bbox.longest_axis_cut_direction())
    }
}

fn mean_velocity<'a>(particles: impl Iterator<Item = &'a Particle>) -> Vec2 {
    let (mut sum, mut n) = (Vec2::ZERO, 0usize);
    for p in particles {
        sum += p.velocity;
        n += 1;
    }
    sum * (1.0 / n as f64)
}

pub(crate) fn check_bisection_parts(n: usize, parts: usize) -> Result<()> {
    if parts == 0 || !parts.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(parts));
    }
    if parts > n {
        return Err(Error::TooManyParts {
            parts,
            particles: n,
        });
    }
    Ok(())
}

/// Chooses the cut direction for one subdomain, given the particle indices in it.
trait Direction {
    fn direction(&self, particles: &[Particle], subset: &[usize]) -> Vec2;
}

struct Informed {
    threshold: f64,
}

impl Direction for Informed {
    fn direction(&self, particles: &[Particle], subset: &[usize]) -> Vec2 {
        let mean = mean_velocity(subset.iter().map(|&i| &particles[i]));
        if mean.norm() > self.threshold {
            // norm > threshold > 0, so unit() cannot fail
            mean.unit().expect("nonzero mean velocity")
        } else {
            subset_bbox(particles, subset).longest_axis_cut_direction()
        }
    }
}

struct Coordinate;

impl Direction for Coordinate {
    fn direction(&self, particles: &[Particle], subset: &[usize]) -> Vec2 {
        subset_bbox(particles, subset).longest_axis_cut_direction()
    }
}

struct Inertial;

impl Direction for Inertial {
    fn direction(&self, particles: &[Particle], subset: &[usize]) -> Vec2 {
        match principal_axis(subset.iter().map(|&i| particles[i].position)) {
            // the cut runs across the principal axis so the split key is the
            // projection onto it
            Some(axis) => axis.perp(),
            None => subset_bbox(particles, subset).longest_axis_cut_direction(),
        }
    }
}

fn subset_bbox(particles: &[Particle], subset: &[usize]) -> Rect {
    Rect::bounding(subset.iter().map(|&i| particles[i].position)).expect("non-empty subdomain")
}

/// Unit eigenvector of the largest eigenvalue of the 2×2 position covariance,
/// sign-normalized to a non-negative x (then y). `None` when degenerate.
pub fn principal_axis(points: impl Iterator<Item = Vec2> + Clone) -> Option<Vec2> {
    let mut n = 0usize;
    let mut sum = Vec2::ZERO;
    for p in points.clone() {
        sum += p;
        n += 1;
    }
    if n == 0 {
        return None;
    }
    let c = sum * (1.0 / n as f64);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = p - c;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let inv = 1.0 / n as f64;
    let (a, b, d) = (sxx * inv, sxy * inv, syy * inv);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b);
    let lambda_max = 0.5 * (a + d) + radius;
    let gap = 2.0 * radius;
    if lambda_max <= 0.0 || gap < RIB_EIGENGAP_TOL * lambda_max {
        return None;
    }
    // pick the better-conditioned of the two equivalent eigenvector forms
    let v = if a >= d {
        Vec2::new(lambda_max - d, b)
    } else {
        Vec2::new(b, lambda_max - a)
    };
    let mut axis = v.unit().ok()?;
    if axis.x < 0.0 || (axis.x == 0.0 && axis.y < 0.0) {
        axis = -axis;
    }
    Some(axis)
}

fn bisect(
    particles: &[Particle],
    parts: usize,
    chooser: &dyn Direction,
) -> Result<(PartitionTree, Assignment)> {
    check_bisection_parts(particles.len(), parts)?;
    let mut nodes = Vec::with_capacity(2 * parts - 1);
    let mut ranks = vec![0usize; particles.len()];
    let all: Vec<usize> = (0..particles.len()).collect();
    build(particles, all, 0..parts, chooser, &mut nodes, &mut ranks)?;
    Ok((
        PartitionTree::from_nodes(nodes, parts),
        Assignment::new(ranks, parts),
    ))
}

fn build(
    particles: &[Particle],
    subset: Vec<usize>,
    range: std::ops::Range<usize>,
    chooser: &dyn Direction,
    nodes: &mut Vec<Node>,
    ranks: &mut [usize],
) -> Result<usize> {
    let at = nodes.len();
    if range.len() == 1 {
        for &i in &subset {
            ranks[i] = range.start;
        }
        nodes.push(Node::Leaf { rank: range.start });
        return Ok(at);
    }
    let direction = chooser.direction(particles, &subset);
    let keyed: Vec<KeyedItem> = subset
        .iter()
        .map(|&i| KeyedItem::new(across(direction, particles[i].position), i))
        .collect();
    let split = split_at_median(&keyed)?;
    let cut = Cut {
        origin: particles[split.median.id].position,
        direction,
    };
    // placeholder, patched once both children exist
    nodes.push(Node::Leaf { rank: usize::MAX });
    let mid = range.start + range.len() / 2;
    let lower = build(
        particles,
        split.left,
        range.start..mid,
        chooser,
        nodes,
        ranks,
    )?;
    let greater = build(
        particles,
        split.right,
        mid..range.end,
        chooser,
        nodes,
        ranks,
    )?;
    nodes[at] = Node::Split {
        cut,
        ranks: range,
        lower,
        greater,
    };
    Ok(at)
}

/// Velocity-informed bisection: each cut runs through the subdomain's median
/// point parallel to its mean velocity.
pub fn norcb_partition(
    particles: &[Particle],
    parts: usize,
    threshold: f64,
) -> Result<(PartitionTree, Assignment)> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "velocity threshold must be positive, got {threshold}"
        )));
    }
    bisect(particles, parts, &Informed { threshold })
}

pub fn rcb_partition(particles: &[Particle], parts: usize) -> Result<(PartitionTree, Assignment)> {
    bisect(particles, parts, &Coordinate)
}

pub fn rib_partition(particles: &[Particle], parts: usize) -> Result<(PartitionTree, Assignment)> {
    bisect(particles, parts, &Inertial)
}
