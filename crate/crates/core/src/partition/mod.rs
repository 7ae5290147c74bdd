//! Geometric partitioners behind one interface.

mod bisection;
mod hsfc;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};
use crate::nbody::Particle;

pub use bisection::{
    mean_velocity_axis, norcb_partition, principal_axis, rcb_partition, rib_partition,
    RIB_EIGENGAP_TOL,
};
pub use hsfc::{
    cell_of, cell_to_index, hilbert_index, hsfc_partition, index_to_cell, CurveChunks,
    DEFAULT_HILBERT_ORDER, MAX_HILBERT_ORDER,
};
pub use tree::{Node, PartitionTree};

pub const DEFAULT_VELOCITY_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionerKind {
    NoRcb,
    Rcb,
    Rib,
    Hsfc,
}

impl PartitionerKind {
    pub const ALL: [PartitionerKind; 4] = [
        PartitionerKind::NoRcb,
        PartitionerKind::Rcb,
        PartitionerKind::Rib,
        PartitionerKind::Hsfc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PartitionerKind::NoRcb => "norcb",
            PartitionerKind::Rcb => "rcb",
            PartitionerKind::Rib => "rib",
            PartitionerKind::Hsfc => "hsfc",
        }
    }

    pub fn is_bisection(self) -> bool {
        !matches!(self, PartitionerKind::Hsfc)
    }
}

impl fmt::Display for PartitionerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartitionerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "norcb" => Ok(PartitionerKind::NoRcb),
            "rcb" => Ok(PartitionerKind::Rcb),
            "rib" => Ok(PartitionerKind::Rib),
            "hsfc" => Ok(PartitionerKind::Hsfc),
            other => Err(Error::Config(format!("unknown partitioner '{other}'"))),
        }
    }
}

/// Rank of every particle, indexed by the particle's position in the slice
/// that was partitioned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    ranks: Vec<usize>,
    parts: usize,
}

impl Assignment {
    pub fn new(ranks: Vec<usize>, parts: usize) -> Self {
        debug_assert!(ranks.iter().all(|&r| r < parts));
        Assignment { ranks, parts }
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank_of(&self, index: usize) -> usize {
        self.ranks[index]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn set(&mut self, index: usize, rank: usize) {
        debug_assert!(rank < self.parts);
        self.ranks[index] = rank;
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.parts];
        for &r in &self.ranks {
            c[r] += 1;
        }
        c
    }

    /// Number of entries whose rank differs from `other`.
    pub fn moved_from(&self, other: &Assignment) -> usize {
        self.ranks
            .iter()
            .zip(&other.ranks)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// The region map a partitioner leaves behind, used to re-home particles as
/// they move between load-balancing calls.
#[derive(Debug, Clone, PartialEq)]
pub enum Tessellation {
    Tree(PartitionTree),
    Curve(CurveChunks),
}

impl Tessellation {
    pub fn locate(&self, p: Vec2, id: usize) -> usize {
        match self {
            Tessellation::Tree(t) => t.locate(p),
            Tessellation::Curve(c) => c.locate(p, id),
        }
    }

    pub fn parts(&self) -> usize {
        match self {
            Tessellation::Tree(t) => t.parts(),
            Tessellation::Curve(c) => c.parts(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionParams {
    pub threshold: f64,
    pub hilbert_order: u32,
    /// Region the Hilbert grid is laid over.
    pub domain: Rect,
}

impl Default for PartitionParams {
    fn default() -> Self {
        PartitionParams {
            threshold: DEFAULT_VELOCITY_THRESHOLD,
            hilbert_order: DEFAULT_HILBERT_ORDER,
            domain: Rect::unit(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Partition {
    pub tessellation: Tessellation,
    pub assignment: Assignment,
}

pub fn partition(
    kind: PartitionerKind,
    particles: &[Particle],
    parts: usize,
    params: &PartitionParams,
) -> Result<Partition> {
    let (tessellation, assignment) = match kind {
        PartitionerKind::NoRcb => {
            let (t, a) = norcb_partition(particles, parts, params.threshold)?;
            (Tessellation::Tree(t), a)
        }
        PartitionerKind::Rcb => {
            let (t, a) = rcb_partition(particles, parts)?;
            (Tessellation::Tree(t), a)
        }
        PartitionerKind::Rib => {
            let (t, a) = rib_partition(particles, parts)?;
            (Tessellation::Tree(t), a)
        }
        PartitionerKind::Hsfc => {
            let (c, a) = hsfc_partition(particles, parts, &params.domain, params.hilbert_order)?;
            (Tessellation::Curve(c), a)
        }
    };
    Ok(Partition {
        tessellation,
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in PartitionerKind::ALL {
            assert_eq!(k.name().parse::<PartitionerKind>().unwrap(), k);
        }
        assert!("kd".parse::<PartitionerKind>().is_err());
        assert_eq!(
            "NoRCB".parse::<PartitionerKind>().unwrap(),
            PartitionerKind::NoRcb
        );
    }

    #[test]
    fn moved_counts_changes() {
        let a = Assignment::new(vec![0, 1, 1, 0], 2);
        let b = Assignment::new(vec![0, 0, 1, 1], 2);
        assert_eq!(a.moved_from(&b), 2);
        assert_eq!(a.counts(), vec![2, 2]);
    }
}
