//! Velocity-informed geometric partitioning (NoRCB) next to classical RCB,
//! RIB and Hilbert-curve partitioners, exercised inside a deterministic 2D
//! Lennard-Jones simulation with logical processing elements, and scored
//! with a load-balancing effort metric.

#![warn(rust_2018_idioms, missing_debug_implementations)]

pub mod error;
pub mod geometry;
pub mod harness;
pub mod lb;
pub mod nbody;
pub mod partition;
pub mod selection;

pub use error::{Error, Result};
