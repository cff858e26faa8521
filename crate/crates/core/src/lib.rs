//! Online exploration of weighted grid graphs under fog of war.
//!
//! An agent starts at a vertex of an `m x n` grid and only learns edge
//! weights (and, for directed grids, orientations) when it visits their
//! endpoints. This crate provides the exploration engine, online strategies,
//! exact offline optima, adversarial instance families and the ratio tooling
//! that compares the two.

pub mod adversary;
pub mod engine;
pub mod format;
pub mod grid;
pub mod opt;
pub mod report;
pub mod strategy;

/// Exact non-negative rational used for every competitive ratio.
pub type Ratio = num_rational::Ratio<u64>;

pub use engine::{run, run_on, strict_ratio, trace_ratio, Explorer, Knowledge, StaticSource, Trace};
pub use format::{parse_instance, serialize_instance};
pub use grid::{GridSpec, Instance, Orientation, Vertex};
pub use strategy::{Greedy, LadderSweep, Strategy};
