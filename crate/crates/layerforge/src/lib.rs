//! Exact optimization toolkit for generalized graph layering.
//!
//! A *layering* of a directed graph assigns every vertex to one of `Y`
//! horizontal layers, numbered `1..=Y` from top to bottom. Classic layer
//! assignment (the second phase of hierarchical drawing) requires the input
//! to be acyclic and every arc to point strictly downward; the generalized
//! problems handled here drop that requirement and instead *price* upward
//! (reversed) arcs into the objective, and can further trade edge length
//! against drawing width, height, or the scale at which the drawing fits a
//! prescribed aspect ratio.
//!
//! The crate is organized in four layers of its own:
//!
//! * [`graph`] — a minimal directed multigraph with dense vertex ids,
//!   edge-list / DOT-subset parsing, and a seeded random generator;
//! * [`metrics`] — layerings, feasibility checks, the evaluator that
//!   computes edge length, reversed-arc counts, dummy-vertex loads, width,
//!   height and scale, and the exact rational objective for each problem
//!   variant;
//! * [`model`] — integer-programming formulations of the same objectives
//!   (an assignment/product linearization and an ordering formulation),
//!   a small model IR, an LP-format writer, and a solution-file reader;
//! * [`solve`] — exact solvers: plain enumeration and a branch-and-bound
//!   search with admissible lower bounds, warm starts, and deterministic
//!   lexicographic tie-breaking.
//!
//! All objective arithmetic is exact: weights are arbitrary-precision
//! rationals and every reported objective value is an exact fraction, never
//! a float. Everything is deterministic for a fixed input and seed.

pub mod graph;
pub mod metrics;
pub mod model;
pub mod solve;

mod ratio;

pub use ratio::{format_ratio, parse_ratio, ParseRatioError};
