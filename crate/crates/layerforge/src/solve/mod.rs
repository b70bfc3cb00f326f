//! Exact solvers for the layering problems.
//!
//! Two solvers share one exact cost kernel:
//!
//! * [`brute_force`] — enumerates every assignment of layers to vertices in
//!   lexicographic order (vertex 0 most significant). It is deliberately
//!   free of shortcuts so it can serve as an oracle for the other solver,
//!   and refuses instances whose state space exceeds a configurable cap.
//! * [`branch_and_bound`] — depth-first search over vertices in a fixed
//!   branch order with an admissible lower bound per node. The bound adds
//!   the exact cost of decided arcs, for every undecided vertex the minimum
//!   cost its decided-neighbor arcs could still reach, `w_len` for every
//!   arc with both ends undecided, and the variant's geometry term at the
//!   current width/height lower bounds. Pruning is strict (`bound >
//!   incumbent`), so cost ties are explored and the reported optimum is the
//!   lexicographically smallest one — the same witness `brute_force`
//!   returns.
//!
//! [`solve_with_restarts`] seeds the search with a longest-path layering
//! whenever the graph is acyclic and that layering fits the layer budget,
//! then runs the full search; results are identical to a cold start, only
//! faster. All objective values are exact rationals.
//!
//! Determinism: given the same graph and configuration, both solvers visit
//! states in the same order and return the same result; wall-clock time
//! only influences whether a search is cut off, never which incumbent a
//! completed search reports.

mod bnb;
mod brute;
mod kernel;

pub use bnb::{branch_and_bound, solve_with_restarts};
pub use brute::brute_force;

use num::rational::BigRational;
use std::fmt;
use std::time::Duration;
use thiserror::Error;

use crate::graph::DiGraph;
use crate::metrics::{Layering, Variant, WeightScheme};

/// Default wall-clock budget for the branch-and-bound search.
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(1800);

/// Default cap on the number of states `brute_force` may enumerate.
pub const DEFAULT_BRUTE_CAP: u64 = 10_000_000;

/// How a solver run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Search completed; the reported layering is a global optimum.
    Optimal,
    /// Search was cut off with an incumbent that may not be optimal.
    Feasible,
    /// Search was cut off before any feasible layering was found.
    Timeout,
    /// Search completed without finding any feasible layering.
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Timeout => "timeout",
            SolveStatus::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("layer budget must be at least 1")]
    ZeroLayers,
    #[error("state space of {states} assignments exceeds the cap of {cap}")]
    CapExceeded { states: u128, cap: u64 },
}

/// Order in which branch-and-bound decides vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchOrder {
    /// Vertex ids ascending.
    Input,
    /// Total degree descending, ties by ascending id (default).
    DegreeDesc,
}

/// Everything a solver needs besides the graph.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub variant: Variant,
    pub scheme: WeightScheme,
    /// Layer budget `Y`; layerings use layers `1..=y_cap`.
    pub y_cap: u32,
    /// Wall-clock budget for branch-and-bound; `None` disables the check.
    pub time_limit: Option<Duration>,
    /// State cap for `brute_force`.
    pub brute_cap: u64,
    pub branch_order: BranchOrder,
}

impl SolveConfig {
    pub fn new(variant: Variant, scheme: WeightScheme, y_cap: u32) -> Self {
        SolveConfig {
            variant,
            scheme,
            y_cap,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            brute_cap: DEFAULT_BRUTE_CAP,
            branch_order: BranchOrder::DegreeDesc,
        }
    }
}

/// Outcome of a solver run. `objective` and `lower_bound` are exact; for
/// an `Optimal` status they coincide, for cut-off runs `lower_bound` is a
/// proven bound on the unexplored remainder of the search space.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub best: Option<Layering>,
    pub objective: Option<BigRational>,
    pub lower_bound: Option<BigRational>,
    /// Assignments attempted (complete ones for brute force, vertex pushes
    /// for branch-and-bound).
    pub nodes: u64,
    pub wall_time: Duration,
}

fn validate(g: &DiGraph, cfg: &SolveConfig) -> Result<(), SolveError> {
    if g.n() == 0 {
        return Err(SolveError::EmptyGraph);
    }
    if cfg.y_cap == 0 {
        return Err(SolveError::ZeroLayers);
    }
    Ok(())
}

/// The layering that assigns every vertex one layer below its deepest
/// predecessor: `L(v) = 1 + max over arcs (u, v) of L(u)`, sources on
/// layer 1. Returns `None` when the graph is cyclic or when the layering
/// needs more than `y_cap` layers. Among all layerings with every arc
/// pointing strictly downward this one has minimum height.
pub fn longest_path_layering(g: &DiGraph, y_cap: u32) -> Option<Layering> {
    let n = g.n();
    let mut indeg = vec![0usize; n];
    for &(_, h) in g.arcs() {
        indeg[h] += 1;
    }
    let mut level = vec![1u32; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0usize;
    let mut head = 0usize;
    // Outgoing adjacency once, so the pass is linear in |V| + |A|.
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(t, _)) in g.arcs().iter().enumerate() {
        out[t].push(i);
    }
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        seen += 1;
        for &a in &out[v] {
            let (_, h) = g.arcs()[a];
            level[h] = level[h].max(level[v] + 1);
            indeg[h] -= 1;
            if indeg[h] == 0 {
                queue.push(h);
            }
        }
    }
    if seen != n {
        return None; // cyclic
    }
    if level.iter().copied().max().unwrap_or(1) > y_cap {
        return None;
    }
    Some(Layering::new(level, y_cap).expect("levels within budget"))
}

/// Undirected simple adjacency (parallel arcs collapsed) for colorability
/// checks.
fn undirected_adjacency(g: &DiGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n()];
    for &(t, h) in g.arcs() {
        if !adj[t].contains(&h) {
            adj[t].push(h);
            adj[h].push(t);
        }
    }
    adj
}

/// Exact test whether the conflict graph admits a proper coloring with at
/// most `y` colors, by backtracking with the usual "at most one fresh
/// color" symmetry cut. Only called for small `n`.
fn exact_colorable(adj: &[Vec<usize>], n: usize, y: u32) -> bool {
    fn rec(adj: &[Vec<usize>], colors: &mut [u32], v: usize, used: u32, y: u32) -> bool {
        if v == colors.len() {
            return true;
        }
        let cap = (used + 1).min(y);
        'next: for c in 1..=cap {
            for &u in &adj[v] {
                if colors[u] == c {
                    continue 'next;
                }
            }
            colors[v] = c;
            if rec(adj, colors, v + 1, used.max(c), y) {
                return true;
            }
            colors[v] = 0;
        }
        false
    }
    let mut colors = vec![0u32; n];
    rec(adj, &mut colors, 0, 0, y)
}

/// Largest vertex count for which infeasibility of distinct-layer variants
/// is decided by the exact coloring check instead of search exhaustion.
const EXACT_COLOR_LIMIT: usize = 14;

/// `true` means no feasible layering exists, proven without search.
/// `false` is inconclusive for undirected variants with more than
/// [`EXACT_COLOR_LIMIT`] vertices whose greedy bound exceeds the budget;
/// the search then settles the question by exhaustion.
pub(crate) fn provably_infeasible(g: &DiGraph, variant: Variant, y: u32) -> bool {
    if variant.is_directed() {
        // Minimal height of a strictly-downward layering is the longest
        // path, so the check is exact for any size.
        return longest_path_layering(g, y).is_none();
    }
    if g.min_feasible_layers() <= y {
        return false;
    }
    if g.n() <= EXACT_COLOR_LIMIT {
        let adj = undirected_adjacency(g);
        return !exact_colorable(&adj, g.n(), y);
    }
    false
}
