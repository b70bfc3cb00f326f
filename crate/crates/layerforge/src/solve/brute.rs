//! Exhaustive baseline solver.

use std::time::Instant;

use super::kernel::{assignment_cost, make_kernel, AnyKernel, EvalBufs, Kernel};
use super::{validate, SolveConfig, SolveError, SolveResult, SolveStatus};
use crate::graph::DiGraph;
use crate::metrics::Layering;

/// Enumerate every assignment of layers `1..=y_cap` to vertices and return
/// the exact optimum. Assignments are visited in lexicographic order with
/// vertex 0 most significant, and ties keep the earlier assignment, so the
/// reported layering is the lexicographically smallest optimum.
///
/// The state space has `y_cap ^ |V|` assignments; anything above
/// `cfg.brute_cap` is rejected with [`SolveError::CapExceeded`] before any
/// work happens. No time limit applies — the cap bounds the work. This
/// solver takes no shortcuts (no feasibility pre-checks, no pruning) so it
/// can serve as an independent oracle for `branch_and_bound`.
pub fn brute_force(g: &DiGraph, cfg: &SolveConfig) -> Result<SolveResult, SolveError> {
    validate(g, cfg)?;
    let started = Instant::now();
    let n = g.n();
    let y = cfg.y_cap;

    let states = (y as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if states > cfg.brute_cap as u128 {
        return Err(SolveError::CapExceeded {
            states,
            cap: cfg.brute_cap,
        });
    }

    match make_kernel(n, g.num_arcs(), y, cfg.variant, &cfg.scheme) {
        AnyKernel::Int(k) => Ok(run(&k, g, cfg, started)),
        AnyKernel::Rat(k) => Ok(run(&k, g, cfg, started)),
    }
}

fn run<K: Kernel>(kernel: &K, g: &DiGraph, cfg: &SolveConfig, started: Instant) -> SolveResult {
    let n = g.n();
    let y = cfg.y_cap;
    let mut layers = vec![1u32; n];
    let mut bufs = EvalBufs::default();
    let mut best: Option<(K::C, Vec<u32>)> = None;
    let mut nodes = 0u64;

    loop {
        nodes += 1;
        if let Some(cost) = assignment_cost(kernel, g, &layers, y, &mut bufs) {
            let better = match &best {
                None => true,
                Some((bc, _)) => cost < *bc,
            };
            if better {
                best = Some((cost, layers.clone()));
            }
        }
        // Odometer increment, last vertex fastest.
        let mut advanced = false;
        for pos in (0..n).rev() {
            if layers[pos] < y {
                layers[pos] += 1;
                for l in layers.iter_mut().skip(pos + 1) {
                    *l = 1;
                }
                advanced = true;
                break;
            }
            layers[pos] = 1;
        }
        if !advanced {
            break;
        }
    }

    match best {
        Some((cost, layers)) => {
            let objective = kernel.to_ratio(&cost);
            SolveResult {
                status: SolveStatus::Optimal,
                best: Some(Layering::new(layers, y).expect("enumerated within budget")),
                objective: Some(objective.clone()),
                lower_bound: Some(objective),
                nodes,
                wall_time: started.elapsed(),
            }
        }
        None => SolveResult {
            status: SolveStatus::Infeasible,
            best: None,
            objective: None,
            lower_bound: None,
            nodes,
            wall_time: started.elapsed(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::metrics::{Variant, WeightScheme};
    use num::rational::BigRational;
    use num::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cfg(variant: Variant, y: u32) -> SolveConfig {
        SolveConfig::new(variant, WeightScheme::from_ints(1, 3, 0, 0), y)
    }

    #[test]
    fn path_dlp_optimum_is_chain() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let r = brute_force(&g, &cfg(Variant::Dlp, 3)).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.best.unwrap().layers(), &[1, 2, 3]);
        assert_eq!(r.objective, Some(rat(2, 1)));
        assert_eq!(r.nodes, 27);
    }

    #[test]
    fn glp_allows_reversal_when_cheaper() {
        // Two arcs into vertex 0: 1 -> 0, 2 -> 0. With w_rev = 0 and
        // Y = 2 the cheapest GLP layering puts 0 alone on layer 1.
        let g = parse_edge_list("1 0\n2 0\n").unwrap();
        let scheme = WeightScheme::from_ints(1, 0, 0, 0);
        let mut c = SolveConfig::new(Variant::Glp, scheme, 2);
        c.brute_cap = 100;
        let r = brute_force(&g, &c).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        // Lex-smallest optimum: [1, 2, 2] (cost 2 either way around).
        assert_eq!(r.best.unwrap().layers(), &[1, 2, 2]);
        assert_eq!(r.objective, Some(rat(2, 1)));
    }

    #[test]
    fn infeasible_when_budget_too_small() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let r = brute_force(&g, &cfg(Variant::Dlp, 2)).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert!(r.best.is_none());
        assert_eq!(r.nodes, 8);
    }

    #[test]
    fn cap_is_enforced() {
        let g = parse_edge_list("0 1\n").unwrap();
        let mut c = cfg(Variant::Glp, 10);
        c.brute_cap = 50;
        let err = brute_force(&g, &c).unwrap_err();
        assert_eq!(
            err,
            SolveError::CapExceeded {
                states: 100,
                cap: 50
            }
        );
    }

    #[test]
    fn single_vertex_optimum() {
        let g = DiGraph::new(1, vec![]).unwrap();
        let r = brute_force(&g, &cfg(Variant::Glp, 3)).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.best.unwrap().layers(), &[1]);
        assert_eq!(r.objective, Some(rat(0, 1)));
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = DiGraph::new(0, vec![]).unwrap();
        let err = brute_force(&g, &cfg(Variant::Glp, 2)).unwrap_err();
        assert_eq!(err, SolveError::EmptyGraph);
    }

    #[test]
    fn width_term_steers_optimum() {
        // Star 0 -> {1, 2, 3}; Y = 2. Without width cost the optimum puts
        // all leaves on layer 2 (length 3). A heavy width term prefers...
        // the same layering is forced under DLP-W, so check the objective
        // accounts for W = 3.
        let g = parse_edge_list("0 1\n0 2\n0 3\n").unwrap();
        let scheme = WeightScheme::from_ints(1, 0, 10, 0);
        let r = brute_force(&g, &SolveConfig::new(Variant::DlpW, scheme, 2)).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.best.unwrap().layers(), &[1, 2, 2, 2]);
        assert_eq!(r.objective, Some(rat(33, 1)));
    }
}
