//! Branch-and-bound solver.
//!
//! Vertices are decided one at a time in a fixed branch order; a node of
//! the search tree is a partial assignment. For every undecided vertex the
//! search maintains a cost row over the candidate layers: entry `c` is the
//! exact total cost that arcs towards already-decided neighbors would incur
//! if the vertex were placed on layer `c` (infinite when some such arc
//! becomes infeasible). The node bound adds
//!
//! * the exact cost of arcs with both ends decided,
//! * the minimum entry of every undecided row,
//! * `w_len` once per arc with both ends undecided (layers are distinct,
//!   so each such arc spans at least one layer), and
//! * the variant geometry term at the current width/height lower bounds
//!   (decided vertex loads plus dummy loads of decided arcs).
//!
//! Every summand is a lower bound on what the corresponding arcs or terms
//! contribute to any completion, so the bound is admissible, and at a leaf
//! it equals the exact objective. Pruning requires `bound > incumbent`;
//! ties are explored, which is what guarantees the reported optimum is the
//! lexicographically smallest one (by vertex id), matching `brute_force`.

use std::time::Instant;

use super::kernel::{assignment_cost, make_kernel, AnyKernel, Kernel};
use super::{
    longest_path_layering, provably_infeasible, validate, BranchOrder, SolveConfig, SolveError,
    SolveResult, SolveStatus,
};
use crate::graph::DiGraph;
use crate::metrics::Layering;

/// Wall-clock checks happen every `TIME_CHECK_MASK + 1` pushes.
const TIME_CHECK_MASK: u64 = 4095;

/// Exact branch-and-bound search. Returns the lexicographically smallest
/// optimal layering, or proves infeasibility by exhaustion (cheap exact
/// pre-checks settle the common infeasible cases without search). When the
/// time limit strikes first, the incumbent (if any) is reported as
/// `Feasible` together with a proven lower bound for the whole instance.
pub fn branch_and_bound(g: &DiGraph, cfg: &SolveConfig) -> Result<SolveResult, SolveError> {
    solve_inner(g, cfg, false)
}

/// [`branch_and_bound`] seeded with the longest-path layering whenever the
/// graph is acyclic and that layering fits the budget. The warm start only
/// accelerates pruning; statuses, layerings and objectives are identical
/// to a cold search.
pub fn solve_with_restarts(g: &DiGraph, cfg: &SolveConfig) -> Result<SolveResult, SolveError> {
    solve_inner(g, cfg, true)
}

fn solve_inner(g: &DiGraph, cfg: &SolveConfig, warm: bool) -> Result<SolveResult, SolveError> {
    validate(g, cfg)?;
    let started = Instant::now();
    if provably_infeasible(g, cfg.variant, cfg.y_cap) {
        return Ok(SolveResult {
            status: SolveStatus::Infeasible,
            best: None,
            objective: None,
            lower_bound: None,
            nodes: 0,
            wall_time: started.elapsed(),
        });
    }
    let warm_layers = if warm {
        longest_path_layering(g, cfg.y_cap).map(|l| l.layers().to_vec())
    } else {
        None
    };
    match make_kernel(g.n(), g.num_arcs(), cfg.y_cap, cfg.variant, &cfg.scheme) {
        AnyKernel::Int(k) => Ok(run(&k, g, cfg, warm_layers, started)),
        AnyKernel::Rat(k) => Ok(run(&k, g, cfg, warm_layers, started)),
    }
}

struct Search<'a, K: Kernel> {
    kernel: &'a K,
    arcs: &'a [(usize, usize)],
    incident: &'a [Vec<usize>],
    order: Vec<usize>,
    n: usize,
    y: u32,
    /// Layer per vertex, 0 = undecided.
    layers: Vec<u32>,
    /// Cost rows, finite part: index `v * y + (c - 1)`.
    fin: Vec<K::C>,
    /// Count of infinite contributions per row entry.
    infs: Vec<u32>,
    /// Effective minimum of each row.
    row_min: Vec<K::C>,
    /// Sum of finite row minima over undecided vertices…
    pending_fin: K::C,
    /// …plus how many undecided rows are entirely infinite.
    pending_inf: usize,
    both_und: u64,
    decided: K::C,
    vload: Vec<u64>,
    dload: Vec<u64>,
    h_lb: u32,
    nodes: u64,
    best: Option<(K::C, Vec<u32>)>,
    frame_bounds: Vec<K::C>,
    deadline: Option<Instant>,
    aborted: bool,
    abort_lb: Option<K::C>,
}

impl<'a, K: Kernel> Search<'a, K> {
    fn idx(&self, v: usize, c: u32) -> usize {
        v * self.y as usize + (c as usize - 1)
    }

    fn effective(&self, v: usize, c: u32) -> K::C {
        let i = self.idx(v, c);
        if self.infs[i] > 0 {
            self.kernel.inf()
        } else {
            self.fin[i].clone()
        }
    }

    fn recompute_row_min(&self, v: usize) -> K::C {
        let mut m = self.kernel.inf();
        for c in 1..=self.y {
            let e = self.effective(v, c);
            if e < m {
                m = e;
            }
        }
        m
    }

    fn pending_swap(&mut self, old: &K::C, new: &K::C) {
        if self.kernel.is_inf(old) {
            self.pending_inf -= 1;
        } else {
            self.pending_fin = self.kernel.sub(&self.pending_fin, old);
        }
        if self.kernel.is_inf(new) {
            self.pending_inf += 1;
        } else {
            self.pending_fin = self.kernel.add(&self.pending_fin, new);
        }
    }

    fn width_lb(&self) -> u64 {
        (1..=self.y as usize)
            .map(|k| self.vload[k] + self.dload[k])
            .max()
            .unwrap_or(0)
    }

    fn bound(&self) -> K::C {
        if self.pending_inf > 0 {
            return self.kernel.inf();
        }
        let mut b = self.kernel.add(&self.decided, &self.pending_fin);
        b = self.kernel.add(&b, &self.kernel.len_times(self.both_und));
        self.kernel
            .add(&b, &self.kernel.extra_term(self.width_lb(), self.h_lb))
    }

    /// Apply `v := c`. Precondition: `effective(v, c)` is finite. Returns
    /// the height bound to restore on pop.
    fn push(&mut self, v: usize, c: u32) -> u32 {
        self.nodes += 1;
        let own = self.effective(v, c);
        debug_assert!(!self.kernel.is_inf(&own));
        self.decided = self.kernel.add(&self.decided, &own);
        // v leaves the pending set; its row stays frozen until pop.
        let own_min = self.row_min[v].clone();
        if self.kernel.is_inf(&own_min) {
            self.pending_inf -= 1;
        } else {
            self.pending_fin = self.kernel.sub(&self.pending_fin, &own_min);
        }
        self.layers[v] = c;
        self.vload[c as usize] += 1;
        let prev_h = self.h_lb;
        self.h_lb = self.h_lb.max(c);

        for &a in &self.incident[v] {
            let (t, h) = self.arcs[a];
            let u = if t == v { h } else { t };
            if self.layers[u] != 0 {
                // Both ends decided: the pair cost entered `decided` via
                // `own` above; only the dummy spans are new.
                let (lo, hi) = if self.layers[t] < self.layers[h] {
                    (self.layers[t], self.layers[h])
                } else {
                    (self.layers[h], self.layers[t])
                };
                for k in lo + 1..hi {
                    self.dload[k as usize] += 1;
                }
            } else {
                self.both_und -= 1;
                let old_min = self.row_min[u].clone();
                for cu in 1..=self.y {
                    let delta = if t == v {
                        self.kernel.pair_cost(c, cu)
                    } else {
                        self.kernel.pair_cost(cu, c)
                    };
                    let i = self.idx(u, cu);
                    if self.kernel.is_inf(&delta) {
                        self.infs[i] += 1;
                    } else {
                        self.fin[i] = self.kernel.add(&self.fin[i], &delta);
                    }
                }
                let new_min = self.recompute_row_min(u);
                self.row_min[u] = new_min.clone();
                self.pending_swap(&old_min, &new_min);
            }
        }
        prev_h
    }

    fn pop(&mut self, v: usize, c: u32, prev_h: u32) {
        for &a in &self.incident[v] {
            let (t, h) = self.arcs[a];
            let u = if t == v { h } else { t };
            if self.layers[u] != 0 {
                let (lo, hi) = if self.layers[t] < self.layers[h] {
                    (self.layers[t], self.layers[h])
                } else {
                    (self.layers[h], self.layers[t])
                };
                for k in lo + 1..hi {
                    self.dload[k as usize] -= 1;
                }
            } else {
                self.both_und += 1;
                let old_min = self.row_min[u].clone();
                for cu in 1..=self.y {
                    let delta = if t == v {
                        self.kernel.pair_cost(c, cu)
                    } else {
                        self.kernel.pair_cost(cu, c)
                    };
                    let i = self.idx(u, cu);
                    if self.kernel.is_inf(&delta) {
                        self.infs[i] -= 1;
                    } else {
                        self.fin[i] = self.kernel.sub(&self.fin[i], &delta);
                    }
                }
                let new_min = self.recompute_row_min(u);
                self.row_min[u] = new_min.clone();
                self.pending_swap(&old_min, &new_min);
            }
        }
        self.vload[c as usize] -= 1;
        self.h_lb = prev_h;
        let own = self.effective(v, c);
        self.decided = self.kernel.sub(&self.decided, &own);
        let own_min = self.row_min[v].clone();
        if self.kernel.is_inf(&own_min) {
            self.pending_inf += 1;
        } else {
            self.pending_fin = self.kernel.add(&self.pending_fin, &own_min);
        }
        self.layers[v] = 0;
    }

    fn check_time(&mut self) {
        if self.nodes & TIME_CHECK_MASK == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.aborted = true;
                    let mut lb = None;
                    for b in &self.frame_bounds {
                        lb = Some(match lb {
                            None => b.clone(),
                            Some(x) => if *b < x { b.clone() } else { x },
                        });
                    }
                    self.abort_lb = lb;
                }
            }
        }
    }

    fn search(&mut self, depth: usize) {
        if depth == self.n {
            // Leaf: `decided` covers every arc and the geometry bounds are
            // exact, so the bound is the exact objective.
            let cost = self.kernel.add(
                &self.decided,
                &self.kernel.extra_term(self.width_lb(), self.h_lb),
            );
            debug_assert_eq!(cost, self.bound(), "leaf bound must be exact");
            let replace = match &self.best {
                None => true,
                Some((bc, bl)) => cost < *bc || (cost == *bc && self.layers < *bl),
            };
            if replace {
                self.best = Some((cost, self.layers.clone()));
            }
            return;
        }
        let v = self.order[depth];
        for c in 1..=self.y {
            if self.infs[self.idx(v, c)] > 0 {
                continue;
            }
            let prev_h = self.push(v, c);
            self.check_time();
            if self.aborted {
                self.pop(v, c, prev_h);
                return;
            }
            let b = self.bound();
            let dead_end = self.kernel.is_inf(&b);
            let pruned = dead_end
                || match &self.best {
                    Some((bc, _)) => b > *bc,
                    None => false,
                };
            if !pruned {
                self.frame_bounds.push(b);
                self.search(depth + 1);
                self.frame_bounds.pop();
            }
            self.pop(v, c, prev_h);
            if self.aborted {
                return;
            }
        }
    }
}

fn run<K: Kernel>(
    kernel: &K,
    g: &DiGraph,
    cfg: &SolveConfig,
    warm_layers: Option<Vec<u32>>,
    started: Instant,
) -> SolveResult {
    let n = g.n();
    let y = cfg.y_cap;
    let incident = g.incident_arcs();
    let mut order: Vec<usize> = (0..n).collect();
    if cfg.branch_order == BranchOrder::DegreeDesc {
        order.sort_by_key(|&v| (std::cmp::Reverse(incident[v].len()), v));
    }

    let mut search = Search {
        kernel,
        arcs: g.arcs(),
        incident: &incident,
        order,
        n,
        y,
        layers: vec![0u32; n],
        fin: vec![kernel.zero(); n * y as usize],
        infs: vec![0u32; n * y as usize],
        row_min: vec![kernel.zero(); n],
        pending_fin: kernel.zero(),
        pending_inf: 0,
        both_und: g.num_arcs() as u64,
        decided: kernel.zero(),
        vload: vec![0u64; y as usize + 1],
        dload: vec![0u64; y as usize + 1],
        h_lb: 0,
        nodes: 0,
        best: None,
        frame_bounds: Vec::new(),
        deadline: cfg.time_limit.map(|d| started + d),
        aborted: false,
        abort_lb: None,
    };

    if let Some(ls) = warm_layers {
        let mut bufs = super::kernel::EvalBufs::default();
        if let Some(cost) = assignment_cost(kernel, g, &ls, y, &mut bufs) {
            search.best = Some((cost, ls));
        }
    }

    let root_bound = search.bound();
    search.frame_bounds.push(root_bound);
    search.search(0);

    let elapsed = started.elapsed();
    let (status, best, objective, lower_bound) = if search.aborted {
        let lb = search.abort_lb.map(|b| kernel.to_ratio(&b));
        match search.best {
            Some((cost, layers)) => {
                let obj = kernel.to_ratio(&cost);
                let lb = match lb {
                    Some(l) => Some(l.min(obj.clone())),
                    None => Some(obj.clone()),
                };
                (
                    SolveStatus::Feasible,
                    Some(Layering::new(layers, y).expect("search stays in budget")),
                    Some(obj),
                    lb,
                )
            }
            None => (SolveStatus::Timeout, None, None, lb),
        }
    } else {
        match search.best {
            Some((cost, layers)) => {
                let obj = kernel.to_ratio(&cost);
                (
                    SolveStatus::Optimal,
                    Some(Layering::new(layers, y).expect("search stays in budget")),
                    Some(obj.clone()),
                    Some(obj),
                )
            }
            None => (SolveStatus::Infeasible, None, None, None),
        }
    };
    SolveResult {
        status,
        best,
        objective,
        lower_bound,
        nodes: search.nodes,
        wall_time: elapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_random, parse_edge_list, GenSpec};
    use crate::metrics::{evaluate, objective as metric_objective, Variant, WeightScheme};
    use crate::solve::brute_force;
    use num::rational::BigRational;
    use num::BigInt;
    use std::time::Duration;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn matches_brute_force_across_variants_and_schemes() {
        let graphs = [
            "0 1\n1 2\n0 2\n",
            "0 1\n1 2\n2 3\n3 0\n",          // directed cycle
            "1 0\n2 0\n3 0\n1 2\n",
            "0 1\n0 1\n1 2\n",                // parallel arcs
            "0 1\n1 2\n2 3\n0 3\n1 3\n0 2\n", // dense DAG
        ];
        let schemes = [
            WeightScheme::from_ints(1, 3, 2, 5),
            WeightScheme::new(rat(1, 2), rat(5, 3), rat(3, 4), rat(7, 2), rat(2, 1), rat(1, 3))
                .unwrap(),
            WeightScheme::from_ints(0, 1, 1, 1),
        ];
        for text in graphs {
            let g = parse_edge_list(text).unwrap();
            for variant in Variant::ALL {
                for scheme in &schemes {
                    for y in [3u32, 4] {
                        let cfg = SolveConfig::new(variant, scheme.clone(), y);
                        let b = brute_force(&g, &cfg).unwrap();
                        let s = branch_and_bound(&g, &cfg).unwrap();
                        assert_eq!(s.status, b.status, "{variant} y={y} {text:?}");
                        assert_eq!(s.objective, b.objective, "{variant} y={y} {text:?}");
                        assert_eq!(
                            s.best.as_ref().map(|l| l.layers()),
                            b.best.as_ref().map(|l| l.layers()),
                            "lex tie-break drifted: {variant} y={y} {text:?}"
                        );
                        if s.status == SolveStatus::Optimal {
                            assert_eq!(s.lower_bound, s.objective);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn optimum_verified_by_evaluator() {
        let g = parse_edge_list("0 1\n1 2\n2 3\n0 3\n1 3\n").unwrap();
        let scheme = WeightScheme::from_ints(2, 7, 3, 4);
        for variant in Variant::ALL {
            let cfg = SolveConfig::new(variant, scheme.clone(), 4);
            let r = branch_and_bound(&g, &cfg).unwrap();
            assert_eq!(r.status, SolveStatus::Optimal, "{variant}");
            let lay = r.best.unwrap();
            let m = evaluate(&g, &lay, &scheme).unwrap();
            let obj = metric_objective(&m, &scheme, variant).unwrap();
            assert_eq!(Some(obj), r.objective, "{variant}");
        }
    }

    #[test]
    fn warm_start_changes_nothing_observable() {
        let spec = GenSpec::new(12, 77);
        let g = generate_random(&spec).unwrap();
        let scheme = WeightScheme::from_ints(1, 4, 1, 0);
        for variant in [Variant::Dlp, Variant::GlpW] {
            let cfg = SolveConfig::new(variant, scheme.clone(), 5);
            let cold = branch_and_bound(&g, &cfg).unwrap();
            let warm = solve_with_restarts(&g, &cfg).unwrap();
            assert_eq!(cold.status, warm.status);
            assert_eq!(cold.objective, warm.objective);
            assert_eq!(
                cold.best.as_ref().map(|l| l.layers()),
                warm.best.as_ref().map(|l| l.layers())
            );
            assert!(warm.nodes <= cold.nodes, "warm start may only prune more");
        }
    }

    #[test]
    fn cyclic_graph_infeasible_for_directed_variants() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n").unwrap();
        let cfg = SolveConfig::new(Variant::Dlp, WeightScheme::from_ints(1, 0, 0, 0), 5);
        let r = branch_and_bound(&g, &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert_eq!(r.nodes, 0, "settled by the pre-check");
    }

    #[test]
    fn small_clique_infeasibility_settled_by_precheck() {
        let g = parse_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
        let cfg = SolveConfig::new(Variant::Glp, WeightScheme::from_ints(1, 1, 0, 0), 3);
        let r = branch_and_bound(&g, &cfg).unwrap();
        let b = brute_force(&g, &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert_eq!(r.nodes, 0, "exact coloring pre-check settles n = 4");
        assert_eq!(b.status, SolveStatus::Infeasible);
    }

    #[test]
    fn exhaustion_proves_infeasibility_beyond_precheck_reach() {
        // K5 plus a pendant path pushes n past the exact-coloring limit,
        // so the pre-check is inconclusive and the search itself must
        // prove there is no 4-layer assignment. Infinite cost rows cut
        // the tree down to clique prefixes, so exhaustion stays cheap.
        let mut arcs = Vec::new();
        for i in 0..5usize {
            for j in i + 1..5 {
                arcs.push((i, j));
            }
        }
        for v in 5..15usize {
            arcs.push((v, v + 1));
        }
        arcs.push((0, 5));
        let g = DiGraph::new(16, arcs).unwrap();
        assert!(g.min_feasible_layers() >= 5);
        let cfg = SolveConfig::new(Variant::Glp, WeightScheme::from_ints(1, 1, 0, 0), 4);
        let r = branch_and_bound(&g, &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert!(r.nodes > 0, "no pre-check applies at n = 16");
    }

    #[test]
    fn zero_time_limit_aborts_large_search() {
        let spec = GenSpec::new(24, 5);
        let g = generate_random(&spec).unwrap();
        let scheme = WeightScheme::from_ints(1, 2, 0, 0);
        let mut cfg = SolveConfig::new(Variant::Glp, scheme, 10);
        cfg.time_limit = Some(Duration::ZERO);
        let r = branch_and_bound(&g, &cfg).unwrap();
        match r.status {
            SolveStatus::Feasible => {
                let lb = r.lower_bound.expect("bound always proven");
                assert!(lb <= r.objective.unwrap());
            }
            SolveStatus::Timeout => assert!(r.best.is_none()),
            other => panic!("expected an aborted status, got {other}"),
        }
    }

    #[test]
    fn branch_order_does_not_change_the_answer() {
        let g = parse_edge_list("0 2\n1 2\n2 3\n3 4\n1 4\n").unwrap();
        let scheme = WeightScheme::from_ints(1, 5, 2, 0);
        for variant in [Variant::GlpW, Variant::Dlp] {
            let mut a = SolveConfig::new(variant, scheme.clone(), 4);
            a.branch_order = BranchOrder::Input;
            let mut b = SolveConfig::new(variant, scheme.clone(), 4);
            b.branch_order = BranchOrder::DegreeDesc;
            let ra = branch_and_bound(&g, &a).unwrap();
            let rb = branch_and_bound(&g, &b).unwrap();
            assert_eq!(ra.objective, rb.objective);
            assert_eq!(
                ra.best.as_ref().map(|l| l.layers()),
                rb.best.as_ref().map(|l| l.layers())
            );
        }
    }

    #[test]
    fn ms_star_geometry_bound_is_exact_at_leaves() {
        let g = parse_edge_list("0 1\n0 2\n1 3\n2 3\n").unwrap();
        let scheme = WeightScheme::new(
            rat(1, 1),
            rat(2, 1),
            rat(0, 1),
            rat(3, 2),
            rat(2, 1),
            rat(1, 1),
        )
        .unwrap();
        let cfg = SolveConfig::new(Variant::GlpMsStar, scheme.clone(), 4);
        let r = branch_and_bound(&g, &cfg).unwrap();
        let b = brute_force(&g, &cfg).unwrap();
        assert_eq!(r.objective, b.objective);
        assert_eq!(r.status, SolveStatus::Optimal);
    }
}
