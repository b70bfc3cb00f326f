//! Assignment formulation with linearized layer products.
//!
//! For every vertex `v` and layer `k` a binary `x_v_k` says "`v` sits on
//! layer `k`"; exactly one holds per vertex. For every arc `(u, v)` and
//! every ordered pair of *distinct* layers `(k, l)` a continuous
//! `p_u_k_v_l` in `[0, 1]` stands for the product `x_u_k * x_v_l`. The
//! linking rows make the products consistent with the indicators:
//!
//! * per arc and layer `k`: `sum_l p_u_k_v_l = x_u_k` (row sums),
//! * per arc and layer `l`: `sum_k p_u_k_v_l = x_v_l` (column sums).
//!
//! Same-layer products are not declared at all, which is what forbids
//! equal endpoint layers: if `x_u_k = x_v_k = 1`, the row sum at `k` must
//! be 1 using only products `p_u_k_v_l` with `l != k`, while every column
//! sum at `l != k` is 0 — contradiction. At integral points the two
//! families force every declared product to equal its defining product
//! exactly, so the objective
//!
//! `sum_arcs sum_{k>l} (k - l) * w_len * (p_u_l_v_k + p_u_k_v_l) + w_rev * p_u_k_v_l`
//!
//! prices edge length and reversed arcs exactly. Directed variants fix all
//! reversed products (`k > l` in `p_u_k_v_l`) to zero instead of pricing
//! them. Width variants add a continuous `W` with one load row per layer;
//! the inverse-scale variant adds `Sbar` with load rows against
//! `r_w * Sbar` and per-vertex height rows against `r_h * Sbar`.
//!
//! Everything is emitted in a fixed documented order: `x` vertex-major,
//! products arc-major then row-major, assignment rows, per-arc link rows,
//! then variant extras — so models, LP files, and counts are deterministic.

use num::rational::BigRational;
use num::Zero;

use crate::graph::DiGraph;
use crate::metrics::{evaluate, Layering, Variant, WeightScheme};
use crate::model::{big, bigu, ModelError, ModelIr, Sense, VarId, VarKind};

/// Variable lookup table for a QLA model, plus everything needed to encode
/// and decode layerings.
#[derive(Debug, Clone)]
pub struct QlaIndex {
    graph: DiGraph,
    scheme: WeightScheme,
    variant: Variant,
    y: u32,
    x: Vec<VarId>,
    p: Vec<VarId>,
    width_var: Option<VarId>,
    scale_var: Option<VarId>,
    num_vars: usize,
}

impl QlaIndex {
    /// The layer cap `Y` the model was built for.
    pub fn y_cap(&self) -> u32 {
        self.y
    }

    /// The variant the model was built for.
    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Id of `x_v_k` (`k` in `1..=Y`).
    pub fn x_var(&self, v: usize, k: u32) -> VarId {
        debug_assert!((1..=self.y).contains(&k));
        self.x[v * self.y as usize + (k - 1) as usize]
    }

    /// Id of `p_u_k_v_l` for arc index `a` (`k != l`, both in `1..=Y`).
    pub fn p_var(&self, a: usize, k: u32, l: u32) -> VarId {
        debug_assert!(k != l && (1..=self.y).contains(&k) && (1..=self.y).contains(&l));
        let y = self.y as usize;
        let row = (k - 1) as usize;
        let col = if l < k { l - 1 } else { l - 2 } as usize;
        self.p[a * y * (y - 1) + row * (y - 1) + col]
    }

    /// Id of the width scalar `W`, when the variant has one.
    pub fn width_var(&self) -> Option<VarId> {
        self.width_var
    }

    /// Id of the inverse-scale scalar `Sbar`, when the variant has one.
    pub fn scale_var(&self) -> Option<VarId> {
        self.scale_var
    }

    /// Encode a layering as a full assignment of the model's variables.
    ///
    /// Indicators and products are set to the 0/1 pattern of the layering;
    /// `W`/`Sbar` are set to the evaluator's exact width and inverse scale.
    /// Errors if the layering's cap differs from the model's, if an arc has
    /// equal endpoint layers, or if a directed variant sees a reversed arc.
    pub fn encode(&self, layering: &Layering) -> Result<Vec<BigRational>, ModelError> {
        if layering.y_cap() != self.y {
            return Err(ModelError::CapMismatch {
                expected: self.y,
                got: layering.y_cap(),
            });
        }
        let metrics = evaluate(&self.graph, layering, &self.scheme)?;
        if self.variant.is_directed() && metrics.reversed > 0 {
            return Err(ModelError::Metrics(
                crate::metrics::MetricsError::ReversedUnderDirected {
                    count: metrics.reversed,
                },
            ));
        }
        let mut point = vec![BigRational::zero(); self.num_vars];
        for v in 0..self.graph.n() {
            point[self.x_var(v, layering.layer(v)).0] = big(1);
        }
        for (a, &(t, h)) in self.graph.arcs().iter().enumerate() {
            let (lt, lh) = (layering.layer(t), layering.layer(h));
            point[self.p_var(a, lt, lh).0] = big(1);
        }
        if let Some(w) = self.width_var {
            point[w.0] = bigu(metrics.width);
        }
        if let Some(s) = self.scale_var {
            point[s.0] = metrics.inv_scale.clone();
        }
        Ok(point)
    }

    /// Decode a point back into a layering by reading the `x` indicators.
    ///
    /// Every vertex must have exactly one indicator equal to 1 and the rest
    /// 0; anything else errors.
    pub fn decode(&self, point: &[BigRational]) -> Result<Layering, ModelError> {
        if point.len() != self.num_vars {
            return Err(ModelError::PointSizeMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let one = big(1);
        let mut layers = Vec::with_capacity(self.graph.n());
        for v in 0..self.graph.n() {
            let mut chosen: Option<u32> = None;
            for k in 1..=self.y {
                let val = &point[self.x_var(v, k).0];
                if *val == one {
                    match chosen {
                        None => chosen = Some(k),
                        Some(first) => {
                            return Err(ModelError::DecodeMultipleLayers {
                                vertex: v,
                                first,
                                second: k,
                            })
                        }
                    }
                } else if !val.is_zero() {
                    return Err(ModelError::NotBinaryValue {
                        name: format!("x_{}_{}", v, k),
                        value: val.to_string(),
                    });
                }
            }
            layers.push(chosen.ok_or(ModelError::DecodeNoLayer { vertex: v })?);
        }
        Ok(Layering::new(layers, self.y)?)
    }
}

/// Build the assignment model for `g` with layer cap `y`.
///
/// Supports every variant except `glp-ms` (the scale term `min(...)` has no
/// linear encoding; use the direct solver for it). Needs `y >= 1`.
pub fn build_qla(
    g: &DiGraph,
    y: u32,
    variant: Variant,
    scheme: &WeightScheme,
) -> Result<(ModelIr, QlaIndex), ModelError> {
    if y < 1 {
        return Err(ModelError::YTooSmall { y, min: 1 });
    }
    if variant == Variant::GlpMs {
        return Err(ModelError::VariantUnsupported {
            family: "qla",
            variant,
        });
    }
    let n = g.n();
    let yk = y as usize;
    let mut ir = ModelIr::new(format!("qla_{}", variant.name().replace('-', "_")));
    let suffixes = crate::model::parallel_suffixes(g.arcs());

    let mut x = Vec::with_capacity(n * yk);
    for v in 0..n {
        for k in 1..=y {
            x.push(ir.add_var(
                format!("x_{}_{}", v, k),
                VarKind::Binary,
                big(0),
                Some(big(1)),
            ));
        }
    }
    let mut p = Vec::with_capacity(g.num_arcs() * yk * yk.saturating_sub(1));
    for (a, &(u, v)) in g.arcs().iter().enumerate() {
        for k in 1..=y {
            for l in 1..=y {
                if l == k {
                    continue;
                }
                p.push(ir.add_var(
                    format!("p_{}_{}_{}_{}{}", u, k, v, l, suffixes[a]),
                    VarKind::Continuous,
                    big(0),
                    Some(big(1)),
                ));
            }
        }
    }
    let width_var = if variant.has_width_term() {
        Some(ir.add_var("W".into(), VarKind::Continuous, big(0), None))
    } else {
        None
    };
    let scale_var = if variant == Variant::GlpMsStar {
        Some(ir.add_var("Sbar".into(), VarKind::Continuous, big(0), None))
    } else {
        None
    };

    let mut index = QlaIndex {
        graph: g.clone(),
        scheme: scheme.clone(),
        variant,
        y,
        x,
        p,
        width_var,
        scale_var,
        num_vars: ir.num_vars(),
    };

    // Assignment: each vertex on exactly one layer.
    for v in 0..n {
        let terms = (1..=y).map(|k| (index.x_var(v, k), big(1))).collect();
        ir.add_constraint(format!("asg_{}", v), terms, Sense::Eq, big(1));
    }

    // Linking rows per arc: row sums tie products to the tail indicator,
    // column sums to the head indicator.
    for (a, &(u, v)) in g.arcs().iter().enumerate() {
        let tag = &suffixes[a];
        for k in 1..=y {
            let mut terms: Vec<(VarId, BigRational)> = (1..=y)
                .filter(|&l| l != k)
                .map(|l| (index.p_var(a, k, l), big(1)))
                .collect();
            terms.push((index.x_var(u, k), big(-1)));
            ir.add_constraint(
                format!("row_{}_{}{}_k{}", u, v, tag, k),
                terms,
                Sense::Eq,
                big(0),
            );
        }
        for l in 1..=y {
            let mut terms: Vec<(VarId, BigRational)> = (1..=y)
                .filter(|&k| k != l)
                .map(|k| (index.p_var(a, k, l), big(1)))
                .collect();
            terms.push((index.x_var(v, l), big(-1)));
            ir.add_constraint(
                format!("col_{}_{}{}_l{}", u, v, tag, l),
                terms,
                Sense::Eq,
                big(0),
            );
        }
    }

    // Variant extras: per-layer load rows against W or r_w * Sbar, and for
    // the inverse-scale variant per-vertex height rows against r_h * Sbar.
    let load_bound: Option<(VarId, BigRational)> = match (width_var, scale_var) {
        (Some(w), None) => Some((w, big(-1))),
        (None, Some(s)) => Some((s, -scheme.r_w.clone())),
        _ => None,
    };
    if let Some((bound_var, bound_coef)) = load_bound {
        for k in 1..=y {
            let mut terms: Vec<(VarId, BigRational)> =
                (0..n).map(|v| (index.x_var(v, k), big(1))).collect();
            if k > 1 && k < y {
                for (a, _) in g.arcs().iter().enumerate() {
                    for hi in (k + 1)..=y {
                        for lo in 1..k {
                            terms.push((index.p_var(a, lo, hi), big(1)));
                            terms.push((index.p_var(a, hi, lo), big(1)));
                        }
                    }
                }
            }
            terms.push((bound_var, bound_coef.clone()));
            ir.add_constraint(format!("wid_k{}", k), terms, Sense::Le, big(0));
        }
    }
    if let Some(s) = scale_var {
        for v in 0..n {
            let mut terms: Vec<(VarId, BigRational)> = (1..=y)
                .map(|k| (index.x_var(v, k), big(k as i64)))
                .collect();
            terms.push((s, -scheme.r_h.clone()));
            ir.add_constraint(format!("hgt_{}", v), terms, Sense::Le, big(0));
        }
    }

    // Objective: for every arc and unordered layer pair {l < k}, the
    // downward product costs w_len * (k - l) and the upward one additionally
    // w_rev (generalized variants) or is fixed to zero (directed variants).
    for (a, _) in g.arcs().iter().enumerate() {
        for k in 2..=y {
            for l in 1..k {
                let span = big((k - l) as i64);
                let down = index.p_var(a, l, k);
                let up = index.p_var(a, k, l);
                ir.add_objective_term(down, &scheme.w_len * &span);
                if variant.is_directed() {
                    ir.fixings.push((up, big(0)));
                } else {
                    ir.add_objective_term(up, &scheme.w_len * &span + &scheme.w_rev);
                }
            }
        }
    }
    if let Some(w) = width_var {
        ir.add_objective_term(w, scheme.w_wid.clone());
    }
    if let Some(s) = scale_var {
        ir.add_objective_term(s, scheme.w_scl.clone());
    }

    index.num_vars = ir.num_vars();
    Ok((ir, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::metrics::objective;

    fn scheme() -> WeightScheme {
        WeightScheme::from_ints(1, 5, 2, 3)
    }

    fn lay(layers: &[u32], cap: u32) -> Layering {
        Layering::new(layers.to_vec(), cap).unwrap()
    }

    #[test]
    fn base_counts_match_the_construction() {
        // 5 vertices, 6 arcs, 4 layers: 2|A|Y + |V| rows; |V|Y indicators
        // plus |A| * Y * (Y-1) products.
        let g = parse_edge_list("0 1\n0 2\n1 2\n1 3\n2 4\n3 4\n").unwrap();
        let (ir, _) = build_qla(&g, 4, Variant::Glp, &scheme()).unwrap();
        assert_eq!(ir.num_constraints(), 2 * 6 * 4 + 5);
        assert_eq!(ir.num_vars(), 5 * 4 + 6 * 4 * 3);
        assert!(ir.fixings.is_empty());
    }

    #[test]
    fn no_arcs_means_assignment_only() {
        let g = crate::graph::DiGraph::new(3, vec![]).unwrap();
        let (ir, _) = build_qla(&g, 2, Variant::Glp, &scheme()).unwrap();
        assert_eq!(ir.num_constraints(), 3);
        assert_eq!(ir.num_vars(), 6);
    }

    #[test]
    fn width_variant_adds_scalar_and_layer_rows() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let (base, _) = build_qla(&g, 3, Variant::Glp, &scheme()).unwrap();
        let (ir, idx) = build_qla(&g, 3, Variant::GlpW, &scheme()).unwrap();
        assert_eq!(ir.num_vars(), base.num_vars() + 1);
        assert_eq!(ir.num_constraints(), base.num_constraints() + 3);
        assert!(idx.width_var().is_some());
    }

    #[test]
    fn inverse_scale_variant_adds_height_rows_too() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let (base, _) = build_qla(&g, 3, Variant::Glp, &scheme()).unwrap();
        let (ir, idx) = build_qla(&g, 3, Variant::GlpMsStar, &scheme()).unwrap();
        assert_eq!(ir.num_vars(), base.num_vars() + 1);
        assert_eq!(ir.num_constraints(), base.num_constraints() + 3 + 3);
        assert!(idx.scale_var().is_some());
    }

    #[test]
    fn directed_variant_fixes_upward_products() {
        let g = parse_edge_list("0 1\n").unwrap();
        let (ir, idx) = build_qla(&g, 3, Variant::Dlp, &scheme()).unwrap();
        // 3 unordered pairs, one upward product each.
        assert_eq!(ir.fixings.len(), 3);
        let point = idx.encode(&lay(&[1, 3], 3)).unwrap();
        ir.check_point(&point).unwrap();
        assert!(idx.encode(&lay(&[3, 1], 3)).is_err());
    }

    #[test]
    fn ms_variant_is_rejected() {
        let g = parse_edge_list("0 1\n").unwrap();
        assert_eq!(
            build_qla(&g, 3, Variant::GlpMs, &scheme()).unwrap_err(),
            ModelError::VariantUnsupported {
                family: "qla",
                variant: Variant::GlpMs
            }
        );
    }

    #[test]
    fn encode_satisfies_and_matches_evaluator() {
        let g = parse_edge_list("0 1\n1 2\n0 2\n").unwrap();
        let l = lay(&[2, 1, 3], 3);
        for variant in [Variant::Glp, Variant::GlpW, Variant::GlpMsStar] {
            let (ir, idx) = build_qla(&g, 3, variant, &scheme()).unwrap();
            let point = idx.encode(&l).unwrap();
            ir.check_point(&point).unwrap();
            let m = evaluate(&g, &l, &scheme()).unwrap();
            assert_eq!(
                ir.objective_at(&point).unwrap(),
                objective(&m, &scheme(), variant).unwrap()
            );
        }
    }

    #[test]
    fn encode_rejects_equal_layers_and_cap_mismatch() {
        let g = parse_edge_list("0 1\n").unwrap();
        let (_, idx) = build_qla(&g, 3, Variant::Glp, &scheme()).unwrap();
        assert!(idx.encode(&lay(&[2, 2], 3)).is_err());
        assert!(matches!(
            idx.encode(&lay(&[1, 2], 4)),
            Err(ModelError::CapMismatch { expected: 3, got: 4 })
        ));
    }

    #[test]
    fn decode_round_trips_and_rejects_junk() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let (_, idx) = build_qla(&g, 4, Variant::Glp, &scheme()).unwrap();
        let l = lay(&[4, 1, 3], 4);
        let point = idx.encode(&l).unwrap();
        assert_eq!(idx.decode(&point).unwrap(), l);

        let mut none_set = point.clone();
        none_set[idx.x_var(1, 1).0] = BigRational::zero();
        assert_eq!(
            idx.decode(&none_set).unwrap_err(),
            ModelError::DecodeNoLayer { vertex: 1 }
        );

        let mut two_set = point;
        two_set[idx.x_var(1, 2).0] = big(1);
        assert_eq!(
            idx.decode(&two_set).unwrap_err(),
            ModelError::DecodeMultipleLayers {
                vertex: 1,
                first: 1,
                second: 2
            }
        );
    }

    #[test]
    fn parallel_arcs_get_distinct_products() {
        let g = parse_edge_list("0 1\n0 1\n").unwrap();
        let (ir, idx) = build_qla(&g, 2, Variant::Glp, &scheme()).unwrap();
        assert_eq!(ir.num_vars(), 2 * 2 + 2 * 2);
        let names: Vec<&str> = ir.vars.iter().map(|v| v.name.as_str()).collect();
        assert!(names.contains(&"p_0_1_1_2"));
        assert!(names.contains(&"p_0_1_1_2_a2"));
        let point = idx.encode(&lay(&[2, 1], 2)).unwrap();
        ir.check_point(&point).unwrap();
        // Both parallel arcs are reversed: objective = 2 * (w_len + w_rev).
        assert_eq!(ir.objective_at(&point).unwrap(), big(12));
    }
}
