//! Ordering formulation with cut indicators.
//!
//! For every vertex `v` and layer `k` in `1..=Y-1` a binary `y_k_v` says
//! "`v` lies strictly below layer `k`" (so `L(v) = 1 + sum_k y_k_v`).
//! Transitivity rows `y_k_v <= y_{k-1}_v` keep the indicators monotone.
//! Per arc `(u, v)` a binary `r_u_v` flags a reversed arc and six row
//! families force it to equal `[L(v) < L(u)]` at integral points:
//!
//! 1. `y_1_u >= r`            (a reversed arc needs `u` below layer 1)
//! 2. `y_1_v + r >= 1`        (a forward arc needs `v` below layer 1)
//! 3. `y_{k-1}_u - y_k_v <= r`       for `k` in `2..=Y-1`
//! 4. `y_{k-1}_v - y_k_u <= 1 - r`   for `k` in `2..=Y-1`
//! 5. `y_{Y-1}_u <= r`        (a forward arc cannot start on layer Y)
//! 6. `y_{Y-1}_v <= 1 - r`    (a reversed arc cannot end on layer Y)
//!
//! Families 1 and 3 also rule out equal endpoint layers when `r = 0`, and
//! 2 and 4 when `r = 1`, so no separate disequality row is needed. Binary
//! dummy flags `d_u_v_k` (`k` in `2..=Y-1`) are forced to 1 when the arc
//! strictly spans layer `k`, from both directions:
//!
//! `y_k_u - y_{k-1}_v <= d`  and  `y_k_v - y_{k-1}_u <= d`.
//!
//! They are only lower-bounded; a positive `w_len` pins them to the exact
//! dummy count at optimality (the builder records a note when `w_len` is
//! zero). Width rows bound every layer load by `W` (or `r_w * Sbar`):
//! layer 1 holds the vertices with `y_1_v = 0`, layer `Y` those with
//! `y_{Y-1}_v = 1`, and interior layer `k` holds vertices with
//! `y_{k-1}_v - y_k_v = 1` plus the dummies `d_u_v_k`. The inverse-scale
//! variant adds per-vertex height rows `1 + sum_k y_k_v <= r_h * Sbar`.
//!
//! The objective prices each arc as `w_rev * r + w_len * (1 + sum_k d)`;
//! the `1` per arc is the arc's minimum length, so the constant
//! `w_len * |A|` appears in the objective and total edge length is
//! recovered exactly. An optional row `sum_v y_1_v <= |V| - 1` (off by
//! default) pins at least one vertex to layer 1; it cuts shifted duplicate
//! optima without changing the optimal value.

use num::rational::BigRational;
use num::Zero;

use crate::graph::DiGraph;
use crate::metrics::{evaluate, Layering, Variant, WeightScheme};
use crate::model::{big, bigu, ModelError, ModelIr, Sense, VarId, VarKind};

/// Variable lookup table for a CGL model, plus everything needed to encode
/// and decode layerings.
#[derive(Debug, Clone)]
pub struct CglIndex {
    graph: DiGraph,
    scheme: WeightScheme,
    variant: Variant,
    y: u32,
    y_vars: Vec<VarId>,
    r_vars: Vec<VarId>,
    d_vars: Vec<VarId>,
    width_var: Option<VarId>,
    scale_var: Option<VarId>,
    num_vars: usize,
}

impl CglIndex {
    /// The layer cap `Y` the model was built for.
    pub fn y_cap(&self) -> u32 {
        self.y
    }

    /// The variant the model was built for.
    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Id of `y_k_v` (`k` in `1..=Y-1`).
    pub fn y_var(&self, k: u32, v: usize) -> VarId {
        debug_assert!((1..self.y).contains(&k));
        self.y_vars[v * (self.y - 1) as usize + (k - 1) as usize]
    }

    /// Id of `r_u_v` for arc index `a`.
    pub fn r_var(&self, a: usize) -> VarId {
        self.r_vars[a]
    }

    /// Id of `d_u_v_k` for arc index `a` (`k` in `2..=Y-1`).
    pub fn d_var(&self, a: usize, k: u32) -> VarId {
        debug_assert!((2..self.y).contains(&k));
        self.d_vars[a * (self.y - 2) as usize + (k - 2) as usize]
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
    /// Cut indicators get `y_k_v = [k < L(v)]`, reversal flags
    /// `r = [L(head) < L(tail)]`, dummy flags `d = [arc spans layer k]`,
    /// and `W`/`Sbar` the evaluator's exact values. Errors if the cap
    /// differs from the model's or an arc has equal endpoint layers.
    pub fn encode(&self, layering: &Layering) -> Result<Vec<BigRational>, ModelError> {
        if layering.y_cap() != self.y {
            return Err(ModelError::CapMismatch {
                expected: self.y,
                got: layering.y_cap(),
            });
        }
        let metrics = evaluate(&self.graph, layering, &self.scheme)?;
        let mut point = vec![BigRational::zero(); self.num_vars];
        for v in 0..self.graph.n() {
            for k in 1..self.y {
                if k < layering.layer(v) {
                    point[self.y_var(k, v).0] = big(1);
                }
            }
        }
        for (a, &(t, h)) in self.graph.arcs().iter().enumerate() {
            let (lt, lh) = (layering.layer(t), layering.layer(h));
            if lh < lt {
                point[self.r_var(a).0] = big(1);
            }
            let (lo, hi) = (lt.min(lh), lt.max(lh));
            for k in (lo + 1)..hi {
                point[self.d_var(a, k).0] = big(1);
            }
        }
        if let Some(w) = self.width_var {
            point[w.0] = bigu(metrics.width);
        }
        if let Some(s) = self.scale_var {
            point[s.0] = metrics.inv_scale.clone();
        }
        Ok(point)
    }

    /// Decode a point back into a layering from the cut indicators:
    /// `L(v) = 1 + sum_k y_k_v`.
    ///
    /// The indicators of each vertex must be binary and monotone
    /// non-increasing in `k` (a 1 above a 0 has no layer reading).
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
            let mut level = 1u32;
            let mut dropped = false;
            for k in 1..self.y {
                let val = &point[self.y_var(k, v).0];
                if *val == one {
                    if dropped {
                        return Err(ModelError::DecodeNonMonotone { vertex: v, k });
                    }
                    level += 1;
                } else if val.is_zero() {
                    dropped = true;
                } else {
                    return Err(ModelError::NotBinaryValue {
                        name: format!("y_{}_{}", k, v),
                        value: val.to_string(),
                    });
                }
            }
            layers.push(level);
        }
        Ok(Layering::new(layers, self.y)?)
    }
}

/// Build the ordering model for `g` with layer cap `y`.
///
/// Supports the width variant (`glp-w`) and the inverse-scale variant
/// (`glp-ms-star`); needs `y >= 3` so boundary and interior layers are
/// distinct. `first_layer_row` adds the optional layer-1 pinning row.
pub fn build_cgl(
    g: &DiGraph,
    y: u32,
    variant: Variant,
    scheme: &WeightScheme,
    first_layer_row: bool,
) -> Result<(ModelIr, CglIndex), ModelError> {
    if y < 3 {
        return Err(ModelError::YTooSmall { y, min: 3 });
    }
    if !matches!(variant, Variant::GlpW | Variant::GlpMsStar) {
        return Err(ModelError::VariantUnsupported {
            family: "cgl",
            variant,
        });
    }
    let n = g.n();
    let mut ir = ModelIr::new(format!("cgl_{}", variant.name().replace('-', "_")));
    if scheme.w_len.is_zero() {
        ir.notes.push(
            "w_len is zero: dummy flags are only lower-bounded, so decoded dummy \
             counts are upper bounds rather than exact"
                .into(),
        );
    }
    let suffixes = crate::model::parallel_suffixes(g.arcs());

    let mut y_vars = Vec::with_capacity(n * (y - 1) as usize);
    for v in 0..n {
        for k in 1..y {
            y_vars.push(ir.add_var(
                format!("y_{}_{}", k, v),
                VarKind::Binary,
                big(0),
                Some(big(1)),
            ));
        }
    }
    let mut r_vars = Vec::with_capacity(g.num_arcs());
    for (a, &(u, v)) in g.arcs().iter().enumerate() {
        r_vars.push(ir.add_var(
            format!("r_{}_{}{}", u, v, suffixes[a]),
            VarKind::Binary,
            big(0),
            Some(big(1)),
        ));
    }
    let mut d_vars = Vec::with_capacity(g.num_arcs() * (y - 2) as usize);
    for (a, &(u, v)) in g.arcs().iter().enumerate() {
        for k in 2..y {
            d_vars.push(ir.add_var(
                format!("d_{}_{}_{}{}", u, v, k, suffixes[a]),
                VarKind::Binary,
                big(0),
                Some(big(1)),
            ));
        }
    }
    let width_var = if variant == Variant::GlpW {
        Some(ir.add_var("W".into(), VarKind::Continuous, big(0), None))
    } else {
        None
    };
    let scale_var = if variant == Variant::GlpMsStar {
        Some(ir.add_var("Sbar".into(), VarKind::Continuous, big(0), None))
    } else {
        None
    };

    let index = CglIndex {
        graph: g.clone(),
        scheme: scheme.clone(),
        variant,
        y,
        y_vars,
        r_vars,
        d_vars,
        width_var,
        scale_var,
        num_vars: ir.num_vars(),
    };

    // Transitivity: below-k implies below-(k-1).
    for v in 0..n {
        for k in 2..y {
            ir.add_constraint(
                format!("tr_{}_k{}", v, k),
                vec![(index.y_var(k, v), big(1)), (index.y_var(k - 1, v), big(-1))],
                Sense::Le,
                big(0),
            );
        }
    }

    // Reversal rows (families 1-6 from the module docs).
    for (a, &(u, v)) in g.arcs().iter().enumerate() {
        let tag = &suffixes[a];
        let r = index.r_var(a);
        ir.add_constraint(
            format!("rev1_{}_{}{}", u, v, tag),
            vec![(index.y_var(1, u), big(1)), (r, big(-1))],
            Sense::Ge,
            big(0),
        );
        ir.add_constraint(
            format!("rev2_{}_{}{}", u, v, tag),
            vec![(index.y_var(1, v), big(1)), (r, big(1))],
            Sense::Ge,
            big(1),
        );
        for k in 2..y {
            ir.add_constraint(
                format!("rev3_{}_{}{}_k{}", u, v, tag, k),
                vec![
                    (index.y_var(k - 1, u), big(1)),
                    (index.y_var(k, v), big(-1)),
                    (r, big(-1)),
                ],
                Sense::Le,
                big(0),
            );
            ir.add_constraint(
                format!("rev4_{}_{}{}_k{}", u, v, tag, k),
                vec![
                    (index.y_var(k - 1, v), big(1)),
                    (index.y_var(k, u), big(-1)),
                    (r, big(1)),
                ],
                Sense::Le,
                big(1),
            );
        }
        ir.add_constraint(
            format!("rev5_{}_{}{}", u, v, tag),
            vec![(index.y_var(y - 1, u), big(1)), (r, big(-1))],
            Sense::Le,
            big(0),
        );
        ir.add_constraint(
            format!("rev6_{}_{}{}", u, v, tag),
            vec![(index.y_var(y - 1, v), big(1)), (r, big(1))],
            Sense::Le,
            big(1),
        );
    }

    // Dummy rows: an arc strictly spanning layer k forces d from both
    // directions.
    for (a, &(u, v)) in g.arcs().iter().enumerate() {
        let tag = &suffixes[a];
        for k in 2..y {
            let d = index.d_var(a, k);
            ir.add_constraint(
                format!("dum1_{}_{}{}_k{}", u, v, tag, k),
                vec![
                    (index.y_var(k, u), big(1)),
                    (index.y_var(k - 1, v), big(-1)),
                    (d, big(-1)),
                ],
                Sense::Le,
                big(0),
            );
            ir.add_constraint(
                format!("dum2_{}_{}{}_k{}", u, v, tag, k),
                vec![
                    (index.y_var(k, v), big(1)),
                    (index.y_var(k - 1, u), big(-1)),
                    (d, big(-1)),
                ],
                Sense::Le,
                big(0),
            );
        }
    }

    // Width rows: each layer load bounded by W (or r_w * Sbar).
    let (bound_var, bound_coef) = match (width_var, scale_var) {
        (Some(w), None) => (w, big(-1)),
        (None, Some(s)) => (s, -scheme.r_w.clone()),
        _ => unreachable!("exactly one scalar per supported variant"),
    };
    for k in 1..=y {
        let mut terms: Vec<(VarId, BigRational)> = Vec::new();
        let rhs;
        if k == 1 {
            // sum_v (1 - y_1_v) <= bound
            for v in 0..n {
                terms.push((index.y_var(1, v), big(-1)));
            }
            rhs = big(-(n as i64));
        } else if k == y {
            for v in 0..n {
                terms.push((index.y_var(y - 1, v), big(1)));
            }
            rhs = big(0);
        } else {
            for v in 0..n {
                terms.push((index.y_var(k - 1, v), big(1)));
                terms.push((index.y_var(k, v), big(-1)));
            }
            for (a, _) in g.arcs().iter().enumerate() {
                terms.push((index.d_var(a, k), big(1)));
            }
            rhs = big(0);
        }
        terms.push((bound_var, bound_coef.clone()));
        ir.add_constraint(format!("wid_k{}", k), terms, Sense::Le, rhs);
    }

    // Height rows for the inverse-scale variant: L(v) <= r_h * Sbar.
    if let Some(s) = scale_var {
        for v in 0..n {
            let mut terms: Vec<(VarId, BigRational)> =
                (1..y).map(|k| (index.y_var(k, v), big(1))).collect();
            terms.push((s, -scheme.r_h.clone()));
            ir.add_constraint(format!("hgt_{}", v), terms, Sense::Le, big(-1));
        }
    }

    if first_layer_row {
        let terms: Vec<(VarId, BigRational)> =
            (0..n).map(|v| (index.y_var(1, v), big(1))).collect();
        ir.add_constraint(
            "first_layer".into(),
            terms,
            Sense::Le,
            big(n as i64 - 1),
        );
    }

    // Objective: w_rev per reversal flag, w_len per dummy flag, plus the
    // per-arc minimum length as a constant, plus the scalar term.
    for (a, _) in g.arcs().iter().enumerate() {
        ir.add_objective_term(index.r_var(a), scheme.w_rev.clone());
        for k in 2..y {
            ir.add_objective_term(index.d_var(a, k), scheme.w_len.clone());
        }
    }
    ir.objective.constant = &scheme.w_len * bigu(g.num_arcs() as u64);
    if let Some(w) = width_var {
        ir.add_objective_term(w, scheme.w_wid.clone());
    }
    if let Some(s) = scale_var {
        ir.add_objective_term(s, scheme.w_scl.clone());
    }

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
    fn width_model_count_formula() {
        // (4|A| + |V| + 1)(Y-2) + 4|A| + 2 rows; (|V| + |A|)(Y-1) + 1 vars
        // counting y, r, d (|A|(Y-2) of the (Y-1) block) and W.
        let g = parse_edge_list("0 1\n0 2\n1 2\n1 3\n2 4\n3 4\n").unwrap();
        let (ir, _) = build_cgl(&g, 4, Variant::GlpW, &scheme(), false).unwrap();
        let (na, nv, y) = (6i64, 5i64, 4i64);
        assert_eq!(
            ir.num_constraints() as i64,
            (4 * na + nv + 1) * (y - 2) + 4 * na + 2
        );
        assert_eq!(ir.num_vars() as i64, nv * (y - 1) + na + na * (y - 2) + 1);
    }

    #[test]
    fn inverse_scale_model_adds_height_rows() {
        let g = parse_edge_list("0 1\n0 2\n1 2\n1 3\n2 4\n3 4\n").unwrap();
        let (w, _) = build_cgl(&g, 4, Variant::GlpW, &scheme(), false).unwrap();
        let (ms, _) = build_cgl(&g, 4, Variant::GlpMsStar, &scheme(), false).unwrap();
        assert_eq!(ms.num_constraints(), w.num_constraints() + 5);
        assert_eq!(ms.num_vars(), w.num_vars());
    }

    #[test]
    fn needs_three_layers_and_supported_variant() {
        let g = parse_edge_list("0 1\n").unwrap();
        assert_eq!(
            build_cgl(&g, 2, Variant::GlpW, &scheme(), false).unwrap_err(),
            ModelError::YTooSmall { y: 2, min: 3 }
        );
        assert_eq!(
            build_cgl(&g, 3, Variant::Glp, &scheme(), false).unwrap_err(),
            ModelError::VariantUnsupported {
                family: "cgl",
                variant: Variant::Glp
            }
        );
    }

    #[test]
    fn encode_satisfies_and_matches_evaluator() {
        let g = parse_edge_list("0 1\n1 2\n0 2\n").unwrap();
        for l in [
            lay(&[1, 2, 3], 3),
            lay(&[2, 1, 3], 3),
            lay(&[3, 2, 1], 3),
            lay(&[1, 3, 2], 3),
        ] {
            for variant in [Variant::GlpW, Variant::GlpMsStar] {
                let (ir, idx) = build_cgl(&g, 3, variant, &scheme(), false).unwrap();
                let point = idx.encode(&l).unwrap();
                ir.check_point(&point).unwrap();
                let m = evaluate(&g, &l, &scheme()).unwrap();
                assert_eq!(
                    ir.objective_at(&point).unwrap(),
                    objective(&m, &scheme(), variant).unwrap()
                );
            }
        }
    }

    #[test]
    fn decode_round_trips_and_rejects_non_monotone() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let (_, idx) = build_cgl(&g, 4, Variant::GlpW, &scheme(), false).unwrap();
        let l = lay(&[4, 1, 2], 4);
        let point = idx.encode(&l).unwrap();
        assert_eq!(idx.decode(&point).unwrap(), l);

        // y_1_0 = 0 but y_2_0 = 1: no layer reading.
        let mut bad = point;
        bad[idx.y_var(1, 0).0] = BigRational::zero();
        assert_eq!(
            idx.decode(&bad).unwrap_err(),
            ModelError::DecodeNonMonotone { vertex: 0, k: 2 }
        );
    }

    #[test]
    fn first_layer_row_is_opt_in() {
        let g = parse_edge_list("0 1\n").unwrap();
        let (off, _) = build_cgl(&g, 3, Variant::GlpW, &scheme(), false).unwrap();
        let (on, idx) = build_cgl(&g, 3, Variant::GlpW, &scheme(), true).unwrap();
        assert_eq!(on.num_constraints(), off.num_constraints() + 1);
        // A layering leaving layer 1 empty violates only the new row.
        let shifted = idx.encode(&lay(&[2, 3], 3)).unwrap();
        assert!(matches!(
            on.check_point(&shifted),
            Err(ModelError::Violated { name, .. }) if name == "first_layer"
        ));
        let grounded = idx.encode(&lay(&[1, 2], 3)).unwrap();
        on.check_point(&grounded).unwrap();
    }

    #[test]
    fn zero_length_weight_records_note() {
        let g = parse_edge_list("0 1\n").unwrap();
        let zero_len = WeightScheme::from_ints(0, 5, 2, 3);
        let (ir, _) = build_cgl(&g, 3, Variant::GlpW, &zero_len, false).unwrap();
        assert_eq!(ir.notes.len(), 1);
    }

    #[test]
    fn reversal_flag_is_forced_at_integral_points() {
        // Brute-force the claim: for every pair of distinct layers and both
        // values of r, the rows accept exactly r = [L(v) < L(u)].
        let g = parse_edge_list("0 1\n").unwrap();
        let (ir, idx) = build_cgl(&g, 4, Variant::GlpW, &scheme(), false).unwrap();
        for lu in 1..=4u32 {
            for lv in 1..=4u32 {
                if lu == lv {
                    continue;
                }
                let l = lay(&[lu, lv], 4);
                let good = idx.encode(&l).unwrap();
                ir.check_point(&good).unwrap();
                let mut flipped = good.clone();
                let r = idx.r_var(0).0;
                flipped[r] = &big(1) - &flipped[r];
                assert!(
                    ir.check_point(&flipped).is_err(),
                    "wrong r accepted for layers ({}, {})",
                    lu,
                    lv
                );
            }
        }
    }
}
