//! Layerings, feasibility checks, drawing metrics, and exact objectives.
//!
//! A [`Layering`] assigns every vertex a layer in `1..=y_cap` (layer 1 is
//! drawn topmost). The evaluator derives all quantities the optimization
//! variants price:
//!
//! * **total length** — sum of `|L(head) - L(tail)|` over arcs;
//! * **reversed** — number of arcs with `L(head) < L(tail)`, i.e. arcs that
//!   point upward in the drawing;
//! * **dummies** — for every interior layer `k` (`2..=y_cap-1`) the number
//!   of arcs that strictly span it (`min < k < max`); these are the dummy
//!   vertices a drawing routes through layer `k`;
//! * **width** — the maximum layer load, where the two boundary layers `1`
//!   and `y_cap` hold only vertices while interior layers hold vertices
//!   plus dummies (a spanning arc can never cross a boundary layer, so the
//!   distinction is structural rather than numerical);
//! * **height** — the largest occupied layer;
//! * **scale** `S = min(r_w / width, r_h / height)` — the largest factor at
//!   which the drawing fits a `r_w x r_h` box — and its reciprocal
//!   counterpart `S̄ = max(width / r_w, height / r_h)`.
//!
//! Six optimization variants combine these with nonnegative rational
//! weights. The directed variants (`dlp`, `dlp-w`) demand every arc point
//! strictly downward; the generalized ones (`glp`, `glp-w`, `glp-ms`,
//! `glp-ms-star`) only demand distinct endpoint layers and charge
//! `w_rev` per reversed arc. The `-w` variants add `w_wid * width`; the
//! minimum-scale variants subtract `w_scl * S` (`glp-ms`) or add
//! `w_scl * S̄` (`glp-ms-star`). All arithmetic is exact.

use num::rational::BigRational;
use num::{BigInt, One, Signed};
use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

use crate::graph::DiGraph;

/// Errors from layering construction, evaluation, and objectives.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("layering covers {got} vertices but the graph has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("vertex {vertex} assigned layer {layer}, outside 1..={y_cap}")]
    LayerOutOfRange {
        vertex: usize,
        layer: u32,
        y_cap: u32,
    },
    #[error("layer cap must be at least 1")]
    ZeroCap,
    #[error("arc ({tail}, {head}) has both endpoints on layer {layer}")]
    EqualEndpoints {
        tail: usize,
        head: usize,
        layer: u32,
    },
    #[error("metrics are undefined for the empty graph")]
    EmptyGraph,
    #[error("{count} reversed arc(s) present but the variant forbids reversals")]
    ReversedUnderDirected { count: u64 },
    #[error("weights must be nonnegative")]
    NegativeWeight,
    #[error("aspect-ratio components must be positive")]
    NonPositiveRatio,
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(usize),
    #[error("vertex {0} has no layer assignment")]
    MissingVertex(usize),
}

/// The six optimization variants.
///
/// Canonical names (accepted case-insensitively, `_` interchangeable with
/// `-`, and `glp-ms*` accepted for `glp-ms-star`): `dlp`, `dlp-w`, `glp`,
/// `glp-w`, `glp-ms`, `glp-ms-star`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Directed layering: arcs must point downward; minimize weighted length.
    Dlp,
    /// Directed layering plus `w_wid * width`.
    DlpW,
    /// Generalized layering: distinct endpoint layers; reversed arcs priced.
    Glp,
    /// Generalized layering plus `w_wid * width`.
    GlpW,
    /// Generalized layering minus `w_scl * scale` (maximize the scale).
    GlpMs,
    /// Generalized layering plus `w_scl * inverse scale`.
    GlpMsStar,
}

impl Variant {
    /// All variants, in canonical order.
    pub const ALL: [Variant; 6] = [
        Variant::Dlp,
        Variant::DlpW,
        Variant::Glp,
        Variant::GlpW,
        Variant::GlpMs,
        Variant::GlpMsStar,
    ];

    /// True for the directed variants that forbid reversed arcs.
    pub fn is_directed(self) -> bool {
        matches!(self, Variant::Dlp | Variant::DlpW)
    }

    /// True for the variants whose objective includes the width term.
    pub fn has_width_term(self) -> bool {
        matches!(self, Variant::DlpW | Variant::GlpW)
    }

    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            Variant::Dlp => "dlp",
            Variant::DlpW => "dlp-w",
            Variant::Glp => "glp",
            Variant::GlpW => "glp-w",
            Variant::GlpMs => "glp-ms",
            Variant::GlpMsStar => "glp-ms-star",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let canon = s.trim().to_ascii_lowercase().replace('_', "-");
        match canon.as_str() {
            "dlp" => Ok(Variant::Dlp),
            "dlp-w" => Ok(Variant::DlpW),
            "glp" => Ok(Variant::Glp),
            "glp-w" => Ok(Variant::GlpW),
            "glp-ms" => Ok(Variant::GlpMs),
            "glp-ms-star" | "glp-ms*" => Ok(Variant::GlpMsStar),
            _ => Err(MetricsError::UnknownVariant(s.to_string())),
        }
    }
}

/// Nonnegative objective weights plus the positive target aspect ratio.
///
/// Variants ignore the weights they do not use, so one scheme can drive all
/// six. `r_w : r_h` is the width-to-height box the scale terms measure
/// against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightScheme {
    pub w_len: BigRational,
    pub w_rev: BigRational,
    pub w_wid: BigRational,
    pub w_scl: BigRational,
    pub r_w: BigRational,
    pub r_h: BigRational,
}

impl WeightScheme {
    /// Validating constructor: weights must be nonnegative, ratio components
    /// positive.
    pub fn new(
        w_len: BigRational,
        w_rev: BigRational,
        w_wid: BigRational,
        w_scl: BigRational,
        r_w: BigRational,
        r_h: BigRational,
    ) -> Result<Self, MetricsError> {
        if w_len.is_negative() || w_rev.is_negative() || w_wid.is_negative() || w_scl.is_negative()
        {
            return Err(MetricsError::NegativeWeight);
        }
        if !r_w.is_positive() || !r_h.is_positive() {
            return Err(MetricsError::NonPositiveRatio);
        }
        Ok(WeightScheme {
            w_len,
            w_rev,
            w_wid,
            w_scl,
            r_w,
            r_h,
        })
    }

    /// Scheme from small integers, for tests and defaults.
    pub fn from_ints(w_len: i64, w_rev: i64, w_wid: i64, w_scl: i64) -> Self {
        WeightScheme::new(
            BigRational::from_integer(BigInt::from(w_len)),
            BigRational::from_integer(BigInt::from(w_rev)),
            BigRational::from_integer(BigInt::from(w_wid)),
            BigRational::from_integer(BigInt::from(w_scl)),
            BigRational::one(),
            BigRational::one(),
        )
        .expect("nonnegative integer weights are always valid")
    }

    /// Replace the aspect ratio, keeping the weights.
    pub fn with_ratio(mut self, r_w: BigRational, r_h: BigRational) -> Result<Self, MetricsError> {
        if !r_w.is_positive() || !r_h.is_positive() {
            return Err(MetricsError::NonPositiveRatio);
        }
        self.r_w = r_w;
        self.r_h = r_h;
        Ok(self)
    }
}

/// An assignment of every vertex to a layer in `1..=y_cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    layers: Vec<u32>,
    y_cap: u32,
}

impl Layering {
    /// Build a layering, validating every entry against the cap.
    pub fn new(layers: Vec<u32>, y_cap: u32) -> Result<Self, MetricsError> {
        if y_cap == 0 {
            return Err(MetricsError::ZeroCap);
        }
        for (v, &l) in layers.iter().enumerate() {
            if l == 0 || l > y_cap {
                return Err(MetricsError::LayerOutOfRange {
                    vertex: v,
                    layer: l,
                    y_cap,
                });
            }
        }
        Ok(Layering { layers, y_cap })
    }

    /// Layer of vertex `v` (1-based).
    pub fn layer(&self, v: usize) -> u32 {
        self.layers[v]
    }

    /// All layers, indexed by vertex id.
    pub fn layers(&self) -> &[u32] {
        &self.layers
    }

    /// The layer cap `Y`.
    pub fn y_cap(&self) -> u32 {
        self.y_cap
    }

    /// Number of vertices covered.
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    /// True when no vertices are covered.
    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Serialize as `vertex layer` lines, one per vertex in id order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, &l) in self.layers.iter().enumerate() {
            let _ = writeln!(s, "{} {}", v, l);
        }
        s
    }
}

/// Parse `vertex layer` lines into a layering over `n` vertices.
///
/// `#` starts a comment; every vertex in `0..n` must be assigned exactly
/// once. When `y_cap` is `None` the cap defaults to the largest layer used.
pub fn parse_layering(
    text: &str,
    n: usize,
    y_cap: Option<u32>,
) -> Result<Layering, MetricsError> {
    let mut layers: Vec<Option<u32>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            return Err(MetricsError::Parse {
                line: line_no,
                msg: format!("expected `vertex layer`, got `{}`", line.trim()),
            });
        }
        let v: usize = tokens[0].parse().map_err(|_| MetricsError::Parse {
            line: line_no,
            msg: format!("invalid vertex id `{}`", tokens[0]),
        })?;
        let l: u32 = tokens[1].parse().map_err(|_| MetricsError::Parse {
            line: line_no,
            msg: format!("invalid layer `{}`", tokens[1]),
        })?;
        if v >= n {
            return Err(MetricsError::Parse {
                line: line_no,
                msg: format!("vertex {} out of range for {} vertices", v, n),
            });
        }
        if layers[v].is_some() {
            return Err(MetricsError::DuplicateVertex(v));
        }
        layers[v] = Some(l);
    }
    let mut out = Vec::with_capacity(n);
    for (v, l) in layers.into_iter().enumerate() {
        out.push(l.ok_or(MetricsError::MissingVertex(v))?);
    }
    let cap = match y_cap {
        Some(c) => c,
        None => out.iter().copied().max().unwrap_or(1).max(1),
    };
    Layering::new(out, cap)
}

/// All drawing metrics of a layering, as computed by [`evaluate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metrics {
    /// Sum of `|L(head) - L(tail)|` over all arcs.
    pub total_length: u64,
    /// Number of arcs with `L(head) < L(tail)`.
    pub reversed: u64,
    /// Dummy-vertex count per interior layer `k` in `2..=y_cap-1`;
    /// every interior layer has an entry, zero included.
    pub dummies: BTreeMap<u32, u64>,
    /// Maximum layer load (vertices plus interior dummies).
    pub width: u64,
    /// Largest occupied layer.
    pub height: u32,
    /// `min(r_w / width, r_h / height)`.
    pub scale: BigRational,
    /// `max(width / r_w, height / r_h)`; always the reciprocal of `scale`.
    pub inv_scale: BigRational,
}

impl Metrics {
    /// Total dummy count over all interior layers.
    pub fn dummies_total(&self) -> u64 {
        self.dummies.values().sum()
    }
}

/// Largest factor at which a `w x h` drawing fits an `r_w x r_h` box.
pub fn scale_for(
    width: u64,
    height: u32,
    r_w: &BigRational,
    r_h: &BigRational,
) -> Result<BigRational, MetricsError> {
    if width == 0 || height == 0 {
        return Err(MetricsError::EmptyGraph);
    }
    if !r_w.is_positive() || !r_h.is_positive() {
        return Err(MetricsError::NonPositiveRatio);
    }
    let sw = r_w / BigRational::from_integer(BigInt::from(width));
    let sh = r_h / BigRational::from_integer(BigInt::from(height));
    Ok(sw.min(sh))
}

/// Reciprocal of [`scale_for`]: `max(width / r_w, height / r_h)`.
pub fn inv_scale_for(
    width: u64,
    height: u32,
    r_w: &BigRational,
    r_h: &BigRational,
) -> Result<BigRational, MetricsError> {
    if width == 0 || height == 0 {
        return Err(MetricsError::EmptyGraph);
    }
    if !r_w.is_positive() || !r_h.is_positive() {
        return Err(MetricsError::NonPositiveRatio);
    }
    let sw = BigRational::from_integer(BigInt::from(width)) / r_w;
    let sh = BigRational::from_integer(BigInt::from(height)) / r_h;
    Ok(sw.max(sh))
}

/// Scale an aspect ratio so its smaller component becomes 1.
///
/// Only the ratio `r_w : r_h` matters to the scale terms, so `(2, 4)` and
/// `(1, 2)` are interchangeable; this picks the canonical representative.
pub fn normalize_area(
    r_w: &BigRational,
    r_h: &BigRational,
) -> Result<(BigRational, BigRational), MetricsError> {
    if !r_w.is_positive() || !r_h.is_positive() {
        return Err(MetricsError::NonPositiveRatio);
    }
    let m = r_w.min(r_h).clone();
    Ok((r_w / &m, r_h / &m))
}

/// True when `layering` is feasible for `variant` on `g`: directed variants
/// need every arc to point strictly downward, the rest need distinct
/// endpoint layers.
pub fn check_feasible(
    g: &DiGraph,
    layering: &Layering,
    variant: Variant,
) -> Result<bool, MetricsError> {
    if layering.len() != g.n() {
        return Err(MetricsError::SizeMismatch {
            expected: g.n(),
            got: layering.len(),
        });
    }
    let ok = g.arcs().iter().all(|&(t, h)| {
        let (lt, lh) = (layering.layer(t), layering.layer(h));
        if variant.is_directed() {
            lh > lt
        } else {
            lh != lt
        }
    });
    Ok(ok)
}

/// Compute all metrics of a layering.
///
/// Errors when the layering covers the wrong vertex set, when the graph is
/// empty (scale is undefined), or when an arc has both endpoints on one
/// layer (no variant admits that, so the metrics would be meaningless).
pub fn evaluate(
    g: &DiGraph,
    layering: &Layering,
    scheme: &WeightScheme,
) -> Result<Metrics, MetricsError> {
    if layering.len() != g.n() {
        return Err(MetricsError::SizeMismatch {
            expected: g.n(),
            got: layering.len(),
        });
    }
    if g.n() == 0 {
        return Err(MetricsError::EmptyGraph);
    }
    let y = layering.y_cap();
    let mut total_length = 0u64;
    let mut reversed = 0u64;
    let mut dummy_load = vec![0u64; y as usize + 1];
    let mut vertex_load = vec![0u64; y as usize + 1];
    for v in 0..g.n() {
        vertex_load[layering.layer(v) as usize] += 1;
    }
    for &(t, h) in g.arcs() {
        let (lt, lh) = (layering.layer(t), layering.layer(h));
        if lt == lh {
            return Err(MetricsError::EqualEndpoints {
                tail: t,
                head: h,
                layer: lt,
            });
        }
        let (lo, hi) = (lt.min(lh), lt.max(lh));
        total_length += (hi - lo) as u64;
        if lh < lt {
            reversed += 1;
        }
        for k in lo + 1..hi {
            dummy_load[k as usize] += 1;
        }
    }
    let mut dummies = BTreeMap::new();
    for k in 2..y {
        dummies.insert(k, dummy_load[k as usize]);
    }
    let width = (1..=y)
        .map(|k| vertex_load[k as usize] + dummy_load[k as usize])
        .max()
        .unwrap_or(0);
    let height = (1..=y)
        .filter(|&k| vertex_load[k as usize] > 0)
        .max()
        .unwrap_or(0);
    let scale = scale_for(width, height, &scheme.r_w, &scheme.r_h)?;
    let inv_scale = inv_scale_for(width, height, &scheme.r_w, &scheme.r_h)?;
    Ok(Metrics {
        total_length,
        reversed,
        dummies,
        width,
        height,
        scale,
        inv_scale,
    })
}

/// The exact objective value of pre-computed metrics under a variant.
///
/// Directed variants error when any reversed arc is present; they have no
/// price for one.
pub fn objective(
    metrics: &Metrics,
    scheme: &WeightScheme,
    variant: Variant,
) -> Result<BigRational, MetricsError> {
    if variant.is_directed() && metrics.reversed > 0 {
        return Err(MetricsError::ReversedUnderDirected {
            count: metrics.reversed,
        });
    }
    let big = |x: u64| BigRational::from_integer(BigInt::from(x));
    let mut obj = &scheme.w_len * big(metrics.total_length);
    if !variant.is_directed() {
        obj += &scheme.w_rev * big(metrics.reversed);
    }
    match variant {
        Variant::DlpW | Variant::GlpW => obj += &scheme.w_wid * big(metrics.width),
        Variant::GlpMs => obj -= &scheme.w_scl * &metrics.scale,
        Variant::GlpMsStar => obj += &scheme.w_scl * &metrics.inv_scale,
        Variant::Dlp | Variant::Glp => {}
    }
    Ok(obj)
}

/// Shift occupied layers down to `1..=k`, preserving their order.
///
/// The cap is kept, so the result stays comparable to the input; the map is
/// idempotent and can only shrink length, width, height, and dummy counts.
pub fn normalize_layering(layering: &Layering) -> Layering {
    let mut occupied: Vec<u32> = layering.layers().to_vec();
    occupied.sort_unstable();
    occupied.dedup();
    let rank: BTreeMap<u32, u32> = occupied
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as u32 + 1))
        .collect();
    let layers = layering.layers().iter().map(|l| rank[l]).collect();
    Layering {
        layers,
        y_cap: layering.y_cap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn lay(layers: &[u32], cap: u32) -> Layering {
        Layering::new(layers.to_vec(), cap).unwrap()
    }

    fn unit_scheme() -> WeightScheme {
        WeightScheme::from_ints(1, 1, 1, 1)
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("GLP_MS*".parse::<Variant>().unwrap(), Variant::GlpMsStar);
        assert!("qlp".parse::<Variant>().is_err());
    }

    #[test]
    fn layering_validation() {
        assert!(Layering::new(vec![1, 2], 2).is_ok());
        assert_eq!(
            Layering::new(vec![1, 3], 2),
            Err(MetricsError::LayerOutOfRange {
                vertex: 1,
                layer: 3,
                y_cap: 2
            })
        );
        assert_eq!(Layering::new(vec![], 0), Err(MetricsError::ZeroCap));
    }

    #[test]
    fn feasibility_by_variant() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let down = lay(&[1, 2, 3], 3);
        let mixed = lay(&[2, 1, 3], 3);
        let flat = lay(&[1, 1, 2], 3);
        assert!(check_feasible(&g, &down, Variant::Dlp).unwrap());
        assert!(!check_feasible(&g, &mixed, Variant::Dlp).unwrap());
        assert!(check_feasible(&g, &mixed, Variant::Glp).unwrap());
        assert!(!check_feasible(&g, &flat, Variant::Glp).unwrap());
        let short = lay(&[1, 2], 2);
        assert!(check_feasible(&g, &short, Variant::Glp).is_err());
    }

    #[test]
    fn evaluate_small_path() {
        // 0 -> 1 -> 2 drawn on layers 1, 3, 2: one arc of length 2 spanning
        // layer 2, one reversed arc of length 1.
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let l = lay(&[1, 3, 2], 3);
        let m = evaluate(&g, &l, &unit_scheme()).unwrap();
        assert_eq!(m.total_length, 3);
        assert_eq!(m.reversed, 1);
        assert_eq!(m.dummies, BTreeMap::from([(2, 1)]));
        assert_eq!(m.width, 2); // layer 2 holds vertex 2 plus one dummy
        assert_eq!(m.height, 3);
        assert_eq!(m.scale, rat(1, 3));
        assert_eq!(m.inv_scale, rat(3, 1));
    }

    #[test]
    fn evaluate_rejects_equal_endpoints_and_empty() {
        let g = parse_edge_list("0 1\n").unwrap();
        let l = lay(&[2, 2], 3);
        assert_eq!(
            evaluate(&g, &l, &unit_scheme()),
            Err(MetricsError::EqualEndpoints {
                tail: 0,
                head: 1,
                layer: 2
            })
        );
        let empty = crate::graph::DiGraph::new(0, vec![]).unwrap();
        let l0 = Layering::new(vec![], 1).unwrap();
        assert_eq!(
            evaluate(&empty, &l0, &unit_scheme()),
            Err(MetricsError::EmptyGraph)
        );
    }

    #[test]
    fn dummy_map_covers_all_interior_layers() {
        let g = parse_edge_list("0 1\n").unwrap();
        let l = lay(&[1, 2], 5);
        let m = evaluate(&g, &l, &unit_scheme()).unwrap();
        assert_eq!(m.dummies, BTreeMap::from([(2, 0), (3, 0), (4, 0)]));
    }

    #[test]
    fn width_counts_dummies_only_on_interior_layers() {
        // Two long arcs over a middle layer holding one vertex.
        let g = parse_edge_list("0 3\n1 3\n2 4\n").unwrap();
        let l = lay(&[1, 1, 2, 3, 3], 3);
        let m = evaluate(&g, &l, &unit_scheme()).unwrap();
        // Layer 1: 2 vertices; layer 2: 1 vertex + 2 dummies; layer 3: 2.
        assert_eq!(m.width, 3);
        assert_eq!(m.dummies, BTreeMap::from([(2, 2)]));
    }

    #[test]
    fn scale_example_tall_box() {
        // Width 5, height 10 against a 1 x 2 box: S = min(1/5, 2/10) = 1/5.
        assert_eq!(scale_for(5, 10, &rat(1, 1), &rat(2, 1)).unwrap(), rat(1, 5));
        assert_eq!(
            inv_scale_for(5, 10, &rat(1, 1), &rat(2, 1)).unwrap(),
            rat(5, 1)
        );
    }

    #[test]
    fn objectives_by_variant() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        let mut scheme = WeightScheme::from_ints(2, 10, 3, 7);
        scheme = scheme.with_ratio(rat(2, 1), rat(1, 1)).unwrap();
        let down = lay(&[1, 2, 3], 3);
        let m = evaluate(&g, &down, &scheme).unwrap();
        // length 2, reversed 0, width 1, height 3, S = min(2/1, 1/3) = 1/3,
        // S̄ = max(1/2, 3/1) = 3.
        assert_eq!(objective(&m, &scheme, Variant::Dlp).unwrap(), rat(4, 1));
        assert_eq!(objective(&m, &scheme, Variant::DlpW).unwrap(), rat(7, 1));
        assert_eq!(objective(&m, &scheme, Variant::Glp).unwrap(), rat(4, 1));
        assert_eq!(objective(&m, &scheme, Variant::GlpW).unwrap(), rat(7, 1));
        assert_eq!(
            objective(&m, &scheme, Variant::GlpMs).unwrap(),
            rat(4, 1) - rat(7, 3)
        );
        assert_eq!(
            objective(&m, &scheme, Variant::GlpMsStar).unwrap(),
            rat(4, 1) + rat(21, 1)
        );
    }

    #[test]
    fn directed_objective_rejects_reversals() {
        let g = parse_edge_list("0 1\n").unwrap();
        let l = lay(&[2, 1], 2);
        let m = evaluate(&g, &l, &unit_scheme()).unwrap();
        assert_eq!(
            objective(&m, &unit_scheme(), Variant::Dlp),
            Err(MetricsError::ReversedUnderDirected { count: 1 })
        );
        assert!(objective(&m, &unit_scheme(), Variant::Glp).is_ok());
    }

    #[test]
    fn scale_times_inverse_scale_is_one() {
        for (w, h) in [(1u64, 1u32), (5, 10), (8, 4), (7, 3)] {
            let s = scale_for(w, h, &rat(3, 2), &rat(4, 7)).unwrap();
            let si = inv_scale_for(w, h, &rat(3, 2), &rat(4, 7)).unwrap();
            assert_eq!(s * si, rat(1, 1));
        }
    }

    #[test]
    fn normalize_area_examples() {
        assert_eq!(
            normalize_area(&rat(2, 1), &rat(4, 1)).unwrap(),
            (rat(1, 1), rat(2, 1))
        );
        assert_eq!(
            normalize_area(&rat(1, 2), &rat(1, 3)).unwrap(),
            (rat(3, 2), rat(1, 1))
        );
        assert!(normalize_area(&rat(0, 1), &rat(1, 1)).is_err());
    }

    #[test]
    fn normalize_layering_compacts_and_is_idempotent() {
        let l = lay(&[2, 5, 5, 9], 10);
        let n1 = normalize_layering(&l);
        assert_eq!(n1.layers(), &[1, 2, 2, 3]);
        assert_eq!(n1.y_cap(), 10);
        assert_eq!(normalize_layering(&n1), n1);
    }

    #[test]
    fn layering_text_round_trip() {
        let l = lay(&[3, 1, 2], 4);
        let text = l.to_text();
        assert_eq!(text, "0 3\n1 1\n2 2\n");
        let back = parse_layering(&text, 3, Some(4)).unwrap();
        assert_eq!(back, l);
        // Cap defaults to the maximum layer when unspecified.
        let defaulted = parse_layering(&text, 3, None).unwrap();
        assert_eq!(defaulted.y_cap(), 3);
    }

    #[test]
    fn layering_parse_errors() {
        assert_eq!(
            parse_layering("0 1\n0 2\n", 2, None),
            Err(MetricsError::DuplicateVertex(0))
        );
        assert_eq!(
            parse_layering("0 1\n", 2, None),
            Err(MetricsError::MissingVertex(1))
        );
        assert!(matches!(
            parse_layering("0 1 9\n", 1, None),
            Err(MetricsError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_layering("5 1\n", 2, None),
            Err(MetricsError::Parse { line: 1, .. })
        ));
    }
}
