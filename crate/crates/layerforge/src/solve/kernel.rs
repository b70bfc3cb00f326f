//! Exact cost arithmetic for the solvers.
//!
//! Both solvers price partial and complete assignments through a small
//! kernel interface. Two implementations exist:
//!
//! * [`IntKernel`] — weights are pre-multiplied by the least common
//!   denominator `D` so every cost is an `i128`; this is the hot path and
//!   covers every variant whose objective stays integral after one global
//!   scaling (all of them except `glp-ms`, whose scale term has an
//!   assignment-dependent denominator);
//! * [`RatKernel`] — plain [`BigRational`] arithmetic, used for `glp-ms`
//!   and as a fallback when scaled magnitudes could overflow.
//!
//! Selection is automatic and never changes results: both kernels compute
//! the same exact rationals, only the representation differs. Infeasible
//! layer pairs (equal layers, or upward arcs under a directed variant) cost
//! "infinity", which compares greater than every finite cost and saturates
//! under addition.
//!
//! `extra_term(width_lb, height_lb)` returns the variant's geometry term
//! evaluated at lower bounds that are also exact at completion: the width
//! argument is clamped from below by `ceil(n / Y)` (some layer must carry
//! that many vertices) and the inverse-scale term by the best value any
//! width/height split of `n` vertices could reach. Every term is monotone
//! in its arguments, which is what makes the search bound admissible.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::graph::DiGraph;
use crate::metrics::{Variant, WeightScheme};

pub(crate) trait Kernel {
    type C: Clone + Ord + std::fmt::Debug;

    fn zero(&self) -> Self::C;
    fn inf(&self) -> Self::C;
    fn is_inf(&self, c: &Self::C) -> bool;
    fn add(&self, a: &Self::C, b: &Self::C) -> Self::C;
    /// `a - b`; both must be finite.
    fn sub(&self, a: &Self::C, b: &Self::C) -> Self::C;
    /// Exact cost of one arc whose tail sits on `lt` and head on `lh`;
    /// infinite when the variant forbids the pair.
    fn pair_cost(&self, lt: u32, lh: u32) -> Self::C;
    /// `w_len * count`, the minimum cost of `count` undecided arcs.
    fn len_times(&self, count: u64) -> Self::C;
    /// Variant geometry term at (lower bounds of) width and height.
    fn extra_term(&self, width_lb: u64, height_lb: u32) -> Self::C;
    /// True when the geometry term depends on layer loads at all.
    fn needs_geometry(&self) -> bool;
    fn to_ratio(&self, c: &Self::C) -> BigRational;
}

/// Width floor from the pigeonhole principle: `ceil(n / y)`.
fn width_floor(n: usize, y: u32) -> u64 {
    if n == 0 {
        0
    } else {
        ((n as u64) + (y as u64) - 1) / (y as u64)
    }
}

/// Best inverse scale any layering of `n` vertices with at most `y` layers
/// could achieve: `min over feasible W of max(W / r_w, ceil(n / W) / r_h)`.
fn sbar_static(n: usize, y: u32, scheme: &WeightScheme) -> BigRational {
    let mut best: Option<BigRational> = None;
    for w in 1..=n.max(1) as u64 {
        let h = ((n as u64) + w - 1) / w;
        if h > y as u64 {
            continue;
        }
        let cand = crate::metrics::inv_scale_for(w, h as u32, &scheme.r_w, &scheme.r_h)
            .expect("positive dimensions");
        best = Some(match best {
            None => cand,
            Some(b) => b.min(cand),
        });
    }
    best.unwrap_or_else(BigRational::zero)
}

// ---------------------------------------------------------------------------
// Integer kernel
// ---------------------------------------------------------------------------

const INT_INF: i128 = i128::MAX / 4;

pub(crate) struct IntKernel {
    variant: Variant,
    scale: BigInt,
    w_len: i128,
    w_rev: i128,
    w_wid: i128,
    /// `D * w_scl / r_w` and `D * w_scl / r_h` for the inverse-scale term.
    c_w: i128,
    c_h: i128,
    sbar_floor: i128,
    w_floor: u64,
}

impl Kernel for IntKernel {
    type C = i128;

    fn zero(&self) -> i128 {
        0
    }

    fn inf(&self) -> i128 {
        INT_INF
    }

    fn is_inf(&self, c: &i128) -> bool {
        *c >= INT_INF
    }

    fn add(&self, a: &i128, b: &i128) -> i128 {
        if *a >= INT_INF || *b >= INT_INF {
            INT_INF
        } else {
            a + b
        }
    }

    fn sub(&self, a: &i128, b: &i128) -> i128 {
        debug_assert!(*a < INT_INF && *b < INT_INF);
        a - b
    }

    fn pair_cost(&self, lt: u32, lh: u32) -> i128 {
        if lt == lh || (self.variant.is_directed() && lh < lt) {
            return INT_INF;
        }
        let span = (lt.max(lh) - lt.min(lh)) as i128;
        let mut cost = self.w_len * span;
        if lh < lt {
            cost += self.w_rev;
        }
        cost
    }

    fn len_times(&self, count: u64) -> i128 {
        self.w_len * count as i128
    }

    fn extra_term(&self, width_lb: u64, height_lb: u32) -> i128 {
        match self.variant {
            Variant::Dlp | Variant::Glp => 0,
            Variant::DlpW | Variant::GlpW => {
                self.w_wid * width_lb.max(self.w_floor) as i128
            }
            Variant::GlpMsStar => {
                let by_w = self.c_w * width_lb.max(self.w_floor) as i128;
                let by_h = self.c_h * height_lb as i128;
                by_w.max(by_h).max(self.sbar_floor)
            }
            Variant::GlpMs => unreachable!("glp-ms always uses the rational kernel"),
        }
    }

    fn needs_geometry(&self) -> bool {
        !matches!(self.variant, Variant::Dlp | Variant::Glp)
    }

    fn to_ratio(&self, c: &i128) -> BigRational {
        BigRational::new(BigInt::from(*c), self.scale.clone())
    }
}

// ---------------------------------------------------------------------------
// Rational kernel
// ---------------------------------------------------------------------------

/// A rational cost with an explicit infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RCost {
    Fin(BigRational),
    Inf,
}

impl Ord for RCost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (RCost::Inf, RCost::Inf) => Ordering::Equal,
            (RCost::Inf, RCost::Fin(_)) => Ordering::Greater,
            (RCost::Fin(_), RCost::Inf) => Ordering::Less,
            (RCost::Fin(a), RCost::Fin(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for RCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) struct RatKernel {
    variant: Variant,
    scheme: WeightScheme,
    w_floor: u64,
    sbar_floor: BigRational,
}

impl Kernel for RatKernel {
    type C = RCost;

    fn zero(&self) -> RCost {
        RCost::Fin(BigRational::zero())
    }

    fn inf(&self) -> RCost {
        RCost::Inf
    }

    fn is_inf(&self, c: &RCost) -> bool {
        matches!(c, RCost::Inf)
    }

    fn add(&self, a: &RCost, b: &RCost) -> RCost {
        match (a, b) {
            (RCost::Fin(x), RCost::Fin(y)) => RCost::Fin(x + y),
            _ => RCost::Inf,
        }
    }

    fn sub(&self, a: &RCost, b: &RCost) -> RCost {
        match (a, b) {
            (RCost::Fin(x), RCost::Fin(y)) => RCost::Fin(x - y),
            _ => unreachable!("subtraction of infinite costs"),
        }
    }

    fn pair_cost(&self, lt: u32, lh: u32) -> RCost {
        if lt == lh || (self.variant.is_directed() && lh < lt) {
            return RCost::Inf;
        }
        let span = BigRational::from_integer(BigInt::from(lt.max(lh) - lt.min(lh)));
        let mut cost = &self.scheme.w_len * span;
        if lh < lt {
            cost += &self.scheme.w_rev;
        }
        RCost::Fin(cost)
    }

    fn len_times(&self, count: u64) -> RCost {
        RCost::Fin(&self.scheme.w_len * BigRational::from_integer(BigInt::from(count)))
    }

    fn extra_term(&self, width_lb: u64, height_lb: u32) -> RCost {
        let w = width_lb.max(self.w_floor);
        match self.variant {
            Variant::Dlp | Variant::Glp => self.zero(),
            Variant::DlpW | Variant::GlpW => RCost::Fin(
                &self.scheme.w_wid * BigRational::from_integer(BigInt::from(w)),
            ),
            Variant::GlpMsStar => {
                let sbar =
                    crate::metrics::inv_scale_for(w, height_lb.max(1), &self.scheme.r_w, &self.scheme.r_h)
                        .expect("positive dimensions")
                        .max(self.sbar_floor.clone());
                RCost::Fin(&self.scheme.w_scl * sbar)
            }
            Variant::GlpMs => {
                // Upper bound on the scale gives a lower bound on -w_scl * S.
                let s = crate::metrics::scale_for(w, height_lb.max(1), &self.scheme.r_w, &self.scheme.r_h)
                    .expect("positive dimensions");
                RCost::Fin(-(&self.scheme.w_scl * s))
            }
        }
    }

    fn needs_geometry(&self) -> bool {
        !matches!(self.variant, Variant::Dlp | Variant::Glp)
    }

    fn to_ratio(&self, c: &RCost) -> BigRational {
        match c {
            RCost::Fin(x) => x.clone(),
            RCost::Inf => unreachable!("infinite cost escaped the search"),
        }
    }
}

// ---------------------------------------------------------------------------
// Kernel selection
// ---------------------------------------------------------------------------

pub(crate) enum AnyKernel {
    Int(IntKernel),
    Rat(RatKernel),
}

/// Pick the integer kernel whenever the variant's objective becomes
/// integral under one global scaling and the scaled magnitudes have ample
/// `i128` headroom; otherwise fall back to rationals.
pub(crate) fn make_kernel(
    n: usize,
    num_arcs: usize,
    y: u32,
    variant: Variant,
    scheme: &WeightScheme,
) -> AnyKernel {
    let w_floor = width_floor(n, y);
    let rat = || {
        AnyKernel::Rat(RatKernel {
            variant,
            scheme: scheme.clone(),
            w_floor,
            sbar_floor: if variant == Variant::GlpMsStar {
                sbar_static(n, y, scheme)
            } else {
                BigRational::zero()
            },
        })
    };
    if variant == Variant::GlpMs {
        return rat();
    }

    let scl_w = &scheme.w_scl / &scheme.r_w;
    let scl_h = &scheme.w_scl / &scheme.r_h;
    let mut denom = scheme.w_len.denom().lcm(scheme.w_rev.denom());
    if variant.has_width_term() {
        denom = denom.lcm(scheme.w_wid.denom());
    }
    if variant == Variant::GlpMsStar {
        denom = denom.lcm(scl_w.denom()).lcm(scl_h.denom());
    }
    let d = BigRational::from_integer(denom.clone());
    let to_int = |r: &BigRational| -> BigInt {
        let scaled = r * &d;
        debug_assert!(scaled.is_integer());
        scaled.to_integer()
    };
    let w_len = to_int(&scheme.w_len);
    let w_rev = to_int(&scheme.w_rev);
    // Unused weights are zeroed rather than scaled: their denominators
    // were not folded into `d`.
    let w_wid = if variant.has_width_term() {
        to_int(&scheme.w_wid)
    } else {
        BigInt::zero()
    };
    let (c_w, c_h) = if variant == Variant::GlpMsStar {
        (to_int(&scl_w), to_int(&scl_h))
    } else {
        (BigInt::zero(), BigInt::zero())
    };

    // Coarse magnitude guard: the largest conceivable total cost.
    let big_n = BigInt::from(n.max(1));
    let big_a = BigInt::from(num_arcs as u64 + 1);
    let big_y = BigInt::from(y);
    let max_load = &big_n + &big_a * &big_y;
    let worst = (&w_len * &big_y + &w_rev) * &big_a
        + &w_wid * &max_load
        + &c_w * &max_load
        + &c_h * &big_y;
    if worst.abs() > (BigInt::one() << 100) {
        return rat();
    }
    let as_i128 = |b: &BigInt| b.to_i128().expect("guarded magnitude fits i128");

    let sbar_floor = if variant == Variant::GlpMsStar {
        let sbar = sbar_static(n, y, scheme);
        let scaled = &scheme.w_scl * sbar * &d;
        debug_assert!(scaled.is_integer());
        as_i128(&scaled.to_integer())
    } else {
        0
    };
    AnyKernel::Int(IntKernel {
        variant,
        scale: denom,
        w_len: as_i128(&w_len),
        w_rev: as_i128(&w_rev),
        w_wid: as_i128(&w_wid),
        c_w: as_i128(&c_w),
        c_h: as_i128(&c_h),
        sbar_floor,
        w_floor,
    })
}

/// Reusable buffers for whole-assignment evaluation.
#[derive(Default)]
pub(crate) struct EvalBufs {
    vcount: Vec<u64>,
    dummy: Vec<u64>,
}

/// Exact cost of a complete assignment, or `None` when some arc is
/// infeasible under the kernel's variant. `layers` must cover every vertex.
pub(crate) fn assignment_cost<K: Kernel>(
    kernel: &K,
    g: &DiGraph,
    layers: &[u32],
    y: u32,
    bufs: &mut EvalBufs,
) -> Option<K::C> {
    let mut total = kernel.zero();
    for &(t, h) in g.arcs() {
        let c = kernel.pair_cost(layers[t], layers[h]);
        if kernel.is_inf(&c) {
            return None;
        }
        total = kernel.add(&total, &c);
    }
    if kernel.needs_geometry() {
        let slots = y as usize + 1;
        bufs.vcount.clear();
        bufs.vcount.resize(slots, 0);
        bufs.dummy.clear();
        bufs.dummy.resize(slots, 0);
        for &l in layers {
            bufs.vcount[l as usize] += 1;
        }
        for &(t, h) in g.arcs() {
            let (lo, hi) = (layers[t].min(layers[h]), layers[t].max(layers[h]));
            for k in lo + 1..hi {
                bufs.dummy[k as usize] += 1;
            }
        }
        let width = (1..=y as usize)
            .map(|k| bufs.vcount[k] + bufs.dummy[k])
            .max()
            .unwrap_or(0);
        let height = (1..=y).filter(|&k| bufs.vcount[k as usize] > 0).max().unwrap_or(0);
        total = kernel.add(&total, &kernel.extra_term(width, height));
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::metrics::{evaluate, objective, Layering};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn fractional_scheme() -> WeightScheme {
        WeightScheme::new(rat(1, 2), rat(5, 3), rat(2, 1), rat(7, 4), rat(3, 2), rat(1, 1))
            .unwrap()
    }

    #[test]
    fn width_floor_pigeonhole() {
        assert_eq!(width_floor(10, 3), 4);
        assert_eq!(width_floor(9, 3), 3);
        assert_eq!(width_floor(0, 5), 0);
    }

    #[test]
    fn both_kernels_price_assignments_identically() {
        let g = parse_edge_list("0 1\n1 2\n0 2\n2 3\n").unwrap();
        let scheme = fractional_scheme();
        let y = 4u32;
        for variant in [
            Variant::Dlp,
            Variant::DlpW,
            Variant::Glp,
            Variant::GlpW,
            Variant::GlpMsStar,
        ] {
            let int_kernel = match make_kernel(4, 4, y, variant, &scheme) {
                AnyKernel::Int(k) => k,
                AnyKernel::Rat(_) => panic!("expected integer kernel"),
            };
            let rat_kernel = RatKernel {
                variant,
                scheme: scheme.clone(),
                w_floor: width_floor(4, y),
                sbar_floor: if variant == Variant::GlpMsStar {
                    sbar_static(4, y, &scheme)
                } else {
                    BigRational::zero()
                },
            };
            let mut bufs = EvalBufs::default();
            for layers in [[1u32, 2, 3, 4], [1, 2, 4, 3], [2, 3, 1, 4], [1, 3, 2, 4]] {
                let a = assignment_cost(&int_kernel, &g, &layers, y, &mut bufs)
                    .map(|c| int_kernel.to_ratio(&c));
                let b = assignment_cost(&rat_kernel, &g, &layers, y, &mut bufs)
                    .map(|c| rat_kernel.to_ratio(&c));
                assert_eq!(a, b, "kernel mismatch for {:?} {:?}", variant, layers);
                // Cross-check against the evaluator whenever feasible.
                if let Some(cost) = a {
                    let lay = Layering::new(layers.to_vec(), y).unwrap();
                    let m = evaluate(&g, &lay, &scheme).unwrap();
                    if let Ok(obj) = objective(&m, &scheme, variant) {
                        assert_eq!(cost, obj);
                    }
                }
            }
        }
    }

    #[test]
    fn infeasible_pairs_are_infinite() {
        let scheme = WeightScheme::from_ints(1, 2, 0, 0);
        let k = match make_kernel(2, 1, 3, Variant::Dlp, &scheme) {
            AnyKernel::Int(k) => k,
            _ => panic!(),
        };
        assert!(k.is_inf(&k.pair_cost(2, 2)));
        assert!(k.is_inf(&k.pair_cost(3, 1)));
        assert!(!k.is_inf(&k.pair_cost(1, 3)));
        let g = match make_kernel(2, 1, 3, Variant::Glp, &scheme) {
            AnyKernel::Int(k) => k,
            _ => panic!(),
        };
        // Undirected variant prices the reversed arc: 2 * w_len + w_rev.
        assert_eq!(g.pair_cost(3, 1), 4);
        assert_eq!(g.to_ratio(&g.pair_cost(3, 1)), rat(4, 1));
    }

    #[test]
    fn ms_variant_selects_rational_kernel() {
        let scheme = WeightScheme::from_ints(1, 1, 0, 5);
        assert!(matches!(
            make_kernel(4, 3, 4, Variant::GlpMs, &scheme),
            AnyKernel::Rat(_)
        ));
        assert!(matches!(
            make_kernel(4, 3, 4, Variant::Glp, &scheme),
            AnyKernel::Int(_)
        ));
    }

    #[test]
    fn huge_weights_fall_back_to_rationals() {
        let huge = BigRational::from_integer(BigInt::from(10).pow(40));
        let scheme = WeightScheme::new(
            huge.clone(),
            huge.clone(),
            huge.clone(),
            huge,
            BigRational::one(),
            BigRational::one(),
        )
        .unwrap();
        assert!(matches!(
            make_kernel(30, 45, 30, Variant::GlpW, &scheme),
            AnyKernel::Rat(_)
        ));
    }

    #[test]
    fn ms_extra_term_is_negative_scale_bound() {
        let scheme = WeightScheme::new(
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            rat(3, 1),
            rat(1, 1),
            rat(2, 1),
        )
        .unwrap();
        let k = RatKernel {
            variant: Variant::GlpMs,
            scheme,
            w_floor: 1,
            sbar_floor: BigRational::zero(),
        };
        // S = min(1/5, 2/10) = 1/5; term = -3 * 1/5.
        assert_eq!(k.extra_term(5, 10), RCost::Fin(rat(-3, 5)));
    }

    #[test]
    fn static_sbar_floor_scans_feasible_splits() {
        // 6 vertices, Y = 3, square box: W = 3, H = 2 gives max(3, 2) = 3;
        // W = 2 would need H = 3 -> max(2, 3) = 3; W = 6, H = 1 -> 6.
        let scheme = WeightScheme::from_ints(0, 0, 0, 1);
        assert_eq!(sbar_static(6, 3, &scheme), rat(3, 1));
        // With only 2 layers allowed, W >= 3.
        assert_eq!(sbar_static(6, 2, &scheme), rat(3, 1));
        assert_eq!(sbar_static(6, 1, &scheme), rat(6, 1));
    }
}
