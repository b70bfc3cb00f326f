//! Named experiment presets.
//!
//! A preset derives the layer budget and the weight scheme from the
//! instance itself (vertex and arc counts), so two graphs run under the
//! same preset generally use different absolute weights but identical
//! priorities:
//!
//! * `exp1` / `exp2` — `Y = ceil(1.6 * sqrt(|V|))`, `w_len = 1`,
//!   `w_rev = Y * |A|`. Reversal avoidance dominates length. `exp1` keeps
//!   the width weight negligible (`w_wid = 1`) while `exp2` raises it to
//!   `w_rev * |A| + |A| * Y + 1`, making width the top priority.
//! * `ms_1_2` / `ms_1_1` / `ms_2_1` — `Y = |V|`, `w_len = 1`,
//!   `w_rev = Y * |A|`, and `w_scl = w_rev * |A| + |A| * Y + 1` so the
//!   inverse scaling factor dominates everything else. The suffix is the
//!   target aspect ratio `r_h : r_w`, e.g. `ms_1_2` targets an area twice
//!   as wide as high. Ratios are already normalized (smaller component 1).

use anyhow::{bail, Result};
use layerforge::metrics::{Variant, WeightScheme};
use num::rational::BigRational;
use num::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Exp1,
    Exp2,
    Ms12,
    Ms11,
    Ms21,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Exp1,
        Preset::Exp2,
        Preset::Ms12,
        Preset::Ms11,
        Preset::Ms21,
    ];

    pub fn parse(name: &str) -> Result<Preset> {
        let wanted = name.trim().to_ascii_lowercase().replace('-', "_");
        for p in Preset::ALL {
            if p.name() == wanted {
                return Ok(p);
            }
        }
        bail!("unknown preset `{wanted}`; expected one of exp1, exp2, ms_1_2, ms_1_1, ms_2_1")
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Exp1 => "exp1",
            Preset::Exp2 => "exp2",
            Preset::Ms12 => "ms_1_2",
            Preset::Ms11 => "ms_1_1",
            Preset::Ms21 => "ms_2_1",
        }
    }

    /// The variant the preset's weights are designed for; `--variant`
    /// overrides it.
    pub fn default_variant(self) -> Variant {
        match self {
            Preset::Exp1 | Preset::Exp2 => Variant::GlpW,
            _ => Variant::GlpMsStar,
        }
    }

    /// Layer budget for an instance with `n` vertices.
    pub fn y_layers(self, n: usize) -> u32 {
        match self {
            Preset::Exp1 | Preset::Exp2 => ceil_1_6_sqrt(n),
            _ => n as u32,
        }
    }

    /// Weight scheme for an instance with `n` vertices and `m` arcs.
    pub fn scheme(self, n: usize, m: usize) -> WeightScheme {
        let y = self.y_layers(n) as i64;
        let m = m as i64;
        let w_rev = y * m;
        let dominant = w_rev * m + m * y + 1;
        let (w_wid, w_scl, r_h, r_w) = match self {
            Preset::Exp1 => (1, 0, 1, 1),
            Preset::Exp2 => (dominant, 0, 1, 1),
            Preset::Ms12 => (0, dominant, 1, 2),
            Preset::Ms11 => (0, dominant, 1, 1),
            Preset::Ms21 => (0, dominant, 2, 1),
        };
        WeightScheme::new(
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(w_rev)),
            BigRational::from_integer(BigInt::from(w_wid)),
            BigRational::from_integer(BigInt::from(w_scl)),
            BigRational::from_integer(BigInt::from(r_w)),
            BigRational::from_integer(BigInt::from(r_h)),
        )
        .expect("preset weights are valid by construction")
    }
}

/// `ceil(1.6 * sqrt(n))` computed exactly: the smallest `y` with
/// `25 * y^2 >= 64 * n` (since `1.6^2 = 64/25`).
pub fn ceil_1_6_sqrt(n: usize) -> u32 {
    let target = 64u128 * n as u128;
    let mut y = 1u32;
    while 25 * (y as u128) * (y as u128) < target {
        y += 1;
    }
    y
}
