//! Serializable shapes for `solve`, `validate` and `bench` output.
//!
//! Exact rationals are serialized as fraction strings (`"3/4"`, `"12"`) so
//! downstream comparisons never see float drift; `wall_time` (seconds) is
//! the only field that varies between identical runs.

use layerforge::format_ratio;
use layerforge::metrics::{Metrics, WeightScheme};
use num::rational::BigRational;
use serde::Serialize;

#[derive(Serialize)]
pub struct WeightsOut {
    pub w_len: String,
    pub w_rev: String,
    pub w_wid: String,
    pub w_scl: String,
    pub r_w: String,
    pub r_h: String,
}

impl WeightsOut {
    pub fn from_scheme(s: &WeightScheme) -> Self {
        WeightsOut {
            w_len: format_ratio(&s.w_len),
            w_rev: format_ratio(&s.w_rev),
            w_wid: format_ratio(&s.w_wid),
            w_scl: format_ratio(&s.w_scl),
            r_w: format_ratio(&s.r_w),
            r_h: format_ratio(&s.r_h),
        }
    }
}

#[derive(Serialize)]
pub struct MetricsOut {
    pub total_length: u64,
    pub reversed: u64,
    /// Dummy counts of the interior layers `2..=Y-1`, in layer order.
    pub dummies: Vec<u64>,
    pub width: u64,
    pub height: u32,
    pub scale: String,
    pub inv_scale: String,
    pub objective: String,
}

impl MetricsOut {
    pub fn new(m: &Metrics, objective: &BigRational) -> Self {
        MetricsOut {
            total_length: m.total_length,
            reversed: m.reversed,
            dummies: m.dummies.values().copied().collect(),
            width: m.width,
            height: m.height,
            scale: format_ratio(&m.scale),
            inv_scale: format_ratio(&m.inv_scale),
            objective: format_ratio(objective),
        }
    }
}

/// One solver invocation, as printed by `solve` (JSON) and summarized by
/// `bench` (CSV row).
#[derive(Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub family: String,
    pub variant: String,
    pub preset: Option<String>,
    pub y_layers: u32,
    pub weights: WeightsOut,
    pub status: String,
    pub objective: Option<String>,
    pub lower_bound: Option<String>,
    pub nodes: u64,
    pub wall_time: f64,
    pub layering: Option<Vec<u32>>,
    pub metrics: Option<MetricsOut>,
}

/// Verdict printed by `validate`.
#[derive(Serialize)]
pub struct ValidationOut {
    pub feasible: bool,
    pub variant: String,
    pub metrics: Option<MetricsOut>,
}

/// Verdict printed by `check-solution`.
#[derive(Serialize)]
pub struct CheckOut {
    pub family: String,
    pub variant: String,
    pub feasible: bool,
    pub violation: Option<String>,
    pub layering: Option<Vec<u32>>,
    pub model_objective: Option<String>,
    pub evaluator_objective: Option<String>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}
