//! SVG rendering of layered drawings.
//!
//! Layers are horizontal rows, layer 1 at the top. Vertices of a layer are
//! evenly spaced in id order. Arcs are straight segments; wherever a
//! segment crosses an intermediate layer a small grey marker shows the
//! dummy vertex that would occupy it. Reversed arcs (head above tail) are
//! drawn dash-dotted. Output is deterministic: same graph and layering,
//! same bytes.

use anyhow::{bail, Result};
use layerforge::graph::DiGraph;
use layerforge::metrics::Layering;
use std::fmt::Write as _;

const CELL: f64 = 70.0;
const ROW_GAP: f64 = 80.0;
const MARGIN: f64 = 48.0;
const VERTEX_R: f64 = 14.0;
const DUMMY_R: f64 = 3.5;

pub fn render_svg(g: &DiGraph, layering: &Layering) -> Result<String> {
    if layering.len() != g.n() {
        bail!(
            "layering covers {} vertices but the graph has {}",
            layering.len(),
            g.n()
        );
    }
    for &(t, h) in g.arcs() {
        if layering.layer(t) == layering.layer(h) {
            bail!(
                "arc {} -> {} has both endpoints on layer {}; nothing to draw",
                t,
                h,
                layering.layer(t)
            );
        }
    }
    let height = layering.layers().iter().copied().max().unwrap_or(1);
    // Slot position of each vertex within its layer, id order.
    let mut per_layer: Vec<Vec<usize>> = vec![Vec::new(); height as usize + 1];
    for (v, &l) in layering.layers().iter().enumerate() {
        per_layer[l as usize].push(v);
    }
    let widest = per_layer.iter().map(Vec::len).max().unwrap_or(1).max(1);

    let mut x = vec![0.0f64; g.n()];
    let mut y = vec![0.0f64; g.n()];
    for (l, row) in per_layer.iter().enumerate().skip(1) {
        // Center each row within the widest one.
        let offset = (widest - row.len()) as f64 * CELL / 2.0;
        for (i, &v) in row.iter().enumerate() {
            x[v] = MARGIN + offset + (i as f64 + 0.5) * CELL;
            y[v] = MARGIN + (l as f64 - 1.0) * ROW_GAP;
        }
    }
    let w_px = MARGIN * 2.0 + widest as f64 * CELL;
    let h_px = MARGIN * 2.0 + (height as f64 - 1.0) * ROW_GAP;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">",
        w_px, h_px, w_px, h_px
    );
    let _ = writeln!(
        s,
        "  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" \
         markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">\
         <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#333\"/></marker></defs>"
    );

    // Arcs below vertices so circles overlay line ends.
    for &(t, h) in g.arcs() {
        let (lt, lh) = (layering.layer(t), layering.layer(h));
        let reversed = lh < lt;
        // Trim the segment so the arrowhead meets the circle border.
        let (x1, y1, x2, y2) = (x[t], y[t], x[h], y[h]);
        let len = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt().max(1.0);
        let (ux, uy) = ((x2 - x1) / len, (y2 - y1) / len);
        let (sx, sy) = (x1 + ux * VERTEX_R, y1 + uy * VERTEX_R);
        let (ex, ey) = (x2 - ux * VERTEX_R, y2 - uy * VERTEX_R);
        let dash = if reversed {
            " stroke-dasharray=\"9 4 2 4\""
        } else {
            ""
        };
        let _ = writeln!(
            s,
            "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#333\" \
             stroke-width=\"1.5\"{} marker-end=\"url(#arrow)\"/>",
            sx, sy, ex, ey, dash
        );
        // Dummy markers where the segment crosses intermediate layers.
        let (lo, hi) = (lt.min(lh), lt.max(lh));
        for k in lo + 1..hi {
            let yk = MARGIN + (k as f64 - 1.0) * ROW_GAP;
            let t_param = (yk - y1) / (y2 - y1);
            let xk = x1 + t_param * (x2 - x1);
            let _ = writeln!(
                s,
                "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"{:.1}\" fill=\"#888\" class=\"dummy\"/>",
                xk, yk, DUMMY_R
            );
        }
    }

    for v in 0..g.n() {
        let _ = writeln!(
            s,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"{:.1}\" fill=\"#fff\" stroke=\"#333\" \
             stroke-width=\"1.5\" class=\"vertex\"/>",
            x[v], y[v], VERTEX_R
        );
        let _ = writeln!(
            s,
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" dominant-baseline=\"central\" \
             font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            x[v], y[v], v
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
