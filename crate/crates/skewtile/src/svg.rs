//! Static SVG schematics of the tile-gluing graph.
//!
//! Nodes are tiles, placed on a circle in tile order; every tiling arc is
//! drawn as an edge between the two tiles its sides bound, or as a loop when
//! both sides bound the same tile (as happens to the new radius arcs of an
//! unfolded tiling). Parallel edges between one pair of tiles bow apart so
//! their labels stay legible. The picture is a schematic of the gluing
//! graph, not a geometric embedding — the data model has no coordinates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::tiling::{Interior, TileEdge, Tiling};

/// Renders the tile-gluing graph of a tiling as a standalone SVG document.
/// Output is deterministic: tiles keep their order, arcs are drawn in the
/// tiling's arc order.
pub fn tiling_schematic(t: &Tiling) -> String {
    let n = t.tiles.len().max(1);
    let radius = 60.0 + 24.0 * n as f64;
    let size = 2.0 * (radius + 80.0);
    let center = size / 2.0;
    let pos = |i: usize| -> (f64, f64) {
        let angle = std::f64::consts::TAU * i as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
        (center + radius * angle.cos(), center + radius * angle.sin())
    };

    // Which tile each side of each arc bounds.
    let mut sides: BTreeMap<&str, [Option<usize>; 2]> = BTreeMap::new();
    for (ti, tile) in t.tiles.iter().enumerate() {
        for e in &tile.edges {
            if let TileEdge::Arc { arc, side } = e {
                sides.entry(arc).or_insert([None, None])[(*side).min(1)].get_or_insert(ti);
            }
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size:.1} {size:.1}\" \
         font-family=\"sans-serif\" font-size=\"13\">"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>");

    // Edges first, so nodes sit on top of them.
    let mut pair_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for arc in &t.arcs {
        let Some([Some(a), Some(b)]) = sides.get(arc.as_str()).copied() else {
            continue; // half-glued arc in an unvalidated tiling: skip
        };
        let (xa, ya) = pos(a);
        if a == b {
            // A self-gluing: a loop drawn outward from the node.
            let ux = (xa - center) / radius;
            let uy = (ya - center) / radius;
            let (px, py) = (-uy, ux);
            let c1 = (xa + 64.0 * ux + 30.0 * px, ya + 64.0 * uy + 30.0 * py);
            let c2 = (xa + 64.0 * ux - 30.0 * px, ya + 64.0 * uy - 30.0 * py);
            let _ = writeln!(
                svg,
                "<path d=\"M {:.1} {:.1} C {:.1} {:.1} {:.1} {:.1} {:.1} {:.1}\" \
                 fill=\"none\" stroke=\"#555555\"/>",
                xa + 10.0 * px,
                ya + 10.0 * py,
                c1.0,
                c1.1,
                c2.0,
                c2.1,
                xa - 10.0 * px,
                ya - 10.0 * py,
            );
            label(&mut svg, xa + 72.0 * ux, ya + 72.0 * uy, arc);
            continue;
        }
        let (xb, yb) = pos(b);
        let key = (a.min(b), a.max(b));
        let k = *pair_count.entry(key).and_modify(|c| *c += 1).or_insert(0);
        // Parallel edges bow sideways by increasing amounts.
        let (mx, my) = ((xa + xb) / 2.0, (ya + yb) / 2.0);
        let len = ((xb - xa).powi(2) + (yb - ya).powi(2)).sqrt().max(1.0);
        let (px, py) = (-(yb - ya) / len, (xb - xa) / len);
        let bow = 30.0 * k as f64;
        let (cx, cy) = (mx + bow * px, my + bow * py);
        let _ = writeln!(
            svg,
            "<path d=\"M {xa:.1} {ya:.1} Q {cx:.1} {cy:.1} {xb:.1} {yb:.1}\" \
             fill=\"none\" stroke=\"#555555\"/>"
        );
        // The quadratic curve's midpoint.
        label(&mut svg, 0.25 * xa + 0.5 * cx + 0.25 * xb, 0.25 * ya + 0.5 * cy + 0.25 * yb, arc);
    }

    for (i, tile) in t.tiles.iter().enumerate() {
        let (x, y) = pos(i);
        let _ = writeln!(
            svg,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"22\" fill=\"#f4f4f4\" stroke=\"#333333\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-weight=\"bold\">{i}</text>",
            y - 1.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"10\" \
             fill=\"#666666\">{}</text>",
            y + 12.0,
            tile.kind.code()
        );
        match &tile.interior {
            Interior::None => {}
            Interior::Unmarked => {
                let _ = writeln!(
                    svg,
                    "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
                     fill=\"#666666\">◦</text>",
                    y + 38.0
                );
            }
            Interior::Puncture(p) => {
                let _ = writeln!(
                    svg,
                    "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
                     fill=\"#333333\">• {p}</text>",
                    y + 38.0
                );
            }
        }
    }

    svg.push_str("</svg>\n");
    svg
}

fn label(svg: &mut String, x: f64, y: f64, text: &str) {
    let _ = writeln!(
        svg,
        "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"middle\" dy=\"0.35em\" \
         paint-order=\"stroke\" stroke=\"#ffffff\" stroke-width=\"4\" \
         fill=\"#1a1a1a\">{text}</text>"
    );
}
