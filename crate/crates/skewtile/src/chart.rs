//! The polygon chart of a tiling: every tile cut open into a disc.
//!
//! Curves are manipulated combinatorially as sequences of chords in discs,
//! so tiles that are not discs — punctured monogons and the holed tiles —
//! are first cut open:
//!
//! * a punctured monogon (loop `ℓ` at `b` around puncture `P`) is cut along
//!   a *radius* from `b` to `P`, giving a triangle with slots
//!   `[ℓ, radius, radius]` and vertices `[b, P, b]`;
//! * a holed monogon is cut along a *bank* from `b` to a foot point on its
//!   unmarked circle `W`, giving a square `[ℓ, bank, W, bank]` with vertices
//!   `[b, foot, foot, b]`;
//! * a holed digon `[x, y]` with corners `[c0, c1]` is cut from `c0` to the
//!   circle, giving a pentagon `[x, bank, W, bank, y]` with vertices
//!   `[c0, foot, foot, c0, c1]`.
//!
//! All other tiles are already discs and keep their stored boundary. Each
//! polygon lists its *slots* anticlockwise; a slot is one side of an *edge*.
//! Arc edges have their two slots in (possibly) different polygons — slot
//! half equals the tiling side — while radius and bank edges have both
//! halves in the same polygon, and boundary segments and circle edges have
//! a single slot that no curve may touch. `vertices[k]` follows `slots[k]`,
//! exactly like tile corners.
//!
//! Polygon `i` comes from tile `i`, so tile indices address polygons
//! directly. The chart also records how tile corners land on polygon
//! vertices: cutting duplicates the base corner of a cut tile into two
//! *copies* (positions 0 and 2 of a triangle; 0 and 3 of a cut square or
//! pentagon), which is why corner references carry an optional copy index.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tiling::{Interior, TileEdge, TileKind, Tiling, TilingError};

/// An edge of the chart.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    /// A tiling arc: the only kind a curve crossing is recorded against.
    TArc(String),
    /// A boundary segment of the surface. Curves never touch it.
    Boundary,
    /// The cut radius of a punctured monogon. Crossings are virtual.
    Radius { puncture: String },
    /// The cut bank of a holed tile. Crossings are virtual.
    Bank { tile: usize },
    /// The unmarked circle of a holed tile. Curves never touch it.
    WCut { tile: usize },
}

impl EdgeKind {
    /// How many slots the edge has.
    pub fn arity(&self) -> usize {
        match self {
            EdgeKind::TArc(_) | EdgeKind::Radius { .. } | EdgeKind::Bank { .. } => 2,
            EdgeKind::Boundary | EdgeKind::WCut { .. } => 1,
        }
    }

    /// Whether a curve may cross this edge at all.
    pub fn crossable(&self) -> bool {
        self.arity() == 2
    }
}

/// One side of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SlotId {
    pub edge: usize,
    pub half: usize,
}

/// A polygon vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexKind {
    /// An occurrence of a marked point.
    Marked(String),
    /// The puncture apex of a cut punctured monogon.
    Puncture(String),
    /// The foot of a bank on an unmarked circle.
    Foot,
}

/// A disc of the chart, boundary listed anticlockwise.
#[derive(Debug, Clone)]
pub struct Polygon {
    pub tile: usize,
    pub kind: TileKind,
    pub slots: Vec<SlotId>,
    /// `vertices[k]` follows `slots[k]`.
    pub vertices: Vec<VertexKind>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// Chart-level lookup errors (all indicate a caller bug or a reference into
/// the wrong tiling, not invalid surface data).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("tile {0} does not exist")]
    NoSuchTile(usize),
    #[error("tile {tile} has no corner {corner}")]
    NoSuchCorner { tile: usize, corner: usize },
    #[error("corner {corner} of tile {tile} is not at point {point:?}")]
    CornerPointMismatch { tile: usize, corner: usize, point: String },
    #[error("corner {corner} of tile {tile} has no copy {copy}; pass copy 0 or 1 only where cutting split the corner")]
    NoSuchCopy { tile: usize, corner: usize, copy: usize },
    #[error("no puncture named {0:?}")]
    NoSuchPuncture(String),
    #[error("edge {edge} has no half {half}")]
    NoSuchHalf { edge: usize, half: usize },
}

/// The cut-open polygon complex of a tiling.
#[derive(Debug, Clone)]
pub struct Chart {
    pub tiling: Tiling,
    pub edges: Vec<EdgeKind>,
    pub polygons: Vec<Polygon>,
    position: BTreeMap<SlotId, (usize, usize)>,
    arc_edge: BTreeMap<String, usize>,
    puncture_poly: BTreeMap<String, usize>,
}

impl Chart {
    /// Cuts a validated tiling open into its chart.
    pub fn build(t: &Tiling) -> Result<Chart, TilingError> {
        t.validate()?;
        let mut edges: Vec<EdgeKind> = Vec::new();
        let mut arc_edge = BTreeMap::new();
        let mut sorted_arcs = t.arcs.clone();
        sorted_arcs.sort();
        for arc in &sorted_arcs {
            arc_edge.insert(arc.clone(), edges.len());
            edges.push(EdgeKind::TArc(arc.clone()));
        }

        let mut polygons = Vec::new();
        let mut puncture_poly = BTreeMap::new();
        for (ti, tile) in t.tiles.iter().enumerate() {
            let arc_slot = |e: &TileEdge| -> SlotId {
                let TileEdge::Arc { arc, side } = e else {
                    unreachable!("holed and punctured tiles have only arc edges")
                };
                SlotId { edge: arc_edge[arc], half: *side }
            };
            let marked = |p: &str| VertexKind::Marked(p.to_owned());
            let poly = match tile.kind {
                TileKind::PuncturedMonogon => {
                    let Interior::Puncture(p) = &tile.interior else { unreachable!() };
                    let r = edges.len();
                    edges.push(EdgeKind::Radius { puncture: p.clone() });
                    puncture_poly.insert(p.clone(), ti);
                    Polygon {
                        tile: ti,
                        kind: tile.kind,
                        slots: vec![
                            arc_slot(&tile.edges[0]),
                            SlotId { edge: r, half: 0 },
                            SlotId { edge: r, half: 1 },
                        ],
                        vertices: vec![
                            marked(&tile.corners[0]),
                            VertexKind::Puncture(p.clone()),
                            marked(&tile.corners[0]),
                        ],
                    }
                }
                TileKind::HoledMonogon => {
                    let bank = edges.len();
                    edges.push(EdgeKind::Bank { tile: ti });
                    let w = edges.len();
                    edges.push(EdgeKind::WCut { tile: ti });
                    Polygon {
                        tile: ti,
                        kind: tile.kind,
                        slots: vec![
                            arc_slot(&tile.edges[0]),
                            SlotId { edge: bank, half: 0 },
                            SlotId { edge: w, half: 0 },
                            SlotId { edge: bank, half: 1 },
                        ],
                        vertices: vec![
                            marked(&tile.corners[0]),
                            VertexKind::Foot,
                            VertexKind::Foot,
                            marked(&tile.corners[0]),
                        ],
                    }
                }
                TileKind::HoledDigon => {
                    let bank = edges.len();
                    edges.push(EdgeKind::Bank { tile: ti });
                    let w = edges.len();
                    edges.push(EdgeKind::WCut { tile: ti });
                    // Cut at the corner after the first stored edge.
                    Polygon {
                        tile: ti,
                        kind: tile.kind,
                        slots: vec![
                            arc_slot(&tile.edges[0]),
                            SlotId { edge: bank, half: 0 },
                            SlotId { edge: w, half: 0 },
                            SlotId { edge: bank, half: 1 },
                            arc_slot(&tile.edges[1]),
                        ],
                        vertices: vec![
                            marked(&tile.corners[0]),
                            VertexKind::Foot,
                            VertexKind::Foot,
                            marked(&tile.corners[0]),
                            marked(&tile.corners[1]),
                        ],
                    }
                }
                _ => {
                    let mut slots = Vec::new();
                    for e in &tile.edges {
                        match e {
                            TileEdge::Arc { arc, side } => {
                                slots.push(SlotId { edge: arc_edge[arc], half: *side });
                            }
                            TileEdge::Segment { .. } => {
                                slots.push(SlotId { edge: edges.len(), half: 0 });
                                edges.push(EdgeKind::Boundary);
                            }
                        }
                    }
                    Polygon {
                        tile: ti,
                        kind: tile.kind,
                        slots,
                        vertices: tile.corners.iter().map(|c| marked(c)).collect(),
                    }
                }
            };
            polygons.push(poly);
        }

        let mut position = BTreeMap::new();
        for (pi, poly) in polygons.iter().enumerate() {
            for (k, slot) in poly.slots.iter().enumerate() {
                let clash = position.insert(*slot, (pi, k));
                debug_assert!(clash.is_none(), "each slot lies in exactly one polygon");
            }
        }
        debug_assert_eq!(
            position.len(),
            edges.iter().map(EdgeKind::arity).sum::<usize>(),
            "every slot of every edge is placed"
        );
        Ok(Chart { tiling: t.clone(), edges, polygons, position, arc_edge, puncture_poly })
    }

    /// Where a slot sits: `(polygon, position)`.
    pub fn position(&self, slot: SlotId) -> (usize, usize) {
        self.position[&slot]
    }

    /// The slot at a polygon position.
    pub fn slot_at(&self, poly: usize, pos: usize) -> SlotId {
        self.polygons[poly].slots[pos]
    }

    /// The other side of a two-sided edge.
    pub fn twin(&self, slot: SlotId) -> Result<SlotId, ChartError> {
        if self.edges[slot.edge].arity() != 2 {
            return Err(ChartError::NoSuchHalf { edge: slot.edge, half: 1 });
        }
        Ok(SlotId { edge: slot.edge, half: 1 - slot.half })
    }

    /// The chart edge of a tiling arc.
    pub fn arc_edge(&self, arc: &str) -> Option<usize> {
        self.arc_edge.get(arc).copied()
    }

    /// The arc id of a `TArc` edge.
    pub fn edge_arc(&self, edge: usize) -> Option<&str> {
        match &self.edges[edge] {
            EdgeKind::TArc(a) => Some(a),
            _ => None,
        }
    }

    /// The polygon positions (as vertex indices) a tile corner lands on.
    /// Cut corners land on two vertices; all others on one.
    pub fn corner_copies(&self, tile: usize, corner: usize) -> Result<Vec<usize>, ChartError> {
        let t = self.tiling.tiles.get(tile).ok_or(ChartError::NoSuchTile(tile))?;
        if corner >= t.corners.len() {
            return Err(ChartError::NoSuchCorner { tile, corner });
        }
        Ok(match t.kind {
            TileKind::PuncturedMonogon => vec![0, 2],
            TileKind::HoledMonogon => vec![0, 3],
            TileKind::HoledDigon => {
                if corner == 0 {
                    vec![0, 3]
                } else {
                    vec![4]
                }
            }
            _ => vec![corner],
        })
    }

    /// Resolves a `(point, tile, corner, copy)` reference to a polygon
    /// vertex, checking the point actually sits at that corner.
    pub fn corner_vertex(
        &self,
        point: &str,
        tile: usize,
        corner: usize,
        copy: usize,
    ) -> Result<(usize, usize), ChartError> {
        let copies = self.corner_copies(tile, corner)?;
        if self.tiling.tiles[tile].corners[corner] != point {
            return Err(ChartError::CornerPointMismatch {
                tile,
                corner,
                point: point.to_owned(),
            });
        }
        if copy >= copies.len() {
            return Err(ChartError::NoSuchCopy { tile, corner, copy });
        }
        Ok((tile, copies[copy]))
    }

    /// The tile corner (and copy) a polygon vertex came from. `None` for
    /// puncture apexes and bank feet.
    pub fn vertex_corner(&self, poly: usize, vertex: usize) -> Option<(usize, usize, usize)> {
        if !matches!(self.polygons[poly].vertices[vertex], VertexKind::Marked(_)) {
            return None;
        }
        let corner = match self.polygons[poly].kind {
            TileKind::PuncturedMonogon | TileKind::HoledMonogon => 0,
            TileKind::HoledDigon => {
                if vertex == 4 {
                    1
                } else {
                    0
                }
            }
            _ => vertex,
        };
        let copies = self.corner_copies(poly, corner).expect("vertex exists");
        let copy = copies.iter().position(|&v| v == vertex).expect("vertex is a corner copy");
        Some((poly, corner, copy))
    }

    /// The polygon vertex of a puncture (the apex of its cut monogon).
    pub fn puncture_vertex(&self, puncture: &str) -> Result<(usize, usize), ChartError> {
        let poly = self
            .puncture_poly
            .get(puncture)
            .copied()
            .ok_or_else(|| ChartError::NoSuchPuncture(puncture.to_owned()))?;
        Ok((poly, 1))
    }

    /// All punctures with their apex vertices.
    pub fn puncture_vertices(&self) -> impl Iterator<Item = (&String, (usize, usize))> {
        self.puncture_poly.iter().map(|(p, &poly)| (p, (poly, 1)))
    }

    /// Whether a vertex may anchor the end of a curve: a marked-point
    /// occurrence outside any punctured monogon. (An end inside a punctured
    /// monogon could always be pushed out across the loop, and the rules for
    /// curve ends reject it.)
    pub fn anchorable(&self, poly: usize, vertex: usize) -> bool {
        matches!(self.polygons[poly].vertices[vertex], VertexKind::Marked(_))
            && self.polygons[poly].kind != TileKind::PuncturedMonogon
    }

    /// All corner anchors, in polygon order.
    pub fn corner_anchors(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (pi, poly) in self.polygons.iter().enumerate() {
            for v in 0..poly.vertices.len() {
                if self.anchorable(pi, v) {
                    out.push((pi, v));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn every_fixture_chart_places_all_slots_once() {
        for (name, t) in fixtures::all() {
            let chart = Chart::build(&t).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(chart.polygons.len(), t.tiles.len(), "{name}");
            for (pi, poly) in chart.polygons.iter().enumerate() {
                assert_eq!(poly.tile, pi, "{name}: polygon order follows tile order");
                assert_eq!(poly.slots.len(), poly.vertices.len(), "{name}");
                for (k, slot) in poly.slots.iter().enumerate() {
                    assert_eq!(chart.position(*slot), (pi, k), "{name}");
                }
            }
            // Two-sided edges have both halves placed, one-sided edges one.
            for (ei, e) in chart.edges.iter().enumerate() {
                for half in 0..e.arity() {
                    chart.position(SlotId { edge: ei, half });
                }
            }
        }
    }

    #[test]
    fn the_punctured_monogon_becomes_a_radius_triangle() {
        let chart = Chart::build(&fixtures::three_cycle_disc()).unwrap();
        let tri = &chart.polygons[0];
        assert_eq!(tri.kind, TileKind::PuncturedMonogon);
        assert_eq!(tri.len(), 3);
        assert_eq!(chart.edges[tri.slots[0].edge], EdgeKind::TArc("1".into()));
        assert_eq!(tri.slots[0].half, 1, "the monogon holds the inner side of its loop");
        assert_eq!(chart.edges[tri.slots[1].edge], EdgeKind::Radius { puncture: "P".into() });
        assert_eq!(tri.slots[1].half, 0);
        assert_eq!(tri.slots[2].half, 1);
        assert_eq!(tri.slots[1].edge, tri.slots[2].edge);
        assert_eq!(
            tri.vertices,
            vec![
                VertexKind::Marked("b".into()),
                VertexKind::Puncture("P".into()),
                VertexKind::Marked("b".into()),
            ]
        );
        assert_eq!(chart.puncture_vertex("P").unwrap(), (0, 1));
        // The triangle's marked vertices cannot anchor ends.
        assert!(!chart.anchorable(0, 0));
        assert!(!chart.anchorable(0, 2));
        assert!(chart.anchorable(1, 0), "arc-gon corners are fine");
    }

    #[test]
    fn the_holed_monogon_becomes_a_bank_square() {
        let chart = Chart::build(&fixtures::annulus_loop()).unwrap();
        let sq = &chart.polygons[0];
        assert_eq!(sq.kind, TileKind::HoledMonogon);
        assert_eq!(sq.len(), 4);
        assert!(matches!(chart.edges[sq.slots[1].edge], EdgeKind::Bank { tile: 0 }));
        assert!(matches!(chart.edges[sq.slots[2].edge], EdgeKind::WCut { tile: 0 }));
        assert_eq!(sq.slots[1].edge, sq.slots[3].edge);
        assert_eq!(sq.vertices[1], VertexKind::Foot);
        assert_eq!(sq.vertices[2], VertexKind::Foot);
        assert!(chart.anchorable(0, 0));
        assert_eq!(chart.corner_copies(0, 0).unwrap(), vec![0, 3]);
    }

    #[test]
    fn the_holed_digon_becomes_a_bank_pentagon() {
        let chart = Chart::build(&fixtures::double_chord_annulus()).unwrap();
        let pent = &chart.polygons[0];
        assert_eq!(pent.kind, TileKind::HoledDigon);
        assert_eq!(pent.len(), 5);
        assert_eq!(chart.edges[pent.slots[0].edge], EdgeKind::TArc("x".into()));
        assert_eq!(chart.edges[pent.slots[4].edge], EdgeKind::TArc("y".into()));
        assert_eq!(
            pent.vertices,
            vec![
                VertexKind::Marked("q".into()),
                VertexKind::Foot,
                VertexKind::Foot,
                VertexKind::Marked("q".into()),
                VertexKind::Marked("p".into()),
            ]
        );
        assert_eq!(chart.corner_copies(0, 0).unwrap(), vec![0, 3]);
        assert_eq!(chart.corner_copies(0, 1).unwrap(), vec![4]);
    }

    #[test]
    fn corner_references_round_trip() {
        for (name, t) in fixtures::all() {
            let chart = Chart::build(&t).unwrap();
            for (ti, tile) in t.tiles.iter().enumerate() {
                for (ck, point) in tile.corners.iter().enumerate() {
                    for (copy, &v) in chart.corner_copies(ti, ck).unwrap().iter().enumerate() {
                        let (poly, vertex) = chart.corner_vertex(point, ti, ck, copy).unwrap();
                        assert_eq!(poly, ti, "{name}");
                        assert_eq!(vertex, v, "{name}");
                        assert_eq!(
                            chart.vertex_corner(poly, vertex),
                            Some((ti, ck, copy)),
                            "{name}"
                        );
                    }
                }
            }
            assert!(chart.corner_vertex("nowhere", 0, 0, 0).is_err());
        }
    }
}
