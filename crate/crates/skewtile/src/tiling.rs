//! Combinatorial skew-tilings of marked surfaces.
//!
//! A tiling is given purely combinatorially: a set of *arcs* (curves between
//! marked points, named by id), boundary *marked points*, *punctures*, and a
//! list of *tiles*. Each tile lists its boundary anticlockwise (interior on
//! the left) as a cyclic sequence of edges — arc *slots* (an arc id plus a
//! side, `0` or `1`) and boundary *segments* (directed marked point to marked
//! point) — together with the marked point sitting after each edge
//! (`corners[k]` follows `edges[k]`) and what the tile contains: nothing, an
//! unmarked boundary circle, or a puncture.
//!
//! Side `0` of an arc traverses it from its first endpoint to its second;
//! side `1` the other way. Each side of each arc bounds exactly one tile, so
//! every slot appears exactly once across the tiling, and the two slots of an
//! arc must agree about its endpoints.
//!
//! Tiles are classified by their boundary profile and interior:
//!
//! * [`TileKind::HoledMonogon`] (code `I`) — one loop-arc edge around an
//!   unmarked boundary circle;
//! * [`TileKind::HoledDigon`] (code `II`) — two arc edges around an unmarked
//!   boundary circle;
//! * [`TileKind::BoundaryTriangle`] (code `III`) — one arc and two segments;
//! * [`TileKind::BoundaryGon`] (code `IV`) — at least one segment, no
//!   interior, and not a `III`;
//! * [`TileKind::ArcGon`] (code `V`) — three or more arcs, nothing else;
//! * [`TileKind::PuncturedMonogon`] (code `VI`) — one loop-arc edge around a
//!   puncture.
//!
//! All-arc digons and empty monogons bound no valid tile. Validation further
//! checks that boundary segments form directed cycles through every marked
//! point, that the corner fan around each marked point closes up (walking
//! from its incoming segment across arc slots to its outgoing segment
//! consumes each corner exactly once), and that the resulting surface data is
//! consistent (integral even genus via an Euler count).
//!
//! [`extract_algebra`] reads off the presented algebra: arcs are vertices; a
//! corner whose two edges are both arc slots contributes an arrow from the
//! outgoing arc to the incoming one; a loop arrow at a punctured monogon is
//! an idempotent, at a holed monogon a nilpotent; and two arrows compose to
//! zero exactly when they meet the shared arc at different ends.
//! [`unfold`] replaces each punctured monogon by a square on a fresh boundary
//! component whose radius becomes a real arc, and [`original_tiling`]
//! forgets punctures into unmarked boundary circles.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{IdempotentKind, IdempotentLabel, Presentation};
use crate::quiver::{Arrow, LoopMarker, Quiver, RelationSet, SkewGentleTriple};

/// Tile classification. See the module docs for the profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TileKind {
    #[serde(rename = "I")]
    HoledMonogon,
    #[serde(rename = "II")]
    HoledDigon,
    #[serde(rename = "III")]
    BoundaryTriangle,
    #[serde(rename = "IV")]
    BoundaryGon,
    #[serde(rename = "V")]
    ArcGon,
    #[serde(rename = "VI")]
    PuncturedMonogon,
}

impl TileKind {
    /// The conventional roman-numeral code.
    pub fn code(self) -> &'static str {
        match self {
            TileKind::HoledMonogon => "I",
            TileKind::HoledDigon => "II",
            TileKind::BoundaryTriangle => "III",
            TileKind::BoundaryGon => "IV",
            TileKind::ArcGon => "V",
            TileKind::PuncturedMonogon => "VI",
        }
    }
}

/// One edge of a tile boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TileEdge {
    /// One side of an arc: side 0 runs from the arc's first endpoint to its
    /// second, side 1 the other way.
    Arc { arc: String, side: usize },
    /// A directed boundary segment between marked points.
    Segment { segment: (String, String) },
}

/// What a tile contains.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interior {
    #[default]
    None,
    /// An unmarked boundary circle.
    Unmarked,
    /// A puncture, by id.
    Puncture(String),
}

/// A tile: its kind, anticlockwise boundary, corners, and interior.
///
/// The JSON field names follow the document schema: `type` for the kind and
/// `boundary` for the edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tile {
    #[serde(rename = "type")]
    pub kind: TileKind,
    #[serde(rename = "boundary")]
    pub edges: Vec<TileEdge>,
    /// `corners[k]` is the marked point after `edges[k]`.
    pub corners: Vec<String>,
    #[serde(default)]
    pub interior: Interior,
}

/// A combinatorial skew-tiling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tiling {
    pub arcs: Vec<String>,
    pub points: Vec<String>,
    pub punctures: Vec<String>,
    pub tiles: Vec<Tile>,
}

/// Validation errors for tilings.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TilingError {
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("tile {tile} references unknown {what} {id:?}")]
    UnknownId { tile: usize, what: &'static str, id: String },
    #[error("tile {tile} has {edges} edges but {corners} corners")]
    CornerCount { tile: usize, edges: usize, corners: usize },
    #[error("tile {tile} has no edges")]
    EmptyTile { tile: usize },
    #[error("arc slot ({arc:?}, side {side}) appears {count} times; each side bounds exactly one tile")]
    SlotMultiplicity { arc: String, side: usize, count: usize },
    #[error("tile {tile}, edge {edge}: traversal starts at {got:?} but the previous corner is {want:?}")]
    TraversalMismatch { tile: usize, edge: usize, got: String, want: String },
    #[error("arc {arc:?}: its two sides disagree about its endpoints ({0:?} vs {1:?})", .ends0, .ends1)]
    ArcEndsDisagree { arc: String, ends0: (String, String), ends1: (String, String) },
    #[error("marked point {point:?} has {outgoing} outgoing and {incoming} incoming boundary segments; it needs exactly one of each")]
    SegmentDegree { point: String, outgoing: usize, incoming: usize },
    #[error("the corner fan at {point:?} does not close: consumed {consumed} of {total} corners")]
    FanMismatch { point: String, consumed: usize, total: usize },
    #[error("puncture {puncture:?} lies in {count} tiles; it must lie in exactly one punctured monogon")]
    PunctureCount { puncture: String, count: usize },
    #[error("tile {tile} is declared {declared:?} but its profile is {derived}")]
    KindMismatch { tile: usize, declared: String, derived: String },
    #[error("tile {tile}: an all-arc digon bounds no tile")]
    ArcDigon { tile: usize },
    #[error("tile {tile}: a monogon must contain an unmarked circle or a puncture")]
    EmptyMonogon { tile: usize },
    #[error("tile {tile}: {detail}")]
    Profile { tile: usize, detail: String },
    #[error("Euler count is inconsistent: 2 - boundary({b}) - characteristic({chi}) = {g2}, which must be an even non-negative integer")]
    Euler { b: i64, chi: i64, g2: i64 },
    #[error("unfolding name collision: {0:?} already exists")]
    UnfoldCollision(String),
    #[error(transparent)]
    Quiver(#[from] crate::quiver::QuiverError),
}

/// Index data computed by [`Tiling::validate`]: slot locations, derived arc
/// endpoints and the boundary cycles.
#[derive(Debug, Clone)]
pub struct TilingInfo {
    /// `(arc, side) → (tile, position)`.
    pub slot: BTreeMap<(String, usize), (usize, usize)>,
    /// `arc → (endpoint of end 0, endpoint of end 1)`.
    pub arc_ends: BTreeMap<String, (String, String)>,
    /// Directed boundary cycles of marked points, each rotated to start at
    /// its smallest point, sorted.
    pub boundary_cycles: Vec<Vec<String>>,
    /// `puncture → tile index` of its punctured monogon.
    pub puncture_tile: BTreeMap<String, usize>,
}

impl Tile {
    fn arity(&self) -> usize {
        self.edges.len()
    }

    fn arc_edges(&self) -> usize {
        self.edges.iter().filter(|e| matches!(e, TileEdge::Arc { .. })).count()
    }

    fn segment_edges(&self) -> usize {
        self.edges.len() - self.arc_edges()
    }
}

fn derive_kind(t: &Tile, idx: usize) -> Result<TileKind, TilingError> {
    let arcs = t.arc_edges();
    let segs = t.segment_edges();
    match &t.interior {
        Interior::Unmarked => match (t.arity(), arcs) {
            (1, 1) => Ok(TileKind::HoledMonogon),
            (2, 2) => Ok(TileKind::HoledDigon),
            _ => Err(TilingError::Profile {
                tile: idx,
                detail: format!(
                    "an unmarked circle lives in a one- or two-arc tile, not {arcs} arcs + {segs} segments"
                ),
            }),
        },
        Interior::Puncture(_) => {
            if t.arity() == 1 && arcs == 1 {
                Ok(TileKind::PuncturedMonogon)
            } else {
                Err(TilingError::Profile {
                    tile: idx,
                    detail: format!(
                        "a puncture lives in a one-arc monogon, not {arcs} arcs + {segs} segments"
                    ),
                })
            }
        }
        Interior::None => {
            if t.arity() == 0 {
                return Err(TilingError::EmptyTile { tile: idx });
            }
            if t.arity() == 1 {
                return Err(TilingError::EmptyMonogon { tile: idx });
            }
            if segs == 0 {
                if t.arity() == 2 {
                    return Err(TilingError::ArcDigon { tile: idx });
                }
                return Ok(TileKind::ArcGon);
            }
            if t.arity() == 3 && arcs == 1 {
                Ok(TileKind::BoundaryTriangle)
            } else {
                Ok(TileKind::BoundaryGon)
            }
        }
    }
}

impl Tiling {
    /// Validates the tiling and returns its derived index data.
    pub fn validate(&self) -> Result<TilingInfo, TilingError> {
        // Unique ids; arcs, points and punctures share one namespace so that
        // diagnostics and JSON stay unambiguous.
        let mut ids = BTreeSet::new();
        for id in self.arcs.iter().chain(&self.points).chain(&self.punctures) {
            if !ids.insert(id.clone()) {
                return Err(TilingError::DuplicateId(id.clone()));
            }
        }
        let arcs: BTreeSet<&String> = self.arcs.iter().collect();
        let points: BTreeSet<&String> = self.points.iter().collect();
        let punctures: BTreeSet<&String> = self.punctures.iter().collect();

        // Reference and multiplicity checks.
        let mut slot: BTreeMap<(String, usize), (usize, usize)> = BTreeMap::new();
        let mut slot_counts: BTreeMap<(String, usize), usize> = BTreeMap::new();
        for (ti, tile) in self.tiles.iter().enumerate() {
            if tile.edges.is_empty() {
                return Err(TilingError::EmptyTile { tile: ti });
            }
            if tile.edges.len() != tile.corners.len() {
                return Err(TilingError::CornerCount {
                    tile: ti,
                    edges: tile.edges.len(),
                    corners: tile.corners.len(),
                });
            }
            for c in &tile.corners {
                if !points.contains(c) {
                    return Err(TilingError::UnknownId { tile: ti, what: "marked point", id: c.clone() });
                }
            }
            for (ei, e) in tile.edges.iter().enumerate() {
                match e {
                    TileEdge::Arc { arc, side } => {
                        if !arcs.contains(arc) {
                            return Err(TilingError::UnknownId { tile: ti, what: "arc", id: arc.clone() });
                        }
                        if *side > 1 {
                            return Err(TilingError::UnknownId {
                                tile: ti,
                                what: "arc side (must be 0 or 1)",
                                id: format!("{arc}/{side}"),
                            });
                        }
                        *slot_counts.entry((arc.clone(), *side)).or_default() += 1;
                        slot.insert((arc.clone(), *side), (ti, ei));
                    }
                    TileEdge::Segment { segment: (from, to) } => {
                        for p in [from, to] {
                            if !points.contains(p) {
                                return Err(TilingError::UnknownId {
                                    tile: ti,
                                    what: "marked point",
                                    id: p.clone(),
                                });
                            }
                        }
                    }
                }
            }
            if let Interior::Puncture(p) = &tile.interior {
                if !punctures.contains(p) {
                    return Err(TilingError::UnknownId { tile: ti, what: "puncture", id: p.clone() });
                }
            }
        }
        for arc in &self.arcs {
            for side in 0..2 {
                let count = slot_counts.get(&(arc.clone(), side)).copied().unwrap_or(0);
                if count != 1 {
                    return Err(TilingError::SlotMultiplicity { arc: arc.clone(), side, count });
                }
            }
        }

        // Traversal consistency: every edge starts at the previous corner and
        // ends at its own corner; derive arc endpoints on the way.
        let mut arc_ends: BTreeMap<String, (String, String)> = BTreeMap::new();
        for (ti, tile) in self.tiles.iter().enumerate() {
            let m = tile.edges.len();
            for (ei, e) in tile.edges.iter().enumerate() {
                let start = tile.corners[(ei + m - 1) % m].clone();
                let end = tile.corners[ei].clone();
                match e {
                    TileEdge::Segment { segment: (from, to) } => {
                        if *from != start {
                            return Err(TilingError::TraversalMismatch {
                                tile: ti,
                                edge: ei,
                                got: from.clone(),
                                want: start,
                            });
                        }
                        if *to != end {
                            return Err(TilingError::TraversalMismatch {
                                tile: ti,
                                edge: ei,
                                got: to.clone(),
                                want: end,
                            });
                        }
                    }
                    TileEdge::Arc { arc, side } => {
                        // Side 0 runs end0 → end1.
                        let ends = if *side == 0 { (start, end) } else { (end, start) };
                        if let Some(prev) = arc_ends.get(arc) {
                            if *prev != ends {
                                return Err(TilingError::ArcEndsDisagree {
                                    arc: arc.clone(),
                                    ends0: prev.clone(),
                                    ends1: ends,
                                });
                            }
                        } else {
                            arc_ends.insert(arc.clone(), ends);
                        }
                    }
                }
            }
        }

        // Boundary segments: one in, one out per marked point; extract cycles.
        let mut out_seg: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        let mut seg_degree: BTreeMap<String, (usize, usize)> =
            self.points.iter().map(|p| (p.clone(), (0, 0))).collect();
        for (ti, tile) in self.tiles.iter().enumerate() {
            for (ei, e) in tile.edges.iter().enumerate() {
                if let TileEdge::Segment { segment: (from, to) } = e {
                    seg_degree.get_mut(from).unwrap().0 += 1;
                    seg_degree.get_mut(to).unwrap().1 += 1;
                    out_seg.insert(from.clone(), (ti, ei));
                }
            }
        }
        for (p, (o, i)) in &seg_degree {
            if *o != 1 || *i != 1 {
                return Err(TilingError::SegmentDegree { point: p.clone(), outgoing: *o, incoming: *i });
            }
        }
        let mut boundary_cycles = Vec::new();
        let mut visited = BTreeSet::new();
        for p in &self.points {
            if visited.contains(p) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = p.clone();
            loop {
                visited.insert(cur.clone());
                cycle.push(cur.clone());
                let (ti, ei) = out_seg[&cur];
                let TileEdge::Segment { segment: (_, to) } = &self.tiles[ti].edges[ei] else {
                    unreachable!()
                };
                cur = to.clone();
                if cur == *p {
                    break;
                }
            }
            let min = cycle.iter().enumerate().min_by_key(|&(_, q)| q).map(|(i, _)| i).unwrap();
            cycle.rotate_left(min);
            boundary_cycles.push(cycle);
        }
        boundary_cycles.sort();

        // Corner fans: from the incoming segment of each point, alternate
        // "next edge anticlockwise" and "twin slot" moves until the outgoing
        // segment, consuming every corner at the point exactly once.
        let corner_totals: BTreeMap<&String, usize> = {
            let mut m = BTreeMap::new();
            for tile in &self.tiles {
                for c in &tile.corners {
                    *m.entry(c).or_default() += 1;
                }
            }
            m
        };
        for p in &self.points {
            let total = corner_totals.get(p).copied().unwrap_or(0);
            // Find the incoming segment's corner.
            let mut at: Option<(usize, usize)> = None;
            for (ti, tile) in self.tiles.iter().enumerate() {
                for (ei, e) in tile.edges.iter().enumerate() {
                    if let TileEdge::Segment { segment: (_, to) } = e {
                        if to == p {
                            at = Some((ti, ei));
                        }
                    }
                }
            }
            let (mut ti, mut ei) = at.expect("segment degree checked");
            let mut consumed = 0usize;
            loop {
                consumed += 1;
                if consumed > total {
                    return Err(TilingError::FanMismatch { point: p.clone(), consumed, total });
                }
                let m = self.tiles[ti].edges.len();
                let next = (ei + 1) % m;
                match &self.tiles[ti].edges[next] {
                    TileEdge::Segment { .. } => break,
                    TileEdge::Arc { arc, side } => {
                        let (tj, ej) = slot[&(arc.clone(), 1 - side)];
                        ti = tj;
                        ei = ej;
                    }
                }
            }
            if consumed != total {
                return Err(TilingError::FanMismatch { point: p.clone(), consumed, total });
            }
        }

        // Punctures sit in exactly one tile.
        let mut puncture_tile = BTreeMap::new();
        for p in &self.punctures {
            let tiles: Vec<usize> = self
                .tiles
                .iter()
                .enumerate()
                .filter(|(_, t)| t.interior == Interior::Puncture(p.clone()))
                .map(|(i, _)| i)
                .collect();
            if tiles.len() != 1 {
                return Err(TilingError::PunctureCount { puncture: p.clone(), count: tiles.len() });
            }
            puncture_tile.insert(p.clone(), tiles[0]);
        }

        // Kind profiles.
        for (ti, tile) in self.tiles.iter().enumerate() {
            let derived = derive_kind(tile, ti)?;
            if derived != tile.kind {
                return Err(TilingError::KindMismatch {
                    tile: ti,
                    declared: tile.kind.code().to_owned(),
                    derived: derived.code().to_owned(),
                });
            }
        }

        // Euler consistency. Holed tiles are annuli, not discs: they add a
        // boundary component instead of a face.
        let segments: usize = self.tiles.iter().map(Tile::segment_edges).sum();
        let faces = self
            .tiles
            .iter()
            .filter(|t| !matches!(t.kind, TileKind::HoledMonogon | TileKind::HoledDigon))
            .count();
        let holes = self.tiles.len() - faces;
        let chi = self.points.len() as i64 - (self.arcs.len() + segments) as i64 + faces as i64;
        let b = boundary_cycles.len() as i64 + holes as i64;
        let g2 = 2 - b - chi;
        if g2 < 0 || g2 % 2 != 0 {
            return Err(TilingError::Euler { b, chi, g2 });
        }

        Ok(TilingInfo { slot, arc_ends, boundary_cycles, puncture_tile })
    }
}

/// An arrow read off a tile corner, with the arc ends it uses.
#[derive(Debug, Clone)]
struct CornerArrow {
    id: String,
    /// Source vertex: the arc the corner's outgoing slot belongs to.
    source: String,
    /// Target vertex: the arc the incoming slot belongs to.
    target: String,
    /// Which end (0/1) of the target arc the incoming traversal reaches.
    in_end: usize,
    /// Which end of the source arc the outgoing traversal starts from.
    out_end: usize,
    /// Set when the corner is the single corner of a monogon.
    monogon: Option<TileKind>,
}

fn corner_arrows(t: &Tiling) -> Vec<CornerArrow> {
    let mut arrows = Vec::new();
    let mut used: BTreeMap<String, usize> = BTreeMap::new();
    for tile in &t.tiles {
        let m = tile.edges.len();
        for k in 0..m {
            let incoming = &tile.edges[k];
            let outgoing = &tile.edges[(k + 1) % m];
            let (TileEdge::Arc { arc: in_arc, side: in_side }, TileEdge::Arc { arc: out_arc, side: out_side }) =
                (incoming, outgoing)
            else {
                continue;
            };
            let base = format!("{out_arc}>{in_arc}");
            let n = used.entry(base.clone()).or_default();
            *n += 1;
            let id = if *n == 1 { base } else { format!("{base}#{n}") };
            arrows.push(CornerArrow {
                id,
                source: out_arc.clone(),
                target: in_arc.clone(),
                in_end: if *in_side == 0 { 1 } else { 0 },
                out_end: if *out_side == 0 { 0 } else { 1 },
                monogon: (m == 1).then_some(tile.kind),
            });
        }
    }
    arrows
}

/// Reads off the algebra presented by a tiling.
///
/// Vertices are arcs; arrows come from corners between two arc slots (named
/// `out>in`, with `#2`, `#3`… on repeats); the loop at a punctured monogon is
/// an idempotent and the loop at a holed monogon a nilpotent; and a composite
/// of two arrows through a shared arc is zero exactly when they touch
/// different ends of it. The idempotent index splits each punctured-monogon
/// arc in two, so Cartan data of the extraction lines up with the split
/// presentation of the extracted triple.
pub fn extract_algebra(t: &Tiling) -> Result<Presentation, TilingError> {
    t.validate()?;
    let arrows = corner_arrows(t);
    let quiver = Quiver::new(
        t.arcs.clone(),
        arrows
            .iter()
            .map(|a| Arrow { id: a.id.clone(), source: a.source.clone(), target: a.target.clone() })
            .collect(),
    )?;
    let mut relations = RelationSet::default();
    for y in &arrows {
        for x in &arrows {
            if x.target != y.source {
                continue;
            }
            if x.id == y.id {
                if let Some(kind) = x.monogon {
                    // Monogon loops carry their quadratic behaviour as a
                    // marker: idempotent around a puncture, squared-zero
                    // around an unmarked circle.
                    let marker = match kind {
                        TileKind::PuncturedMonogon => LoopMarker::Idempotent,
                        _ => LoopMarker::Nilpotent,
                    };
                    relations.loop_markers.insert(x.id.clone(), marker);
                    continue;
                }
            }
            if x.in_end != y.out_end {
                relations.monomial.insert((y.id.clone(), x.id.clone()));
            }
        }
    }
    // Idempotent index: punctured-monogon arcs split in two, in place.
    let split: BTreeMap<String, String> = arrows
        .iter()
        .filter(|a| a.monogon == Some(TileKind::PuncturedMonogon))
        .map(|a| (a.source.clone(), a.id.clone()))
        .collect();
    let mut idempotents = Vec::new();
    for v in quiver.vertices() {
        match split.get(v) {
            Some(loop_id) => {
                idempotents.push(IdempotentLabel {
                    label: format!("{v}-"),
                    vertex: v.clone(),
                    kind: IdempotentKind::SpecialMinus,
                    loop_arrow: Some(loop_id.clone()),
                });
                idempotents.push(IdempotentLabel {
                    label: format!("{v}+"),
                    vertex: v.clone(),
                    kind: IdempotentKind::SpecialPlus,
                    loop_arrow: Some(loop_id.clone()),
                });
            }
            None => idempotents.push(IdempotentLabel {
                label: v.clone(),
                vertex: v.clone(),
                kind: IdempotentKind::Vertex,
                loop_arrow: None,
            }),
        }
    }
    Ok(Presentation { quiver, relations, idempotents })
}

/// The skew-gentle triple presented by a tiling: the extraction with each
/// punctured-monogon loop removed and its arc marked special.
pub fn triple_of(t: &Tiling) -> Result<SkewGentleTriple, TilingError> {
    let p = extract_algebra(t)?;
    let special: BTreeSet<String> = p
        .relations
        .loop_markers
        .iter()
        .filter(|(_, m)| **m == LoopMarker::Idempotent)
        .map(|(id, _)| p.quiver.arrow(id).expect("marker on existing arrow").source.clone())
        .collect();
    let removed: BTreeSet<String> = p
        .relations
        .loop_markers
        .iter()
        .filter(|(_, m)| **m == LoopMarker::Idempotent)
        .map(|(id, _)| id.clone())
        .collect();
    let arrows: Vec<Arrow> =
        p.quiver.arrows().iter().filter(|a| !removed.contains(&a.id)).cloned().collect();
    let quiver = Quiver::new(p.quiver.vertices().to_vec(), arrows)?;
    let monomial: BTreeSet<(String, String)> = p
        .relations
        .monomial
        .iter()
        .filter(|(a, b)| !removed.contains(a) && !removed.contains(b))
        .cloned()
        .collect();
    debug_assert_eq!(
        monomial.len(),
        p.relations.monomial.len(),
        "idempotent loops never take part in zero relations"
    );
    // Nilpotent loop markers (holed monogons) stay as explicit zero pairs.
    let mut rels = RelationSet::from_pairs(monomial);
    for (id, m) in &p.relations.loop_markers {
        if *m == LoopMarker::Nilpotent {
            rels.monomial.insert((id.clone(), id.clone()));
        }
    }
    Ok(SkewGentleTriple::new(quiver, special, rels)?)
}

/// One entry of the tagged-arc index `T^⋈`: ordinary arcs stay themselves;
/// each punctured-monogon arc is replaced, in place, by its two tagged
/// radii (plain, then notched).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaggedArcLabel {
    Plain { arc: String },
    Radius { loop_arc: String, puncture: String, notched: bool },
}

impl TaggedArcLabel {
    pub fn label(&self) -> String {
        match self {
            TaggedArcLabel::Plain { arc } => arc.clone(),
            TaggedArcLabel::Radius { loop_arc, notched, .. } => {
                format!("{loop_arc}{}", if *notched { "+" } else { "-" })
            }
        }
    }
}

/// The ordered tagged-arc index of a tiling. Its order matches the
/// idempotent index of the extracted presentation, so intersection vectors
/// and Cartan columns line up.
pub fn tagged_arc_index(t: &Tiling) -> Result<Vec<TaggedArcLabel>, TilingError> {
    let info = t.validate()?;
    let loop_of: BTreeMap<String, String> = info
        .puncture_tile
        .iter()
        .map(|(p, &ti)| {
            let TileEdge::Arc { arc, .. } = &t.tiles[ti].edges[0] else { unreachable!() };
            (arc.clone(), p.clone())
        })
        .collect();
    let mut index = Vec::new();
    for arc in &t.arcs {
        match loop_of.get(arc) {
            Some(p) => {
                index.push(TaggedArcLabel::Radius {
                    loop_arc: arc.clone(),
                    puncture: p.clone(),
                    notched: false,
                });
                index.push(TaggedArcLabel::Radius {
                    loop_arc: arc.clone(),
                    puncture: p.clone(),
                    notched: true,
                });
            }
            None => index.push(TaggedArcLabel::Plain { arc: arc.clone() }),
        }
    }
    Ok(index)
}

/// The id of the radius arc created by [`unfold`] inside the monogon of
/// `loop_arc`.
pub fn radius_id(loop_arc: &str) -> String {
    format!("{loop_arc}*")
}

/// Unfolds a tiling: every punctured monogon (loop `ℓ` around puncture `P`)
/// becomes a square on a new boundary component through a new marked point
/// named after `P` — its edges are the two sides of a new radius arc `ℓ*`
/// from the loop's base point to `P`, the boundary segment at `P`, and the
/// loop's inner slot. Everything else is untouched, so tile indices and arc
/// ids are preserved.
pub fn unfold(t: &Tiling) -> Result<Tiling, TilingError> {
    let info = t.validate()?;
    let mut out = t.clone();
    out.punctures.clear();
    let existing: BTreeSet<String> = t
        .arcs
        .iter()
        .chain(&t.points)
        .cloned()
        .collect();
    for (p, &ti) in &info.puncture_tile {
        let tile = &t.tiles[ti];
        let TileEdge::Arc { arc, side } = &tile.edges[0] else { unreachable!() };
        let r = radius_id(arc);
        if existing.contains(&r) || out.arcs.contains(&r) {
            return Err(TilingError::UnfoldCollision(r));
        }
        if existing.contains(p) {
            return Err(TilingError::UnfoldCollision(p.clone()));
        }
        let b = tile.corners[0].clone();
        out.arcs.push(r.clone());
        out.points.push(p.clone());
        out.tiles[ti] = Tile {
            kind: TileKind::BoundaryGon,
            edges: vec![
                TileEdge::Arc { arc: r.clone(), side: 0 },
                TileEdge::Segment { segment: (p.clone(), p.clone()) },
                TileEdge::Arc { arc: r.clone(), side: 1 },
                TileEdge::Arc { arc: arc.clone(), side: *side },
            ],
            corners: vec![p.clone(), p.clone(), b.clone(), b],
            interior: Interior::None,
        };
    }
    out.arcs.sort();
    out.points.sort();
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Forgets the punctures of a tiling: each punctured monogon becomes a holed
/// monogon around an unmarked circle. This is the tiling presenting the
/// squared-zero-loop algebra of the extracted triple.
pub fn original_tiling(t: &Tiling) -> Result<Tiling, TilingError> {
    let info = t.validate()?;
    let mut out = t.clone();
    out.punctures.clear();
    for (_, &ti) in &info.puncture_tile {
        out.tiles[ti].kind = TileKind::HoledMonogon;
        out.tiles[ti].interior = Interior::Unmarked;
    }
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn the_bundled_tilings_validate() {
        for (name, t) in fixtures::all() {
            assert!(t.validate().is_ok(), "{name}: {:?}", t.validate().err());
        }
    }

    #[test]
    fn slot_multiplicity_and_traversal_errors_are_caught() {
        let mut t = fixtures::three_cycle_disc();
        // Point both slots of arc "2" at side 0.
        for tile in &mut t.tiles {
            for e in &mut tile.edges {
                if let TileEdge::Arc { arc, side } = e {
                    if arc == "2" {
                        *side = 0;
                    }
                }
            }
        }
        assert!(matches!(t.validate(), Err(TilingError::SlotMultiplicity { .. })));

        let mut t = fixtures::three_cycle_disc();
        t.tiles[2].corners[1] = "c".into(); // break a segment corner
        assert!(t.validate().is_err());
    }

    #[test]
    fn kind_mismatches_are_reported() {
        let mut t = fixtures::three_cycle_disc();
        t.tiles[0].kind = TileKind::HoledMonogon;
        assert!(matches!(t.validate(), Err(TilingError::KindMismatch { .. })));
    }

    #[test]
    fn fan_closure_detects_a_missing_corner() {
        let mut t = fixtures::three_cycle_disc();
        // Claim the arc-gon's middle corner is at "c" instead of "b": the arc
        // endpoint derivation already disagrees between the two slots.
        t.tiles[1].corners[1] = "c".into();
        assert!(t.validate().is_err());
    }

    #[test]
    fn extraction_of_the_three_cycle_disc_matches_the_demo_triple() {
        let t = fixtures::three_cycle_disc();
        let p = extract_algebra(&t).unwrap();
        assert_eq!(p.quiver.vertices(), ["1", "2", "3"]);
        let ids: Vec<&str> = p.quiver.arrows().iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, ["1>1", "1>2", "2>3", "3>1"]);
        assert_eq!(p.relations.loop_markers["1>1"], LoopMarker::Idempotent);
        // The three cyclic zero relations, nothing else.
        assert_eq!(p.relations.monomial.len(), 3);
        assert!(p.relations.monomial.contains(&("1>2".into(), "3>1".into())));
        assert!(p.relations.monomial.contains(&("3>1".into(), "2>3".into())));
        assert!(p.relations.monomial.contains(&("2>3".into(), "1>2".into())));

        let triple = triple_of(&t).unwrap();
        assert_eq!(triple.special, ["1".to_owned()].into());
        assert!(crate::quiver::validate_skew_gentle(&triple).unwrap().is_gentle());

        let labels: Vec<String> =
            tagged_arc_index(&t).unwrap().iter().map(TaggedArcLabel::label).collect();
        assert_eq!(labels, ["1-", "1+", "2", "3"]);
    }

    #[test]
    fn extraction_of_the_four_cycle_disc() {
        let t = fixtures::four_cycle_disc();
        let triple = triple_of(&t).unwrap();
        assert_eq!(triple.quiver.vertices(), ["1", "2", "3", "4"]);
        assert_eq!(triple.special, ["1".to_owned()].into());
        assert_eq!(triple.relations.monomial.len(), 4);
        assert!(crate::quiver::validate_skew_gentle(&triple).unwrap().is_gentle());
        let rep = crate::cartan::determinacy(&triple).unwrap();
        assert!(!rep.determined);
    }

    #[test]
    fn extraction_handles_holed_monogons_as_nilpotent_loops() {
        let t = fixtures::annulus_loop();
        let p = extract_algebra(&t).unwrap();
        assert_eq!(p.quiver.vertices(), ["1"]);
        assert_eq!(p.relations.loop_markers["1>1"], LoopMarker::Nilpotent);
        let triple = triple_of(&t).unwrap();
        assert!(triple.special.is_empty());
        assert!(triple.relations.monomial.contains(&("1>1".into(), "1>1".into())));
    }

    #[test]
    fn unfolding_the_three_cycle_disc_gives_the_star_presentation() {
        let t = fixtures::three_cycle_disc();
        let u = unfold(&t).unwrap();
        u.validate().unwrap();
        assert!(u.punctures.is_empty());
        assert!(u.arcs.contains(&"1*".to_owned()));
        assert!(u.points.contains(&"P".to_owned()));

        let pu = extract_algebra(&u).unwrap();
        // Arrows: the three cycle arrows plus the two radius arrows replacing
        // the idempotent loop.
        assert_eq!(pu.quiver.arrows().len(), 5);
        assert!(pu.relations.loop_markers.is_empty());
        let star = crate::constructions::build_star(&triple_of(&t).unwrap()).unwrap();
        assert!(crate::iso::presentations_isomorphic(&pu, &star));
    }

    #[test]
    fn original_tiling_presents_the_squared_zero_loop_algebra() {
        let t = fixtures::three_cycle_disc();
        let o = original_tiling(&t).unwrap();
        o.validate().unwrap();
        let po = extract_algebra(&o).unwrap();
        assert_eq!(po.relations.loop_markers["1>1"], LoopMarker::Nilpotent);
        let sp = crate::constructions::build_sp(&triple_of(&t).unwrap()).unwrap();
        assert!(crate::iso::presentations_isomorphic(&po, &sp));
    }
}
