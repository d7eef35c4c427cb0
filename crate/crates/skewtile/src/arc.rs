//! Curves on a tiled surface and the permissibility rules for tagged arcs.
//!
//! A curve is stored as its two tagged ends plus the ordered list of edge
//! crossings; everything else (the chords it draws inside each chart
//! polygon) is derived. Each crossing records the side (`from`) of the edge
//! the curve approaches from, so the segment before crossing `k` ends on
//! slot `(edge_k, from_k)` and the segment after it starts on the twin slot.
//! An end is anchored at a polygon vertex: a marked-point occurrence (a
//! *corner*) or the puncture apex of a cut monogon. Crossings include the
//! virtual cut edges (radii and banks) — exchange formats may omit those,
//! but the in-memory curve is always fully explicit.
//!
//! [`validate_curve`] checks that a curve is a *permissible tagged arc*:
//!
//! * the chain of segments is drawable (consecutive attachments share a
//!   polygon) and never touches boundary or circle edges;
//! * it is *reduced*: no segment returns to the slot it came from, and no
//!   end segment hits an edge incident to its own anchor (such crossings
//!   slide off around the anchor);
//! * ends never anchor inside a punctured monogon (they could be pushed out
//!   across its loop), and a zero-crossing curve may not run parallel to a
//!   single arc, boundary or circle edge — those curves are homotopic to an
//!   arc of the tiling or to a boundary piece;
//! * it never winds: crossing a radius or bank twice in a row circles the
//!   puncture or hole, and a passage that enters and leaves a cut polygon
//!   through the same mouth slot must cross the cut on the side dictated by
//!   where its two outer strands attach (the *pin rule* below);
//! * tags obey the tagged-arc rules: notches only at punctures (T2), a
//!   curve with both ends at one puncture is tagged equally (T3), and a
//!   loop that cuts off a once-punctured monogon is rejected (T1) — its
//!   role is played by the two tagged radii of that puncture;
//! * it is simple (no self-crossings), checked with the same segment
//!   machinery used for intersection numbers.
//!
//! # The pin rule
//!
//! A passage `mouth → cut → mouth` through a cut polygon (around a puncture
//! or a hole) admits two encodings: the cut can be crossed from either of
//! its two slots. The two encodings describe the two ways around the
//! puncture or hole, which present the same tagged arc; only one of them is
//! reduced against the passage's surroundings. Walk the two outer strands
//! away from the mouth in parallel; where they diverge, rank their
//! attachments by walking anticlockwise around that polygon starting just
//! after the strands' shared slot. Crossing the cut from the slot nearest
//! past the inner mouth is valid exactly when the entering strand's rank
//! exceeds the leaving strand's. A full tie means the curve is palindromic
//! around the passage, and both encodings denote the same curve; both are
//! accepted and canonicalisation picks one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{Chart, EdgeKind, SlotId, VertexKind};
use crate::tiling::TileKind;

/// A tagged-arc end marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Plain,
    Notched,
}

/// Where a curve end sits: a polygon vertex of the chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Anchor {
    pub polygon: usize,
    pub vertex: usize,
}

/// One end of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurveEnd {
    pub anchor: Anchor,
    pub tag: Tag,
}

/// One crossing: the edge, and the half (slot) it is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Crossing {
    pub edge: usize,
    pub from: usize,
}

impl Crossing {
    /// The same geometric crossing seen from the reversed curve.
    pub fn flipped(self) -> Crossing {
        Crossing { edge: self.edge, from: 1 - self.from }
    }
}

/// A curve: two tagged ends and the crossings between them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Curve {
    pub ends: [CurveEnd; 2],
    pub crossings: Vec<Crossing>,
}

impl Curve {
    /// The same curve traversed the other way.
    pub fn flipped(&self) -> Curve {
        Curve {
            ends: [self.ends[1], self.ends[0]],
            crossings: self.crossings.iter().rev().map(|c| c.flipped()).collect(),
        }
    }

    /// The lexicographically smaller of the two traversals — the
    /// deduplication key for unoriented curves.
    pub fn canonical(&self) -> Curve {
        let f = self.flipped();
        if *self <= f {
            self.clone()
        } else {
            f
        }
    }

    /// The ids of the tiling arcs crossed, in order.
    pub fn word(&self, chart: &Chart) -> Vec<String> {
        self.crossings
            .iter()
            .filter_map(|c| chart.edge_arc(c.edge).map(str::to_owned))
            .collect()
    }
}

/// Why a curve is not a permissible tagged arc.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("anchor refers to polygon {polygon}, vertex {vertex}, which does not exist")]
    NoSuchVertex { polygon: usize, vertex: usize },
    #[error("end {end} is anchored at a bank foot, which is no marked point")]
    FootAnchor { end: usize },
    #[error("end {end} is anchored at a corner inside a punctured monogon; such an end slides out across the monogon's loop")]
    AnchorInPuncturedMonogon { end: usize },
    #[error("end {end} is notched but does not sit at a puncture")]
    NotchedAtCorner { end: usize },
    #[error("both ends sit at puncture {puncture:?} but carry different tags")]
    LoopTagMismatch { puncture: String },
    #[error("crossing {crossing} refers to edge {edge}, which does not exist")]
    NoSuchEdge { crossing: usize, edge: usize },
    #[error("crossing {crossing} crosses a {kind} edge, which a curve may never touch")]
    UncrossableEdge { crossing: usize, kind: &'static str },
    #[error("crossing {crossing} has side {from}; sides are 0 or 1")]
    BadSide { crossing: usize, from: usize },
    #[error("segment {segment} would connect attachments in polygons {a} and {b}")]
    DisconnectedChain { segment: usize, a: usize, b: usize },
    #[error("segment {segment} leaves and re-enters through the same slot — a bigon with that edge")]
    SameSlotBigon { segment: usize },
    #[error("the first crossing after end {end} is on an edge incident to its anchor; the crossing slides off around the anchor")]
    EndBigon { end: usize },
    #[error("a curve with no crossings cannot connect an anchor occurrence to itself")]
    TrivialChord,
    #[error("the curve runs parallel to arc {arc:?} of the tiling")]
    HomotopicToArc { arc: String },
    #[error("the curve runs parallel to a boundary segment or circle")]
    BoundaryHomotopic,
    #[error("the curve runs parallel to the radius of puncture {puncture:?}; that tagged arc is written as the radius itself")]
    RadiusHomotopic { puncture: String },
    #[error("crossing {crossing} and its successor wind around a puncture or hole")]
    Winding { crossing: usize },
    #[error("crossing {crossing} takes the cut on the wrong side for its surroundings (pin rule)")]
    PinViolation { crossing: usize },
    #[error("the curve is a loop cutting off the once-punctured monogon of {puncture:?}; it decomposes into that puncture's two tagged radii")]
    CutsPuncturedMonogon { puncture: String },
    #[error("the curve crosses itself ({count} self-crossings)")]
    NotSimple { count: usize },
}

/// A point where a segment meets its polygon's boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attach {
    /// An anchor, by vertex index.
    Vertex(usize),
    /// A crossing, by slot position.
    Slot(usize),
}

/// One chord of the curve: its polygon and its two attachments, `a` towards
/// end 0 and `b` towards end 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub polygon: usize,
    pub a: Attach,
    pub b: Attach,
}

/// Splits a structurally sound curve into its segments. Checks references
/// and chain consistency; everything else is [`validate_curve`]'s business.
pub fn segments(chart: &Chart, curve: &Curve) -> Result<Vec<Segment>, CurveError> {
    for (end, e) in curve.ends.iter().enumerate() {
        let poly = chart.polygons.get(e.anchor.polygon).ok_or(CurveError::NoSuchVertex {
            polygon: e.anchor.polygon,
            vertex: e.anchor.vertex,
        })?;
        if e.anchor.vertex >= poly.vertices.len() {
            return Err(CurveError::NoSuchVertex {
                polygon: e.anchor.polygon,
                vertex: e.anchor.vertex,
            });
        }
        if poly.vertices[e.anchor.vertex] == VertexKind::Foot {
            return Err(CurveError::FootAnchor { end });
        }
    }
    for (k, c) in curve.crossings.iter().enumerate() {
        let Some(kind) = chart.edges.get(c.edge) else {
            return Err(CurveError::NoSuchEdge { crossing: k, edge: c.edge });
        };
        if !kind.crossable() {
            let name = match kind {
                EdgeKind::Boundary => "boundary",
                EdgeKind::WCut { .. } => "circle",
                _ => unreachable!(),
            };
            return Err(CurveError::UncrossableEdge { crossing: k, kind: name });
        }
        if c.from > 1 {
            return Err(CurveError::BadSide { crossing: k, from: c.from });
        }
    }

    let n = curve.crossings.len();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let (pa, a) = if j == 0 {
            (curve.ends[0].anchor.polygon, Attach::Vertex(curve.ends[0].anchor.vertex))
        } else {
            let c = curve.crossings[j - 1];
            let (p, pos) = chart.position(SlotId { edge: c.edge, half: 1 - c.from });
            (p, Attach::Slot(pos))
        };
        let (pb, b) = if j == n {
            (curve.ends[1].anchor.polygon, Attach::Vertex(curve.ends[1].anchor.vertex))
        } else {
            let c = curve.crossings[j];
            let (p, pos) = chart.position(SlotId { edge: c.edge, half: c.from });
            (p, Attach::Slot(pos))
        };
        if pa != pb {
            return Err(CurveError::DisconnectedChain { segment: j, a: pa, b: pb });
        }
        out.push(Segment { polygon: pa, a, b });
    }
    Ok(out)
}

/// Rank of a boundary item in the anticlockwise walk that starts at the
/// vertex following position `pm`: vertices get even ranks, slots odd ones.
pub(crate) fn walk_rank(len: usize, pm: usize, item: Attach) -> usize {
    match item {
        Attach::Vertex(v) => 2 * ((v + len - pm) % len),
        Attach::Slot(q) => 2 * ((q + len - 1 - pm) % len) + 1,
    }
}

/// The pin-rule check for the cut crossing at index `i` (a radius or bank).
fn check_pin(chart: &Chart, curve: &Curve, i: usize) -> Result<(), CurveError> {
    let c = &curve.crossings;
    let n = c.len();
    if i == 0 || i + 1 == n {
        // The flanking segment ends at an anchor: only one encoding draws.
        return Ok(());
    }
    if c[i - 1].edge != c[i + 1].edge || c[i + 1].from != 1 - c[i - 1].from {
        // Pass-through between two different mouths: the encodings are
        // genuinely different curves, both permitted.
        return Ok(());
    }
    let mouth = c[i - 1].edge;
    let (inner_poly, p_in) = chart.position(SlotId { edge: mouth, half: 1 - c[i - 1].from });
    let ipoly = &chart.polygons[inner_poly];
    let q_act = chart.position(SlotId { edge: c[i].edge, half: c[i].from }).1;
    let q_near = (1..ipoly.len())
        .map(|step| (p_in + step) % ipoly.len())
        .find(|&q| ipoly.slots[q].edge == c[i].edge)
        .expect("the crossed cut has a slot in the passage polygon");

    // Walk the two strands outwards in parallel until they diverge.
    let far_prefix = |k: usize| -> (usize, Attach) {
        if k == 0 {
            (curve.ends[0].anchor.polygon, Attach::Vertex(curve.ends[0].anchor.vertex))
        } else {
            let cr = c[k - 1];
            let (p, q) = chart.position(SlotId { edge: cr.edge, half: 1 - cr.from });
            (p, Attach::Slot(q))
        }
    };
    let far_suffix = |k: usize| -> (usize, Attach) {
        if k == n {
            (curve.ends[1].anchor.polygon, Attach::Vertex(curve.ends[1].anchor.vertex))
        } else {
            let (p, q) = chart.position(SlotId { edge: c[k].edge, half: c[k].from });
            (p, Attach::Slot(q))
        }
    };
    let (mut poly, mut pm) = chart.position(SlotId { edge: mouth, half: c[i - 1].from });
    let mut kp = i - 1;
    let mut ks = i + 2;
    loop {
        let (pp, ap) = far_prefix(kp);
        let (ps, asx) = far_suffix(ks);
        debug_assert_eq!(pp, poly, "prefix strand stays in the corridor polygon");
        debug_assert_eq!(ps, poly, "suffix strand stays in the corridor polygon");
        if ap == asx {
            match ap {
                // Full tie: the curve is palindromic around the passage and
                // the two encodings are the same unoriented curve.
                Attach::Vertex(_) => return Ok(()),
                Attach::Slot(q) => {
                    let slot = chart.slot_at(poly, q);
                    let (np, nq) = chart.position(SlotId { edge: slot.edge, half: 1 - slot.half });
                    poly = np;
                    pm = nq;
                    kp -= 1;
                    ks += 1;
                }
            }
        } else {
            let len = chart.polygons[poly].len();
            let required_near = walk_rank(len, pm, ap) > walk_rank(len, pm, asx);
            if (q_act == q_near) != required_near {
                return Err(CurveError::PinViolation { crossing: i });
            }
            return Ok(());
        }
    }
}

/// The loop-cutting test (T1): a loop whose crossings mirror around a single
/// radius crossing bounds a once-punctured monogon.
fn cuts_punctured_monogon(chart: &Chart, curve: &Curve) -> Option<String> {
    if curve.ends[0].anchor != curve.ends[1].anchor {
        return None;
    }
    let c = &curve.crossings;
    let n = c.len();
    if n < 3 || n % 2 == 0 {
        return None;
    }
    let mid = n / 2;
    let EdgeKind::Radius { puncture } = &chart.edges[c[mid].edge] else {
        return None;
    };
    for k in 0..n {
        if k != mid && c[n - 1 - k] != c[k].flipped() {
            return None;
        }
    }
    Some(puncture.clone())
}

/// Checks that a curve is a permissible tagged arc. See the module docs for
/// the full list of rules.
pub fn validate_curve(chart: &Chart, curve: &Curve) -> Result<(), CurveError> {
    let segs = segments(chart, curve)?;

    // End conditions and tag rules.
    let mut puncture_of = [None, None];
    for (end, e) in curve.ends.iter().enumerate() {
        let poly = &chart.polygons[e.anchor.polygon];
        match &poly.vertices[e.anchor.vertex] {
            VertexKind::Foot => unreachable!("rejected while splitting into segments"),
            VertexKind::Puncture(p) => puncture_of[end] = Some(p.clone()),
            VertexKind::Marked(_) => {
                if poly.kind == TileKind::PuncturedMonogon {
                    return Err(CurveError::AnchorInPuncturedMonogon { end });
                }
                if e.tag == Tag::Notched {
                    return Err(CurveError::NotchedAtCorner { end });
                }
            }
        }
    }
    if let (Some(p0), Some(p1)) = (&puncture_of[0], &puncture_of[1]) {
        if p0 == p1 && curve.ends[0].tag != curve.ends[1].tag {
            return Err(CurveError::LoopTagMismatch { puncture: p0.clone() });
        }
    }

    // Segment rules: same-slot bigons, end bigons, and the zero-crossing
    // parallels.
    for (j, seg) in segs.iter().enumerate() {
        let len = chart.polygons[seg.polygon].len();
        match (seg.a, seg.b) {
            (Attach::Slot(p), Attach::Slot(q)) => {
                if p == q {
                    return Err(CurveError::SameSlotBigon { segment: j });
                }
            }
            (Attach::Vertex(v), Attach::Slot(q)) | (Attach::Slot(q), Attach::Vertex(v)) => {
                if q == v || q == (v + 1) % len {
                    let end = if matches!(seg.a, Attach::Vertex(_)) { 0 } else { 1 };
                    return Err(CurveError::EndBigon { end });
                }
            }
            (Attach::Vertex(u), Attach::Vertex(v)) => {
                debug_assert_eq!(segs.len(), 1, "vertex-to-vertex chords carry no crossing");
                if u == v {
                    return Err(CurveError::TrivialChord);
                }
                // Reject chords parallel to a single edge.
                let poly = &chart.polygons[seg.polygon];
                for (x, y) in [(u, v), (v, u)] {
                    if (y + len - x) % len == 1 {
                        let slot = poly.slots[(x + 1) % len];
                        return Err(match &chart.edges[slot.edge] {
                            EdgeKind::TArc(a) => CurveError::HomotopicToArc { arc: a.clone() },
                            EdgeKind::Radius { puncture } => {
                                CurveError::RadiusHomotopic { puncture: puncture.clone() }
                            }
                            EdgeKind::Boundary | EdgeKind::WCut { .. } | EdgeKind::Bank { .. } => {
                                CurveError::BoundaryHomotopic
                            }
                        });
                    }
                }
            }
        }
    }

    // Winding: two consecutive crossings of one radius or bank circle the
    // puncture or hole.
    for j in 1..curve.crossings.len() {
        if curve.crossings[j].edge == curve.crossings[j - 1].edge
            && matches!(
                chart.edges[curve.crossings[j].edge],
                EdgeKind::Radius { .. } | EdgeKind::Bank { .. }
            )
        {
            return Err(CurveError::Winding { crossing: j - 1 });
        }
    }

    // T1 before the pin rule: monogon-cutting loops are palindromic, and the
    // pin check deliberately accepts palindromes.
    if let Some(puncture) = cuts_punctured_monogon(chart, curve) {
        return Err(CurveError::CutsPuncturedMonogon { puncture });
    }

    // Pin rule at every cut crossing.
    for i in 0..curve.crossings.len() {
        if matches!(
            chart.edges[curve.crossings[i].edge],
            EdgeKind::Radius { .. } | EdgeKind::Bank { .. }
        ) {
            check_pin(chart, curve, i)?;
        }
    }

    // Simplicity, with the shared crossing-count machinery.
    let count = crate::intersect::self_crossings(chart, curve);
    if count > 0 {
        return Err(CurveError::NotSimple { count });
    }
    Ok(())
}
