//! Reading and writing the JSON document formats.
//!
//! Four document kinds, each tagged by a `format` field so that a file
//! handed to the wrong reader fails with a clear message:
//!
//! - `quiver.v1` — a skew-gentle triple: `vertices`, `arrows`
//!   (`{id, source, target}`), `relations` (pairs `[a, b]`, meaning the path
//!   traversing `b` then `a` is zero), and the `special` vertex list.
//! - `presentation.v1` — a presented algebra: the same quiver fields plus
//!   `loop_markers` (arrow id → `"nilpotent"` / `"idempotent"`), `binomial`
//!   relations, and the ordered `idempotents` list the Cartan matrix is
//!   indexed by. When `idempotents` is omitted it defaults to one idempotent
//!   per vertex, split into `v-` / `v+` at each vertex carrying an
//!   idempotent loop.
//! - `tiling.v1` — a combinatorial tiling: `tiles` with `type` (the roman
//!   code), `boundary` (edges: `{"arc": id, "side": 0|1}` or
//!   `{"segment": [p, q]}`), `corners` (the marked point after each boundary
//!   edge), and `interior`. The global `arcs` / `points` / `punctures` id
//!   lists may be omitted; they are then collected from the tiles.
//! - `arc.v1` — a multiset of tagged curves over a fixed tiling: per curve
//!   two ends (anchor plus optional `tag`, default plain) and the word of
//!   tiling-arc `crossings`, plus an optional `multiplicity` (default 1).
//!
//! # Anchors
//!
//! An end's `anchor` is either a bare id string (a puncture, or a marked
//! point with a single usable corner occurrence) or an object naming exactly
//! one of: a corner occurrence `{"point", "tile", "corner", "copy"}`, where
//! `copy` picks between the two occurrences of a corner split by cutting
//! (default 0); a `{"puncture": id}`; an unmarked boundary circle
//! `{"wrap": tile}`; or the base-point entry inside a loop's monogon
//! `{"loop-base": puncture}`. The last two forms parse but never validate —
//! curves touching them are rejected with the corresponding end-condition
//! error, which keeps the diagnostics precise.
//!
//! # Cut crossings
//!
//! Stored crossing words mention tiling arcs only. Crossings of the virtual
//! cut edges — a punctured monogon's radius, a holed tile's bank — are
//! reconstructed when a document is read:
//!
//! - between two consecutive attachments on the *same* slot the passage is
//!   forced, because a direct segment would bound a bigon;
//! - an explicit `"behind": true` on a crossing (or on an end, for the
//!   first or last segment) requests a passage where both a direct segment
//!   and one behind the cut are available, as in a holed digon.
//!
//! Each reconstructed passage crosses its polygon's unique cut edge once.
//! The side is not stored: every assignment of sides is tried in
//! lexicographic order and the first valid curve wins, validity being the
//! full permissibility check — so, for example, the pin rule is what picks
//! the side of a radius. When writing, cut crossings are dropped and a
//! `behind` flag is emitted only where the passage is not forced.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arc::{validate_curve, Anchor, Crossing, Curve, CurveEnd, CurveError, Tag};
use crate::chart::{Chart, ChartError, EdgeKind, SlotId, VertexKind};
use crate::constructions::{IdempotentKind, IdempotentLabel, Presentation};
use crate::quiver::{
    Arrow, BinomialRelation, LoopMarker, Quiver, QuiverError, RelationSet, SkewGentleTriple,
};
use crate::tiling::{Interior, Tile, TileEdge, TileKind, Tiling, TilingError};

/// `format` value of a skew-gentle triple document.
pub const QUIVER_FORMAT: &str = "quiver.v1";
/// `format` value of a presentation document.
pub const PRESENTATION_FORMAT: &str = "presentation.v1";
/// `format` value of a tiling document.
pub const TILING_FORMAT: &str = "tiling.v1";
/// `format` value of an arc multiset document.
pub const ARCS_FORMAT: &str = "arc.v1";

/// Errors from reading documents. `Parse` means the text does not match the
/// schema; every other variant is a domain error in a well-formed document.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoError {
    /// Malformed JSON, a schema mismatch, or the wrong `format` tag. The
    /// message carries the JSON path and position where reading failed.
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    /// A curve resolved against the chart but is not a permissible arc.
    #[error("arcs[{index}]: {source}")]
    Curve { index: usize, source: CurveError },
    /// A well-formed document referring to things that do not exist.
    #[error("{0}")]
    Resolve(String),
}

impl IoError {
    /// The process exit status the error maps to: 2 for parse errors, 1 for
    /// domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::Parse(_) => 2,
            _ => 1,
        }
    }
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| IoError::Parse(e.to_string()))?;
    de.end().map_err(|e| IoError::Parse(e.to_string()))?;
    Ok(doc)
}

fn expect_format(found: &str, want: &str) -> Result<(), IoError> {
    if found == want {
        Ok(())
    } else {
        Err(IoError::Parse(format!("format: expected {want:?}, found {found:?}")))
    }
}

fn to_pretty<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

// ---------------------------------------------------------------- quiver.v1

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDoc {
    format: String,
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<Arrow>,
    #[serde(default)]
    relations: Vec<(String, String)>,
    #[serde(default)]
    special: Vec<String>,
}

/// Reads a skew-gentle triple document (`quiver.v1`). The triple is checked
/// structurally (ids exist, relations are composable zero pairs); whether it
/// is actually skew-gentle is a separate question.
pub fn read_triple(text: &str) -> Result<SkewGentleTriple, IoError> {
    let doc: QuiverDoc = parse(text)?;
    expect_format(&doc.format, QUIVER_FORMAT)?;
    let quiver = Quiver::new(doc.vertices, doc.arrows)?;
    let special: BTreeSet<String> = doc.special.into_iter().collect();
    Ok(SkewGentleTriple::new(quiver, special, RelationSet::from_pairs(doc.relations))?)
}

/// Writes a skew-gentle triple document (`quiver.v1`).
pub fn write_triple(t: &SkewGentleTriple) -> String {
    to_pretty(&QuiverDoc {
        format: QUIVER_FORMAT.to_owned(),
        vertices: t.quiver.vertices().to_vec(),
        arrows: t.quiver.arrows().to_vec(),
        relations: t.relations.monomial.iter().cloned().collect(),
        special: t.special.iter().cloned().collect(),
    })
}

// ---------------------------------------------------------- presentation.v1

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    format: String,
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<Arrow>,
    #[serde(default)]
    relations: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    loop_markers: BTreeMap<String, LoopMarker>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    binomial: Vec<BinomialRelation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    idempotents: Option<Vec<IdempotentLabel>>,
}

/// Reads a presentation document (`presentation.v1`).
pub fn read_presentation(text: &str) -> Result<Presentation, IoError> {
    let doc: PresentationDoc = parse(text)?;
    expect_format(&doc.format, PRESENTATION_FORMAT)?;
    let quiver = Quiver::new(doc.vertices, doc.arrows)?;
    let relations = RelationSet {
        monomial: doc.relations.into_iter().collect(),
        loop_markers: doc.loop_markers,
        binomial: doc.binomial,
    };
    relations.validate(&quiver)?;
    let idempotents = match doc.idempotents {
        Some(list) => checked_idempotents(&quiver, list)?,
        None => default_idempotents(&quiver, &relations),
    };
    Ok(Presentation { quiver, relations, idempotents })
}

fn checked_idempotents(
    q: &Quiver,
    list: Vec<IdempotentLabel>,
) -> Result<Vec<IdempotentLabel>, IoError> {
    let mut seen = BTreeSet::new();
    for e in &list {
        if !seen.insert(e.label.clone()) {
            return Err(IoError::Resolve(format!("duplicate idempotent label {:?}", e.label)));
        }
        if !q.has_vertex(&e.vertex) {
            return Err(IoError::Resolve(format!(
                "idempotent {:?} names unknown vertex {:?}",
                e.label, e.vertex
            )));
        }
        if let Some(l) = &e.loop_arrow {
            if q.arrow(l).is_none() {
                return Err(IoError::Resolve(format!(
                    "idempotent {:?} names unknown loop arrow {l:?}",
                    e.label
                )));
            }
        }
    }
    Ok(list)
}

fn default_idempotents(q: &Quiver, rels: &RelationSet) -> Vec<IdempotentLabel> {
    let mut out = Vec::new();
    for v in q.vertices() {
        let idem_loop = q.arrows().iter().find(|a| {
            a.source == *v
                && a.target == *v
                && rels.loop_markers.get(&a.id) == Some(&LoopMarker::Idempotent)
        });
        match idem_loop {
            Some(l) => {
                out.push(IdempotentLabel {
                    label: format!("{v}-"),
                    vertex: v.clone(),
                    kind: IdempotentKind::SpecialMinus,
                    loop_arrow: Some(l.id.clone()),
                });
                out.push(IdempotentLabel {
                    label: format!("{v}+"),
                    vertex: v.clone(),
                    kind: IdempotentKind::SpecialPlus,
                    loop_arrow: Some(l.id.clone()),
                });
            }
            None => out.push(IdempotentLabel {
                label: v.clone(),
                vertex: v.clone(),
                kind: IdempotentKind::Vertex,
                loop_arrow: None,
            }),
        }
    }
    out
}

/// Writes a presentation document (`presentation.v1`).
pub fn write_presentation(p: &Presentation) -> String {
    to_pretty(&PresentationDoc {
        format: PRESENTATION_FORMAT.to_owned(),
        vertices: p.quiver.vertices().to_vec(),
        arrows: p.quiver.arrows().to_vec(),
        relations: p.relations.monomial.iter().cloned().collect(),
        loop_markers: p.relations.loop_markers.clone(),
        binomial: p.relations.binomial.clone(),
        idempotents: Some(p.idempotents.clone()),
    })
}

// ---------------------------------------------------------------- tiling.v1

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TilingDoc {
    format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    punctures: Option<Vec<String>>,
    tiles: Vec<Tile>,
}

fn collect_arcs(tiles: &[Tile]) -> Vec<String> {
    let mut ids = BTreeSet::new();
    for t in tiles {
        for e in &t.edges {
            if let TileEdge::Arc { arc, .. } = e {
                ids.insert(arc.clone());
            }
        }
    }
    ids.into_iter().collect()
}

fn collect_points(tiles: &[Tile]) -> Vec<String> {
    let mut ids = BTreeSet::new();
    for t in tiles {
        ids.extend(t.corners.iter().cloned());
        for e in &t.edges {
            if let TileEdge::Segment { segment: (a, b) } = e {
                ids.insert(a.clone());
                ids.insert(b.clone());
            }
        }
    }
    ids.into_iter().collect()
}

fn collect_punctures(tiles: &[Tile]) -> Vec<String> {
    let mut ids = BTreeSet::new();
    for t in tiles {
        if let Interior::Puncture(p) = &t.interior {
            ids.insert(p.clone());
        }
    }
    ids.into_iter().collect()
}

/// Reads and validates a tiling document (`tiling.v1`).
pub fn read_tiling(text: &str) -> Result<Tiling, IoError> {
    let doc: TilingDoc = parse(text)?;
    expect_format(&doc.format, TILING_FORMAT)?;
    let arcs = doc.arcs.unwrap_or_else(|| collect_arcs(&doc.tiles));
    let points = doc.points.unwrap_or_else(|| collect_points(&doc.tiles));
    let punctures = doc.punctures.unwrap_or_else(|| collect_punctures(&doc.tiles));
    let tiling = Tiling { arcs, points, punctures, tiles: doc.tiles };
    tiling.validate()?;
    Ok(tiling)
}

/// Writes a tiling document (`tiling.v1`).
pub fn write_tiling(t: &Tiling) -> String {
    to_pretty(&TilingDoc {
        format: TILING_FORMAT.to_owned(),
        arcs: Some(t.arcs.clone()),
        points: Some(t.points.clone()),
        punctures: Some(t.punctures.clone()),
        tiles: t.tiles.clone(),
    })
}

// ------------------------------------------------------------------- arc.v1

fn one() -> usize {
    1
}

fn is_one(n: &usize) -> bool {
    *n == 1
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn plain() -> Tag {
    Tag::Plain
}

fn is_plain(t: &Tag) -> bool {
    *t == Tag::Plain
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcsDoc {
    format: String,
    arcs: Vec<ArcDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcDto {
    end0: EndDto,
    end1: EndDto,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    crossings: Vec<CrossingDto>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndDto {
    anchor: AnchorDto,
    #[serde(default = "plain", skip_serializing_if = "is_plain")]
    tag: Tag,
    #[serde(default, skip_serializing_if = "is_false")]
    behind: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AnchorDto {
    Bare(String),
    Fields(AnchorFields),
}

#[derive(Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct AnchorFields {
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tile: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corner: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    copy: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    puncture: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wrap: Option<usize>,
    #[serde(rename = "loop-base", skip_serializing_if = "Option::is_none")]
    loop_base: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossingDto {
    arc: String,
    side: usize,
    #[serde(default, skip_serializing_if = "is_false")]
    behind: bool,
}

fn resolve_anchor(chart: &Chart, a: &AnchorDto, at: &str) -> Result<Anchor, IoError> {
    match a {
        AnchorDto::Bare(id) => resolve_bare(chart, id, at),
        AnchorDto::Fields(f) => resolve_fields(chart, f, at),
    }
}

fn resolve_bare(chart: &Chart, id: &str, at: &str) -> Result<Anchor, IoError> {
    if chart.tiling.punctures.iter().any(|p| p == id) {
        let (polygon, vertex) = chart.puncture_vertex(id)?;
        return Ok(Anchor { polygon, vertex });
    }
    let hits: Vec<(usize, usize)> = chart
        .corner_anchors()
        .into_iter()
        .filter(|&(p, v)| matches!(&chart.polygons[p].vertices[v], VertexKind::Marked(m) if m == id))
        .collect();
    match hits.as_slice() {
        [] => Err(IoError::Resolve(format!("{at}: no anchorable occurrence of id {id:?}"))),
        [(polygon, vertex)] => Ok(Anchor { polygon: *polygon, vertex: *vertex }),
        _ => {
            let alts: Vec<String> = hits
                .iter()
                .map(|&(p, v)| {
                    let (tile, corner, copy) = chart.vertex_corner(p, v).expect("marked vertex");
                    format!("tile {tile} corner {corner} copy {copy}")
                })
                .collect();
            Err(IoError::Resolve(format!(
                "{at}: point {id:?} occurs at more than one corner; pick one of: {}",
                alts.join(", ")
            )))
        }
    }
}

fn resolve_fields(chart: &Chart, f: &AnchorFields, at: &str) -> Result<Anchor, IoError> {
    let picked = [f.point.is_some(), f.puncture.is_some(), f.wrap.is_some(), f.loop_base.is_some()];
    if picked.iter().filter(|&&b| b).count() != 1 {
        return Err(IoError::Parse(format!(
            "{at}: anchor must name exactly one of point, puncture, wrap, loop-base"
        )));
    }
    if f.point.is_none() && (f.tile.is_some() || f.corner.is_some() || f.copy.is_some()) {
        return Err(IoError::Parse(format!("{at}: tile/corner/copy apply only to a point anchor")));
    }
    if let Some(point) = &f.point {
        return match (f.tile, f.corner) {
            (Some(tile), Some(corner)) => {
                let (polygon, vertex) = chart.corner_vertex(point, tile, corner, f.copy.unwrap_or(0))?;
                Ok(Anchor { polygon, vertex })
            }
            (None, None) if f.copy.is_none() => resolve_bare(chart, point, at),
            _ => Err(IoError::Parse(format!(
                "{at}: tile and corner go together (copy is optional)"
            ))),
        };
    }
    if let Some(p) = &f.puncture {
        let (polygon, vertex) = chart.puncture_vertex(p)?;
        return Ok(Anchor { polygon, vertex });
    }
    if let Some(tile) = f.wrap {
        let poly = chart
            .polygons
            .get(tile)
            .ok_or_else(|| IoError::Resolve(format!("{at}: no tile {tile}")))?;
        if !matches!(poly.kind, TileKind::HoledMonogon | TileKind::HoledDigon) {
            return Err(IoError::Resolve(format!(
                "{at}: tile {tile} has no unmarked boundary circle to wrap"
            )));
        }
        return Ok(Anchor { polygon: tile, vertex: 1 });
    }
    let p = f.loop_base.as_ref().expect("one of the four forms is present");
    let (polygon, _) = chart.puncture_vertex(p)?;
    Ok(Anchor { polygon, vertex: 0 })
}

/// Where a curve is attached between two crossings: an end's polygon vertex,
/// or one side of a crossed edge.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Attachment {
    Vertex(usize),
    Slot(SlotId),
}

impl Attachment {
    fn polygon(self, chart: &Chart) -> usize {
        match self {
            Attachment::Vertex(poly) => poly,
            Attachment::Slot(s) => chart.position(s).0,
        }
    }
}

fn cut_edge(chart: &Chart, poly: usize) -> Option<usize> {
    chart.polygons[poly]
        .slots
        .iter()
        .map(|s| s.edge)
        .find(|&e| matches!(chart.edges[e], EdgeKind::Radius { .. } | EdgeKind::Bank { .. }))
}

fn resolve_arc(chart: &Chart, dto: &ArcDto, index: usize) -> Result<(Curve, usize), IoError> {
    let a0 = resolve_anchor(chart, &dto.end0.anchor, &format!("arcs[{index}].end0"))?;
    let a1 = resolve_anchor(chart, &dto.end1.anchor, &format!("arcs[{index}].end1"))?;
    let ends =
        [CurveEnd { anchor: a0, tag: dto.end0.tag }, CurveEnd { anchor: a1, tag: dto.end1.tag }];

    let mut stored = Vec::new();
    for (ci, c) in dto.crossings.iter().enumerate() {
        if c.side > 1 {
            return Err(IoError::Parse(format!(
                "arcs[{index}].crossings[{ci}]: side must be 0 or 1"
            )));
        }
        let edge = chart.arc_edge(&c.arc).ok_or_else(|| {
            IoError::Resolve(format!("arcs[{index}].crossings[{ci}]: no tiling arc {:?}", c.arc))
        })?;
        stored.push(Crossing { edge, from: c.side });
    }

    // Junction j sits between attachment j (end 0, or the far side of stored
    // crossing j-1) and attachment j+1 (stored crossing j, or end 1).
    let n = stored.len();
    let out_att = |j: usize| {
        if j == 0 {
            Attachment::Vertex(a0.polygon)
        } else {
            let c = stored[j - 1];
            Attachment::Slot(SlotId { edge: c.edge, half: 1 - c.from })
        }
    };
    let in_att = |j: usize| {
        if j == n {
            Attachment::Vertex(a1.polygon)
        } else {
            let c = stored[j];
            Attachment::Slot(SlotId { edge: c.edge, half: c.from })
        }
    };
    let flagged = |j: usize| {
        (j == 0 && dto.end0.behind)
            || (j > 0 && dto.crossings[j - 1].behind)
            || (j == n && dto.end1.behind)
    };

    let mut inserts: Vec<(usize, usize)> = Vec::new();
    for j in 0..=n {
        let out = out_att(j);
        let same_slot = matches!(out, Attachment::Slot(_)) && out == in_att(j);
        if !same_slot && !flagged(j) {
            continue;
        }
        match cut_edge(chart, out.polygon(chart)) {
            Some(e) => inserts.push((j, e)),
            None if flagged(j) => {
                return Err(IoError::Resolve(format!(
                    "arcs[{index}]: nothing to pass behind in tile {}",
                    out.polygon(chart)
                )));
            }
            // A same-slot junction in a cut-free polygon: insert nothing and
            // let validation name the defect.
            None => {}
        }
    }

    let k = inserts.len();
    if k > 16 {
        return Err(IoError::Resolve(format!(
            "arcs[{index}]: too many behind passages to resolve"
        )));
    }
    let mut first_err = None;
    for assign in 0u32..(1 << k) {
        let mut crossings = Vec::with_capacity(n + k);
        let mut which = 0;
        for j in 0..=n {
            if which < k && inserts[which].0 == j {
                crossings.push(Crossing {
                    edge: inserts[which].1,
                    from: ((assign >> which) & 1) as usize,
                });
                which += 1;
            }
            if j < n {
                crossings.push(stored[j]);
            }
        }
        let curve = Curve { ends, crossings };
        match validate_curve(chart, &curve) {
            Ok(()) => return Ok((curve, dto.multiplicity)),
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    }
    let source = first_err.expect("at least one assignment was tried");
    Err(IoError::Curve { index, source })
}

/// Reads an arc multiset document (`arc.v1`) against a chart. Every curve is
/// validated; cut crossings are reconstructed as described in the module
/// docs. Curves come back in document order with their stored orientation.
pub fn read_arcs(chart: &Chart, text: &str) -> Result<Vec<(Curve, usize)>, IoError> {
    let doc: ArcsDoc = parse(text)?;
    expect_format(&doc.format, ARCS_FORMAT)?;
    doc.arcs.iter().enumerate().map(|(i, dto)| resolve_arc(chart, dto, i)).collect()
}

fn anchor_dto(chart: &Chart, a: Anchor) -> AnchorDto {
    let poly = &chart.polygons[a.polygon];
    match &poly.vertices[a.vertex] {
        VertexKind::Marked(_) if poly.kind == TileKind::PuncturedMonogon => {
            let p = match &chart.tiling.tiles[poly.tile].interior {
                Interior::Puncture(p) => p.clone(),
                _ => unreachable!("a punctured monogon encloses a puncture"),
            };
            AnchorDto::Fields(AnchorFields { loop_base: Some(p), ..Default::default() })
        }
        VertexKind::Marked(_) => {
            let (tile, corner, copy) =
                chart.vertex_corner(a.polygon, a.vertex).expect("marked vertex");
            let copies = chart.corner_copies(tile, corner).expect("corner exists").len();
            AnchorDto::Fields(AnchorFields {
                point: Some(chart.tiling.tiles[tile].corners[corner].clone()),
                tile: Some(tile),
                corner: Some(corner),
                copy: (copies > 1).then_some(copy),
                ..Default::default()
            })
        }
        VertexKind::Puncture(p) => {
            AnchorDto::Fields(AnchorFields { puncture: Some(p.clone()), ..Default::default() })
        }
        VertexKind::Foot => {
            AnchorDto::Fields(AnchorFields { wrap: Some(a.polygon), ..Default::default() })
        }
    }
}

fn arc_dto(chart: &Chart, curve: &Curve, multiplicity: usize) -> ArcDto {
    let mut end0 =
        EndDto { anchor: anchor_dto(chart, curve.ends[0].anchor), tag: curve.ends[0].tag, behind: false };
    let end1 =
        EndDto { anchor: anchor_dto(chart, curve.ends[1].anchor), tag: curve.ends[1].tag, behind: false };
    let n = curve.crossings.len();
    let mut out: Vec<CrossingDto> = Vec::new();
    for (i, c) in curve.crossings.iter().enumerate() {
        if let Some(arc) = chart.edge_arc(c.edge) {
            out.push(CrossingDto { arc: arc.to_owned(), side: c.from, behind: false });
            continue;
        }
        // A cut crossing: dropped. Flag the passage on the preceding stored
        // crossing (or on end 0) unless the flanking attachments force it.
        let prev = if i == 0 {
            Attachment::Vertex(curve.ends[0].anchor.polygon)
        } else {
            let p = curve.crossings[i - 1];
            Attachment::Slot(SlotId { edge: p.edge, half: 1 - p.from })
        };
        let next = if i == n - 1 {
            Attachment::Vertex(curve.ends[1].anchor.polygon)
        } else {
            let q = curve.crossings[i + 1];
            Attachment::Slot(SlotId { edge: q.edge, half: q.from })
        };
        let forced = matches!(prev, Attachment::Slot(_)) && prev == next;
        if !forced {
            match out.last_mut() {
                Some(last) => last.behind = true,
                None => end0.behind = true,
            }
        }
    }
    ArcDto { end0, end1, crossings: out, multiplicity }
}

/// Writes an arc multiset document (`arc.v1`). Cut crossings are dropped;
/// reading reconstructs them. Curves are written in the given order with
/// their given orientation.
pub fn write_arcs(chart: &Chart, arcs: &[(Curve, usize)]) -> String {
    to_pretty(&ArcsDoc {
        format: ARCS_FORMAT.to_owned(),
        arcs: arcs.iter().map(|(c, m)| arc_dto(chart, c, *m)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::constructions::{build_bowtie, build_sg, build_sp, build_star};
    use crate::fixtures;
    use crate::intersect::enumerate_arcs;

    fn corner(polygon: usize, vertex: usize) -> CurveEnd {
        CurveEnd { anchor: Anchor { polygon, vertex }, tag: Tag::Plain }
    }

    #[test]
    fn triple_documents_round_trip() {
        for t in [fixtures::three_cycle(), fixtures::four_cycle()] {
            let text = write_triple(&t);
            let back = read_triple(&text).expect("round-trips");
            assert_eq!(back.quiver.vertices(), t.quiver.vertices());
            assert_eq!(back.quiver.arrows(), t.quiver.arrows());
            assert_eq!(back.special, t.special);
            assert_eq!(back.relations, t.relations);
            assert_eq!(write_triple(&back), text);
        }

        let minimal = r#"{ "format": "quiver.v1", "vertices": ["1"] }"#;
        let one = read_triple(minimal).expect("defaults fill in");
        assert_eq!(one.quiver.vertices(), ["1".to_owned()]);
        assert!(one.quiver.arrows().is_empty());
        assert!(one.special.is_empty());
    }

    #[test]
    fn parse_errors_carry_paths_and_exit_code_two() {
        let unknown = r#"{ "format": "quiver.v1", "vertices": ["1"], "bogus": 3 }"#;
        let err = read_triple(unknown).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("bogus") && msg.contains("line"), "{msg}");

        let wrong = r#"{ "format": "tiling.v1", "vertices": [] }"#;
        let err = read_triple(wrong).unwrap_err();
        assert!(err.to_string().contains("quiver.v1"), "{err}");
        assert_eq!(err.exit_code(), 2);

        let truncated = r#"{ "format": "quiver.v1", "vertices": ["1"] } trailing"#;
        assert_eq!(read_triple(truncated).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn domain_errors_exit_with_code_one() {
        let dangling = r#"{
            "format": "quiver.v1",
            "vertices": ["1"],
            "arrows": [ { "id": "a", "source": "1", "target": "2" } ]
        }"#;
        let err = read_triple(dangling).unwrap_err();
        assert!(matches!(err, IoError::Quiver(_)), "{err:?}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn presentation_documents_round_trip() {
        let t = fixtures::three_cycle();
        let builders = [build_sp, build_sg, build_bowtie, build_star];
        for build in builders {
            let p = build(&t).expect("builds");
            let text = write_presentation(&p);
            let back = read_presentation(&text).expect("round-trips");
            assert_eq!(back, p);
            assert_eq!(write_presentation(&back), text);
        }
    }

    #[test]
    fn omitted_idempotents_default_to_the_marker_split() {
        let t = fixtures::three_cycle();
        let builders = [build_sp, build_sg, build_bowtie, build_star];
        for build in builders {
            let p = build(&t).expect("builds");
            let mut doc: serde_json::Value =
                serde_json::from_str(&write_presentation(&p)).expect("valid JSON");
            doc.as_object_mut().unwrap().remove("idempotents");
            let back = read_presentation(&doc.to_string()).expect("parses");
            assert_eq!(back.idempotents, p.idempotents);
        }
    }

    #[test]
    fn tiling_documents_round_trip() {
        for (name, t) in fixtures::all() {
            let text = write_tiling(&t);
            let back = read_tiling(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, t, "{name}");
            assert_eq!(write_tiling(&back), text, "{name}");
        }
    }

    #[test]
    fn omitted_id_lists_are_collected_from_the_tiles() {
        for (name, t) in fixtures::all() {
            let mut doc: serde_json::Value =
                serde_json::from_str(&write_tiling(&t)).expect("valid JSON");
            let obj = doc.as_object_mut().unwrap();
            obj.remove("arcs");
            obj.remove("points");
            obj.remove("punctures");
            let back = read_tiling(&doc.to_string()).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, t, "{name}");
        }
    }

    #[test]
    fn tile_documents_use_the_schema_field_names() {
        let text = write_tiling(&fixtures::three_cycle_disc());
        let doc: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        let tile0 = &doc["tiles"][0];
        assert_eq!(tile0["type"], "VI");
        assert!(tile0.get("boundary").is_some(), "{tile0}");
        assert!(tile0.get("kind").is_none() && tile0.get("edges").is_none(), "{tile0}");
    }

    #[test]
    fn arc_documents_round_trip_over_small_enumerations() {
        let tilings = [
            (fixtures::three_cycle_disc(), 11),
            (fixtures::four_cycle_disc(), 28),
            (fixtures::two_puncture_strip(), 15),
            (fixtures::double_chord_annulus(), 2),
            (flanked_digon_disc(), 10),
        ];
        for (t, count) in tilings {
            let chart = Chart::build(&t).expect("charts");
            let arcs = enumerate_arcs(&chart, 3);
            assert_eq!(arcs.len(), count);
            let multiset: Vec<(Curve, usize)> =
                arcs.into_iter().enumerate().map(|(i, c)| (c, i % 3 + 1)).collect();
            let text = write_arcs(&chart, &multiset);
            let back = read_arcs(&chart, &text).expect("round-trips");
            assert_eq!(back.len(), multiset.len());
            for ((c, m), (d, k)) in multiset.iter().zip(&back) {
                assert_eq!(c.canonical(), d.canonical());
                assert_eq!(m, k);
            }
        }
    }

    #[test]
    fn cut_sides_are_rederived_from_the_validity_rules() {
        // Through the monogon on the three-cycle disc the radius must be
        // crossed from side 0...
        let t = fixtures::three_cycle_disc();
        let chart = Chart::build(&t).expect("charts");
        let through = Curve {
            ends: [corner(3, 1), corner(2, 1)],
            crossings: vec![
                Crossing { edge: 1, from: 0 },
                Crossing { edge: 0, from: 0 },
                Crossing { edge: 3, from: 0 },
                Crossing { edge: 0, from: 1 },
                Crossing { edge: 2, from: 0 },
            ],
        };
        validate_curve(&chart, &through).expect("valid");
        let text = write_arcs(&chart, &[(through.clone(), 1)]);
        assert!(!text.contains("behind"), "forced passages carry no flag: {text}");
        let back = read_arcs(&chart, &text).expect("round-trips");
        assert_eq!(back[0].0, through);

        // ...while on the four-cycle disc the same shape of passage is only
        // valid from side 1, which the retry finds.
        let t = fixtures::four_cycle_disc();
        let chart = Chart::build(&t).expect("charts");
        let through = Curve {
            ends: [corner(4, 1), corner(2, 1)],
            crossings: vec![
                Crossing { edge: 3, from: 0 },
                Crossing { edge: 0, from: 0 },
                Crossing { edge: 4, from: 1 },
                Crossing { edge: 0, from: 1 },
                Crossing { edge: 1, from: 1 },
            ],
        };
        validate_curve(&chart, &through).expect("valid");
        let text = write_arcs(&chart, &[(through.clone(), 1)]);
        assert!(!text.contains("behind"), "{text}");
        let back = read_arcs(&chart, &text).expect("round-trips");
        assert_eq!(back[0].0, through);
    }

    /// A disc with a holed digon whose chords `x`, `y` run from `p` to `q`,
    /// flanked by extra boundary points `r` and `t`. Unlike on
    /// `double_chord_annulus`, a curve from `r` to `t` may cross the digon —
    /// its ends are not endpoints of the chords — so both the direct passage
    /// and the one behind the circle exist.
    fn flanked_digon_disc() -> Tiling {
        let arc = |arc: &str, side: usize| TileEdge::Arc { arc: arc.to_owned(), side };
        let seg = |a: &str, b: &str| TileEdge::Segment { segment: (a.to_owned(), b.to_owned()) };
        let strings = |ids: &[&str]| ids.iter().map(|s| (*s).to_owned()).collect::<Vec<_>>();
        Tiling {
            arcs: strings(&["x", "y"]),
            points: strings(&["p", "q", "r", "t"]),
            punctures: vec![],
            tiles: vec![
                Tile {
                    kind: TileKind::HoledDigon,
                    edges: vec![arc("x", 0), arc("y", 1)],
                    corners: strings(&["q", "p"]),
                    interior: Interior::Unmarked,
                },
                Tile {
                    kind: TileKind::BoundaryTriangle,
                    edges: vec![arc("x", 1), seg("p", "r"), seg("r", "q")],
                    corners: strings(&["p", "r", "q"]),
                    interior: Interior::None,
                },
                Tile {
                    kind: TileKind::BoundaryTriangle,
                    edges: vec![arc("y", 0), seg("q", "t"), seg("t", "p")],
                    corners: strings(&["q", "t", "p"]),
                    interior: Interior::None,
                },
            ],
        }
    }

    #[test]
    fn digon_passages_carry_an_explicit_behind_flag() {
        // A passage between two distinct chord crossings: the flag sits on
        // the preceding crossing.
        let t = flanked_digon_disc();
        let chart = Chart::build(&t).expect("charts");
        let behind = Curve {
            ends: [corner(1, 1), corner(2, 1)],
            crossings: vec![
                Crossing { edge: 0, from: 1 },
                Crossing { edge: 2, from: 0 },
                Crossing { edge: 1, from: 1 },
            ],
        };
        validate_curve(&chart, &behind).expect("valid");
        let direct = Curve {
            ends: behind.ends,
            crossings: vec![Crossing { edge: 0, from: 1 }, Crossing { edge: 1, from: 1 }],
        };
        validate_curve(&chart, &direct).expect("valid");
        assert_ne!(behind.canonical(), direct.canonical());

        let text = write_arcs(&chart, &[(behind.clone(), 1)]);
        let doc: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        assert_eq!(doc["arcs"][0]["crossings"][0]["behind"], true, "{text}");
        assert_eq!(doc["arcs"][0]["crossings"].as_array().unwrap().len(), 2);
        let back = read_arcs(&chart, &text).expect("round-trips");
        assert_eq!(back[0].0.canonical(), behind.canonical());

        // With the flag dropped the same word reads as the direct passage.
        let unflagged = text.replace("\"behind\": true", "\"behind\": false");
        let got = read_arcs(&chart, &unflagged).expect("the direct variant is valid too");
        assert_eq!(got[0].0.canonical(), direct.canonical());

        // A passage straight from an end: the flag sits on the end itself.
        let t = fixtures::double_chord_annulus();
        let chart = Chart::build(&t).expect("charts");
        let bank = (0..chart.edges.len())
            .find(|&e| matches!(chart.edges[e], EdgeKind::Bank { .. }))
            .expect("a bank edge");
        let arcs = enumerate_arcs(&chart, 3);
        let wrap = arcs
            .iter()
            .find(|c| c.crossings.iter().any(|x| x.edge == bank))
            .expect("a loop behind the circle");
        let text = write_arcs(&chart, &[(wrap.clone(), 1)]);
        let doc: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        assert_eq!(doc["arcs"][0]["end0"]["behind"], true, "{text}");
        let back = read_arcs(&chart, &text).expect("round-trips");
        assert_eq!(back[0].0.canonical(), wrap.canonical());

        // Without the flag the loop bounds nothing and is rejected.
        let unflagged = text.replace("\"behind\": true", "\"behind\": false");
        let err = read_arcs(&chart, &unflagged).unwrap_err();
        assert!(matches!(err, IoError::Curve { index: 0, .. }), "{err:?}");
    }

    #[test]
    fn wrap_and_loop_base_anchors_are_rejected_by_validation() {
        let t = fixtures::annulus_loop();
        let chart = Chart::build(&t).expect("charts");
        let text = r#"{ "format": "arc.v1", "arcs": [ {
            "end0": { "anchor": { "wrap": 0 } },
            "end1": { "anchor": { "point": "m", "tile": 0, "corner": 0 } }
        } ] }"#;
        let err = read_arcs(&chart, text).unwrap_err();
        assert_eq!(err, IoError::Curve { index: 0, source: CurveError::FootAnchor { end: 0 } });
        assert_eq!(err.exit_code(), 1);

        let t = fixtures::three_cycle_disc();
        let chart = Chart::build(&t).expect("charts");
        let text = r#"{ "format": "arc.v1", "arcs": [ {
            "end0": { "anchor": { "loop-base": "P" } },
            "end1": { "anchor": { "puncture": "P" } }
        } ] }"#;
        let err = read_arcs(&chart, text).unwrap_err();
        assert_eq!(
            err,
            IoError::Curve { index: 0, source: CurveError::AnchorInPuncturedMonogon { end: 0 } }
        );
    }

    #[test]
    fn bare_anchor_ids_resolve_when_unambiguous() {
        let t = fixtures::two_puncture_strip();
        let chart = Chart::build(&t).expect("charts");
        let text = r#"{ "format": "arc.v1", "arcs": [ {
            "end0": { "anchor": "P1", "tag": "notched" },
            "end1": { "anchor": "P2" },
            "crossings": [
                { "arc": "1", "side": 1 },
                { "arc": "3", "side": 1 },
                { "arc": "2", "side": 0 }
            ]
        } ] }"#;
        let got = read_arcs(&chart, text).expect("resolves");
        assert_eq!(got[0].1, 1, "multiplicity defaults to 1");
        assert_eq!(got[0].0.ends[0].tag, Tag::Notched);
        assert_eq!(got[0].0.ends[1].tag, Tag::Plain);
        let (polygon, vertex) = chart.puncture_vertex("P1").expect("P1 exists");
        assert_eq!(got[0].0.ends[0].anchor, Anchor { polygon, vertex });

        let ambiguous = r#"{ "format": "arc.v1", "arcs": [ {
            "end0": { "anchor": "b1" },
            "end1": { "anchor": "P2" }
        } ] }"#;
        let err = read_arcs(&chart, ambiguous).unwrap_err();
        assert!(matches!(err, IoError::Resolve(_)), "{err:?}");
        assert!(err.to_string().contains("tile"), "{err}");
    }

    #[test]
    fn crossing_references_are_checked() {
        let t = fixtures::three_cycle_disc();
        let chart = Chart::build(&t).expect("charts");
        let unknown = r#"{ "format": "arc.v1", "arcs": [ {
            "end0": { "anchor": { "point": "u", "tile": 2, "corner": 1 } },
            "end1": { "anchor": { "point": "v", "tile": 3, "corner": 1 } },
            "crossings": [ { "arc": "9", "side": 0 } ]
        } ] }"#;
        let err = read_arcs(&chart, unknown).unwrap_err();
        assert!(matches!(err, IoError::Resolve(_)), "{err:?}");
        assert_eq!(err.exit_code(), 1);

        let bad_side = r#"{ "format": "arc.v1", "arcs": [ {
            "end0": { "anchor": { "point": "u", "tile": 2, "corner": 1 } },
            "end1": { "anchor": { "point": "v", "tile": 3, "corner": 1 } },
            "crossings": [ { "arc": "2", "side": 3 } ]
        } ] }"#;
        let err = read_arcs(&chart, bad_side).unwrap_err();
        assert_eq!(err.exit_code(), 2);

        let anchor_shape = r#"{ "format": "arc.v1", "arcs": [ {
            "end0": { "anchor": { "point": "u", "puncture": "P" } },
            "end1": { "anchor": "P" }
        } ] }"#;
        let err = read_arcs(&chart, anchor_shape).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("exactly one"), "{err}");
    }
}
