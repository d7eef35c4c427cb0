//! The unfolding correspondence between a punctured tiling and its
//! puncture-free unfolding.
//!
//! [`crate::tiling::unfold`] replaces every once-punctured monogon (loop `ℓ`
//! around puncture `P`, based at `b`) by a square on a new boundary circle:
//! the radius becomes a real arc `ℓ*` from `b` to a new marked point named
//! after `P`, and the circle contributes the boundary edge between the two
//! `P`-corners of the square. This module maps tagged arcs and their
//! multisets across that surgery:
//!
//! * [`unfold_arc`] sends a single tagged arc to its untagged image: radius
//!   crossings become `ℓ*` crossings, a puncture end lands on the new marked
//!   point (at its corner occurrence between `ℓ*` and the circle), and tags
//!   are dropped.
//! * [`unfold_multiset`] sends a compatible multiset across. Copies of one
//!   underlying curve that end at `P` with both tags pair up — one notched
//!   with one plain — and each pair fuses into a **loop around the circle**:
//!   out along the common curve, once across `ℓ*`, and back. Leftover tags
//!   cannot mix, and the per-puncture *notched set* records where the
//!   leftovers are notched; together the unfolded multiset and the notched
//!   set determine the original multiset.
//! * [`recover_multiset`] inverts this. Loops that run out, cross `ℓ*` once
//!   in the middle, and return along themselves (the mirror image of the
//!   monogon-cutting loops forbidden on the folded side) split back into
//!   conjugate pairs; everything else is refolded crossing by crossing.
//!   Curves that no tagged arc unfolds to — ends wrapped behind a circle,
//!   ends on a monogon base, windings through a square — are rejected with a
//!   description.
//!
//! The correspondence preserves dimension vectors, and the checks here
//! verify that with two independent counts: on the unfolded side entries are
//! pure crossing counts, on the folded side radius entries mix crossings
//! with tag counts ([`check_unfolding_identities`]). Two multisets have
//! equal vectors on one side exactly when they do on the other
//! ([`check_vector_equivalence`]), and the vector determines the multiset
//! whenever the tiling has no holed digon and no even-sided arc-gon
//! ([`check_injectivity`] searches for collisions, which exist beyond that
//! hypothesis).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::arc::{validate_curve, Anchor, Crossing, Curve, CurveEnd, CurveError, Tag};
use crate::chart::{Chart, EdgeKind};
use crate::intersect::{
    edge_crossings, end_puncture, enumerate_arcs, index_entry_int, int_total, radius_edge,
    tagged_vector,
};
use crate::tiling::{self, radius_id, TaggedArcLabel, Tile, TileEdge, TileKind, Tiling, TilingError};

/// The folded and unfolded presentations of one tiling, with the
/// per-puncture bookkeeping needed to map curves across.
#[derive(Debug, Clone)]
pub struct FoldingContext {
    /// The punctured tiling.
    pub source: Tiling,
    /// Its unfolding: every punctured monogon replaced by a square.
    pub unfolded: Tiling,
    /// Chart of the folded side.
    pub source_chart: Chart,
    /// Chart of the unfolded side.
    pub unfolded_chart: Chart,
    punctures: Vec<PunctureFold>,
    /// puncture id → index into `punctures`.
    by_puncture: BTreeMap<String, usize>,
    /// monogon tile index → index into `punctures`.
    by_tile: BTreeMap<usize, usize>,
    /// radius arc id on the unfolded side → index into `punctures`.
    by_radius: BTreeMap<String, usize>,
    /// tile index → bank edge index, per chart (for holed tiles).
    source_bank: BTreeMap<usize, usize>,
    unfolded_bank: BTreeMap<usize, usize>,
}

/// How one puncture unfolds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PunctureFold {
    /// The puncture id, which names the new marked point.
    pub puncture: String,
    /// Index of its monogon tile — and of the square replacing it.
    pub tile: usize,
    /// The loop arc enclosing the monogon.
    pub loop_arc: String,
    /// The new radius arc of the unfolded square.
    pub radius_arc: String,
    /// The marked point the loop is based at.
    pub base: String,
}

fn bank_edges(chart: &Chart) -> BTreeMap<usize, usize> {
    chart
        .edges
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match e {
            EdgeKind::Bank { tile } => Some((*tile, i)),
            _ => None,
        })
        .collect()
}

impl FoldingContext {
    /// Builds both sides of the correspondence for a tiling.
    pub fn new(t: &Tiling) -> Result<FoldingContext, TilingError> {
        let info = t.validate()?;
        let unfolded = tiling::unfold(t)?;
        let source_chart = Chart::build(t)?;
        let unfolded_chart = Chart::build(&unfolded)?;
        let mut punctures = Vec::new();
        let mut by_puncture = BTreeMap::new();
        let mut by_tile = BTreeMap::new();
        let mut by_radius = BTreeMap::new();
        for (p, &ti) in &info.puncture_tile {
            let TileEdge::Arc { arc, .. } = &t.tiles[ti].edges[0] else { unreachable!() };
            let idx = punctures.len();
            by_puncture.insert(p.clone(), idx);
            by_tile.insert(ti, idx);
            by_radius.insert(radius_id(arc), idx);
            punctures.push(PunctureFold {
                puncture: p.clone(),
                tile: ti,
                loop_arc: arc.clone(),
                radius_arc: radius_id(arc),
                base: t.tiles[ti].corners[0].clone(),
            });
        }
        let source_bank = bank_edges(&source_chart);
        let unfolded_bank = bank_edges(&unfolded_chart);
        Ok(FoldingContext {
            source: t.clone(),
            unfolded,
            source_chart,
            unfolded_chart,
            punctures,
            by_puncture,
            by_tile,
            by_radius,
            source_bank,
            unfolded_bank,
        })
    }

    /// The per-puncture unfolding data, sorted by puncture id.
    pub fn punctures(&self) -> &[PunctureFold] {
        &self.punctures
    }

    /// The apex anchor of a puncture on the folded side.
    pub fn apex_anchor(&self, puncture: &str) -> Option<Anchor> {
        let pf = &self.punctures[*self.by_puncture.get(puncture)?];
        Some(Anchor { polygon: pf.tile, vertex: 1 })
    }

    /// The anchor of the new marked point on the unfolded side.
    pub fn point_anchor(&self, puncture: &str) -> Option<Anchor> {
        let pf = &self.punctures[*self.by_puncture.get(puncture)?];
        Some(Anchor { polygon: pf.tile, vertex: 0 })
    }
}

/// A weighted multiset of curves: each entry is a curve with a multiplicity.
pub type Multiset = Vec<(Curve, usize)>;

/// Why a multiset does not map across the unfolding.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnfoldError {
    #[error("curve {index} is not a permissible tagged arc of the folded tiling: {reason}")]
    NotPermissible { index: usize, reason: CurveError },
    #[error("curve {index} is not a permissible arc of the unfolded tiling: {reason}")]
    NotPermissibleUnfolded { index: usize, reason: CurveError },
    #[error("curves {a} and {b} intersect (Int = {int}); only compatible multisets unfold")]
    Incompatible { a: usize, b: usize, int: i64 },
    #[error("the ends at puncture {puncture:?} mix tags across different underlying curves")]
    MixedTags { puncture: String },
    #[error("{puncture:?} is not a puncture of the folded tiling")]
    UnknownPuncture { puncture: String },
    #[error("curve {index} is not in the image of the unfolding: {detail}")]
    NotInImage { index: usize, detail: String },
    #[error("the unfolded image of curve {index} failed validation: {reason}")]
    ImageNotPermissible { index: usize, reason: CurveError },
}

fn map_crossing(fold: &FoldingContext, c: Crossing) -> Crossing {
    let edge = match &fold.source_chart.edges[c.edge] {
        EdgeKind::TArc(arc) => fold
            .unfolded_chart
            .arc_edge(arc)
            .expect("every folded arc survives the unfolding"),
        EdgeKind::Radius { puncture } => {
            let pf = &fold.punctures[fold.by_puncture[puncture]];
            fold.unfolded_chart
                .arc_edge(&pf.radius_arc)
                .expect("the unfolded tiling has the radius arc")
        }
        EdgeKind::Bank { tile } => fold.unfolded_bank[tile],
        EdgeKind::Boundary | EdgeKind::WCut { .. } => {
            unreachable!("validated curves never cross boundary or circle edges")
        }
    };
    Crossing { edge, from: c.from }
}

fn map_anchor(fold: &FoldingContext, a: Anchor) -> Anchor {
    match fold.by_tile.get(&a.polygon) {
        // The apex blows up into the circle; the image end sits at the
        // point's occurrence between `ℓ*` and the circle edge.
        Some(_) => {
            debug_assert_eq!(a.vertex, 1, "only the apex of a monogon is anchorable");
            Anchor { polygon: a.polygon, vertex: 0 }
        }
        None => a,
    }
}

/// Maps a single tagged arc to its unfolded image, dropping tags.
pub fn unfold_arc(fold: &FoldingContext, curve: &Curve) -> Result<Curve, UnfoldError> {
    validate_curve(&fold.source_chart, curve)
        .map_err(|reason| UnfoldError::NotPermissible { index: 0, reason })?;
    let img = unfold_arc_raw(fold, curve);
    validate_curve(&fold.unfolded_chart, &img)
        .map_err(|reason| UnfoldError::ImageNotPermissible { index: 0, reason })?;
    Ok(img)
}

fn unfold_arc_raw(fold: &FoldingContext, curve: &Curve) -> Curve {
    Curve {
        ends: [0, 1].map(|e| CurveEnd {
            anchor: map_anchor(fold, curve.ends[e].anchor),
            tag: Tag::Plain,
        }),
        crossings: curve.crossings.iter().map(|&c| map_crossing(fold, c)).collect(),
    }
}

/// The loop a conjugate pair fuses into: out along the unfolded image of
/// `gamma` (oriented towards the puncture), once across the radius arc, and
/// back along the mirror image.
fn pair_loop(fold: &FoldingContext, pf: &PunctureFold, gamma: &Curve) -> Curve {
    let img = unfold_arc_raw(fold, gamma);
    let redge = fold
        .unfolded_chart
        .arc_edge(&pf.radius_arc)
        .expect("the unfolded tiling has the radius arc");
    let mut crossings = img.crossings.clone();
    crossings.push(Crossing { edge: redge, from: 0 });
    crossings.extend(img.crossings.iter().rev().map(|c| c.flipped()));
    Curve { ends: [img.ends[0], img.ends[0]], crossings }
}

fn untagged(curve: &Curve) -> Curve {
    Curve {
        ends: curve.ends.map(|e| CurveEnd { anchor: e.anchor, tag: Tag::Plain }),
        crossings: curve.crossings.clone(),
    }
}

/// A compatible multiset split into its conjugate pairs and the rest.
struct Decomposition {
    /// `(puncture index, underlying curve oriented towards the puncture,
    /// pair count)`.
    pairs: Vec<(usize, Curve, usize)>,
    /// Unpaired members with multiplicities, canonical.
    rest: Multiset,
    /// Punctures whose leftover tag is notched.
    notched: BTreeSet<String>,
}

fn decompose(fold: &FoldingContext, multiset: &[(Curve, usize)]) -> Result<Decomposition, UnfoldError> {
    let chart = &fold.source_chart;
    for (index, (c, _)) in multiset.iter().enumerate() {
        validate_curve(chart, c).map_err(|reason| UnfoldError::NotPermissible { index, reason })?;
    }
    for (a, (ca, _)) in multiset.iter().enumerate() {
        for (b, (cb, _)) in multiset.iter().enumerate().skip(a + 1) {
            if ca.canonical() == cb.canonical() {
                continue;
            }
            let int = int_total(chart, ca, cb);
            if int != 0 {
                return Err(UnfoldError::Incompatible { a, b, int });
            }
        }
    }

    let mut working: BTreeMap<Curve, usize> = BTreeMap::new();
    for (c, mult) in multiset {
        if *mult > 0 {
            *working.entry(c.canonical()).or_insert(0) += mult;
        }
    }

    // Census of tagged ends per puncture, over all copies.
    let mut census: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (c, mult) in &working {
        for e in 0..2 {
            if let Some(p) = end_puncture(chart, c, e) {
                let slot = census.entry(p).or_insert((0, 0));
                match c.ends[e].tag {
                    Tag::Plain => slot.0 += mult,
                    Tag::Notched => slot.1 += mult,
                }
            }
        }
    }
    let notched: BTreeSet<String> = census
        .iter()
        .filter(|(_, (plain, notched))| plain < notched)
        .map(|(p, _)| (*p).to_owned())
        .collect();

    let mut pairs = Vec::new();
    for (pi, pf) in fold.punctures.iter().enumerate() {
        let p = pf.puncture.as_str();
        let (plain, notch) = census.get(p).copied().unwrap_or((0, 0));
        let k = plain.min(notch);
        if k == 0 {
            continue;
        }
        // Mixed tags at `p`: compatibility forces every end at `p` to come
        // from copies of one underlying non-loop curve, one tagged version
        // per class. Anything else is rejected defensively.
        let member_with = |tag: Tag| -> Result<Curve, UnfoldError> {
            let hits: Vec<&Curve> = working
                .keys()
                .filter(|c| {
                    (0..2).any(|e| {
                        end_puncture(chart, c, e) == Some(p) && c.ends[e].tag == tag
                    })
                })
                .collect();
            match hits.as_slice() {
                [one] => {
                    let ends_at_p =
                        (0..2).filter(|&e| end_puncture(chart, one, e) == Some(p)).count();
                    if ends_at_p == 1 {
                        Ok((*one).clone())
                    } else {
                        Err(UnfoldError::MixedTags { puncture: p.to_owned() })
                    }
                }
                _ => Err(UnfoldError::MixedTags { puncture: p.to_owned() }),
            }
        };
        let orient = |c: &Curve| -> Curve {
            if end_puncture(chart, c, 1) == Some(p) {
                c.clone()
            } else {
                c.flipped()
            }
        };
        let notched_member = orient(&member_with(Tag::Notched)?);
        let plain_member = orient(&member_with(Tag::Plain)?);
        let gamma = untagged(&notched_member);
        if gamma != untagged(&plain_member)
            || notched_member.ends[0].tag != plain_member.ends[0].tag
        {
            return Err(UnfoldError::MixedTags { puncture: p.to_owned() });
        }
        for m in [&notched_member, &plain_member] {
            let key = m.canonical();
            let left = working.get_mut(&key).expect("paired member is present");
            debug_assert!(*left >= k, "census bounds the pair count");
            *left -= k;
            if *left == 0 {
                working.remove(&key);
            }
        }
        pairs.push((pi, gamma, k));
    }

    Ok(Decomposition { pairs, rest: working.into_iter().collect(), notched })
}

/// Maps a compatible multiset across the unfolding. Returns the unfolded
/// multiset together with the notched set — the punctures whose unpaired
/// ends are notched — which [`recover_multiset`] needs to invert the map.
pub fn unfold_multiset(
    fold: &FoldingContext,
    multiset: &[(Curve, usize)],
) -> Result<(Multiset, BTreeSet<String>), UnfoldError> {
    let d = decompose(fold, multiset)?;
    let mut out: BTreeMap<Curve, usize> = BTreeMap::new();
    for (pi, gamma, k) in &d.pairs {
        let l = pair_loop(fold, &fold.punctures[*pi], gamma);
        validate_curve(&fold.unfolded_chart, &l)
            .map_err(|reason| UnfoldError::ImageNotPermissible { index: *pi, reason })?;
        *out.entry(l.canonical()).or_insert(0) += k;
    }
    for (index, (c, mult)) in d.rest.iter().enumerate() {
        let img = unfold_arc_raw(fold, c);
        validate_curve(&fold.unfolded_chart, &img)
            .map_err(|reason| UnfoldError::ImageNotPermissible { index, reason })?;
        *out.entry(img.canonical()).or_insert(0) += mult;
    }
    Ok((out.into_iter().collect(), d.notched))
}

fn refold_crossing(
    fold: &FoldingContext,
    index: usize,
    c: Crossing,
) -> Result<Crossing, UnfoldError> {
    match &fold.unfolded_chart.edges[c.edge] {
        EdgeKind::TArc(arc) => {
            if let Some(&pi) = fold.by_radius.get(arc) {
                let p = &fold.punctures[pi].puncture;
                let edge = radius_edge(&fold.source_chart, p)
                    .expect("the folded chart has the radius");
                Ok(Crossing { edge, from: c.from })
            } else {
                let edge = fold.source_chart.arc_edge(arc).ok_or_else(|| {
                    UnfoldError::NotInImage {
                        index,
                        detail: format!("crosses arc {arc:?}, which only the unfolded side has"),
                    }
                })?;
                Ok(Crossing { edge, from: c.from })
            }
        }
        EdgeKind::Bank { tile } => Ok(Crossing { edge: fold.source_bank[tile], from: c.from }),
        EdgeKind::Radius { .. } | EdgeKind::Boundary | EdgeKind::WCut { .. } => {
            unreachable!("validated curves never cross these on the unfolded side")
        }
    }
}

fn refold_end(
    fold: &FoldingContext,
    index: usize,
    end: CurveEnd,
    notched: &BTreeSet<String>,
) -> Result<CurveEnd, UnfoldError> {
    match fold.by_tile.get(&end.anchor.polygon) {
        Some(&pi) => {
            let pf = &fold.punctures[pi];
            let tag = if notched.contains(&pf.puncture) { Tag::Notched } else { Tag::Plain };
            match end.anchor.vertex {
                0 => Ok(CurveEnd {
                    anchor: Anchor { polygon: end.anchor.polygon, vertex: 1 },
                    tag,
                }),
                1 => Err(UnfoldError::NotInImage {
                    index,
                    detail: format!(
                        "an end wraps behind the boundary circle at {:?}; no tagged arc unfolds there",
                        pf.puncture
                    ),
                }),
                // The square's base corners fold back onto the corners
                // inside the monogon, which no permissible arc anchors at;
                // validation of the refolded curve rejects them.
                2 => Ok(CurveEnd {
                    anchor: Anchor { polygon: end.anchor.polygon, vertex: 2 },
                    tag: Tag::Plain,
                }),
                3 => Ok(CurveEnd {
                    anchor: Anchor { polygon: end.anchor.polygon, vertex: 0 },
                    tag: Tag::Plain,
                }),
                _ => unreachable!("the unfolded square has four vertices"),
            }
        }
        None => Ok(CurveEnd { anchor: end.anchor, tag: Tag::Plain }),
    }
}

/// Detects the loops that conjugate pairs fuse into: out, once across a
/// radius arc, and back along the mirror image. Returns the puncture index
/// and the outbound half.
fn pair_loop_form<'c>(fold: &FoldingContext, curve: &'c Curve) -> Option<(usize, &'c [Crossing])> {
    if curve.ends[0].anchor != curve.ends[1].anchor {
        return None;
    }
    let c = &curve.crossings;
    let n = c.len();
    if n < 3 || n % 2 == 0 {
        return None;
    }
    let mid = n / 2;
    let arc = fold.unfolded_chart.edge_arc(c[mid].edge)?;
    let &pi = fold.by_radius.get(arc)?;
    for k in 0..n {
        if k != mid && c[n - 1 - k] != c[k].flipped() {
            return None;
        }
    }
    Some((pi, &c[..mid]))
}

/// Inverts [`unfold_multiset`]: splits pair loops back into conjugate pairs
/// and refolds everything else, tagging unpaired puncture ends by the
/// notched set. Curves outside the image of the unfolding are rejected.
pub fn recover_multiset(
    fold: &FoldingContext,
    multiset: &[(Curve, usize)],
    notched: &BTreeSet<String>,
) -> Result<Multiset, UnfoldError> {
    for p in notched {
        if !fold.by_puncture.contains_key(p) {
            return Err(UnfoldError::UnknownPuncture { puncture: p.clone() });
        }
    }
    let mut out: BTreeMap<Curve, usize> = BTreeMap::new();
    for (index, (c, mult)) in multiset.iter().enumerate() {
        if *mult == 0 {
            continue;
        }
        validate_curve(&fold.unfolded_chart, c)
            .map_err(|reason| UnfoldError::NotPermissibleUnfolded { index, reason })?;
        if let Some((pi, half)) = pair_loop_form(fold, c) {
            let pf = &fold.punctures[pi];
            let far = refold_end(fold, index, c.ends[0], notched)?;
            let crossings = half
                .iter()
                .map(|&x| refold_crossing(fold, index, x))
                .collect::<Result<Vec<_>, _>>()?;
            let apex = Anchor { polygon: pf.tile, vertex: 1 };
            for tag in [Tag::Notched, Tag::Plain] {
                let member = Curve {
                    ends: [far, CurveEnd { anchor: apex, tag }],
                    crossings: crossings.clone(),
                };
                validate_curve(&fold.source_chart, &member).map_err(|e| {
                    UnfoldError::NotInImage {
                        index,
                        detail: format!("its refolded pair member is not permissible: {e}"),
                    }
                })?;
                *out.entry(member.canonical()).or_insert(0) += mult;
            }
        } else {
            let ends = [
                refold_end(fold, index, c.ends[0], notched)?,
                refold_end(fold, index, c.ends[1], notched)?,
            ];
            let crossings = c
                .crossings
                .iter()
                .map(|&x| refold_crossing(fold, index, x))
                .collect::<Result<Vec<_>, _>>()?;
            let r = Curve { ends, crossings };
            validate_curve(&fold.source_chart, &r).map_err(|e| UnfoldError::NotInImage {
                index,
                detail: format!("its refolded curve is not permissible: {e}"),
            })?;
            *out.entry(r.canonical()).or_insert(0) += mult;
        }
    }
    Ok(out.into_iter().collect())
}

/// Outcome of the per-entry identity checks between the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    /// Per puncture: the radius-arc crossing count of the unfolded multiset
    /// equals the folded radius entry selected by the notched set.
    pub radius: Vec<(String, bool)>,
    /// Per puncture: the loop-arc crossing count of the unfolded multiset
    /// equals the sum of both folded radius entries.
    pub loop_sum: Vec<(String, bool)>,
    /// Per non-loop arc: crossing counts agree across the unfolding.
    pub plain: Vec<(String, bool)>,
    /// Per (pair puncture, radius arc): the fused loop crosses the radius
    /// twice as often as its underlying curve, plus once at its own
    /// puncture.
    pub spot: Vec<(String, String, bool)>,
}

impl IdentityReport {
    /// Whether every identity holds.
    pub fn all_hold(&self) -> bool {
        self.radius.iter().all(|(_, ok)| *ok)
            && self.loop_sum.iter().all(|(_, ok)| *ok)
            && self.plain.iter().all(|(_, ok)| *ok)
            && self.spot.iter().all(|(_, _, ok)| *ok)
    }
}

/// Checks, entry by entry, that the folded tag counts match the unfolded
/// crossing counts of the mapped multiset. The folded side is computed with
/// the tagged index (crossings plus opposite-tag ends at each radius), the
/// unfolded side by counting crossings only — the two sides share no code.
pub fn check_unfolding_identities(
    fold: &FoldingContext,
    multiset: &[(Curve, usize)],
) -> Result<IdentityReport, UnfoldError> {
    let d = decompose(fold, multiset)?;
    let (unfolded, notched) = unfold_multiset(fold, multiset)?;
    let count = |arc: &str| -> i64 {
        let edge = fold.unfolded_chart.arc_edge(arc).expect("arc exists unfolded");
        unfolded.iter().map(|(c, m)| (edge_crossings(c, edge) * m) as i64).sum()
    };
    let folded_entry = |label: &TaggedArcLabel| -> i64 {
        multiset
            .iter()
            .map(|(c, m)| index_entry_int(&fold.source_chart, label, c) * *m as i64)
            .sum()
    };

    let mut radius = Vec::new();
    let mut loop_sum = Vec::new();
    for pf in &fold.punctures {
        let minus = folded_entry(&TaggedArcLabel::Radius {
            loop_arc: pf.loop_arc.clone(),
            puncture: pf.puncture.clone(),
            notched: false,
        });
        let plus = folded_entry(&TaggedArcLabel::Radius {
            loop_arc: pf.loop_arc.clone(),
            puncture: pf.puncture.clone(),
            notched: true,
        });
        let selected = if notched.contains(&pf.puncture) { plus } else { minus };
        radius.push((pf.puncture.clone(), count(&pf.radius_arc) == selected));
        loop_sum.push((pf.puncture.clone(), count(&pf.loop_arc) == minus + plus));
    }

    let loop_arcs: BTreeSet<&str> = fold.punctures.iter().map(|pf| pf.loop_arc.as_str()).collect();
    let plain = fold
        .source
        .arcs
        .iter()
        .filter(|a| !loop_arcs.contains(a.as_str()))
        .map(|a| {
            let folded = folded_entry(&TaggedArcLabel::Plain { arc: a.clone() });
            (a.clone(), count(a) == folded)
        })
        .collect();

    let mut spot = Vec::new();
    for (pi, gamma, _) in &d.pairs {
        let own = &fold.punctures[*pi];
        let img = unfold_arc_raw(fold, gamma);
        let l = pair_loop(fold, own, gamma);
        for pf in &fold.punctures {
            let edge = fold
                .unfolded_chart
                .arc_edge(&pf.radius_arc)
                .expect("arc exists unfolded");
            let expect = 2 * edge_crossings(&img, edge) + usize::from(pf.tile == own.tile);
            spot.push((
                own.puncture.clone(),
                pf.puncture.clone(),
                edge_crossings(&l, edge) == expect,
            ));
        }
    }

    Ok(IdentityReport { radius, loop_sum, plain, spot })
}

/// Whether two multisets have equal dimension vectors, checked on both
/// sides of the unfolding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Equal tagged vectors on the folded side.
    pub folded_equal: bool,
    /// Equal vectors on the unfolded side *and* equal notched sets.
    pub unfolded_equal: bool,
    /// The two sides agree — this is the point of the correspondence.
    pub consistent: bool,
}

/// Compares the dimension vectors of two compatible multisets on the folded
/// side (tagged index) and on the unfolded side (plain index of the mapped
/// multisets, plus the notched sets), and reports whether the two
/// comparisons agree.
pub fn check_vector_equivalence(
    fold: &FoldingContext,
    m: &[(Curve, usize)],
    n: &[(Curve, usize)],
) -> Result<EquivalenceReport, UnfoldError> {
    let vm = tagged_vector(&fold.source_chart, &fold.source, m);
    let vn = tagged_vector(&fold.source_chart, &fold.source, n);
    let (mu, sm) = unfold_multiset(fold, m)?;
    let (nu, sn) = unfold_multiset(fold, n)?;
    let um = tagged_vector(&fold.unfolded_chart, &fold.unfolded, &mu);
    let un = tagged_vector(&fold.unfolded_chart, &fold.unfolded, &nu);
    let folded_equal = vm == vn;
    let unfolded_equal = um == un && sm == sn;
    Ok(EquivalenceReport {
        folded_equal,
        unfolded_equal,
        consistent: folded_equal == unfolded_equal,
    })
}

/// Two distinct compatible multisets sharing one dimension vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub vector: Vec<i64>,
    pub left: Multiset,
    pub right: Multiset,
}

/// Outcome of the injectivity search over bounded compatible multisets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    /// The tiling has no holed digon and no even-sided arc-gon — the
    /// hypothesis under which vectors determine multisets.
    pub hypothesis_holds: bool,
    /// How many compatible multisets were compared.
    pub multisets_checked: usize,
    /// The first vector collision found, if any.
    pub collision: Option<Collision>,
}

impl InjectivityReport {
    /// No collision may appear under the hypothesis.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds || self.collision.is_none()
    }
}

/// Enumerates every compatible multiset of up to `max_size` copies drawn
/// from `arcs` (canonical, pairwise-distinct curves), in lexicographic
/// index order. Copies of one arc are always mutually compatible.
pub fn compatible_multisets(chart: &Chart, arcs: &[Curve], max_size: usize) -> Vec<Multiset> {
    let n = arcs.len();
    let mut ok = vec![true; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let c = int_total(chart, &arcs[i], &arcs[j]) == 0;
            ok[i * n + j] = c;
            ok[j * n + i] = c;
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    grow(arcs, &ok, max_size, 0, &mut cur, &mut out);
    out
}

fn grow(
    arcs: &[Curve],
    ok: &[bool],
    max_size: usize,
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Multiset>,
) {
    if cur.len() == max_size {
        return;
    }
    let n = arcs.len();
    for i in start..n {
        if cur.iter().any(|&j| !ok[j * n + i]) {
            continue;
        }
        cur.push(i);
        let mut counts: Multiset = Vec::new();
        for &j in cur.iter() {
            match counts.last_mut() {
                Some((c, m)) if *c == arcs[j] => *m += 1,
                _ => counts.push((arcs[j].clone(), 1)),
            }
        }
        out.push(counts);
        grow(arcs, ok, max_size, i, cur, out);
        cur.pop();
    }
}

/// Searches for dimension-vector collisions among all compatible multisets
/// of at most `max_size` arcs crossing at most `max_crossings` tiling arcs.
pub fn check_injectivity(
    fold: &FoldingContext,
    max_size: usize,
    max_crossings: usize,
) -> InjectivityReport {
    let arcs = enumerate_arcs(&fold.source_chart, max_crossings);
    let sets = compatible_multisets(&fold.source_chart, &arcs, max_size);
    let mut seen: BTreeMap<Vec<i64>, &Multiset> = BTreeMap::new();
    let mut collision = None;
    for s in &sets {
        let v = tagged_vector(&fold.source_chart, &fold.source, s);
        match seen.get(&v) {
            Some(first) => {
                if collision.is_none() {
                    collision = Some(Collision {
                        vector: v,
                        left: (*first).clone(),
                        right: s.clone(),
                    });
                }
            }
            None => {
                seen.insert(v, s);
            }
        }
    }
    let hypothesis_holds = !fold.source.tiles.iter().any(|t: &Tile| {
        t.kind == TileKind::HoledDigon
            || (t.kind == TileKind::ArcGon && t.edges.len() % 2 == 0)
    });
    InjectivityReport { hypothesis_holds, multisets_checked: sets.len(), collision }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn corner(polygon: usize, vertex: usize) -> CurveEnd {
        CurveEnd { anchor: Anchor { polygon, vertex }, tag: Tag::Plain }
    }

    fn cross(edge: usize, from: usize) -> Crossing {
        Crossing { edge, from }
    }

    /// `P → v` on the three-cycle disc, with a choice of tag at the puncture.
    fn from_puncture(tag: Tag) -> Curve {
        Curve {
            ends: [
                CurveEnd { anchor: Anchor { polygon: 0, vertex: 1 }, tag },
                corner(3, 1),
            ],
            crossings: vec![cross(0, 1), cross(1, 1)],
        }
    }

    fn u_to_v() -> Curve {
        Curve { ends: [corner(2, 1), corner(3, 1)], crossings: vec![cross(2, 1), cross(1, 1)] }
    }

    fn through_monogon() -> Curve {
        Curve {
            ends: [corner(3, 1), corner(2, 1)],
            crossings: vec![cross(1, 0), cross(0, 0), cross(3, 0), cross(0, 1), cross(2, 0)],
        }
    }

    /// `P1 → P2` on the two-puncture strip, with one tag per end.
    fn strip_arc(at_p1: Tag, at_p2: Tag) -> Curve {
        Curve {
            ends: [
                CurveEnd { anchor: Anchor { polygon: 0, vertex: 1 }, tag: at_p1 },
                CurveEnd { anchor: Anchor { polygon: 1, vertex: 1 }, tag: at_p2 },
            ],
            crossings: vec![cross(0, 1), cross(2, 1), cross(1, 0)],
        }
    }

    #[test]
    fn the_context_unfolds_each_punctured_monogon_to_a_square() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        assert_eq!(fold.unfolded.arcs, vec!["1", "1*", "2", "3"]);
        assert_eq!(fold.unfolded.punctures, Vec::<String>::new());
        assert_eq!(
            fold.punctures(),
            &[PunctureFold {
                puncture: "P".into(),
                tile: 0,
                loop_arc: "1".into(),
                radius_arc: "1*".into(),
                base: "b".into(),
            }]
        );
        let square = &fold.unfolded_chart.polygons[0];
        assert_eq!(square.kind, TileKind::BoundaryGon);
        let redge = fold.unfolded_chart.arc_edge("1*").unwrap();
        let ledge = fold.unfolded_chart.arc_edge("1").unwrap();
        assert_eq!(
            square.slots.iter().map(|s| (s.edge, s.half)).collect::<Vec<_>>(),
            vec![(redge, 0), (square.slots[1].edge, 0), (redge, 1), (ledge, 1)]
        );
        assert!(matches!(fold.unfolded_chart.edges[square.slots[1].edge], EdgeKind::Boundary));

        let strip = FoldingContext::new(&fixtures::two_puncture_strip()).unwrap();
        assert_eq!(strip.unfolded.arcs, vec!["1", "1*", "2", "2*", "3"]);
        assert_eq!(strip.punctures().len(), 2);
        assert_eq!(strip.apex_anchor("P2"), Some(Anchor { polygon: 1, vertex: 1 }));
        assert_eq!(strip.point_anchor("P2"), Some(Anchor { polygon: 1, vertex: 0 }));
    }

    #[test]
    fn plain_arcs_unfold_by_renaming_their_crossings() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let img = unfold_arc(&fold, &u_to_v()).unwrap();
        assert_eq!(img.ends, u_to_v().ends);
        assert_eq!(img.word(&fold.unfolded_chart), vec!["3", "2"]);
        assert_eq!(img.crossings, vec![cross(3, 1), cross(2, 1)]);
    }

    #[test]
    fn puncture_arcs_unfold_to_the_new_marked_point() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let notched = unfold_arc(&fold, &from_puncture(Tag::Notched)).unwrap();
        let plain = unfold_arc(&fold, &from_puncture(Tag::Plain)).unwrap();
        assert_eq!(notched, plain, "tags are dropped by the unfolding");
        assert_eq!(notched.ends[0], corner(0, 0), "the end lands on the new point");
        assert_eq!(notched.ends[1], corner(3, 1));
        assert_eq!(notched.crossings, vec![cross(0, 1), cross(2, 1)]);
        validate_curve(&fold.unfolded_chart, &notched).unwrap();
    }

    #[test]
    fn a_conjugate_pair_unfolds_to_a_loop_around_the_circle() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let m = vec![(from_puncture(Tag::Notched), 1), (from_puncture(Tag::Plain), 1)];
        let (unfolded, notched) = unfold_multiset(&fold, &m).unwrap();
        assert!(notched.is_empty(), "a balanced census leaves no notched leftovers");
        assert_eq!(unfolded.len(), 1);
        let (l, mult) = &unfolded[0];
        assert_eq!(*mult, 1);
        assert_eq!(l.ends[0], l.ends[1], "the fused curve is a loop");
        let count = |arc: &str| edge_crossings(l, fold.unfolded_chart.arc_edge(arc).unwrap());
        assert_eq!((count("1*"), count("1"), count("2"), count("3")), (1, 2, 2, 0));

        // Orientation of the input members does not matter.
        let flipped = vec![
            (from_puncture(Tag::Notched).flipped(), 1),
            (from_puncture(Tag::Plain), 1),
        ];
        assert_eq!(unfold_multiset(&fold, &flipped).unwrap().0, unfolded);

        // A surplus notched copy stays behind and flags the puncture.
        let m = vec![(from_puncture(Tag::Notched), 2), (from_puncture(Tag::Plain), 1)];
        let (unfolded, notched) = unfold_multiset(&fold, &m).unwrap();
        assert_eq!(notched, BTreeSet::from(["P".to_owned()]));
        assert_eq!(unfolded.len(), 2);
        assert_eq!(unfolded.iter().map(|(_, m)| *m).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn incompatible_multisets_are_rejected() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let m = vec![(u_to_v(), 1), (through_monogon(), 1)];
        // These two arcs are compatible; a crossing pair is not.
        assert!(unfold_multiset(&fold, &m).is_ok());
        let c_to_p = Curve {
            ends: [
                corner(1, 2),
                CurveEnd { anchor: Anchor { polygon: 0, vertex: 1 }, tag: Tag::Plain },
            ],
            crossings: vec![cross(0, 0)],
        };
        let m = vec![(c_to_p, 1), (u_to_v(), 1)];
        assert_eq!(
            unfold_multiset(&fold, &m).unwrap_err(),
            UnfoldError::Incompatible { a: 0, b: 1, int: 1 }
        );
    }

    #[test]
    fn recovering_inverts_the_unfolding() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let multisets: Vec<Multiset> = vec![
            vec![(from_puncture(Tag::Notched), 1), (from_puncture(Tag::Plain), 1)],
            vec![(from_puncture(Tag::Notched), 2), (from_puncture(Tag::Plain), 1)],
            vec![(from_puncture(Tag::Plain), 3)],
            vec![(u_to_v(), 1), (through_monogon(), 2)],
            vec![
                (from_puncture(Tag::Notched), 1),
                (from_puncture(Tag::Plain), 2),
                (u_to_v(), 1),
            ],
        ];
        for m in multisets {
            let (unfolded, notched) = unfold_multiset(&fold, &m).unwrap();
            let back = recover_multiset(&fold, &unfolded, &notched).unwrap();
            let mut expect: BTreeMap<Curve, usize> = BTreeMap::new();
            for (c, mult) in &m {
                *expect.entry(c.canonical()).or_insert(0) += mult;
            }
            assert_eq!(back, expect.into_iter().collect::<Vec<_>>());
        }

        let strip = FoldingContext::new(&fixtures::two_puncture_strip()).unwrap();
        let m = vec![(strip_arc(Tag::Notched, Tag::Plain), 1), (strip_arc(Tag::Plain, Tag::Plain), 1)];
        let (unfolded, notched) = unfold_multiset(&strip, &m).unwrap();
        assert!(notched.is_empty());
        assert_eq!(unfolded.len(), 1, "the pair fuses into one loop based at the far point");
        let back = recover_multiset(&strip, &unfolded, &notched).unwrap();
        let mut expect: Vec<(Curve, usize)> =
            m.iter().map(|(c, k)| (c.canonical(), *k)).collect();
        expect.sort();
        assert_eq!(back, expect);

        let m = vec![(strip_arc(Tag::Notched, Tag::Notched), 1)];
        let (unfolded, notched) = unfold_multiset(&strip, &m).unwrap();
        assert_eq!(
            notched,
            BTreeSet::from(["P1".to_owned(), "P2".to_owned()]),
            "uniformly notched ends flag both punctures"
        );
        let back = recover_multiset(&strip, &unfolded, &notched).unwrap();
        assert_eq!(back, vec![(strip_arc(Tag::Notched, Tag::Notched).canonical(), 1)]);
    }

    #[test]
    fn recovering_rejects_curves_outside_the_image() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();

        // An end at the far occurrence of the new point wraps behind the
        // boundary circle.
        let wrapped = Curve {
            ends: [corner(0, 1), corner(1, 2)],
            crossings: vec![cross(0, 1)],
        };
        validate_curve(&fold.unfolded_chart, &wrapped).unwrap();
        let err = recover_multiset(&fold, &[(wrapped, 1)], &BTreeSet::new()).unwrap_err();
        assert!(matches!(err, UnfoldError::NotInImage { .. }), "got {err:?}");

        // A chord from the new point to the square's base corner refolds to
        // an end inside the punctured monogon.
        let chord = Curve { ends: [corner(0, 0), corner(0, 2)], crossings: vec![] };
        validate_curve(&fold.unfolded_chart, &chord).unwrap();
        let err = recover_multiset(&fold, &[(chord, 1)], &BTreeSet::new()).unwrap_err();
        assert!(matches!(err, UnfoldError::NotInImage { .. }), "got {err:?}");

        // The notched set must name punctures of the folded tiling.
        let err = recover_multiset(&fold, &[], &BTreeSet::from(["Q".to_owned()])).unwrap_err();
        assert_eq!(err, UnfoldError::UnknownPuncture { puncture: "Q".into() });
    }

    #[test]
    fn identity_checks_hold_for_sample_multisets() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let samples: Vec<Multiset> = vec![
            vec![(from_puncture(Tag::Notched), 1), (from_puncture(Tag::Plain), 1)],
            vec![(from_puncture(Tag::Notched), 2), (from_puncture(Tag::Plain), 1)],
            vec![(u_to_v(), 1), (through_monogon(), 2)],
            vec![
                (from_puncture(Tag::Notched), 1),
                (from_puncture(Tag::Plain), 1),
                (u_to_v(), 2),
            ],
        ];
        for m in &samples {
            let report = check_unfolding_identities(&fold, m).unwrap();
            assert!(report.all_hold(), "{report:?} for {m:?}");
            assert_eq!(report.radius.len(), 1);
            assert_eq!(report.plain.len(), 2, "arcs 2 and 3 are checked plainly");
        }

        let strip = FoldingContext::new(&fixtures::two_puncture_strip()).unwrap();
        let m = vec![(strip_arc(Tag::Notched, Tag::Plain), 1), (strip_arc(Tag::Plain, Tag::Plain), 2)];
        let report = check_unfolding_identities(&strip, &m).unwrap();
        assert!(report.all_hold(), "{report:?}");
        assert_eq!(report.radius.len(), 2);
        assert_eq!(
            report.spot.len(),
            2,
            "one fused pair is spot-checked against both radius arcs"
        );
    }

    #[test]
    fn vector_equivalence_agrees_between_the_two_sides() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let m = vec![(from_puncture(Tag::Notched), 1), (from_puncture(Tag::Plain), 1)];
        let same = check_vector_equivalence(&fold, &m, &m).unwrap();
        assert!(same.folded_equal && same.unfolded_equal && same.consistent);

        let different =
            check_vector_equivalence(&fold, &[(u_to_v(), 1)], &[(through_monogon(), 1)]).unwrap();
        assert!(!different.folded_equal && !different.unfolded_equal && different.consistent);

        // Swapping which end is notched flips the notched set but not the
        // unfolded curve — the notched set is what keeps the sides in step.
        let strip = FoldingContext::new(&fixtures::two_puncture_strip()).unwrap();
        let m = vec![(strip_arc(Tag::Notched, Tag::Plain), 1)];
        let n = vec![(strip_arc(Tag::Plain, Tag::Notched), 1)];
        let report = check_vector_equivalence(&strip, &m, &n).unwrap();
        assert!(!report.folded_equal && !report.unfolded_equal && report.consistent);
        let (mu, sm) = unfold_multiset(&strip, &m).unwrap();
        let (nu, sn) = unfold_multiset(&strip, &n).unwrap();
        assert_eq!(mu, nu, "the unfolded curves coincide");
        assert_ne!(sm, sn, "only the notched sets differ");
    }

    #[test]
    fn vectors_determine_multisets_on_the_three_cycle_disc() {
        let fold = FoldingContext::new(&fixtures::three_cycle_disc()).unwrap();
        let report = check_injectivity(&fold, 2, 2);
        assert!(report.hypothesis_holds, "no holed digon, no even arc-gon");
        assert!(report.collision.is_none(), "collision: {:?}", report.collision);
        assert!(report.consistent());
        assert!(report.multisets_checked > 0);
    }

    #[test]
    fn an_even_arc_gon_admits_a_vector_collision() {
        let t = fixtures::four_cycle_disc();
        let fold = FoldingContext::new(&t).unwrap();
        let chart = &fold.source_chart;

        // The five arcs mirroring the projectives: two tagged radius
        // representatives at the puncture and three corner-to-corner arcs.
        let apex = CurveEnd { anchor: Anchor { polygon: 0, vertex: 1 }, tag: Tag::Notched };
        let a1m = Curve {
            ends: [apex, corner(2, 1)],
            crossings: vec![cross(0, 1), cross(1, 1)],
        };
        let a1p = Curve {
            ends: [CurveEnd { tag: Tag::Plain, ..apex }, corner(2, 1)],
            crossings: vec![cross(0, 1), cross(1, 1)],
        };
        let a2 = Curve { ends: [corner(2, 1), corner(3, 1)], crossings: vec![cross(1, 0), cross(2, 1)] };
        let a3 = Curve { ends: [corner(3, 1), corner(4, 1)], crossings: vec![cross(2, 0), cross(3, 1)] };
        let a4 = Curve {
            ends: [corner(4, 1), corner(2, 1)],
            crossings: vec![cross(3, 0), cross(0, 0), cross(4, 1), cross(0, 1), cross(1, 1)],
        };
        for c in [&a1m, &a1p, &a2, &a3, &a4] {
            validate_curve(chart, c).unwrap();
        }

        let left: Multiset = vec![(a1m, 1), (a1p, 1), (a3, 1)];
        let right: Multiset = vec![(a2, 1), (a4, 1)];
        assert!(crate::intersect::compatible(chart, &left));
        assert!(crate::intersect::compatible(chart, &right));
        let vl = tagged_vector(chart, &fold.source, &left);
        let vr = tagged_vector(chart, &fold.source, &right);
        assert_eq!(vl, vec![1, 1, 2, 1, 1]);
        assert_eq!(vl, vr, "two different multisets share one dimension vector");

        let report = check_injectivity(&fold, 3, 4);
        assert!(!report.hypothesis_holds, "the four-sided arc-gon is even");
        assert!(report.collision.is_some(), "the search finds a collision");
        assert!(report.consistent());
        let c = report.collision.unwrap();
        assert_eq!(
            tagged_vector(chart, &fold.source, &c.left),
            tagged_vector(chart, &fold.source, &c.right),
        );
        assert_ne!(c.left, c.right);
    }

    #[test]
    fn round_trips_cover_all_small_compatible_multisets() {
        for t in [fixtures::three_cycle_disc(), fixtures::two_puncture_strip()] {
            let fold = FoldingContext::new(&t).unwrap();
            let arcs = enumerate_arcs(&fold.source_chart, 2);
            let sets = compatible_multisets(&fold.source_chart, &arcs, 2);
            assert!(!sets.is_empty());
            for m in &sets {
                let (unfolded, notched) = unfold_multiset(&fold, m).unwrap();
                let back = recover_multiset(&fold, &unfolded, &notched).unwrap();
                assert_eq!(&back, m, "round trip through {unfolded:?}");
                let report = check_unfolding_identities(&fold, m).unwrap();
                assert!(report.all_hold(), "{report:?} for {m:?}");
            }
        }
    }
}
