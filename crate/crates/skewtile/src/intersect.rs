//! Intersection numbers of tagged arcs, dimension vectors, and arc
//! enumeration.
//!
//! Two reduced curves meet in a well-defined minimal number of points, and
//! that number splits over the chart into local, checkable events:
//!
//! * **Chord pairs.** Two segments in one polygon that share no attachment
//!   cross exactly when their four attachments strictly interleave in the
//!   polygon's refined boundary order (slot `k` ↦ `2k`, vertex `k` ↦
//!   `2k+1`). Segments sharing a vertex meet at a common anchor, which
//!   never counts; segments sharing a slot belong to a corridor.
//! * **Corridors.** Where the curves cross the same edges in parallel —
//!   runs of crossings `(i+t, j±t)` over the same edges, with the sign
//!   depending on relative orientation — the strands form a corridor that
//!   contributes at most one crossing. Rank the two divergent attachments
//!   at each end of the corridor by walking anticlockwise from just after
//!   the corridor's shared slot. The walks at the two ends start on
//!   opposite transverse sides, so the corridor forces one crossing exactly
//!   when the two comparisons *agree*; a shared anchor occurrence at an end
//!   lets the strands comb apart and contributes nothing.
//!
//! The crossing part `int_a` is that sum. The full intersection number of
//! tagged arcs adds `int_c` (−1 for a *conjugate pair*: equal underlying
//! curves whose tags differ at exactly one puncture end) and `int_d` (one
//! per pair of ends at a common puncture with different tags). A multiset
//! of arcs is *compatible* when all pairs have intersection number zero.
//!
//! The dimension vector of a multiset lists, over the tagged arc index of
//! the tiling, the crossing counts with each plain arc, while each tagged
//! radius entry counts crossings with the radius cut plus the ends at its
//! puncture whose tag disagrees with the entry.

use std::collections::BTreeSet;

use crate::arc::{
    segments, validate_curve, walk_rank, Anchor, Attach, Crossing, Curve, CurveEnd, Segment, Tag,
};
use crate::chart::{Chart, EdgeKind, SlotId, VertexKind};
use crate::tiling::{TaggedArcLabel, Tiling};

/// A curve together with its derived segments.
struct Strands<'c> {
    crossings: &'c [Crossing],
    segs: Vec<Segment>,
}

impl<'c> Strands<'c> {
    fn of(chart: &Chart, curve: &'c Curve) -> Strands<'c> {
        let segs = segments(chart, curve).expect("curve splits into segments");
        Strands { crossings: &curve.crossings, segs }
    }
}

fn parallel(a: &Strands, i: usize, b: &Strands, j: usize) -> bool {
    a.crossings[i].edge == b.crossings[j].edge && a.crossings[i].from == b.crossings[j].from
}

fn antiparallel(a: &Strands, i: usize, b: &Strands, j: usize) -> bool {
    a.crossings[i].edge == b.crossings[j].edge && a.crossings[i].from == 1 - b.crossings[j].from
}

/// Whether the corridor with first pair `(i, j)`, direction `dir` (`+1`
/// parallel, `-1` antiparallel) and length `len` forces a crossing.
fn corridor_crosses(
    chart: &Chart,
    a: &Strands,
    b: &Strands,
    i: usize,
    j: usize,
    dir: isize,
    len: usize,
) -> bool {
    // Divergent attachments at the start end (before crossing i of `a`).
    let fa = seg_far(a, i, false);
    let fb = if dir == 1 { seg_far(b, j, false) } else { seg_far(b, j + 1, true) };
    let start_slot = SlotId { edge: a.crossings[i].edge, half: a.crossings[i].from };
    let Some(start) = rank_pair(chart, start_slot, fa, fb) else { return false };

    // And at the far end (after crossing i+len-1 of `a`).
    let li = i + len - 1;
    let lj = (j as isize + dir * (len as isize - 1)) as usize;
    let fa = seg_far(a, li + 1, true);
    let fb = if dir == 1 { seg_far(b, lj + 1, true) } else { seg_far(b, lj, false) };
    let end_slot = SlotId { edge: a.crossings[li].edge, half: 1 - a.crossings[li].from };
    let Some(end) = rank_pair(chart, end_slot, fa, fb) else { return false };

    start == end
}

/// The far attachment of segment `k`: towards end 1 if `forward`, else
/// towards end 0.
fn seg_far(s: &Strands, k: usize, forward: bool) -> (usize, Attach) {
    let seg = &s.segs[k];
    (seg.polygon, if forward { seg.b } else { seg.a })
}

/// Compares two far attachments around the shared slot; `None` on an anchor
/// tie. Returns whether the first strand ranks below the second.
fn rank_pair(
    chart: &Chart,
    shared: SlotId,
    (pa, aa): (usize, Attach),
    (pb, ab): (usize, Attach),
) -> Option<bool> {
    let (poly, pm) = chart.position(shared);
    debug_assert_eq!(pa, poly, "strand attachments flank the shared slot");
    debug_assert_eq!(pb, poly, "strand attachments flank the shared slot");
    if aa == ab {
        debug_assert!(
            matches!(aa, Attach::Vertex(_)),
            "a shared slot beyond a corridor end contradicts maximality"
        );
        return None;
    }
    let len = chart.polygons[poly].len();
    Some(walk_rank(len, pm, aa) < walk_rank(len, pm, ab))
}

/// Sum of corridor contributions between the two strand systems. With
/// `same_curve`, `a` and `b` are the same curve and only pairs `i < j` are
/// formed.
fn corridor_sum(chart: &Chart, a: &Strands, b: &Strands, same_curve: bool) -> usize {
    let n = a.crossings.len();
    let m = b.crossings.len();
    let mut total = 0;
    for i in 0..n {
        for j in 0..m {
            if same_curve && j <= i {
                continue;
            }
            // Parallel maximal runs starting at (i, j).
            if parallel(a, i, b, j) && !(i > 0 && j > 0 && parallel(a, i - 1, b, j - 1)) {
                let mut len = 1;
                while i + len < n && j + len < m && parallel(a, i + len, b, j + len) {
                    len += 1;
                }
                if corridor_crosses(chart, a, b, i, j, 1, len) {
                    total += 1;
                }
            }
            // Antiparallel maximal runs starting at (i, j).
            if antiparallel(a, i, b, j)
                && !(i > 0 && j + 1 < m && antiparallel(a, i - 1, b, j + 1))
            {
                let mut len = 1;
                while i + len < n
                    && j >= len
                    && (!same_curve || i + len < j - len)
                    && antiparallel(a, i + len, b, j - len)
                {
                    len += 1;
                }
                if corridor_crosses(chart, a, b, i, j, -1, len) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// Refined boundary coordinate of an attachment.
fn coord(at: Attach) -> usize {
    match at {
        Attach::Slot(q) => 2 * q,
        Attach::Vertex(v) => 2 * v + 1,
    }
}

/// Whether two chords with pairwise distinct attachments interleave.
fn chords_cross(len2: usize, s: &Segment, t: &Segment) -> bool {
    let a1 = coord(s.a);
    let a2 = coord(s.b);
    let d = |x: usize| (x + len2 - a1) % len2;
    let cut = d(a2);
    let inside = |x: usize| {
        let dx = d(x);
        0 < dx && dx < cut
    };
    inside(coord(t.a)) != inside(coord(t.b))
}

/// Sum of chord-pair crossings between the segment systems.
fn chord_sum(chart: &Chart, a: &Strands, b: &Strands, same_curve: bool) -> usize {
    let mut total = 0;
    for (i, s) in a.segs.iter().enumerate() {
        for (j, t) in b.segs.iter().enumerate() {
            if same_curve && j <= i {
                continue;
            }
            if s.polygon != t.polygon {
                continue;
            }
            let shared = [s.a, s.b].iter().any(|x| *x == t.a || *x == t.b);
            if shared {
                continue;
            }
            let len2 = 2 * chart.polygons[s.polygon].len();
            if chords_cross(len2, s, t) {
                total += 1;
            }
        }
    }
    total
}

/// Minimal number of self-crossings of a curve.
pub fn self_crossings(chart: &Chart, curve: &Curve) -> usize {
    let s = Strands::of(chart, curve);
    corridor_sum(chart, &s, &s, true) + chord_sum(chart, &s, &s, true)
}

/// Minimal number of crossings between two curves.
pub fn int_a(chart: &Chart, a: &Curve, b: &Curve) -> usize {
    let sa = Strands::of(chart, a);
    let sb = Strands::of(chart, b);
    corridor_sum(chart, &sa, &sb, false) + chord_sum(chart, &sa, &sb, false)
}

/// Number of crossings between a curve and an edge of the chart.
pub fn edge_crossings(curve: &Curve, edge: usize) -> usize {
    curve.crossings.iter().filter(|c| c.edge == edge).count()
}

fn untagged(curve: &Curve) -> Curve {
    let mut c = curve.clone();
    c.ends[0].tag = Tag::Plain;
    c.ends[1].tag = Tag::Plain;
    c
}

/// The puncture id a curve end is anchored at, if any.
pub fn end_puncture<'c>(chart: &'c Chart, curve: &Curve, end: usize) -> Option<&'c str> {
    let a = curve.ends[end].anchor;
    match &chart.polygons[a.polygon].vertices[a.vertex] {
        VertexKind::Puncture(p) => Some(p),
        _ => None,
    }
}

/// Whether the two curves form a conjugate pair: equal underlying curves
/// whose tags differ at exactly one end, anchored at a puncture.
pub fn conjugate_pair(chart: &Chart, a: &Curve, b: &Curve) -> bool {
    let orientations = [b.clone(), b.flipped()];
    orientations.iter().any(|b| {
        untagged(a) == untagged(b)
            && (0..2).filter(|&e| a.ends[e].tag != b.ends[e].tag).count() == 1
            && (0..2).all(|e| {
                a.ends[e].tag == b.ends[e].tag || end_puncture(chart, a, e).is_some()
            })
    })
}

/// The conjugacy part of the intersection number: −1 for a conjugate pair.
pub fn int_c(chart: &Chart, a: &Curve, b: &Curve) -> i64 {
    if conjugate_pair(chart, a, b) {
        -1
    } else {
        0
    }
}

/// The puncture part: end pairs at a common puncture with different tags.
pub fn int_d(chart: &Chart, a: &Curve, b: &Curve) -> i64 {
    let mut total = 0;
    for ea in 0..2 {
        for eb in 0..2 {
            if let (Some(p), Some(q)) =
                (end_puncture(chart, a, ea), end_puncture(chart, b, eb))
            {
                if p == q && a.ends[ea].tag != b.ends[eb].tag {
                    total += 1;
                }
            }
        }
    }
    total
}

/// The full intersection number of two tagged arcs.
pub fn int_total(chart: &Chart, a: &Curve, b: &Curve) -> i64 {
    int_a(chart, a, b) as i64 + int_c(chart, a, b) + int_d(chart, a, b)
}

/// Whether a multiset of validated arcs is compatible: every pair has
/// intersection number zero. (Extra copies of one arc are always fine:
/// parallel copies never cross.)
pub fn compatible(chart: &Chart, multiset: &[(Curve, usize)]) -> bool {
    for (i, (a, _)) in multiset.iter().enumerate() {
        for (b, _) in multiset.iter().skip(i + 1) {
            if int_total(chart, a, b) != 0 {
                return false;
            }
        }
    }
    true
}

/// The radius edge cut for a puncture, if that puncture exists.
pub fn radius_edge(chart: &Chart, puncture: &str) -> Option<usize> {
    chart.edges.iter().position(
        |e| matches!(e, EdgeKind::Radius { puncture: p } if p == puncture),
    )
}

/// The intersection number of one tagged index entry with a curve.
pub fn index_entry_int(chart: &Chart, label: &TaggedArcLabel, curve: &Curve) -> i64 {
    match label {
        TaggedArcLabel::Plain { arc } => {
            let edge = chart.arc_edge(arc).expect("index arc exists in the chart");
            edge_crossings(curve, edge) as i64
        }
        TaggedArcLabel::Radius { puncture, notched, .. } => {
            let edge = radius_edge(chart, puncture).expect("index puncture has a radius");
            let crossings = edge_crossings(curve, edge) as i64;
            let want = if *notched { Tag::Plain } else { Tag::Notched };
            let ends = (0..2)
                .filter(|&e| {
                    end_puncture(chart, curve, e) == Some(puncture.as_str())
                        && curve.ends[e].tag == want
                })
                .count() as i64;
            crossings + ends
        }
    }
}

/// The dimension vector of a weighted multiset of arcs over the tagged
/// index of its tiling.
pub fn tagged_vector(
    chart: &Chart,
    tiling: &Tiling,
    multiset: &[(Curve, usize)],
) -> Vec<i64> {
    crate::tiling::tagged_arc_index(tiling)
        .expect("the chart's tiling is valid")
        .iter()
        .map(|label| {
            multiset
                .iter()
                .map(|(c, mult)| index_entry_int(chart, label, c) * *mult as i64)
                .sum()
        })
        .collect()
}

/// Enumerates every permissible tagged arc crossing at most `max_crossings`
/// tiling arcs, in canonical form, sorted.
pub fn enumerate_arcs(chart: &Chart, max_crossings: usize) -> Vec<Curve> {
    let mut anchors: Vec<Anchor> = chart
        .corner_anchors()
        .into_iter()
        .map(|(polygon, vertex)| Anchor { polygon, vertex })
        .collect();
    anchors
        .extend(chart.puncture_vertices().map(|(_, (polygon, vertex))| Anchor { polygon, vertex }));

    let mut found: BTreeSet<Curve> = BTreeSet::new();
    for &start in &anchors {
        let mut crossings = Vec::new();
        descend(
            chart,
            start,
            start.polygon,
            Attach::Vertex(start.vertex),
            &mut crossings,
            max_crossings,
            &mut found,
        );
    }
    found.into_iter().collect()
}

/// Depth-first growth of curves from `start`, currently drawing a segment
/// in `polygon` out of `at`.
fn descend(
    chart: &Chart,
    start: Anchor,
    polygon: usize,
    at: Attach,
    crossings: &mut Vec<Crossing>,
    budget: usize,
    found: &mut BTreeSet<Curve>,
) {
    let poly = &chart.polygons[polygon];
    let len = poly.len();

    // Close the curve at any vertex of the current polygon.
    for v in 0..len {
        if crossings.is_empty() && matches!(at, Attach::Vertex(u) if u == v) {
            continue;
        }
        let end = Anchor { polygon, vertex: v };
        for &tag0 in end_tags(chart, start) {
            for &tag1 in end_tags(chart, end) {
                let curve = Curve {
                    ends: [
                        CurveEnd { anchor: start, tag: tag0 },
                        CurveEnd { anchor: end, tag: tag1 },
                    ],
                    crossings: crossings.clone(),
                };
                if validate_curve(chart, &curve).is_ok() {
                    found.insert(curve.canonical());
                }
            }
        }
    }

    // Or cross any crossable slot.
    for q in 0..len {
        let slot = poly.slots[q];
        if !chart.edges[slot.edge].crossable() {
            continue;
        }
        let is_arc = matches!(chart.edges[slot.edge], EdgeKind::TArc(_));
        // Cheap reducedness pre-filters; validation re-checks everything.
        // Without the winding filter the search would bounce between the two
        // slots of a cut edge forever, as cut crossings are free.
        match at {
            Attach::Slot(p) if p == q => continue,
            Attach::Vertex(v) if q == v || q == (v + 1) % len => continue,
            _ => {}
        }
        if !is_arc && crossings.last().is_some_and(|c| c.edge == slot.edge) {
            continue;
        }
        if is_arc && budget == 0 {
            continue;
        }
        let (npoly, npos) = chart.position(SlotId { edge: slot.edge, half: 1 - slot.half });
        crossings.push(Crossing { edge: slot.edge, from: slot.half });
        descend(
            chart,
            start,
            npoly,
            Attach::Slot(npos),
            crossings,
            budget - usize::from(is_arc),
            found,
        );
        crossings.pop();
    }
}

/// The tags an end anchored there may carry.
fn end_tags(chart: &Chart, a: Anchor) -> &'static [Tag] {
    match chart.polygons[a.polygon].vertices[a.vertex] {
        VertexKind::Puncture(_) => &[Tag::Plain, Tag::Notched],
        _ => &[Tag::Plain],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::fixtures;
    use crate::tiling::tagged_arc_index;

    fn corner(polygon: usize, vertex: usize) -> CurveEnd {
        CurveEnd { anchor: Anchor { polygon, vertex }, tag: Tag::Plain }
    }

    fn cross(edge: usize, from: usize) -> Crossing {
        Crossing { edge, from }
    }

    fn ex_chart() -> Chart {
        Chart::build(&fixtures::three_cycle_disc()).unwrap()
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

    fn from_puncture(tag: Tag) -> Curve {
        Curve {
            ends: [CurveEnd { anchor: Anchor { polygon: 0, vertex: 1 }, tag }, corner(3, 1)],
            crossings: vec![cross(0, 1), cross(1, 1)],
        }
    }

    #[test]
    fn the_expected_arcs_are_simple_and_pairwise_compatible() {
        let chart = ex_chart();
        let arcs = [
            from_puncture(Tag::Notched),
            from_puncture(Tag::Plain),
            u_to_v(),
            through_monogon(),
        ];
        for a in &arcs {
            assert_eq!(self_crossings(&chart, a), 0, "{a:?}");
        }
        for (i, a) in arcs.iter().enumerate() {
            for b in &arcs[i + 1..] {
                assert_eq!(int_total(&chart, a, b), 0, "{a:?} vs {b:?}");
            }
        }
        let multiset: Vec<(Curve, usize)> = arcs.iter().map(|a| (a.clone(), 1)).collect();
        assert!(compatible(&chart, &multiset));
    }

    #[test]
    fn the_conjugate_pair_splits_into_its_parts() {
        let chart = ex_chart();
        let minus = from_puncture(Tag::Notched);
        let plus = from_puncture(Tag::Plain);
        assert_eq!(int_a(&chart, &minus, &plus), 0);
        assert_eq!(int_c(&chart, &minus, &plus), -1);
        assert_eq!(int_d(&chart, &minus, &plus), 1);
        assert_eq!(int_total(&chart, &minus, &plus), 0);
        // Against itself the curve has no conjugacy part.
        assert_eq!(int_c(&chart, &minus, &minus), 0);
        assert_eq!(int_d(&chart, &minus, &minus), 0);
    }

    #[test]
    fn vectors_of_the_expected_arcs_match_the_projective_columns() {
        let chart = ex_chart();
        let tiling = fixtures::three_cycle_disc();
        let index = tagged_arc_index(&tiling).unwrap();
        assert_eq!(index.len(), 4);
        let vec_of = |c: &Curve| tagged_vector(&chart, &tiling, &[(c.clone(), 1)]);
        assert_eq!(vec_of(&from_puncture(Tag::Notched)), [1, 0, 1, 0]);
        assert_eq!(vec_of(&from_puncture(Tag::Plain)), [0, 1, 1, 0]);
        assert_eq!(vec_of(&u_to_v()), [0, 0, 1, 1]);
        assert_eq!(vec_of(&through_monogon()), [1, 1, 1, 1]);
        // Multiplicities scale the vector.
        let doubled = tagged_vector(&chart, &tiling, &[(u_to_v(), 2)]);
        assert_eq!(doubled, [0, 0, 2, 2]);
    }

    #[test]
    fn crossing_arcs_with_interleaved_ends_are_detected() {
        let chart = ex_chart();
        // c → P, against u → v: the chord to u–v separates c from the
        // punctured monogon, so the two must cross once.
        let c_to_p = Curve {
            ends: [corner(1, 2), CurveEnd { anchor: Anchor { polygon: 0, vertex: 1 }, tag: Tag::Plain }],
            crossings: vec![cross(0, 0)],
        };
        assert_eq!(validate_curve(&chart, &c_to_p), Ok(()));
        assert_eq!(int_a(&chart, &c_to_p, &u_to_v()), 1);
        assert_eq!(int_a(&chart, &u_to_v(), &c_to_p), 1);
        // But the monogon bypass does not separate them.
        assert_eq!(int_a(&chart, &c_to_p, &through_monogon()), 0);
        // And u → b does not cross u → v (the shared anchor combs apart).
        let u_to_b = Curve { ends: [corner(2, 1), corner(1, 0)], crossings: vec![cross(2, 1)] };
        assert_eq!(validate_curve(&chart, &u_to_b), Ok(()));
        assert_eq!(int_a(&chart, &u_to_b, &u_to_v()), 0);
    }

    #[test]
    fn intersection_numbers_are_orientation_independent() {
        let chart = ex_chart();
        let arcs =
            [u_to_v(), through_monogon(), from_puncture(Tag::Plain), from_puncture(Tag::Notched)];
        for a in &arcs {
            for b in &arcs {
                let base = int_total(&chart, a, b);
                assert_eq!(base, int_total(&chart, &a.flipped(), b));
                assert_eq!(base, int_total(&chart, a, &b.flipped()));
                assert_eq!(base, int_total(&chart, b, a));
            }
        }
    }

    #[test]
    fn enumeration_finds_the_expected_arcs() {
        let chart = ex_chart();
        let arcs = enumerate_arcs(&chart, 4);
        for expected in [
            from_puncture(Tag::Notched),
            from_puncture(Tag::Plain),
            u_to_v(),
            through_monogon(),
        ] {
            assert!(
                arcs.contains(&expected.canonical()),
                "missing {:?} among {} arcs",
                expected,
                arcs.len()
            );
        }
        // Everything enumerated validates and is canonical.
        for arc in &arcs {
            assert_eq!(validate_curve(&chart, arc), Ok(()), "{arc:?}");
            assert_eq!(*arc, arc.canonical());
        }
    }

    #[test]
    fn enumeration_respects_the_crossing_budget() {
        let chart = ex_chart();
        for budget in 0..3 {
            for arc in enumerate_arcs(&chart, budget) {
                assert!(arc.word(&chart).len() <= budget);
            }
        }
    }

    #[test]
    fn parallel_copies_and_shared_ends_do_not_cross() {
        let chart = ex_chart();
        let c = through_monogon();
        assert_eq!(int_a(&chart, &c, &c), 0);
        assert_eq!(int_a(&chart, &c, &c.flipped()), 0);
    }
}
