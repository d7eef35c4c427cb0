//! Quivers, relation sets, gentle pairs and skew-gentle triples.
//!
//! Composition is written right-to-left: the pair `(a, b)` stands for the
//! composite `a∘b`, which traverses `b` first and requires
//! `target(b) == source(a)`. Relation sets list such pairs as *zero*
//! relations. Paths, by contrast, are stored in traversal order (first arrow
//! first), which keeps the path-extension loops readable; the two conventions
//! meet in [`RelationSet::is_zero_pair`], whose arguments are named for the
//! composition order.
//!
//! A pair `(Q, I)` of a quiver and quadratic monomial relations is *gentle*
//! when
//! * every vertex has at most two incoming and two outgoing arrows,
//! * for every arrow `α`, at most one arrow `β` with `source(β) = target(α)`
//!   satisfies `βα ∈ I`, and at most one satisfies `βα ∉ I`, and
//! * dually with `α` on the left.
//!
//! A *skew-gentle triple* `(Q, Sp, I)` marks a set `Sp` of special vertices;
//! the defining condition is that adding a squared-zero loop at each special
//! vertex yields a gentle pair. That check is [`validate_skew_gentle`] and
//! the loop-adding construction it shares with the derived algebras is
//! [`sp_pair`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An arrow of a quiver.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub source: String,
    pub target: String,
}

/// Structural errors in quiver or relation data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate arrow id {0:?}")]
    DuplicateArrow(String),
    #[error("arrow {arrow:?} references unknown vertex {vertex:?}")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("relation references unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("relation pair ({first:?}, {second:?}) is not composable: target of {second:?} is {got:?}, not the source {want:?} of {first:?}")]
    NonComposableRelation { first: String, second: String, got: String, want: String },
    #[error("loop marker on {arrow:?}, which is not a loop")]
    MarkerOnNonLoop { arrow: String },
    #[error("special vertex {0:?} is not a vertex of the quiver")]
    UnknownSpecial(String),
    #[error("binomial relations are not allowed here (found one through {0:?})")]
    UnexpectedBinomial(String),
    #[error("idempotent loop markers are not allowed here (on {0:?})")]
    UnexpectedIdempotentMarker(String),
    #[error("a skew-gentle triple must present its relations as plain zero pairs (found a marker or binomial)")]
    TripleRelationsNotPlain,
    #[error("arrow {arrow:?} has several zero continuations {continuations:?}; the relations are not gentle")]
    AmbiguousZeroContinuations { arrow: String, continuations: Vec<String> },
}

/// A finite quiver with string-labelled vertices and arrows.
///
/// Vertices and arrows are kept sorted by id, so every iteration over a
/// quiver is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    outgoing: BTreeMap<String, Vec<usize>>,
    incoming: BTreeMap<String, Vec<usize>>,
}

impl Quiver {
    /// Builds a quiver, sorting vertices and arrows and validating that ids
    /// are unique and endpoints exist.
    pub fn new(mut vertices: Vec<String>, mut arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(QuiverError::DuplicateVertex(w[0].clone()));
            }
        }
        arrows.sort_by(|a, b| a.id.cmp(&b.id));
        for w in arrows.windows(2) {
            if w[0].id == w[1].id {
                return Err(QuiverError::DuplicateArrow(w[0].id.clone()));
            }
        }
        let vset: BTreeSet<&String> = vertices.iter().collect();
        let mut outgoing: BTreeMap<String, Vec<usize>> =
            vertices.iter().map(|v| (v.clone(), Vec::new())).collect();
        let mut incoming = outgoing.clone();
        for (i, a) in arrows.iter().enumerate() {
            for v in [&a.source, &a.target] {
                if !vset.contains(v) {
                    return Err(QuiverError::UnknownVertex { arrow: a.id.clone(), vertex: v.clone() });
                }
            }
            outgoing.get_mut(&a.source).unwrap().push(i);
            incoming.get_mut(&a.target).unwrap().push(i);
        }
        Ok(Quiver { vertices, arrows, outgoing, incoming })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.outgoing.contains_key(v)
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows.binary_search_by(|a| a.id.as_str().cmp(id)).ok().map(|i| &self.arrows[i])
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.binary_search_by(|a| a.id.as_str().cmp(id)).ok()
    }

    /// Indices of arrows leaving `v`, in id order.
    pub fn outgoing(&self, v: &str) -> &[usize] {
        self.outgoing.get(v).map_or(&[], Vec::as_slice)
    }

    /// Indices of arrows entering `v`, in id order.
    pub fn incoming(&self, v: &str) -> &[usize] {
        self.incoming.get(v).map_or(&[], Vec::as_slice)
    }
}

/// Marker on a loop arrow, standing in for a quadratic relation on the loop:
/// a `Nilpotent` loop `ℓ` squares to zero, an `Idempotent` loop satisfies
/// `ℓ² = ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopMarker {
    Nilpotent,
    Idempotent,
}

/// A binomial relation `plus.0 ∘ plus.1 − minus.0 ∘ minus.1 = 0` (each side
/// in composition order: the `.1` arrow is traversed first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinomialRelation {
    pub plus: (String, String),
    pub minus: (String, String),
}

/// The relations of a presentation: quadratic zero pairs, loop markers, and
/// (for the split construction only) binomial relations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationSet {
    /// Zero relations `(a, b)` in composition order: the path traversing `b`
    /// then `a` is zero.
    pub monomial: BTreeSet<(String, String)>,
    /// Quadratic behaviour of marked loops.
    pub loop_markers: BTreeMap<String, LoopMarker>,
    /// Binomial relations (two composable pairs identified up to sign).
    pub binomial: Vec<BinomialRelation>,
}

impl RelationSet {
    /// A relation set with only plain zero pairs.
    pub fn from_pairs<I: IntoIterator<Item = (String, String)>>(pairs: I) -> Self {
        RelationSet { monomial: pairs.into_iter().collect(), ..Default::default() }
    }

    /// Whether the composite `first ∘ second` (traversing `second` first) is
    /// zero, counting a nilpotent marker on a loop as the zero pair
    /// `(ℓ, ℓ)`.
    pub fn is_zero_pair(&self, first: &str, second: &str) -> bool {
        if self.monomial.contains(&(first.to_owned(), second.to_owned())) {
            return true;
        }
        first == second && self.loop_markers.get(first) == Some(&LoopMarker::Nilpotent)
    }

    /// Structural validation against a quiver: arrows exist, zero pairs are
    /// composable, markers sit on loops.
    pub fn validate(&self, q: &Quiver) -> Result<(), QuiverError> {
        for (first, second) in &self.monomial {
            let f = q.arrow(first).ok_or_else(|| QuiverError::UnknownArrow(first.clone()))?;
            let s = q.arrow(second).ok_or_else(|| QuiverError::UnknownArrow(second.clone()))?;
            if s.target != f.source {
                return Err(QuiverError::NonComposableRelation {
                    first: first.clone(),
                    second: second.clone(),
                    got: s.target.clone(),
                    want: f.source.clone(),
                });
            }
        }
        for (id, _) in &self.loop_markers {
            let a = q.arrow(id).ok_or_else(|| QuiverError::UnknownArrow(id.clone()))?;
            if a.source != a.target {
                return Err(QuiverError::MarkerOnNonLoop { arrow: id.clone() });
            }
        }
        for b in &self.binomial {
            for (first, second) in [&b.plus, &b.minus] {
                let f = q.arrow(first).ok_or_else(|| QuiverError::UnknownArrow(first.clone()))?;
                let s = q.arrow(second).ok_or_else(|| QuiverError::UnknownArrow(second.clone()))?;
                if s.target != f.source {
                    return Err(QuiverError::NonComposableRelation {
                        first: first.clone(),
                        second: second.clone(),
                        got: s.target.clone(),
                        want: f.source.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// One violated gentleness condition, with the witnessing arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GentleViolation {
    /// More than two arrows leave a vertex.
    OutDegree { vertex: String, arrows: Vec<String> },
    /// More than two arrows enter a vertex.
    InDegree { vertex: String, arrows: Vec<String> },
    /// More than one arrow continues `arrow` into a zero pair.
    ZeroContinuations { arrow: String, continuations: Vec<String> },
    /// More than one arrow continues `arrow` into a nonzero composite.
    FlowContinuations { arrow: String, continuations: Vec<String> },
    /// More than one arrow precedes `arrow` in a zero pair.
    ZeroExtensions { arrow: String, extensions: Vec<String> },
    /// More than one arrow precedes `arrow` in a nonzero composite.
    FlowExtensions { arrow: String, extensions: Vec<String> },
}

impl fmt::Display for GentleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GentleViolation::OutDegree { vertex, arrows } => {
                write!(f, "vertex {vertex:?} has more than two outgoing arrows: {arrows:?}")
            }
            GentleViolation::InDegree { vertex, arrows } => {
                write!(f, "vertex {vertex:?} has more than two incoming arrows: {arrows:?}")
            }
            GentleViolation::ZeroContinuations { arrow, continuations } => {
                write!(f, "arrow {arrow:?} has more than one zero continuation: {continuations:?}")
            }
            GentleViolation::FlowContinuations { arrow, continuations } => {
                write!(f, "arrow {arrow:?} has more than one nonzero continuation: {continuations:?}")
            }
            GentleViolation::ZeroExtensions { arrow, extensions } => {
                write!(f, "arrow {arrow:?} has more than one zero extension: {extensions:?}")
            }
            GentleViolation::FlowExtensions { arrow, extensions } => {
                write!(f, "arrow {arrow:?} has more than one nonzero extension: {extensions:?}")
            }
        }
    }
}

/// Outcome of [`validate_gentle`]: empty means the pair is gentle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GentleReport {
    pub violations: Vec<GentleViolation>,
}

impl GentleReport {
    pub fn is_gentle(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the gentleness of a pair `(Q, I)` with plain quadratic zero
/// relations (nilpotent loop markers count as the zero pair on the loop).
///
/// Idempotent markers and binomial relations are structural errors here: a
/// gentle pair has monomial quadratic relations only.
pub fn validate_gentle(q: &Quiver, rels: &RelationSet) -> Result<GentleReport, QuiverError> {
    rels.validate(q)?;
    if let Some(b) = rels.binomial.first() {
        return Err(QuiverError::UnexpectedBinomial(b.plus.0.clone()));
    }
    if let Some((id, _)) = rels.loop_markers.iter().find(|(_, m)| **m == LoopMarker::Idempotent) {
        return Err(QuiverError::UnexpectedIdempotentMarker(id.clone()));
    }

    let mut report = GentleReport::default();
    for v in q.vertices() {
        let out: Vec<String> = q.outgoing(v).iter().map(|&i| q.arrows()[i].id.clone()).collect();
        if out.len() > 2 {
            report.violations.push(GentleViolation::OutDegree { vertex: v.clone(), arrows: out });
        }
        let inc: Vec<String> = q.incoming(v).iter().map(|&i| q.arrows()[i].id.clone()).collect();
        if inc.len() > 2 {
            report.violations.push(GentleViolation::InDegree { vertex: v.clone(), arrows: inc });
        }
    }
    for a in q.arrows() {
        let mut zero_cont = Vec::new();
        let mut flow_cont = Vec::new();
        for &i in q.outgoing(&a.target) {
            let b = &q.arrows()[i];
            if rels.is_zero_pair(&b.id, &a.id) {
                zero_cont.push(b.id.clone());
            } else {
                flow_cont.push(b.id.clone());
            }
        }
        if zero_cont.len() > 1 {
            report
                .violations
                .push(GentleViolation::ZeroContinuations { arrow: a.id.clone(), continuations: zero_cont });
        }
        if flow_cont.len() > 1 {
            report
                .violations
                .push(GentleViolation::FlowContinuations { arrow: a.id.clone(), continuations: flow_cont });
        }
        let mut zero_ext = Vec::new();
        let mut flow_ext = Vec::new();
        for &i in q.incoming(&a.source) {
            let b = &q.arrows()[i];
            if rels.is_zero_pair(&a.id, &b.id) {
                zero_ext.push(b.id.clone());
            } else {
                flow_ext.push(b.id.clone());
            }
        }
        if zero_ext.len() > 1 {
            report.violations.push(GentleViolation::ZeroExtensions { arrow: a.id.clone(), extensions: zero_ext });
        }
        if flow_ext.len() > 1 {
            report.violations.push(GentleViolation::FlowExtensions { arrow: a.id.clone(), extensions: flow_ext });
        }
    }
    Ok(report)
}

/// A skew-gentle triple `(Q, Sp, I)`: a quiver, a set of special vertices and
/// plain quadratic zero relations such that adding a squared-zero loop at
/// each special vertex gives a gentle pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewGentleTriple {
    pub quiver: Quiver,
    pub special: BTreeSet<String>,
    pub relations: RelationSet,
}

impl SkewGentleTriple {
    /// Bundles the data after structural validation (special vertices exist,
    /// relations are plain composable zero pairs). Gentleness of the
    /// loop-added pair is checked separately by [`validate_skew_gentle`].
    pub fn new(
        quiver: Quiver,
        special: BTreeSet<String>,
        relations: RelationSet,
    ) -> Result<Self, QuiverError> {
        if !relations.loop_markers.is_empty() || !relations.binomial.is_empty() {
            return Err(QuiverError::TripleRelationsNotPlain);
        }
        relations.validate(&quiver)?;
        for s in &special {
            if !quiver.has_vertex(s) {
                return Err(QuiverError::UnknownSpecial(s.clone()));
            }
        }
        Ok(SkewGentleTriple { quiver, special, relations })
    }
}

/// The id given to the loop added at a special vertex.
pub fn special_loop_id(vertex: &str) -> String {
    format!("eps({vertex})")
}

/// Adds one loop at each special vertex of the triple and returns the
/// enlarged quiver together with the relation set that marks each new loop
/// `Nilpotent` (so it squares to zero) on top of the triple's relations.
///
/// Fails if a loop id collides with an existing arrow id.
pub fn sp_pair(t: &SkewGentleTriple) -> Result<(Quiver, RelationSet), QuiverError> {
    let mut arrows = t.quiver.arrows().to_vec();
    for v in &t.special {
        let id = special_loop_id(v);
        if t.quiver.arrow(&id).is_some() {
            return Err(QuiverError::DuplicateArrow(id));
        }
        arrows.push(Arrow { id, source: v.clone(), target: v.clone() });
    }
    let q = Quiver::new(t.quiver.vertices().to_vec(), arrows)?;
    let mut rels = t.relations.clone();
    for v in &t.special {
        rels.loop_markers.insert(special_loop_id(v), LoopMarker::Nilpotent);
    }
    Ok((q, rels))
}

/// Per-condition outcome of the skew-gentle check: the violations of the
/// loop-added pair, if any.
pub type SkewGentleReport = GentleReport;

/// Checks that `(Q, Sp, I)` is skew-gentle: adding a squared-zero loop at
/// each special vertex must give a gentle pair.
pub fn validate_skew_gentle(t: &SkewGentleTriple) -> Result<SkewGentleReport, QuiverError> {
    let (q, rels) = sp_pair(t)?;
    validate_gentle(&q, &rels)
}

/// Whether the monomial algebra presented by `(q, rels)` is
/// finite-dimensional.
///
/// The algebra is infinite-dimensional exactly when the composition digraph —
/// arrows as nodes, an edge `a → b` whenever `b ∘ a` is a nonzero composable
/// pair that is not absorbed by an idempotent loop — contains a directed
/// cycle, since any such cycle pumps arbitrarily long nonzero words.
pub fn is_finite_dimensional(q: &Quiver, rels: &RelationSet) -> Result<bool, QuiverError> {
    rels.validate(q)?;
    if let Some(b) = rels.binomial.first() {
        return Err(QuiverError::UnexpectedBinomial(b.plus.0.clone()));
    }
    let n = q.arrows().len();
    let succ: Vec<Vec<usize>> = q
        .arrows()
        .iter()
        .map(|a| {
            q.outgoing(&a.target)
                .iter()
                .copied()
                .filter(|&j| {
                    let b = &q.arrows()[j];
                    if rels.is_zero_pair(&b.id, &a.id) {
                        return false;
                    }
                    !(b.id == a.id && rels.loop_markers.get(&a.id) == Some(&LoopMarker::Idempotent))
                })
                .collect()
        })
        .collect();
    // Iterative three-colour DFS for a directed cycle.
    let mut colour = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    for start in 0..n {
        if colour[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        colour[start] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succ[node].len() {
                let child = succ[node][*next];
                *next += 1;
                match colour[child] {
                    0 => {
                        colour[child] = 1;
                        stack.push((child, 0));
                    }
                    1 => return Ok(false),
                    _ => {}
                }
            } else {
                colour[node] = 2;
                stack.pop();
            }
        }
    }
    Ok(true)
}

/// A path of a quiver in traversal order: `arrows[0]` is traversed first.
/// A path with no arrows is the lazy path at `start`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    pub start: String,
    pub arrows: Vec<String>,
}

impl Path {
    pub fn source(&self) -> &str {
        &self.start
    }

    pub fn target<'q>(&'q self, q: &'q Quiver) -> &'q str {
        match self.arrows.last() {
            Some(id) => &q.arrow(id).expect("path arrow exists").target,
            None => &self.start,
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// The paths that survive the relations of a monomial presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathEnumeration {
    /// All nonzero paths up to the length cap, lazy paths first, then by
    /// length, then lexicographically by arrow ids.
    pub paths: Vec<Path>,
    /// True when some nonzero path of the cap length still extends, i.e. the
    /// enumeration was truncated and the algebra may be infinite-dimensional.
    pub truncated: bool,
}

/// Default length cap for [`enumerate_nonzero_paths`]: one beyond the longest
/// possible nonzero path of a finite-dimensional monomial algebra of this
/// size, so the `truncated` flag is trustworthy.
pub fn default_max_len(q: &Quiver) -> usize {
    q.arrows().len() * q.vertices().len() + 1
}

/// Enumerates the nonzero paths of a monomial presentation, up to `max_len`.
///
/// A path is *nonzero* when no adjacent pair of its arrows forms a zero
/// relation and no idempotent-marked loop appears twice in a row (the second
/// copy is absorbed by `ℓ² = ℓ`, so such a word is not reduced). The result
/// is prefix- and suffix-closed by construction. Binomial relations are
/// rejected: path counting is only meaningful for monomial presentations.
pub fn enumerate_nonzero_paths(
    q: &Quiver,
    rels: &RelationSet,
    max_len: usize,
) -> Result<PathEnumeration, QuiverError> {
    rels.validate(q)?;
    if let Some(b) = rels.binomial.first() {
        return Err(QuiverError::UnexpectedBinomial(b.plus.0.clone()));
    }

    let extendable = |last: &str, next: &Arrow| -> bool {
        if rels.is_zero_pair(&next.id, last) {
            return false;
        }
        // An idempotent loop absorbs a second consecutive copy of itself.
        !(next.id == last && rels.loop_markers.get(last) == Some(&LoopMarker::Idempotent))
    };

    let mut paths: Vec<Path> =
        q.vertices().iter().map(|v| Path { start: v.clone(), arrows: Vec::new() }).collect();
    let mut frontier = paths.clone();
    let mut truncated = false;
    for _ in 0..max_len {
        let mut next_frontier = Vec::new();
        for p in &frontier {
            let at = p.target(q).to_owned();
            for &i in q.outgoing(&at) {
                let a = &q.arrows()[i];
                let ok = match p.arrows.last() {
                    Some(last) => extendable(last, a),
                    None => true,
                };
                if ok {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a.id.clone());
                    next_frontier.push(Path { start: p.start.clone(), arrows });
                }
            }
        }
        next_frontier.sort();
        if next_frontier.is_empty() {
            break;
        }
        paths.extend(next_frontier.iter().cloned());
        frontier = next_frontier;
    }
    // Anything on the final frontier that still extends witnesses truncation.
    if frontier.first().map_or(false, |p| p.len() == max_len) {
        'outer: for p in &frontier {
            let at = p.target(q).to_owned();
            for &i in q.outgoing(&at) {
                let a = &q.arrows()[i];
                let ok = match p.arrows.last() {
                    Some(last) => extendable(last, a),
                    None => true,
                };
                if ok {
                    truncated = true;
                    break 'outer;
                }
            }
        }
    }
    Ok(PathEnumeration { paths, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn arrow(id: &str, s: &str, t: &str) -> Arrow {
        Arrow { id: id.into(), source: s.into(), target: t.into() }
    }

    use crate::fixtures::three_cycle;

    #[test]
    fn quiver_construction_validates_ids_and_endpoints() {
        assert!(matches!(
            Quiver::new(vec!["a".into(), "a".into()], vec![]),
            Err(QuiverError::DuplicateVertex(_))
        ));
        assert!(matches!(
            Quiver::new(vec!["a".into()], vec![arrow("x", "a", "b")]),
            Err(QuiverError::UnknownVertex { .. })
        ));
        assert!(matches!(
            Quiver::new(vec!["a".into()], vec![arrow("x", "a", "a"), arrow("x", "a", "a")]),
            Err(QuiverError::DuplicateArrow(_))
        ));
        let q = Quiver::new(vec!["b".into(), "a".into()], vec![arrow("x", "a", "b")]).unwrap();
        assert_eq!(q.vertices(), ["a", "b"]);
        assert_eq!(q.outgoing("a"), [0]);
        assert_eq!(q.incoming("b"), [0]);
    }

    #[test]
    fn relation_validation_catches_noncomposable_pairs_and_bad_markers() {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![arrow("a", "1", "2"), arrow("b", "2", "3")],
        )
        .unwrap();
        // (b, a) is composable (a then b); (a, b) is not.
        assert!(RelationSet::from_pairs([("b".to_owned(), "a".to_owned())]).validate(&q).is_ok());
        assert!(matches!(
            RelationSet::from_pairs([("a".to_owned(), "b".to_owned())]).validate(&q),
            Err(QuiverError::NonComposableRelation { .. })
        ));
        let mut rels = RelationSet::default();
        rels.loop_markers.insert("a".into(), LoopMarker::Nilpotent);
        assert!(matches!(rels.validate(&q), Err(QuiverError::MarkerOnNonLoop { .. })));
    }

    #[test]
    fn three_cycle_is_skew_gentle_and_its_paths_count_correctly() {
        let t = three_cycle();
        assert!(validate_skew_gentle(&t).unwrap().is_gentle());

        // Without the special loop: three lazy paths and three arrows.
        let plain = enumerate_nonzero_paths(&t.quiver, &t.relations, default_max_len(&t.quiver)).unwrap();
        assert!(!plain.truncated);
        assert_eq!(plain.paths.len(), 6);

        // With the squared-zero loop at vertex 1 the algebra gains the loop
        // itself and its three composites with the cycle arrows.
        let (q, rels) = sp_pair(&t).unwrap();
        let sp = enumerate_nonzero_paths(&q, &rels, default_max_len(&q)).unwrap();
        assert!(!sp.truncated);
        assert_eq!(sp.paths.len(), 10);
        let longest: Vec<&Path> = sp.paths.iter().filter(|p| p.len() == 3).collect();
        assert_eq!(longest.len(), 1);
        assert_eq!(longest[0].arrows, ["beta", "eps(1)", "alpha"]);
    }

    #[test]
    fn idempotent_loops_absorb_repeats_instead_of_vanishing() {
        let q = Quiver::new(vec!["1".into()], vec![arrow("e", "1", "1")]).unwrap();
        let mut rels = RelationSet::default();
        rels.loop_markers.insert("e".into(), LoopMarker::Idempotent);
        let en = enumerate_nonzero_paths(&q, &rels, 5).unwrap();
        // Lazy path and the loop once; "ee" is absorbed, not zero.
        assert!(!en.truncated);
        assert_eq!(en.paths.len(), 2);
    }

    #[test]
    fn truncation_flag_reports_unbounded_paths() {
        let q = Quiver::new(vec!["1".into()], vec![arrow("x", "1", "1")]).unwrap();
        let en = enumerate_nonzero_paths(&q, &RelationSet::default(), 4).unwrap();
        assert!(en.truncated);
        assert_eq!(en.paths.len(), 5); // lengths 0..=4

        let mut rels = RelationSet::default();
        rels.loop_markers.insert("x".into(), LoopMarker::Nilpotent);
        let en = enumerate_nonzero_paths(&q, &rels, 4).unwrap();
        assert!(!en.truncated);
        assert_eq!(en.paths.len(), 2);
    }

    #[test]
    fn finite_dimensionality_matches_truncation_behaviour() {
        let q = Quiver::new(vec!["1".into()], vec![arrow("x", "1", "1")]).unwrap();
        assert!(!is_finite_dimensional(&q, &RelationSet::default()).unwrap());
        let mut nil = RelationSet::default();
        nil.loop_markers.insert("x".into(), LoopMarker::Nilpotent);
        assert!(is_finite_dimensional(&q, &nil).unwrap());
        let mut idem = RelationSet::default();
        idem.loop_markers.insert("x".into(), LoopMarker::Idempotent);
        assert!(is_finite_dimensional(&q, &idem).unwrap());

        // A relation-free two-cycle pumps; one relation already blocks every
        // long word (the survivor "b then a" cannot extend on either side).
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![arrow("a", "1", "2"), arrow("b", "2", "1")],
        )
        .unwrap();
        assert!(!is_finite_dimensional(&q, &RelationSet::default()).unwrap());
        let rels = RelationSet::from_pairs([("b".to_owned(), "a".to_owned())]);
        assert!(is_finite_dimensional(&q, &rels).unwrap());
        let en = enumerate_nonzero_paths(&q, &rels, 10).unwrap();
        assert!(!en.truncated);
        assert_eq!(en.paths.iter().map(Path::len).max(), Some(2));
        let t = three_cycle();
        let (spq, sprels) = sp_pair(&t).unwrap();
        assert!(is_finite_dimensional(&spq, &sprels).unwrap());
    }

    #[test]
    fn gentle_violations_are_reported_per_condition() {
        // Three arrows out of one vertex.
        let q = Quiver::new(
            vec!["0".into(), "1".into(), "2".into(), "3".into()],
            vec![arrow("a", "0", "1"), arrow("b", "0", "2"), arrow("c", "0", "3")],
        )
        .unwrap();
        let rep = validate_gentle(&q, &RelationSet::default()).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert!(matches!(&rep.violations[0], GentleViolation::OutDegree { vertex, .. } if vertex == "0"));

        // Two nonzero continuations of the same arrow.
        let q = Quiver::new(
            vec!["0".into(), "1".into(), "2".into(), "3".into()],
            vec![arrow("a", "0", "1"), arrow("b", "1", "2"), arrow("c", "1", "3")],
        )
        .unwrap();
        let rep = validate_gentle(&q, &RelationSet::default()).unwrap();
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, GentleViolation::FlowContinuations { arrow, .. } if arrow == "a")));
        // Making one composite zero restores gentleness.
        let rels = RelationSet::from_pairs([("b".to_owned(), "a".to_owned())]);
        assert!(validate_gentle(&q, &rels).unwrap().is_gentle());

        // Dual conditions on extensions.
        let q = Quiver::new(
            vec!["0".into(), "1".into(), "2".into(), "3".into()],
            vec![arrow("a", "1", "0"), arrow("b", "2", "1"), arrow("c", "3", "1")],
        )
        .unwrap();
        let rels = RelationSet::from_pairs([
            ("a".to_owned(), "b".to_owned()),
            ("a".to_owned(), "c".to_owned()),
        ]);
        let rep = validate_gentle(&q, &rels).unwrap();
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, GentleViolation::ZeroExtensions { arrow, .. } if arrow == "a")));
    }

    #[test]
    fn gentle_check_rejects_foreign_relation_shapes() {
        let q = Quiver::new(vec!["1".into()], vec![arrow("e", "1", "1")]).unwrap();
        let mut rels = RelationSet::default();
        rels.loop_markers.insert("e".into(), LoopMarker::Idempotent);
        assert!(matches!(
            validate_gentle(&q, &rels),
            Err(QuiverError::UnexpectedIdempotentMarker(_))
        ));
    }

    proptest! {
        /// Relabelling vertices and arrows must not change the number of
        /// gentleness violations or the number of nonzero paths.
        #[test]
        fn validation_and_path_counts_are_relabelling_invariant(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            use rand::seq::SliceRandom;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..5usize);
            let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let m = rng.gen_range(0..6usize);
            let arrows: Vec<Arrow> = (0..m)
                .map(|i| Arrow {
                    id: format!("a{i}"),
                    source: verts[rng.gen_range(0..n)].clone(),
                    target: verts[rng.gen_range(0..n)].clone(),
                })
                .collect();
            let q = Quiver::new(verts.clone(), arrows.clone()).unwrap();
            let mut rels = RelationSet::default();
            for a in &arrows {
                for b in &arrows {
                    if b.target == a.source && rng.gen_bool(0.5) {
                        rels.monomial.insert((a.id.clone(), b.id.clone()));
                    }
                }
            }
            let base_report = validate_gentle(&q, &rels).unwrap();
            let base_paths = enumerate_nonzero_paths(&q, &rels, 6).unwrap();

            // Relabel with a random suffix permutation.
            let mut vperm = verts.clone();
            vperm.shuffle(&mut rng);
            let vmap: std::collections::BTreeMap<&String, String> =
                verts.iter().zip(vperm.iter().map(|v| format!("w-{v}"))).collect();
            let relabelled: Vec<Arrow> = arrows
                .iter()
                .map(|a| Arrow {
                    id: format!("b-{}", a.id),
                    source: vmap[&a.source].clone(),
                    target: vmap[&a.target].clone(),
                })
                .collect();
            let q2 = Quiver::new(vmap.values().cloned().collect(), relabelled).unwrap();
            let rels2 = RelationSet::from_pairs(
                rels.monomial.iter().map(|(a, b)| (format!("b-{a}"), format!("b-{b}"))),
            );
            let rep2 = validate_gentle(&q2, &rels2).unwrap();
            prop_assert_eq!(base_report.violations.len(), rep2.violations.len());
            let paths2 = enumerate_nonzero_paths(&q2, &rels2, 6).unwrap();
            prop_assert_eq!(base_paths.paths.len(), paths2.paths.len());
            prop_assert_eq!(base_paths.truncated, paths2.truncated);
        }
    }
}
