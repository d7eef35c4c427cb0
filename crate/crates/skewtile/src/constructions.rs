//! The four algebra presentations derived from a skew-gentle triple.
//!
//! From a triple `(Q, Sp, I)` this module builds:
//!
//! * [`build_sp`] — add a loop `eps(v)` at each special vertex and impose
//!   `eps(v)² = 0`. The result is a gentle presentation (that is the defining
//!   property of the triple).
//! * [`build_sg`] — same quiver, but impose `eps(v)² = eps(v)` instead. The
//!   algebra is no longer a monomial algebra (the loops are idempotents, not
//!   nilpotents), so its Cartan data is computed by linear algebra over its
//!   path basis rather than by path counting; the primitive idempotents at a
//!   special vertex split in two.
//! * [`build_bowtie`] — split every special vertex `v` into `v-`/`v+` and
//!   replace each arrow touching special vertices by one copy per choice of
//!   endpoint copies. A quadratic zero relation whose junction vertex is
//!   special becomes a *binomial* relation identifying the route through
//!   `v+` with the route through `v-` up to sign; all other copies of
//!   relations stay zero pairs.
//! * [`build_star`] — add a second copy `v*` of every special vertex and a
//!   pair of arrows `rho(v): v → v*`, `rho(v*): v* → v`, with the new zero
//!   relation `rho(v) ∘ rho(v*) = 0` (the composite through `v`, traversing
//!   `rho(v*)` first). The result is again gentle.
//!
//! Every presentation carries an ordered *idempotent index* naming the
//! primitive idempotents of the algebra it presents; Cartan matrices are
//! indexed by it. For `build_sg` the index interleaves the split idempotents
//! `v-`, `v+` in place of each special vertex, which keeps all the derived
//! matrices comparable column-by-column.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::quiver::{
    sp_pair, Arrow, BinomialRelation, LoopMarker, Quiver, QuiverError, RelationSet, SkewGentleTriple,
};

/// What a primitive idempotent of a derived presentation is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdempotentKind {
    /// The lazy path at a quiver vertex.
    Vertex,
    /// The complement `e_v − eps(v)` of an idempotent loop at a special vertex.
    SpecialMinus,
    /// The idempotent loop `eps(v)` itself at a special vertex.
    SpecialPlus,
}

/// One named primitive idempotent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentLabel {
    /// Display label, also the Cartan row/column label.
    pub label: String,
    /// The underlying quiver vertex.
    pub vertex: String,
    pub kind: IdempotentKind,
    /// For the split kinds, the idempotent loop arrow realizing the split.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_arrow: Option<String>,
}

/// A quiver presentation of an algebra: quiver, relations, and the ordered
/// list of primitive idempotents its Cartan matrix is indexed by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: RelationSet,
    pub idempotents: Vec<IdempotentLabel>,
}

fn vertex_idempotents(q: &Quiver) -> Vec<IdempotentLabel> {
    q.vertices()
        .iter()
        .map(|v| IdempotentLabel { label: v.clone(), vertex: v.clone(), kind: IdempotentKind::Vertex, loop_arrow: None })
        .collect()
}

/// The trivial presentation of a pair `(Q, I)` itself (used for the Cartan
/// matrix of the underlying gentle algebra of a triple).
pub fn presentation_of_pair(q: &Quiver, rels: &RelationSet) -> Presentation {
    Presentation { quiver: q.clone(), relations: rels.clone(), idempotents: vertex_idempotents(q) }
}

/// Adds squared-zero loops at special vertices. See module docs.
pub fn build_sp(t: &SkewGentleTriple) -> Result<Presentation, QuiverError> {
    let (quiver, relations) = sp_pair(t)?;
    let idempotents = vertex_idempotents(&quiver);
    Ok(Presentation { quiver, relations, idempotents })
}

/// Adds idempotent loops at special vertices. See module docs.
pub fn build_sg(t: &SkewGentleTriple) -> Result<Presentation, QuiverError> {
    let (quiver, mut relations) = sp_pair(t)?;
    for (_, m) in relations.loop_markers.iter_mut() {
        *m = LoopMarker::Idempotent;
    }
    let mut idempotents = Vec::new();
    for v in quiver.vertices() {
        if t.special.contains(v) {
            idempotents.push(IdempotentLabel {
                label: format!("{v}-"),
                vertex: v.clone(),
                kind: IdempotentKind::SpecialMinus,
                loop_arrow: Some(crate::quiver::special_loop_id(v)),
            });
            idempotents.push(IdempotentLabel {
                label: format!("{v}+"),
                vertex: v.clone(),
                kind: IdempotentKind::SpecialPlus,
                loop_arrow: Some(crate::quiver::special_loop_id(v)),
            });
        } else {
            idempotents.push(IdempotentLabel {
                label: v.clone(),
                vertex: v.clone(),
                kind: IdempotentKind::Vertex,
                loop_arrow: None,
            });
        }
    }
    Ok(Presentation { quiver, relations, idempotents })
}

fn copies(t: &SkewGentleTriple, v: &str) -> Vec<String> {
    if t.special.contains(v) {
        vec![format!("{v}-"), format!("{v}+")]
    } else {
        vec![v.to_owned()]
    }
}

/// Splits special vertices in two, with binomial relations at special
/// junctions. See module docs.
pub fn build_bowtie(t: &SkewGentleTriple) -> Result<Presentation, QuiverError> {
    let mut vertices = Vec::new();
    for v in t.quiver.vertices() {
        vertices.extend(copies(t, v));
    }
    let mut arrows = Vec::new();
    for a in t.quiver.arrows() {
        for s in copies(t, &a.source) {
            for tgt in copies(t, &a.target) {
                arrows.push(Arrow {
                    id: format!("({s},{},{tgt})", a.id),
                    source: s.clone(),
                    target: tgt.clone(),
                });
            }
        }
    }
    let quiver = Quiver::new(vertices, arrows)?;

    let mut relations = RelationSet::default();
    for (first, second) in &t.relations.monomial {
        // The composite traverses `second` then `first`; the junction vertex
        // is the shared endpoint in the middle.
        let f = t.quiver.arrow(first).expect("validated arrow");
        let s = t.quiver.arrow(second).expect("validated arrow");
        let junction = &f.source;
        if t.special.contains(junction) {
            // One binomial per choice of outer endpoint copies: the two
            // routes through the junction copies are identified up to sign.
            for start in copies(t, &s.source) {
                for end in copies(t, &f.target) {
                    let via = |j: &str| -> (String, String) {
                        (format!("({j},{first},{end})"), format!("({start},{second},{j})"))
                    };
                    relations.binomial.push(BinomialRelation {
                        plus: via(&format!("{junction}+")),
                        minus: via(&format!("{junction}-")),
                    });
                }
            }
        } else {
            for start in copies(t, &s.source) {
                for end in copies(t, &f.target) {
                    relations.monomial.insert((
                        format!("({junction},{first},{end})"),
                        format!("({start},{second},{junction})"),
                    ));
                }
            }
        }
    }
    relations.binomial.sort();
    let idempotents = vertex_idempotents(&quiver);
    Ok(Presentation { quiver, relations, idempotents })
}

/// The id of the arrow `v → v*` added by [`build_star`].
pub fn star_out_id(v: &str) -> String {
    format!("rho({v})")
}

/// The id of the arrow `v* → v` added by [`build_star`].
pub fn star_back_id(v: &str) -> String {
    format!("rho({v}*)")
}

/// Doubles special vertices with a two-arrow detour. See module docs.
pub fn build_star(t: &SkewGentleTriple) -> Result<Presentation, QuiverError> {
    let mut vertices = Vec::new();
    for v in t.quiver.vertices() {
        vertices.push(v.clone());
        if t.special.contains(v) {
            vertices.push(format!("{v}*"));
        }
    }
    let mut arrows = t.quiver.arrows().to_vec();
    for v in &t.special {
        let star = format!("{v}*");
        arrows.push(Arrow { id: star_out_id(v), source: v.clone(), target: star.clone() });
        arrows.push(Arrow { id: star_back_id(v), source: star, target: v.clone() });
    }
    let quiver = Quiver::new(vertices.clone(), arrows)?;
    let mut relations = t.relations.clone();
    for v in &t.special {
        // The round trip v* → v → v* is zero; the other composite v → v* → v
        // is not (it is the length-two socle path over v).
        relations.monomial.insert((star_out_id(v), star_back_id(v)));
    }
    let mut idempotents = Vec::new();
    for v in &vertices {
        idempotents.push(IdempotentLabel { label: v.clone(), vertex: v.clone(), kind: IdempotentKind::Vertex, loop_arrow: None });
    }
    let p = Presentation { quiver, relations, idempotents };
    debug_assert!(
        crate::quiver::validate_gentle(&p.quiver, &p.relations).map_or(false, |r| r.is_gentle()),
        "the star construction of a skew-gentle triple must be gentle"
    );
    Ok(p)
}

/// The special vertices recoverable from a star presentation's vertex set
/// (those with a starred partner). Used by round-trip tests.
pub fn starred_vertices(p: &Presentation) -> BTreeSet<String> {
    p.quiver
        .vertices()
        .iter()
        .filter_map(|v| v.strip_suffix('*'))
        .filter(|v| p.quiver.has_vertex(v))
        .map(str::to_owned)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{enumerate_nonzero_paths, default_max_len, validate_gentle};

    fn arrow(id: &str, s: &str, t: &str) -> Arrow {
        Arrow { id: id.into(), source: s.into(), target: t.into() }
    }

    use crate::fixtures::three_cycle;

    #[test]
    fn sp_and_sg_share_the_quiver_and_differ_in_markers() {
        let t = three_cycle();
        let sp = build_sp(&t).unwrap();
        let sg = build_sg(&t).unwrap();
        assert_eq!(sp.quiver, sg.quiver);
        assert_eq!(sp.relations.loop_markers["eps(1)"], LoopMarker::Nilpotent);
        assert_eq!(sg.relations.loop_markers["eps(1)"], LoopMarker::Idempotent);
        assert_eq!(sp.idempotents.len(), 3);
        let labels: Vec<&str> = sg.idempotents.iter().map(|i| i.label.as_str()).collect();
        assert_eq!(labels, ["1-", "1+", "2", "3"]);
        assert!(validate_gentle(&sp.quiver, &sp.relations).unwrap().is_gentle());
    }

    #[test]
    fn bowtie_splits_special_vertices_and_specializes_relations() {
        let t = three_cycle();
        let b = build_bowtie(&t).unwrap();
        assert_eq!(b.quiver.vertices(), ["1+", "1-", "2", "3"]);
        // alpha and beta touch the split vertex once each: two copies apiece;
        // gamma touches it never: one copy.
        assert_eq!(b.quiver.arrows().len(), 5);
        // The relations through the special junction 1 become binomials:
        // alpha∘beta has junction 1. The other two stay monomial, copied per
        // endpoint choice: beta∘gamma has junction 3 but beta ends at the
        // special vertex 1 (2 copies); gamma∘alpha has junction 2, alpha
        // starts at 1 (2 copies).
        assert_eq!(b.relations.binomial.len(), 1);
        assert_eq!(b.relations.monomial.len(), 4);
        let bin = &b.relations.binomial[0];
        assert_eq!(bin.plus.0, "(1+,alpha,2)");
        assert_eq!(bin.plus.1, "(3,beta,1+)");
        assert_eq!(bin.minus.0, "(1-,alpha,2)");
        assert_eq!(bin.minus.1, "(3,beta,1-)");
    }

    #[test]
    fn star_adds_a_detour_with_one_new_zero_relation_and_stays_gentle() {
        let t = three_cycle();
        let s = build_star(&t).unwrap();
        assert_eq!(s.quiver.vertices(), ["1", "1*", "2", "3"]);
        assert_eq!(s.quiver.arrows().len(), 5);
        assert!(s.relations.monomial.contains(&("rho(1)".into(), "rho(1*)".into())));
        assert!(!s.relations.monomial.contains(&("rho(1*)".into(), "rho(1)".into())));
        assert!(validate_gentle(&s.quiver, &s.relations).unwrap().is_gentle());
        assert_eq!(starred_vertices(&s), ["1".to_owned()].into());

        // Its nonzero paths: 15 for this triple (the dimension of the
        // doubled algebra).
        let en = enumerate_nonzero_paths(&s.quiver, &s.relations, default_max_len(&s.quiver)).unwrap();
        assert!(!en.truncated);
        assert_eq!(en.paths.len(), 15);
        // The longest path threads the whole detour between the cycle arrows.
        let longest: Vec<_> = en.paths.iter().filter(|p| p.len() == 4).collect();
        assert_eq!(longest.len(), 1);
        assert_eq!(longest[0].arrows, ["beta", "rho(1)", "rho(1*)", "alpha"]);
    }

    #[test]
    fn non_special_triples_pass_through_unchanged() {
        let q = Quiver::new(vec!["1".into(), "2".into()], vec![arrow("a", "1", "2")]).unwrap();
        let t = SkewGentleTriple::new(q.clone(), BTreeSet::new(), RelationSet::default()).unwrap();
        let sp = build_sp(&t).unwrap();
        assert_eq!(sp.quiver, q);
        let b = build_bowtie(&t).unwrap();
        assert_eq!(b.quiver.arrows().len(), 1);
        assert_eq!(b.quiver.arrows()[0].id, "(1,a,2)");
        let s = build_star(&t).unwrap();
        assert_eq!(s.quiver, q);
    }
}
