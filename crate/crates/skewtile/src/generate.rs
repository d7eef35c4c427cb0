//! Seeded random generation of gentle pairs and skew-gentle triples.
//!
//! All randomness flows through one caller-supplied RNG, so a fixed seed
//! reproduces the exact same instances; iteration orders are deterministic
//! everywhere else.
//!
//! The local structure of a gentle pair at a vertex `v` is a 0/1 *marking
//! matrix*: rows are the outgoing arrows, columns the incoming ones, and a
//! marked cell `(α, β)` imposes the zero relation `α∘β = 0`. Gentleness says
//! every row and every column has at most one marked and at most one
//! unmarked cell. With at most two arrows on each side that forces:
//!
//! * `2×2` — a permutation matrix (two choices),
//! * `2×1` / `1×2` — exactly one marked cell (two choices),
//! * `1×1` — marked or not (two choices).
//!
//! The generator draws a quiver with in/out-degree ≤ 2, fills in one such
//! choice per vertex, and rejects draws presenting infinite-dimensional
//! algebras (the bounded-length check is structural, not enumerative, so
//! rejection is cheap). Triples additionally choose special vertices among
//! those where adding a squared-zero loop keeps the pair gentle: vertices
//! with at most one incoming and one outgoing arrow whose through-composite,
//! if both exist, is already zero.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::quiver::{
    is_finite_dimensional, validate_gentle, validate_skew_gentle, Arrow, Quiver, RelationSet,
    SkewGentleTriple,
};

/// Draws a random quiver with all in- and out-degrees at most two.
fn random_bounded_quiver<R: Rng>(rng: &mut R, max_vertices: usize, arrow_budget: usize) -> Quiver {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut out_used = vec![0usize; n];
    let mut in_used = vec![0usize; n];
    let mut arrows = Vec::new();
    let attempts = rng.gen_range(0..=arrow_budget);
    for _ in 0..attempts {
        let sources: Vec<usize> = (0..n).filter(|&i| out_used[i] < 2).collect();
        let targets: Vec<usize> = (0..n).filter(|&i| in_used[i] < 2).collect();
        let (Some(&s), Some(&t)) = (sources.choose(rng), targets.choose(rng)) else {
            break;
        };
        out_used[s] += 1;
        in_used[t] += 1;
        arrows.push(Arrow {
            id: format!("a{}", arrows.len()),
            source: vertices[s].clone(),
            target: vertices[t].clone(),
        });
    }
    Quiver::new(vertices, arrows).expect("generated ids are unique and endpoints exist")
}

/// Fills in a gentle relation set for a degree-bounded quiver by choosing a
/// legal marking matrix at every vertex.
fn random_gentle_relations<R: Rng>(rng: &mut R, q: &Quiver) -> RelationSet {
    let mut rels = RelationSet::default();
    for v in q.vertices() {
        let outs: Vec<&Arrow> = q.outgoing(v).iter().map(|&i| &q.arrows()[i]).collect();
        let ins: Vec<&Arrow> = q.incoming(v).iter().map(|&i| &q.arrows()[i]).collect();
        let mut mark = |a: &Arrow, b: &Arrow| {
            rels.monomial.insert((a.id.clone(), b.id.clone()));
        };
        match (outs.len(), ins.len()) {
            (2, 2) => {
                if rng.gen_bool(0.5) {
                    mark(outs[0], ins[0]);
                    mark(outs[1], ins[1]);
                } else {
                    mark(outs[0], ins[1]);
                    mark(outs[1], ins[0]);
                }
            }
            (2, 1) => mark(outs[rng.gen_range(0..2)], ins[0]),
            (1, 2) => mark(outs[0], ins[rng.gen_range(0..2)]),
            (1, 1) => {
                if rng.gen_bool(0.5) {
                    mark(outs[0], ins[0]);
                }
            }
            _ => {}
        }
    }
    rels
}

/// Draws a random gentle pair presenting a finite-dimensional algebra with at
/// most `max_vertices` vertices.
pub fn random_gentle_pair<R: Rng>(rng: &mut R, max_vertices: usize) -> (Quiver, RelationSet) {
    // Rejection-sample for finite dimension, shrinking the arrow budget if a
    // draw streak keeps pumping cycles; budget 0 always succeeds.
    let mut budget = 2 * max_vertices.max(1);
    loop {
        for _ in 0..32 {
            let q = random_bounded_quiver(rng, max_vertices, budget);
            let rels = random_gentle_relations(rng, &q);
            debug_assert!(validate_gentle(&q, &rels).map_or(false, |r| r.is_gentle()));
            if is_finite_dimensional(&q, &rels).expect("monomial relations") {
                return (q, rels);
            }
        }
        budget = budget.saturating_sub(1);
    }
}

/// The vertices of a gentle pair at which a squared-zero loop can be added
/// without breaking gentleness: degree at most one on each side, and the
/// through-composite (when both neighbours exist) already zero.
pub fn special_candidates(q: &Quiver, rels: &RelationSet) -> Vec<String> {
    q.vertices()
        .iter()
        .filter(|v| {
            let outs = q.outgoing(v);
            let ins = q.incoming(v);
            if outs.len() > 1 || ins.len() > 1 {
                return false;
            }
            match (outs.first(), ins.first()) {
                (Some(&c), Some(&a)) => {
                    rels.is_zero_pair(&q.arrows()[c].id, &q.arrows()[a].id)
                }
                _ => true,
            }
        })
        .cloned()
        .collect()
}

/// Draws a random skew-gentle triple (with a finite-dimensional split
/// algebra) with at most `max_vertices` vertices. Some draws have no special
/// vertices; that is a legitimate (plain gentle) corner of the family.
pub fn random_triple<R: Rng>(rng: &mut R, max_vertices: usize) -> SkewGentleTriple {
    loop {
        let (q, rels) = random_gentle_pair(rng, max_vertices);
        let candidates = special_candidates(&q, &rels);
        let special: std::collections::BTreeSet<String> =
            candidates.into_iter().filter(|_| rng.gen_bool(0.6)).collect();
        let t = SkewGentleTriple::new(q, special, rels).expect("structurally valid by construction");
        match validate_skew_gentle(&t) {
            Ok(report) if report.is_gentle() => {
                let (spq, sprels) = crate::quiver::sp_pair(&t).expect("loop ids are fresh");
                if is_finite_dimensional(&spq, &sprels).expect("monomial relations") {
                    return t;
                }
            }
            _ => {}
        }
    }
}
