//! Isomorphism of presented algebras.
//!
//! Two presentations are considered isomorphic when some bijection of
//! vertices and bijection of arrows preserves sources and targets, maps the
//! monomial zero pairs onto each other, matches loop markers kind for kind,
//! carries split vertices to split vertices, and matches binomial relations
//! up to swapping their two branches (swapping branches amounts to rescaling
//! one arrow by −1, which is an algebra isomorphism).
//!
//! The search is a straightforward backtrack over vertex images filtered by
//! local invariants (degrees, split flag), followed by a backtrack over the
//! few ways to match parallel arrows. Presentations in this crate are small,
//! so no cleverness is needed.

use std::collections::{BTreeMap, BTreeSet};

use crate::constructions::{IdempotentKind, Presentation};

/// The witness of an isomorphism: where vertices and arrows go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, String>,
}

fn split_vertices(p: &Presentation) -> BTreeSet<String> {
    p.idempotents
        .iter()
        .filter(|f| f.kind == IdempotentKind::SpecialMinus)
        .map(|f| f.vertex.clone())
        .collect()
}

/// (out-degree, in-degree, split?) — preserved by any isomorphism.
fn signature(p: &Presentation, split: &BTreeSet<String>, v: &str) -> (usize, usize, bool) {
    let out = p.quiver.arrows().iter().filter(|a| a.source == v).count();
    let inn = p.quiver.arrows().iter().filter(|a| a.target == v).count();
    (out, inn, split.contains(v))
}

/// Normalised binomial relation under an arrow map: the two branches as an
/// unordered pair.
fn mapped_binomials(p: &Presentation, arrow_map: &BTreeMap<String, String>) -> Vec<Vec<(String, String)>> {
    let mut out: Vec<Vec<(String, String)>> = p
        .relations
        .binomial
        .iter()
        .map(|b| {
            let mut branches = vec![
                (arrow_map[&b.plus.0].clone(), arrow_map[&b.plus.1].clone()),
                (arrow_map[&b.minus.0].clone(), arrow_map[&b.minus.1].clone()),
            ];
            branches.sort();
            branches
        })
        .collect();
    out.sort();
    out
}

fn identity_binomials(p: &Presentation) -> Vec<Vec<(String, String)>> {
    let id: BTreeMap<String, String> =
        p.quiver.arrows().iter().map(|a| (a.id.clone(), a.id.clone())).collect();
    mapped_binomials(p, &id)
}

fn relations_match(a: &Presentation, b: &Presentation, arrow_map: &BTreeMap<String, String>) -> bool {
    let monomial: BTreeSet<(String, String)> = a
        .relations
        .monomial
        .iter()
        .map(|(x, y)| (arrow_map[x].clone(), arrow_map[y].clone()))
        .collect();
    if monomial != b.relations.monomial {
        return false;
    }
    let markers: BTreeMap<String, _> = a
        .relations
        .loop_markers
        .iter()
        .map(|(id, m)| (arrow_map[id].clone(), *m))
        .collect();
    if markers != b.relations.loop_markers {
        return false;
    }
    mapped_binomials(a, arrow_map) == identity_binomials(b)
}

/// Extends a full vertex bijection to an arrow bijection, trying the
/// permutations of parallel arrows, and returns the first one under which
/// the relations correspond.
fn match_arrows(
    a: &Presentation,
    b: &Presentation,
    vmap: &BTreeMap<String, String>,
) -> Option<BTreeMap<String, String>> {
    // Group arrows by (source, target); a-groups are looked up in b through
    // the vertex map.
    let mut a_groups: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for arrow in a.quiver.arrows() {
        a_groups
            .entry((vmap[&arrow.source].clone(), vmap[&arrow.target].clone()))
            .or_default()
            .push(arrow.id.clone());
    }
    let mut b_groups: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for arrow in b.quiver.arrows() {
        b_groups.entry((arrow.source.clone(), arrow.target.clone())).or_default().push(arrow.id.clone());
    }
    if a_groups.len() != b_groups.len()
        || a_groups.iter().any(|(k, v)| b_groups.get(k).map(Vec::len) != Some(v.len()))
    {
        return None;
    }
    let groups: Vec<(&Vec<String>, &Vec<String>)> =
        a_groups.iter().map(|(k, v)| (v, &b_groups[k])).collect();

    fn place(
        groups: &[(&Vec<String>, &Vec<String>)],
        i: usize,
        arrow_map: &mut BTreeMap<String, String>,
        a: &Presentation,
        b: &Presentation,
    ) -> bool {
        let Some((from, to)) = groups.get(i) else {
            return relations_match(a, b, arrow_map);
        };
        // Try each bijection of this parallel class (groups are tiny).
        let mut order: Vec<usize> = (0..to.len()).collect();
        loop {
            for (x, &k) in from.iter().zip(&order) {
                arrow_map.insert(x.clone(), to[k].clone());
            }
            if place(groups, i + 1, arrow_map, a, b) {
                return true;
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
        for x in from.iter() {
            arrow_map.remove(x);
        }
        false
    }

    let mut arrow_map = BTreeMap::new();
    place(&groups, 0, &mut arrow_map, a, b).then_some(arrow_map)
}

/// Steps `perm` to its lexicographic successor; false once exhausted.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Searches for an isomorphism between two presentations.
pub fn find_isomorphism(a: &Presentation, b: &Presentation) -> Option<Isomorphism> {
    if a.quiver.vertices().len() != b.quiver.vertices().len()
        || a.quiver.arrows().len() != b.quiver.arrows().len()
        || a.relations.monomial.len() != b.relations.monomial.len()
        || a.relations.loop_markers.len() != b.relations.loop_markers.len()
        || a.relations.binomial.len() != b.relations.binomial.len()
    {
        return None;
    }
    let split_a = split_vertices(a);
    let split_b = split_vertices(b);
    if split_a.len() != split_b.len() {
        return None;
    }
    let sig_b: BTreeMap<&String, (usize, usize, bool)> =
        b.quiver.vertices().iter().map(|v| (v, signature(b, &split_b, v))).collect();

    fn assign(
        a: &Presentation,
        b: &Presentation,
        split_a: &BTreeSet<String>,
        sig_b: &BTreeMap<&String, (usize, usize, bool)>,
        i: usize,
        vmap: &mut BTreeMap<String, String>,
        used: &mut BTreeSet<String>,
    ) -> Option<BTreeMap<String, String>> {
        let Some(v) = a.quiver.vertices().get(i) else {
            return match_arrows(a, b, vmap);
        };
        let sig = signature(a, split_a, v);
        for w in b.quiver.vertices() {
            if used.contains(w) || sig_b[w] != sig {
                continue;
            }
            vmap.insert(v.clone(), w.clone());
            used.insert(w.clone());
            if let Some(amap) = assign(a, b, split_a, sig_b, i + 1, vmap, used) {
                return Some(amap);
            }
            vmap.remove(v);
            used.remove(w);
        }
        None
    }

    let mut vmap = BTreeMap::new();
    let mut used = BTreeSet::new();
    let arrow_map = assign(a, b, &split_a, &sig_b, 0, &mut vmap, &mut used)?;
    Some(Isomorphism { vertex_map: vmap, arrow_map })
}

/// Whether two presentations are isomorphic.
pub fn presentations_isomorphic(a: &Presentation, b: &Presentation) -> bool {
    find_isomorphism(a, b).is_some()
}
