//! Bundled demonstration data: two small skew-gentle triples and a family of
//! hand-checked tilings.
//!
//! The two triples are the running examples of the crate: a three-cycle whose
//! algebras all have non-vanishing Cartan determinant, and a four-cycle where
//! every determinant vanishes. [`three_cycle_disc`] and [`four_cycle_disc`]
//! are once-punctured disc tilings presenting exactly those triples, and the
//! remaining tilings exercise the other tile kinds: a two-punctured disc, a
//! punctured disc with a chord, a punctureless triangulated disc, an annulus
//! with a holed monogon, and an annulus glued out of a holed digon.

use crate::quiver::{Arrow, Quiver, RelationSet, SkewGentleTriple};
use crate::tiling::{Interior, Tile, TileEdge, TileKind, Tiling};

fn arrow(id: &str, s: &str, t: &str) -> Arrow {
    Arrow { id: id.into(), source: s.into(), target: t.into() }
}

fn arc(arc: &str, side: usize) -> TileEdge {
    TileEdge::Arc { arc: arc.into(), side }
}

fn seg(from: &str, to: &str) -> TileEdge {
    TileEdge::Segment { segment: (from.into(), to.into()) }
}

fn tile(kind: TileKind, edges: Vec<TileEdge>, corners: &[&str], interior: Interior) -> Tile {
    Tile { kind, edges, corners: corners.iter().map(|c| (*c).to_owned()).collect(), interior }
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| (*s).to_owned()).collect()
}

/// Three vertices in a cycle of arrows `alpha: 1→2`, `beta: 3→1`,
/// `gamma: 2→3`, every length-two composite around the cycle zero, and the
/// vertex `1` special. All four derived algebras of this triple have
/// non-zero Cartan determinant.
pub fn three_cycle() -> SkewGentleTriple {
    let q = Quiver::new(
        strings(&["1", "2", "3"]),
        vec![arrow("alpha", "1", "2"), arrow("beta", "3", "1"), arrow("gamma", "2", "3")],
    )
    .expect("fixture quiver is well-formed");
    let rels = RelationSet::from_pairs([
        ("beta".to_owned(), "gamma".to_owned()),
        ("gamma".to_owned(), "alpha".to_owned()),
        ("alpha".to_owned(), "beta".to_owned()),
    ]);
    SkewGentleTriple::new(q, ["1".to_owned()].into(), rels).expect("fixture triple is skew-gentle")
}

/// Four vertices in a cycle `a1: 1→2, a2: 2→3, a3: 3→4, a4: 4→1` with all
/// length-two composites zero and vertex `1` special. The zero relations
/// close into a full cycle of even length, so every Cartan determinant of
/// its derived algebras vanishes.
pub fn four_cycle() -> SkewGentleTriple {
    let q = Quiver::new(
        strings(&["1", "2", "3", "4"]),
        vec![
            arrow("a1", "1", "2"),
            arrow("a2", "2", "3"),
            arrow("a3", "3", "4"),
            arrow("a4", "4", "1"),
        ],
    )
    .expect("fixture quiver is well-formed");
    let rels = RelationSet::from_pairs([
        ("a2".to_owned(), "a1".to_owned()),
        ("a3".to_owned(), "a2".to_owned()),
        ("a4".to_owned(), "a3".to_owned()),
        ("a1".to_owned(), "a4".to_owned()),
    ]);
    SkewGentleTriple::new(q, ["1".to_owned()].into(), rels).expect("fixture triple is skew-gentle")
}

/// A disc with boundary points `b, u, c, v` and one puncture `P`: a loop
/// arc `1` at `b` cutting off a punctured monogon, and two parallel arcs
/// `2`, `3` from `b` to `c`. Its extracted triple is [`three_cycle`] (with
/// arrows renamed `1>2`, `3>1`, `2>3`).
pub fn three_cycle_disc() -> Tiling {
    Tiling {
        arcs: strings(&["1", "2", "3"]),
        points: strings(&["b", "c", "u", "v"]),
        punctures: strings(&["P"]),
        tiles: vec![
            tile(
                TileKind::PuncturedMonogon,
                vec![arc("1", 1)],
                &["b"],
                Interior::Puncture("P".into()),
            ),
            tile(
                TileKind::ArcGon,
                vec![arc("2", 1), arc("1", 0), arc("3", 0)],
                &["b", "b", "c"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryTriangle,
                vec![arc("3", 1), seg("b", "u"), seg("u", "c")],
                &["b", "u", "c"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryTriangle,
                vec![arc("2", 0), seg("c", "v"), seg("v", "b")],
                &["c", "v", "b"],
                Interior::None,
            ),
        ],
    }
}

/// A disc with boundary points `b, z, d, x, c, y` and one puncture `P`: a
/// loop arc `1` at `b` around the puncture and a fan of arcs `2: b–c`,
/// `3: c–d`, `4: d–b` bounding a square arc-gon with the loop. Its
/// extracted triple is [`four_cycle`] (arrows `1>2`, `2>3`, `3>4`, `4>1`).
pub fn four_cycle_disc() -> Tiling {
    Tiling {
        arcs: strings(&["1", "2", "3", "4"]),
        points: strings(&["b", "c", "d", "x", "y", "z"]),
        punctures: strings(&["P"]),
        tiles: vec![
            tile(
                TileKind::PuncturedMonogon,
                vec![arc("1", 1)],
                &["b"],
                Interior::Puncture("P".into()),
            ),
            tile(
                TileKind::ArcGon,
                vec![arc("2", 1), arc("1", 0), arc("4", 1), arc("3", 1)],
                &["b", "b", "d", "c"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryTriangle,
                vec![arc("2", 0), seg("c", "y"), seg("y", "b")],
                &["c", "y", "b"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryTriangle,
                vec![arc("3", 0), seg("d", "x"), seg("x", "c")],
                &["d", "x", "c"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryTriangle,
                vec![arc("4", 0), seg("b", "z"), seg("z", "d")],
                &["b", "z", "d"],
                Interior::None,
            ),
        ],
    }
}

/// A disc with two boundary points `b1`, `b2` and two punctures: loop arcs
/// `1` and `2` around each puncture and an arc `3` joining the base points.
/// Both loop arcs are special in the extracted triple; there are no zero
/// relations.
pub fn two_puncture_strip() -> Tiling {
    Tiling {
        arcs: strings(&["1", "2", "3"]),
        points: strings(&["b1", "b2"]),
        punctures: strings(&["P1", "P2"]),
        tiles: vec![
            tile(
                TileKind::PuncturedMonogon,
                vec![arc("1", 1)],
                &["b1"],
                Interior::Puncture("P1".into()),
            ),
            tile(
                TileKind::PuncturedMonogon,
                vec![arc("2", 1)],
                &["b2"],
                Interior::Puncture("P2".into()),
            ),
            tile(
                TileKind::BoundaryGon,
                vec![seg("b1", "b2"), arc("3", 1), arc("1", 0)],
                &["b2", "b1", "b1"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryGon,
                vec![seg("b2", "b1"), arc("3", 0), arc("2", 0)],
                &["b1", "b2", "b2"],
                Interior::None,
            ),
        ],
    }
}

/// A once-punctured disc with boundary points `b, c, x`: a loop arc `1` at
/// `b` around the puncture and a chord `2` from `b` to `c`. One arrow
/// `1>2`, no zero relations, arc `1` special.
pub fn chord_loop_disc() -> Tiling {
    Tiling {
        arcs: strings(&["1", "2"]),
        points: strings(&["b", "c", "x"]),
        punctures: strings(&["P"]),
        tiles: vec![
            tile(
                TileKind::PuncturedMonogon,
                vec![arc("1", 1)],
                &["b"],
                Interior::Puncture("P".into()),
            ),
            tile(
                TileKind::BoundaryGon,
                vec![seg("b", "c"), arc("2", 1), arc("1", 0)],
                &["c", "b", "b"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryTriangle,
                vec![arc("2", 0), seg("c", "x"), seg("x", "b")],
                &["c", "x", "b"],
                Interior::None,
            ),
        ],
    }
}

/// A punctureless disc with five boundary points, fan-triangulated by arcs
/// `x: a–c` and `y: c–e`. Its extracted algebra is a path algebra of type
/// `A₂` (one arrow `y>x`).
pub fn plain_strip() -> Tiling {
    Tiling {
        arcs: strings(&["x", "y"]),
        points: strings(&["a", "b", "c", "d", "e"]),
        punctures: vec![],
        tiles: vec![
            tile(
                TileKind::BoundaryTriangle,
                vec![seg("a", "b"), seg("b", "c"), arc("x", 1)],
                &["b", "c", "a"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryTriangle,
                vec![seg("c", "d"), seg("d", "e"), arc("y", 1)],
                &["d", "e", "c"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryGon,
                vec![arc("x", 0), arc("y", 0), seg("e", "a")],
                &["c", "e", "a"],
                Interior::None,
            ),
        ],
    }
}

/// An annulus with a single marked point `m` on its outer boundary: the
/// loop arc `1` cuts off a holed monogon around the inner boundary circle.
/// The extracted algebra is a squared-zero loop.
pub fn annulus_loop() -> Tiling {
    Tiling {
        arcs: strings(&["1"]),
        points: strings(&["m"]),
        punctures: vec![],
        tiles: vec![
            tile(TileKind::HoledMonogon, vec![arc("1", 1)], &["m"], Interior::Unmarked),
            tile(
                TileKind::BoundaryGon,
                vec![arc("1", 0), seg("m", "m")],
                &["m", "m"],
                Interior::None,
            ),
        ],
    }
}

/// An annulus with marked points `p`, `q` on its outer boundary and two
/// parallel chords `x`, `y` from `p` to `q` bounding a holed digon. The
/// extracted algebra has arrows `x>y` and `y>x` with both composites zero —
/// a full zero cycle of even length.
pub fn double_chord_annulus() -> Tiling {
    Tiling {
        arcs: strings(&["x", "y"]),
        points: strings(&["p", "q"]),
        punctures: vec![],
        tiles: vec![
            tile(
                TileKind::HoledDigon,
                vec![arc("x", 0), arc("y", 1)],
                &["q", "p"],
                Interior::Unmarked,
            ),
            tile(
                TileKind::BoundaryGon,
                vec![arc("x", 1), seg("p", "q")],
                &["p", "q"],
                Interior::None,
            ),
            tile(
                TileKind::BoundaryGon,
                vec![arc("y", 0), seg("q", "p")],
                &["q", "p"],
                Interior::None,
            ),
        ],
    }
}

/// All bundled tilings with their names.
pub fn all() -> Vec<(&'static str, Tiling)> {
    vec![
        ("three_cycle_disc", three_cycle_disc()),
        ("four_cycle_disc", four_cycle_disc()),
        ("two_puncture_strip", two_puncture_strip()),
        ("chord_loop_disc", chord_loop_disc()),
        ("plain_strip", plain_strip()),
        ("annulus_loop", annulus_loop()),
        ("double_chord_annulus", double_chord_annulus()),
    ]
}
