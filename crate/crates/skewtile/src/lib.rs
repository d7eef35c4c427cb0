//! Combinatorics of skew-gentle algebras and skew-tilings of marked surfaces.
//!
//! The crate has two halves that meet in the middle:
//!
//! * an **algebra half** — quivers with relations, the skew-gentle triples
//!   `(Q, Sp, I)`, the four derived algebra presentations (adding squared-zero
//!   loops, adding idempotent loops, splitting special vertices with binomial
//!   relations, and the star construction that doubles special vertices with a
//!   pair of arrows), exact Cartan matrices, full-zero-cycle censuses, and the
//!   determinant criterion for when τ-rigid modules are determined by their
//!   dimension vectors;
//! * a **surface half** — combinatorial skew-tilings of marked surfaces,
//!   extraction of the algebra presented by a tiling, tagged permissible arcs
//!   encoded as crossing sequences through a split polygon complex, exact
//!   tagged intersection numbers, and the unfolding correspondence that
//!   replaces each once-punctured monogon by a square on a new boundary
//!   component and matches arc multisets on the two sides.
//!
//! All arithmetic is exact (checked 128-bit integers, fraction-free
//! elimination); all iteration orders are deterministic, so equal inputs give
//! byte-equal outputs.

pub mod arc;
pub mod cartan;
pub mod chart;
pub mod constructions;
pub mod fixtures;
pub mod generate;
pub mod intersect;
pub mod io;
pub mod iso;
pub mod matrix;
pub mod quiver;
pub mod svg;
pub mod tiling;
pub mod unfolding;

pub use cartan::{cartan_of_presentation, count_full_zero_cycles, determinacy, CycleCensus, DeterminacyReport};
pub use constructions::{build_bowtie, build_sg, build_sp, build_star, presentation_of_pair, Presentation};
pub use matrix::IntMatrix;
pub use quiver::{Quiver, RelationSet, SkewGentleTriple};
pub use tiling::Tiling;
