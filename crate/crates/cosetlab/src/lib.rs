//! Coset-geometry analysis of finitely presented groups.
//!
//! The pipeline starts from a finitely presented group `G` and a subgroup
//! `H` of finite index `d` (found by coset enumeration or low-index search),
//! builds the permutation group `P` organizing the cosets, and asks two
//! group-geometrical questions about each subgroup class:
//!
//! 1. is the normal closure of `H` in `G` all of `G`, and
//! 2. does the coset space carry a point/line incidence geometry, where a
//!    line is a maximal set of cosets whose pairs share one and the same
//!    two-point stabilizer subgroup of `P`?
//!
//! On the quantum side, the permutation gates of `P` supply candidate
//! eigenstates; a state whose orbit under the generalized Pauli group of
//! dimension `d` spans all `d²` projector directions is a MIC fiducial.
//! The [`report`] module ties everything into per-subgroup analysis rows
//! and serialized reports, and the `cosetlab` binary exposes it as a CLI.
//!
//! Modules follow the pipeline order:
//!
//! - [`presentations`]: free-group words, presentation parsing, built-in
//!   catalog of knot and surgery groups.
//! - [`coset_enum`]: Todd-Coxeter coset enumeration and coset tables.
//! - [`low_index`]: all subgroup conjugacy classes of a given index.
//! - [`permgroup`]: stabilizer chains, orbits, rank, two-point stabilizers,
//!   normal closures.
//! - [`geometry`]: incidence geometries from equal two-point stabilizers,
//!   contextuality, recognition of small named geometries.
//! - [`mic`]: permutation-gate eigenstates, Weyl-Heisenberg displacement
//!   orbits, Gram-rank MIC tests.
//! - [`report`]: the analysis pipeline and JSON/TSV emission.

pub mod coset_enum;
pub mod geometry;
mod linalg;
pub mod low_index;
pub mod mic;
pub mod permgroup;
pub mod presentations;
pub mod report;

pub use coset_enum::{todd_coxeter, CosetError, CosetTable};
pub use low_index::{eta_sequence, low_index_subgroups, LowIndexError, SubgroupRecord};
pub use permgroup::{PermGroup, Permutation};
pub use presentations::{
    catalog_lookup, parse_presentation, CatalogEntry, ParseError, Presentation, SubgroupSpec, Word,
};
