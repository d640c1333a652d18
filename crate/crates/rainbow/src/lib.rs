//! Rainbow perfect matchings in properly edge-colored complete graphs and
//! complete uniform hypergraphs.
//!
//! A proper coloring of the complete r-uniform hypergraph on r*n vertices
//! assigns every edge a color so that same-colored edges never share a
//! vertex. A one-factor is a set of n edges covering every vertex exactly
//! once; it is rainbow when its edge colors are pairwise distinct. This crate
//! builds proper colorings, searches them for rainbow one-factors, verifies
//! every artifact it emits, and instruments the search deeply enough that the
//! counting identities behind it can be audited on real runs.
//!
//! Module map:
//! - [`model`]: vertices, edges, colex ranking, colorings, matchings,
//!   verification predicates.
//! - [`rng`]: the pinned deterministic generator behind every seeded path.
//! - [`gen`]: proper-coloring generators (round robin, backtracking
//!   factorization, seeded greedy, fixtures).
//! - [`solver`]: rainbow one-factor search, specialized per instance shape,
//!   plus the exhaustive enumeration oracle.
//! - [`trace`]: per-pair augmentation inventories and their counting checks.
//! - [`files`]: on-disk coloring and factor formats.
//! - [`fuzz`]: seeded stress harness with oracle cross-checking.
//! - [`bench`]: wall-clock measurement of generate-solve-verify rounds.

pub mod bench;
pub mod error;
pub mod files;
pub mod fuzz;
pub mod gen;
pub mod model;
pub mod rng;
pub mod solver;
pub mod trace;

pub use error::{Error, Result};
