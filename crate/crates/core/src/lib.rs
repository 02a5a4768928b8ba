//! Finite windows of two-ended periodic digraphs and tree-built digraphs,
//! with the machinery to machine-check their structure: alternating-walk
//! reachability classes, seeded automorphism search and s-arc orbit
//! transitivity, clone partitions and quotients, projective-geometry
//! incidence templates, and Cayley coset graphs over explicitly
//! enumerated permutation groups.

pub mod cayley;
pub mod constructions;
pub mod digraph;
pub mod error;
pub mod export;
pub mod geometry;
pub mod oracle;
pub mod reachability;
pub mod symmetry;

pub use digraph::{
    degree_profile, tile, underlying_components, window, window_with_margin, DegreeProfile,
    FiniteDigraph, PeriodicDigraph,
};
pub use error::{Error, Result};
