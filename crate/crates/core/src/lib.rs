//! Double-normal pairs, acute point sets and the extremal constructions
//! around them.
//!
//! Two points `p, q` of a finite set `V` form a double-normal pair when `V`
//! lies between the hyperplanes through `p` and `q` orthogonal to `pq`; the
//! pair is strict when no other point lies on either hyperplane. This crate
//! computes the resulting graphs, builds the configurations that realise
//! dense ones, and checks every construction with a brute-force verifier.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod io;
pub mod point;
pub mod predicates;
pub mod results;
pub mod search;
pub mod tolerance;

pub use bounds::{bounds_table, AcuteWitness, BoundStatus, BoundsRow};
pub use constructions::{
    hypercube_vertices, km_embedding, random_acute_set, regular_simplex, support_direction,
    EmbeddingParams, EmbeddingTrace, RadiusPolicy,
};
pub use error::{Error, Result};
pub use graph::{
    build_graph, is_complete_multipartite_sub, max_clique, turan_fit, Certificate, CliqueResult,
    DnGraph, PartitionedConfig,
};
pub use point::PointSet;
pub use predicates::{
    all_angles_acute, all_angles_nonobtuse, angle_at, classify_angle, is_pair, is_pair_by_angles,
    slab_parameter, AngleClass, PairMode,
};
pub use search::{acute_margin, probe_relaxed_bound, search, SearchConfig, SearchResult};
pub use tolerance::Tolerance;
