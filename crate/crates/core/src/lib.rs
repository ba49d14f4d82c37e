//! Hyperbolic realization of the F12 tetrahedral space form family.
//!
//! A simplex with parameters `(a, b)` carries four dihedral angle classes
//! `α₁, α₂, β₁, β₂` tied by `2α₁ + α₂ = 2π/a` and `2β₁ + β₂ = 2π/b`. Gluing
//! faces pairwise needs two pairs of edges to have equal length, which gives
//! two equations in `(α₁, β₁)`. This crate builds the metric objects, derives
//! those equations, and solves them.

// `!(x > 0.0)` is used on purpose so NaN is rejected
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod edge;
pub mod error;
pub mod metric;
pub mod simplex;
pub mod solver;

pub use edge::{bmax, compute_bmax, realizability_inequality, AngleSlice, BMax, Inequality, Sign};
pub use error::{Error, Result};
pub use metric::{
    complementary_minor_identity, determinant, inverse, minor, projective_distance, signature, Geometry, MinorSpec,
    Signature, SymMatrix4,
};
pub use simplex::{
    build_coxeter_schlafli, classify_realization, classify_vertex, gram_sign_check, normalize_params, DihedralAngles,
    RealizationClass, SimplexParams, VertexClass,
};
pub use solver::{
    contraction_map, domain_for, estimate_contraction, grid_oracle, solve, ContractionEstimate, DomainBox, Gains,
    Method, RootCandidate, SolveReport, SolveStatus, SolverConfig,
};
