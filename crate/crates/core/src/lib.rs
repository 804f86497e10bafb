//! Exact double domination, total 2-domination, 2-limited packing and total
//! 2-limited packing for digraphs, together with constructors for the
//! extremal families, reduction gadgets and a bound-audit engine.

pub mod analysis;
pub mod cli;
pub mod digraph;
pub mod error;
pub mod families;
pub mod generators;
pub mod io;
pub mod report;
pub mod solvers;
pub mod vertex_set;

pub use digraph::{Digraph, VertexClassification};
pub use error::{GraphError, SolveError};
pub use solvers::{
    solve_all, solve_exact, solve_with, validate, ParameterKind, SolveOptions, SolveResult, SolveStatus,
    Validation, DEFAULT_BUDGET,
};
pub use vertex_set::VertexSet;
