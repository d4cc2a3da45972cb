//! Exact solvers for the maximum balanced biclique problem.
//!
//! Given a bipartite graph `G = (U, V, E)`, find `A ⊆ U`, `B ⊆ V` with
//! `|A| = |B|` as large as possible such that every pair of `A × B` is an
//! edge.
//!
//! * [`graph`]: the immutable graph and biclique checks.
//! * [`ubp`]: per-vertex upper bounds by propagation.
//! * [`solvers`]: BBClq, ExtBBClq and ExtUniBBClq branch-and-bound.
//! * [`oracle`]: brute-force reference values for small graphs.
//! * [`mip`]: integer programming models and LP export.
//! * [`io`]: random instances, KONECT and native file formats.
//! * [`cli`]: the `mbbp` command line.

pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod mip;
pub mod oracle;
pub mod solvers;
pub mod ubp;

pub use error::{Error, Result};
pub use graph::{Biclique, BipartiteGraph, Side, Vertex};
pub use solvers::{solve, Algorithm, SearchStats, SolveResult, Status};
pub use ubp::{run_ubp, UpperBounds};
