//! Solvers for packing vertex-disjoint paths of a fixed length between
//! terminal vertices.
//!
//! An instance is a graph, a terminal set `A`, a count `k` and a length
//! `ell`. The exact-length problem asks for `k` vertex-disjoint paths with
//! exactly `ell` edges, both ends in `A` and no internal vertex in `A`; the
//! short variant accepts lengths `1..=ell`.
//!
//! * [`matching`] decides `ell <= 3` in polynomial time.
//! * [`td`] runs a dynamic program over a nice tree decomposition.
//! * [`colorcoding`] is a one-sided Monte Carlo solver in `k + ell`.
//! * [`oracle`] holds exhaustive searches used as ground truth.
//! * [`reductions`] turns other problems into packing instances.

pub mod colorcoding;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod reductions;
pub mod td;

pub use error::{Error, Result};
pub use graph::{
    verify, verify_packing, verify_short_packing, Graph, GraphBuilder, GraphError, Instance, PathPacking, ProblemKind,
    SolveResult, Verdict, Vertex, Violation,
};
pub use td::TreeDecomposition;
