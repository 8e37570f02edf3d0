//! Exact constructions and machine-checked certificates for the perfect
//! matching derangement graph `M(2k)`.
//!
//! The vertices of `M(2k)` are the perfect matchings of the complete graph
//! `K_{2k}`; two matchings are adjacent when they share no edge. This crate
//! enumerates the graph, certifies its maximum cocliques, computes its exact
//! spectrum together with the symmetric-group module labels, and checks the
//! polytope and automorphism facts that pin down the canonical cocliques.
//!
//! Everything on a certified path uses exact integer or rational arithmetic.
//! With the default `parallel` feature the inner loops run on rayon; disabling
//! it gives an identical sequential build.

pub mod bitset;
pub mod cayley;
pub mod coclique;
pub mod combinatorics;
pub mod error;
pub mod exec;
pub mod graph;
pub mod linalg;
pub mod polytope;
pub mod reps;
mod ser;
pub mod spectral;

pub use combinatorics::{
    binomial, double_factorial, enumerate_matchings, partitions_of, union_cycle_type, Edge,
    IntegerPartition, PerfectMatching,
};
pub use error::{Error, Result};
pub use graph::DerangementGraph;
pub use linalg::ExactMatrix;
pub use spectral::Spectrum;

/// Hard ceilings on `k` for the operations whose cost grows super-exponentially.
///
/// The defaults keep every operation within desk-scale memory and time; callers
/// can lower them (the CLI does through `--max-k`) or raise them deliberately.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Matching enumeration.
    pub enumeration: usize,
    /// Dense bit-vector adjacency (`n²/8` bytes).
    pub graph: usize,
    /// Exhaustive maximum-coclique search.
    pub coclique_search: usize,
    /// Automorphism backtracking.
    pub automorphism: usize,
    /// Iteration over all of `Sym(2k)`.
    pub group_iteration: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 7,
            graph: 6,
            coclique_search: 5,
            automorphism: 4,
            group_iteration: 5,
        }
    }
}
