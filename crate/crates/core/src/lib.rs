//! Vertex-disjoint paths of order at least four covering as many vertices
//! as possible.
//!
//! The approximation pipeline runs [`phase1`] (grow a maximum matching into
//! 5-paths and small bad components), [`cover`] (a maximum weight
//! path-cycle cover rescuing bad components), [`components`] and
//! [`rescue`] (analyze and rewire `H + C`), and finally [`solver`], which
//! either outputs optimal solutions of the components or recurses on a
//! smaller graph. Its output covers at least `1 / r` of the optimum with
//! `r = (15 + √505) / 20 ≈ 1.874`. [`exact`] solves small graphs exactly
//! and serves as the oracle in tests.

pub mod cli;
pub mod components;
pub mod cover;
pub mod exact;
pub mod factor;
pub mod format;
pub mod generate;
pub mod graph;
pub mod matching;
pub mod phase1;
pub mod ratio;
pub mod rescue;
pub mod solution;
pub mod solver;

pub use graph::{Edge, EdgeSet, Graph, Vertex};
pub use solution::{verify_solution, Path, Solution};
pub use solver::{solve, solve_with_report, SolverConfig};
