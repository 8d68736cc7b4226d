//! Two-vehicle routing toolkit.
//!
//! The crate covers three layers that build on each other:
//!
//! * Structured TSP machinery: Kalmanson / Demidenko property checks
//!   ([`matrices`]), a seeded generator of (permuted) Kalmanson matrices with
//!   known optimal solutions ([`generator`]), the optimal pyramidal tour DP and
//!   the iterated cyclic-shift heuristic BELPERM ([`pyramidal`]).
//! * The balanced two-period TSP: an exact DP that is optimal on Kalmanson
//!   matrices (cubic and quadratic space variants) plus a brute-force oracle
//!   ([`two_tsp`]), and the Kalmanson nearest neighbour recogniser with the KS
//!   heuristic built on top of it ([`knn`]).
//! * A rich two-vehicle VRP model with interval customers, an exact
//!   Held–Karp style subset DP ([`vrp`]) and the sliding-subset local search
//!   with its multi-start driver ([`sliding`]).
//!
//! [`bench`] holds the plain-text file formats and the experiment harness used
//! by the `tworoute` binary.
//!
//! Nodes are 0-based everywhere in the API. File formats and printed tours use
//! 1-based labels.

pub mod bench;
pub mod error;
pub mod generator;
pub mod knn;
pub mod matrices;
pub mod pyramidal;
pub mod sliding;
pub mod two_tsp;
pub mod vrp;

pub use error::{Error, Result};
pub use matrices::{AsymmetricCostMatrix, Costs, Permutation, RealMatrix, SymmetricCostMatrix};
