//! Graph-Lagrangians and weighted polynomial programs of non-uniform
//! hypergraphs over the standard simplex.
//!
//! The crate is organised bottom-up:
//!
//! * [`hypergraph`]: canonical non-uniform hypergraphs, JSON/text I/O.
//! * [`compression`]: the left-compression operator and its fixpoint.
//! * [`objective`]: evaluation of `λ`, `λ′` and the weighted program `L_α`,
//!   gradients, link quantities and exact rational evaluation.
//! * [`optimizer`]: multistart projected-gradient ascent on the simplex,
//!   a brute-force grid oracle and first-order optimality residuals.
//! * [`cliques`]: exact maximum complete `T`-subgraph search.
//! * [`theorems`]: closed forms, hypothesis checks and verdicts for the
//!   Motzkin–Straus type results.
//! * [`generators`]: seeded instance families for sweeps and tests.
//! * [`sweep`]: batch verification producing CSV rows.
//! * [`cli`]: the `lagrangian` command-line front end.
//!
//! Vertices are labelled `1..=n` everywhere in the public API.

pub mod cliques;
pub mod cli;
pub mod compression;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod objective;
pub mod optimizer;
pub mod par;
pub mod sweep;
pub mod theorems;

pub use error::{Error, Result};
pub use hypergraph::{EdgeTypeSet, Hypergraph};
pub use objective::{Coefficients, WeightVector};
pub use optimizer::{OptimizationResult, SolverConfig};
pub use theorems::{TheoremId, TheoremParams, TheoremVerdict};
