//! Weight-based quantification of quantum memory.
//!
//! A channel's memory weight is the smallest fraction `s` such that its Choi
//! state splits as `(1 - s) J_free + s J_rest`, where `J_free` belongs to an
//! entanglement-breaking (measure-and-prepare) channel. This crate provides
//! the dense linear algebra for bipartite operators, channel constructions,
//! a small primal-dual interior-point SDP solver, the weight and robustness
//! programs with their dual witnesses, analytic reference values, lower
//! bounds, and exclusion-game payoffs.

pub mod channel;
pub mod error;
pub mod games;
pub mod linalg;
pub mod random;
pub mod sdp;
pub mod weight;

pub use channel::{ChoiMatrix, QuantumChannel};
pub use error::{Error, Result};
pub use linalg::{BipartiteShape, ComplexMatrix, DensityOperator, HermitianOperator, Side};
