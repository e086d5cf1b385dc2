//! Deciding and measuring k-limited α-bisimilarity between states of
//! nondeterministic fuzzy transition systems.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: exact degrees and the Gödel, Product and Łukasiewicz algebras.
//! - [`model`], [`relation`]: systems, distributions, crisp relations.
//! - [`lifting`]: lifting relations on states to distributions.
//! - [`fixedpoint`]: definitional k-limited bisimilarity, the monotone
//!   functional characterising it, and unlimited α-bisimulation.
//! - [`limited`]: bisimulation vectors and the degree computation, plus a
//!   brute-force oracle.
//! - [`subsystem`]: depth-bounded unfoldings and induced subsystems.
//! - [`logic`]: the two-sorted fuzzy modal logic and distinguishing formulas.
//! - [`format`]: the model file format.

pub mod algebra;
pub mod examples;
pub mod fixedpoint;
pub mod format;
pub mod lifting;
pub mod limited;
pub mod logic;
pub mod model;
pub mod random;
pub mod relation;
pub mod subsystem;

pub use algebra::{Algebra, Degree, DegreeError};
pub use format::{parse_model, parse_model_with, serialize_model, ParseError, ParseOptions};
pub use model::{Distribution, LabelId, ModelError, Nfts, NftsBuilder, PathLength, StateId, StateSet};
pub use relation::Relation;
