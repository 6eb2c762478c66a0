//! Committee selection from attribute-approval ballots.
//!
//! Candidates are vectors of attribute values, one per dimension, and each
//! voter approves a set of values on every dimension. The crate provides six
//! selection rules, checkers for unanimity and justified representation,
//! exhaustive solvers for the hard selection problems, set-cover reduction
//! builders, and a seeded generator for random and hand-built elections.

pub mod axioms;
pub mod cli;
pub mod gav;
pub mod instances;
pub mod model;
pub mod rules;
pub mod score;
pub mod solvers;

pub use model::{Committee, Election, ElectionFile};
pub use rules::{select, RuleId, SelectOptions, SelectionResult};
pub use score::Score;
