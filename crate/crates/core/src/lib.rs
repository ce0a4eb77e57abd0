//! Exact moving-frame computations for Lie group actions on jet spaces.
//!
//! Given infinitesimal generators and a solved cross-section, the engine
//! computes prolongations, the Maurer-Cartan matrix, recurrence formulae for
//! invariant derivations, commutators, normal-derivative rewritings, edge
//! invariants and the syzygy sets, and certifies each relation by exact
//! reduction to zero.

pub mod action;
pub mod cli;
pub mod error;
pub mod frame;
pub mod jets;
pub mod kernel;
pub mod parse;
pub mod rewrite;
pub mod spec;
pub mod syzygy;

pub use error::{Error, Result};
