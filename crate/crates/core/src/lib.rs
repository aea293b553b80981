//! Exact computation for participatory budgeting with voter donations and
//! diversity constraints.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! - [`model`]: instances, bundles, feasibility and instance surgery,
//! - [`scoring`]: additive / maximum utilities, sum / min scores, dominance,
//! - [`solve`]: exhaustive winner determination and the knapsack-style DP,
//! - [`variants`]: the sequential and Pareto ways of handling donations,
//! - [`donation`]: exact search for utility-improving donation vectors,
//! - [`axioms`]: checkers for the donation axioms and a seeded fuzzer.
#![no_std]

extern crate alloc;

pub mod axioms;
pub mod donation;
mod error;
pub mod model;
pub mod scoring;
pub mod solve;
pub mod variants;

pub use error::{Error, Result};
pub use model::{Bundle, Instance, Project, Voter};
pub use scoring::{Aggregator, Rule, UtilityFlavor};
pub use solve::{RuleSpec, Variant};
