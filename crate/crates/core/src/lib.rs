//! Multi-level Thompson sampling for bandits with clustered arms.
//!
//! Policies for flat, clustered and hierarchical Bernoulli bandits and for
//! linear contextual bandits, instance generators, regret bounds, and an
//! experiment harness.

pub mod analysis;
pub mod beta;
pub mod contextual;
pub mod error;
pub mod harness;
pub mod instances;
pub mod model;
pub mod policy;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
