//! Fair and constrained k-median / k-means clustering built on universal
//! coresets.
//!
//! The crate is organised bottom-up: [`model`] holds the shared types,
//! [`flow`] and [`milp`] solve assignment problems for fixed centers,
//! [`seeding`] and [`coreset`] compress instances, and [`approx`],
//! [`sketch`] and [`streaming`] put these together into clustering
//! algorithms. [`oracle`] contains brute-force reference solvers for tiny
//! instances.

pub mod approx;
pub mod cli;
pub mod coreset;
pub mod error;
pub mod flow;
pub mod milp;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod seeding;
pub mod sketch;
pub mod streaming;

pub use error::{Error, Result};
