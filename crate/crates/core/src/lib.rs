//! Executable Lawvere doctrines.
//!
//! Finite and generated cartesian bases, tabulated and lazy doctrines, the
//! free constructions over them (existential completion, comprehension
//! completion, extensional reflection, predicates), regular and exact
//! completions, and checkers for the splitting/cover characterization and
//! the comparison functors. A small regular-logic front end supplies
//! syntactic doctrines decided by conjunctive-query homomorphisms.

pub mod category;
pub mod error;
pub mod order;
pub mod report;

pub use error::{Error, Result};
pub use report::Report;
pub mod doctrine;
pub mod io;
pub mod fixtures;
pub mod completions;
pub mod regexcat;
pub mod charax;
pub mod reglog;
