//! Pauli conjugation by Clifford+T circuits: depth-d presentations, exact
//! Pauli coefficients, decision procedures and reduction compilers.

pub mod circuit;
pub mod coding;
pub mod decision;
pub mod error;
pub mod exactnum;
pub mod f2core;
pub mod oracle;
pub mod pauli;
pub mod presentation;
pub mod reductions;

pub use error::{Error, Result};
