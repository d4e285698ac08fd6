//! Symbolic computation for the homotopy theory of associative rings.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod glk;
pub mod homotopy;
pub mod k0;
pub mod lattice;
pub mod partition;
pub mod poly;
pub mod ring;
pub mod simplex;
pub mod triangle;
pub mod trunc;
pub mod vring;

pub use error::{Error, Result};
