//! Exact SU(2) recoupling theory on admissible trivalent graphs, the bending
//! flows of polygon spaces, and the tetrahedral geometry controlling the
//! large-spin behavior of 6j-symbols.

pub mod error;
pub mod exact;
pub mod graphs;
pub mod polyspace;
pub mod sixj;
pub mod su2;
pub mod tetra;

pub use error::{Error, Result};
