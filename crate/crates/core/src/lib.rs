//! One-level densities of twisted elliptic-curve L-functions computed from the
//! prime side of the explicit formula, with the supporting family censuses
//! (order-`l` Dirichlet characters, S3 cubic fields), central-value rank
//! estimates and the resulting average-rank bounds.

pub mod arith;
pub mod cache;
pub mod central;
pub mod characters;
pub mod cli;
pub mod cubic;
pub mod curve;
pub mod density;
pub mod error;
pub mod quad;
pub mod report;

pub use error::{Error, Result};
