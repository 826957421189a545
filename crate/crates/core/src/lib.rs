//! Norms, composition operators and bounds on the Hardy space of Dirichlet series.

pub mod affine;
pub mod cli;
pub mod disc;
pub mod dseries;
pub mod error;
pub mod fixtures;
pub mod opnorm;
pub mod primes;
pub mod report;
pub mod search;
pub mod torus;
pub mod verify;
pub mod zeta;

pub use error::{H2Error, Result};
