//! Gröbner-basis preconditioning for cylindrical algebraic decomposition.

mod deadline;
mod error;
pub mod cad;
pub mod formula;
pub mod groebner;
pub mod harness;
pub mod metrics;
pub mod pipeline;
pub mod poly;
pub mod reduction;

pub use deadline::Deadline;
pub use error::{Error, Result};
