pub mod diagnostics;
pub mod error;
pub mod exponents;
pub mod harness;
pub mod lattice;
pub mod models;
pub mod rng;
pub mod sequence;
pub mod stats;
pub mod tracy_widom;

pub use error::{Error, Result};
