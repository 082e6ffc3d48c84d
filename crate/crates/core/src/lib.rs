//! Simulation and verification toolkit for exact alignment of `m` correlated
//! inhomogeneous random graphs.

pub mod align;
pub mod error;
pub mod exec;
pub mod graphs;
pub mod harness;
pub mod kcore;
pub mod oracle;
pub mod sampling;
pub mod thresholds;

pub use error::{Error, Result};
pub use exec::Execution;
