//! Exact computer algebra around the Kashiwara-Vergne problem.

pub mod assoc;
pub mod bch;
pub mod cli;
pub mod cohomology;
pub mod cyclic;
pub mod envelope;
pub mod error;
pub mod freelie;
pub mod json;
pub mod kvsolve;
pub mod liealg;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod words;
pub mod zerocurve;

pub use error::{Error, Result};
