//! File ingestion, the bundled case study, and experiment orchestration
//! around the `patrol-core` planners.

pub mod case_study;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod tsplib;

pub use error::{Error, Result};
