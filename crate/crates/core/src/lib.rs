//! Software architecture recovery from dependencies, code text, and folder
//! structure, plus metrics for comparing recovered architectures.

pub mod cluster;
pub mod config;
pub mod depgraph;
pub mod error;
pub mod folders;
pub mod fusion;
pub mod ingest;
pub mod io;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod synth;
pub mod textual;

pub use error::{Error, Result};
