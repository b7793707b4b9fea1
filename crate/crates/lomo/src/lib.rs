//! Command-line tools and file formats for latent ordinal sequence models.
//!
//! The models, training and evaluation live in [`lomo_core`]; this crate adds
//! the LSEQ text format, JSON manifests, the binary model container, a rayon
//! executor and the `lomo` binary.

pub mod bench;
pub mod cli;
pub mod container;
pub mod error;
pub mod exec;
pub mod lseq;
pub mod manifest;
pub mod run_record;

pub use error::{Error, Result};
pub use exec::Parallel;
