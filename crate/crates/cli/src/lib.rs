//! Configuration, caching and the staged pipeline behind the `qpres` binary.

pub mod artifacts;
pub mod cache;
pub mod config;
pub mod pipeline;
pub mod report;

pub use config::{ConfigFile, QMode, RunConfig};
pub use pipeline::{run, Stage};
pub use report::{Report, Status};
