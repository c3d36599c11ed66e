//! File formats, pipeline stages and the command-line front end for
//! board-interlock network analysis. The algorithms live in `interlock-core`.

pub mod artifacts;
pub mod error;
pub mod files;
pub mod graphfile;
pub mod ingest;
pub mod pipeline;
pub mod render;
pub mod stages;
pub mod synth;

pub use error::{Error, Result};
