//! Core algorithms for gender-annotated board-interlock networks.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is
//! enabled, in which case per-source graph traversals and Monte Carlo trials
//! run on the rayon thread pool. Every parallel reduction is performed over a
//! fixed chunking of the work in chunk order, so results are bit-identical
//! with or without the `std` feature and for any number of worker threads.
//!
//! Modules follow the analysis pipeline:
//!
//! * [`corpus`]: company and director records, identity resolution, missing-data accounting.
//! * [`graph`]: bipartite director–company graph, one-mode projection, components.
//! * [`metrics`]: degree, betweenness, harmonic closeness and path length, clustering.
//! * [`nullmodel`]: the independent-seat null model, analytic and simulated.
//! * [`stats`]: descriptive statistics and hypothesis tests.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod corpus;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod nullmodel;
pub mod stats;

mod par;
mod rng;
pub mod serde_inf;

pub use corpus::{
    infer_country, missing_data_report, resolve_identity, CompanyRecord, CompanyRow, Corpus,
    Diagnostic, DiagnosticKind, DirectorId, DirectorRecord, Gender, Ingested, MissingStats,
    RawDirectorRow,
};
pub use error::{Error, Result};
pub use graph::{BipartiteGraph, ComponentLabeling, NodeAttrs, ProjectedGraph};
pub use metrics::{BetweennessMode, GraphMetrics, NodeMetrics};
pub use nullmodel::{BoardSizeDistribution, NullModelResult};
pub use stats::TestResult;
