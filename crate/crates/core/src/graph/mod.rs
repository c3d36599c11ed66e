//! Director–company graphs.
//!
//! [`BipartiteGraph`] holds seats. [`ProjectedGraph`] is the one-mode
//! director network, stored twice: as sorted CSR adjacency for neighbour
//! scans, and as a clique cover (one clique per board of size ≥ 2) that
//! distance computations traverse without expanding each board into its
//! pairwise edges.

mod bipartite;
mod components;
mod projection;

pub use bipartite::BipartiteGraph;
pub use components::{components, fraction_in_largest, ComponentLabeling, LargestShare};
pub use projection::{gender_subgraph, project, NodeAttrs, ProjectedGraph};
