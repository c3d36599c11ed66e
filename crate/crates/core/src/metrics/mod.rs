//! Network metrics, stratified by gender.
//!
//! Distances are hop counts. Closeness and average path length use harmonic
//! means so that unreachable pairs contribute zero instead of infinity.
//! Averages over a stratum skip nodes where a metric is undefined (clustering
//! of nodes with degree < 2).

mod betweenness;
mod clustering;
mod distance;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use betweenness::{betweenness, sample_sources, BetweennessMode, DEFAULT_SAMPLES};
pub use clustering::local_clustering;
pub use distance::{distance_profile, DistanceProfile};

use crate::corpus::{DirectorId, Gender};
use crate::error::{bail, Result};
use crate::graph::{components, fraction_in_largest, gender_subgraph, ComponentLabeling, ProjectedGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub director_id: DirectorId,
    pub gender: Gender,
    pub degree: u32,
    /// Same-gender neighbours; `None` for nodes without a recorded gender.
    pub like_degree: Option<u32>,
    pub betweenness: f64,
    pub harmonic_closeness: f64,
    pub clustering: Option<f64>,
    pub component_id: u32,
    pub in_largest: bool,
}

/// Count, mean and maximum over a set of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub max: f64,
}

impl Summary {
    pub fn of<I: IntoIterator<Item = f64>>(values: I) -> Option<Summary> {
        let (mut count, mut sum, mut max) = (0usize, 0.0, f64::NEG_INFINITY);
        for v in values {
            count += 1;
            sum += v;
            max = max.max(v);
        }
        (count > 0).then(|| Summary { count, mean: sum / count as f64, max })
    }
}

/// One value per stratum: every node, male nodes, female nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strata<T> {
    pub all: Option<T>,
    pub male: Option<T>,
    pub female: Option<T>,
}

impl<T> Strata<T> {
    fn build<F: FnMut(Option<Gender>) -> Option<T>>(mut f: F) -> Self {
        Strata { all: f(None), male: f(Some(Gender::Male)), female: f(Some(Gender::Female)) }
    }
}

fn in_stratum(g: Option<Gender>, node: Gender) -> bool {
    g.is_none_or(|g| g == node)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub degrees: Vec<u32>,
    pub strata: Strata<Summary>,
}

pub fn degree_stats(pg: &ProjectedGraph) -> DegreeStats {
    let degrees: Vec<u32> = (0..pg.n()).map(|u| pg.degree(u) as u32).collect();
    let strata = Strata::build(|g| {
        Summary::of((0..pg.n()).filter(|&u| in_stratum(g, pg.gender(u))).map(|u| f64::from(degrees[u])))
    });
    DegreeStats { degrees, strata }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LikeDegreeStats {
    pub like_degrees: Vec<Option<u32>>,
    pub male_mean: Option<f64>,
    pub female_mean: Option<f64>,
}

pub fn like_degrees(pg: &ProjectedGraph) -> Vec<Option<u32>> {
    (0..pg.n())
        .map(|u| {
            let g = pg.gender(u);
            g.is_known()
                .then(|| pg.neighbors(u).iter().filter(|&&v| pg.gender(v as usize) == g).count() as u32)
        })
        .collect()
}

pub fn like_degree_stats(pg: &ProjectedGraph) -> LikeDegreeStats {
    let like_degrees = like_degrees(pg);
    let mean_for = |g: Gender| {
        Summary::of(
            (0..pg.n())
                .filter(|&u| pg.gender(u) == g)
                .filter_map(|u| like_degrees[u].map(f64::from)),
        )
        .map(|s| s.mean)
    };
    LikeDegreeStats {
        male_mean: mean_for(Gender::Male),
        female_mean: mean_for(Gender::Female),
        like_degrees,
    }
}

/// `c_i = (1/(n-1)) Σ_{j≠i} 1/d_ij`, unreachable pairs contributing 0.
pub fn harmonic_closeness(pg: &ProjectedGraph) -> Result<Vec<f64>> {
    if pg.n() < 2 {
        bail!(Parameter, "harmonic closeness needs at least 2 nodes, got {}", pg.n());
    }
    Ok(closeness_from_profile(&distance_profile(pg)))
}

fn closeness_from_profile(profile: &DistanceProfile) -> Vec<f64> {
    let n = profile.reciprocal_sums.len();
    if n < 2 {
        return alloc::vec![0.0; n];
    }
    let denom = (n - 1) as f64;
    profile.reciprocal_sums.iter().map(|s| s / denom).collect()
}

/// `n(n-1) / Σ_{i≠j} 1/d_ij`; infinite when the graph has no edges.
pub fn avg_path_length_harmonic(pg: &ProjectedGraph) -> Result<f64> {
    if pg.n() < 2 {
        bail!(Parameter, "average path length needs at least 2 nodes, got {}", pg.n());
    }
    Ok(apl_from_profile(pg.n(), &distance_profile(pg)))
}

fn apl_from_profile(n: usize, profile: &DistanceProfile) -> f64 {
    let total = profile.total_reciprocal();
    if total == 0.0 {
        f64::INFINITY
    } else {
        (n as f64) * ((n - 1) as f64) / total
    }
}

/// Largest finite shortest-path distance over all components.
pub fn diameter(pg: &ProjectedGraph) -> Result<u32> {
    if pg.edge_count() == 0 {
        bail!(Parameter, "diameter of an edgeless graph is undefined");
    }
    Ok(distance_profile(pg).max_distance)
}

/// `2m / (n(n-1))`.
pub fn density(pg: &ProjectedGraph) -> Result<f64> {
    let n = pg.n();
    if n < 2 {
        bail!(Parameter, "density needs at least 2 nodes, got {n}");
    }
    Ok(2.0 * pg.edge_count() as f64 / (n as f64 * (n - 1) as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringStats {
    pub values: Vec<Option<f64>>,
    /// Mean over nodes with degree ≥ 2.
    pub averages: Strata<f64>,
}

pub fn clustering(pg: &ProjectedGraph) -> ClusteringStats {
    let values = local_clustering(pg);
    let averages = Strata::build(|g| {
        Summary::of((0..pg.n()).filter(|&u| in_stratum(g, pg.gender(u))).filter_map(|u| values[u])).map(|s| s.mean)
    });
    ClusteringStats { values, averages }
}

/// Whole-graph statistics for one column of the subgraph table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphSummary {
    pub nodes: usize,
    pub edges: usize,
    /// `None` for an edgeless graph.
    pub diameter: Option<u32>,
    /// `None` below 2 nodes; infinite for an edgeless graph.
    #[serde(with = "crate::serde_inf::option")]
    pub avg_path_length: Option<f64>,
    pub density: Option<f64>,
    pub components: usize,
    pub largest_component_nodes: usize,
    pub largest_node_fraction: Option<f64>,
    pub largest_edge_fraction: Option<f64>,
}

pub fn subgraph_summary(pg: &ProjectedGraph, labeling: &ComponentLabeling, profile: &DistanceProfile) -> SubgraphSummary {
    let share = fraction_in_largest(pg, labeling, None);
    SubgraphSummary {
        nodes: pg.n(),
        edges: pg.edge_count(),
        diameter: (pg.edge_count() > 0).then_some(profile.max_distance),
        avg_path_length: (pg.n() >= 2).then(|| apl_from_profile(pg.n(), profile)),
        density: density(pg).ok(),
        components: labeling.count(),
        largest_component_nodes: labeling.largest_size(),
        largest_node_fraction: share.nodes,
        largest_edge_fraction: share.edges,
    }
}

/// Node-attribute statistics for one gender stratum of the full network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumSummary {
    pub nodes: usize,
    pub nodes_in_largest: usize,
    pub percent_of_all: f64,
    pub percent_in_largest: f64,
    pub max_degree: u32,
    pub mean_degree: f64,
    /// Absent for the all-nodes stratum.
    pub mean_like_degree: Option<f64>,
    pub mean_degree_in_largest: Option<f64>,
    pub max_betweenness: f64,
    pub mean_betweenness: f64,
    pub mean_betweenness_in_largest: Option<f64>,
    pub max_closeness: f64,
    pub mean_closeness: f64,
    pub mean_closeness_in_largest: Option<f64>,
    pub max_clustering: Option<f64>,
    pub mean_clustering: Option<f64>,
    pub mean_clustering_in_largest: Option<f64>,
}

pub fn stratum_summary(nodes: &[NodeMetrics], g: Option<Gender>) -> Option<StratumSummary> {
    let members: Vec<&NodeMetrics> = nodes.iter().filter(|m| in_stratum(g, m.gender)).collect();
    if members.is_empty() {
        return None;
    }
    let lc: Vec<&NodeMetrics> = members.iter().copied().filter(|m| m.in_largest).collect();
    let over = |set: &[&NodeMetrics], f: &dyn Fn(&NodeMetrics) -> Option<f64>| Summary::of(set.iter().filter_map(|m| f(m)));
    let degree = over(&members, &|m| Some(f64::from(m.degree))).unwrap();
    let betw = over(&members, &|m| Some(m.betweenness)).unwrap();
    let close = over(&members, &|m| Some(m.harmonic_closeness)).unwrap();
    let clust = over(&members, &|m| m.clustering);
    let mean_in_lc = |f: &dyn Fn(&NodeMetrics) -> Option<f64>| over(&lc, f).map(|s| s.mean);
    Some(StratumSummary {
        nodes: members.len(),
        nodes_in_largest: lc.len(),
        percent_of_all: 100.0 * members.len() as f64 / nodes.len() as f64,
        percent_in_largest: 100.0 * lc.len() as f64 / members.len() as f64,
        max_degree: degree.max as u32,
        mean_degree: degree.mean,
        mean_like_degree: g.and_then(|_| over(&members, &|m| m.like_degree.map(f64::from)).map(|s| s.mean)),
        mean_degree_in_largest: mean_in_lc(&|m| Some(f64::from(m.degree))),
        max_betweenness: betw.max,
        mean_betweenness: betw.mean,
        mean_betweenness_in_largest: mean_in_lc(&|m| Some(m.betweenness)),
        max_closeness: close.max,
        mean_closeness: close.mean,
        mean_closeness_in_largest: mean_in_lc(&|m| Some(m.harmonic_closeness)),
        max_clustering: clust.map(|s| s.max),
        mean_clustering: clust.map(|s| s.mean),
        mean_clustering_in_largest: mean_in_lc(&|m| m.clustering),
    })
}

/// Every cell of the subgraph table and the node-attribute table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    /// Full network and its male-only and female-only induced subgraphs.
    pub table1: Strata<SubgraphSummary>,
    /// Node statistics of the full network by gender stratum.
    pub table2: Strata<StratumSummary>,
    pub betweenness: BetweennessMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub metrics: GraphMetrics,
    pub nodes: Vec<NodeMetrics>,
    pub labeling: ComponentLabeling,
}

/// Per-node metrics of `pg`, given its labelling and distance profile.
pub fn node_metrics(
    pg: &ProjectedGraph,
    labeling: &ComponentLabeling,
    profile: &DistanceProfile,
    mode: BetweennessMode,
) -> Result<Vec<NodeMetrics>> {
    let betw = betweenness(pg, mode)?;
    let closeness = closeness_from_profile(profile);
    let like = like_degrees(pg);
    let clust = local_clustering(pg);
    Ok((0..pg.n())
        .map(|u| NodeMetrics {
            director_id: pg.attrs()[u].director_id,
            gender: pg.gender(u),
            degree: pg.degree(u) as u32,
            like_degree: like[u],
            betweenness: betw[u],
            harmonic_closeness: closeness[u],
            clustering: clust[u],
            component_id: labeling.labels[u],
            in_largest: labeling.in_largest(u),
        })
        .collect())
}

/// Computes both tables for `pg` and its gender subgraphs.
pub fn metrics_report(pg: &ProjectedGraph, mode: BetweennessMode) -> Result<MetricsReport> {
    let labeling = components(pg);
    let profile = distance_profile(pg);
    let nodes = node_metrics(pg, &labeling, &profile, mode)?;
    let summarize = |g: Gender| -> Result<Option<SubgraphSummary>> {
        let sub = gender_subgraph(pg, g)?;
        Ok((sub.n() > 0).then(|| subgraph_summary(&sub, &components(&sub), &distance_profile(&sub))))
    };
    let table1 = Strata {
        all: (pg.n() > 0).then(|| subgraph_summary(pg, &labeling, &profile)),
        male: summarize(Gender::Male)?,
        female: summarize(Gender::Female)?,
    };
    let table2 = Strata::build(|g| stratum_summary(&nodes, g));
    Ok(MetricsReport { metrics: GraphMetrics { table1, table2, betweenness: mode }, nodes, labeling })
}
