use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Gender;
use crate::graph::ProjectedGraph;

/// Connected components. Component ids are assigned in order of each
/// component's smallest node, so the labelling is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLabeling {
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
    /// Largest by node count, ties to the smallest id; `None` for an empty graph.
    pub largest: Option<u32>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn in_largest(&self, u: usize) -> bool {
        self.largest == Some(self.labels[u])
    }

    pub fn largest_size(&self) -> usize {
        self.largest.map_or(0, |c| self.sizes[c as usize])
    }
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if self.rank[ra as usize] < self.rank[rb as usize] { (ra, rb) } else { (rb, ra) };
        self.parent[lo as usize] = hi;
        if self.rank[lo as usize] == self.rank[hi as usize] {
            self.rank[hi as usize] += 1;
        }
    }
}

pub fn components(pg: &ProjectedGraph) -> ComponentLabeling {
    let n = pg.n();
    let mut uf = UnionFind::new(n);
    for clique in pg.cliques() {
        for &m in &clique[1..] {
            uf.union(clique[0], m);
        }
    }
    let mut root_label = vec![u32::MAX; n];
    let mut labels = vec![0u32; n];
    let mut sizes: Vec<usize> = Vec::new();
    for u in 0..n {
        let r = uf.find(u as u32) as usize;
        if root_label[r] == u32::MAX {
            root_label[r] = sizes.len() as u32;
            sizes.push(0);
        }
        labels[u] = root_label[r];
        sizes[labels[u] as usize] += 1;
    }
    let mut largest: Option<u32> = None;
    for (c, &s) in sizes.iter().enumerate() {
        if largest.is_none_or(|l| s > sizes[l as usize]) {
            largest = Some(c as u32);
        }
    }
    ComponentLabeling { labels, sizes, largest }
}

/// Share of nodes and edges inside the largest component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LargestShare {
    /// `None` when no node passes the filter.
    pub nodes: Option<f64>,
    /// `None` when no edge passes the filter.
    pub edges: Option<f64>,
}

/// Fraction of the nodes (of gender `g`, when given) and of the edges (with
/// both endpoints of gender `g`) that lie in the largest component.
pub fn fraction_in_largest(pg: &ProjectedGraph, labeling: &ComponentLabeling, g: Option<Gender>) -> LargestShare {
    let pass = |u: usize| g.is_none_or(|g| pg.gender(u) == g);
    let (mut nodes, mut nodes_in) = (0usize, 0usize);
    for u in 0..pg.n() {
        if pass(u) {
            nodes += 1;
            nodes_in += usize::from(labeling.in_largest(u));
        }
    }
    let (mut edges, mut edges_in) = (0usize, 0usize);
    for (u, v) in pg.edges() {
        if pass(u as usize) && pass(v as usize) {
            edges += 1;
            edges_in += usize::from(labeling.in_largest(u as usize));
        }
    }
    let ratio = |a: usize, b: usize| (b > 0).then(|| a as f64 / b as f64);
    LargestShare { nodes: ratio(nodes_in, nodes), edges: ratio(edges_in, edges) }
}
