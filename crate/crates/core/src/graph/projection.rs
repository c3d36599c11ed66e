use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{DirectorId, Gender};
use crate::error::{bail, Result};
use crate::graph::BipartiteGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeAttrs {
    pub director_id: DirectorId,
    pub gender: Gender,
    pub age: Option<u32>,
    pub country: Option<String>,
}

impl NodeAttrs {
    pub fn new(director_id: DirectorId, gender: Gender) -> Self {
        NodeAttrs { director_id, gender, age: None, country: None }
    }
}

/// Simple undirected director graph.
///
/// Invariants: adjacency lists are sorted, symmetric, free of self-loops and
/// duplicates; every clique of the cover has ≥ 2 members, all pairwise
/// adjacent, and every edge lies in at least one clique.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    clique_offsets: Vec<usize>,
    clique_members: Vec<u32>,
    attrs: Vec<NodeAttrs>,
}

/// Edge `{u, v}` iff some board seats both; each board is a clique and
/// boards sharing a pair contribute that edge once.
pub fn project(bg: &BipartiteGraph) -> ProjectedGraph {
    let n = bg.n_directors();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut targets = Vec::new();
    let mut scratch: Vec<u32> = Vec::new();
    for u in 0..n {
        scratch.clear();
        for &c in bg.companies_of(u) {
            scratch.extend(bg.board(c as usize).iter().copied().filter(|&v| v as usize != u));
        }
        scratch.sort_unstable();
        scratch.dedup();
        targets.extend_from_slice(&scratch);
        offsets.push(targets.len());
    }
    let mut clique_offsets = vec![0];
    let mut clique_members = Vec::new();
    for board in bg.boards().filter(|b| b.len() >= 2) {
        clique_members.extend_from_slice(board);
        clique_offsets.push(clique_members.len());
    }
    ProjectedGraph {
        offsets,
        targets,
        clique_offsets,
        clique_members,
        attrs: bg.attrs().to_vec(),
    }
}

/// Induced subgraph on the nodes of gender `g`, relabelled densely in the
/// original node order. `NodeAttrs::director_id` keeps the original id.
pub fn gender_subgraph(pg: &ProjectedGraph, g: Gender) -> Result<ProjectedGraph> {
    if !g.is_known() {
        bail!(Parameter, "gender subgraph requires Male or Female");
    }
    Ok(pg.induced(|a| a.gender == g))
}

impl ProjectedGraph {
    /// Graph from an explicit edge list; self-loops and repeats are dropped.
    pub fn from_edges(attrs: Vec<NodeAttrs>, edges: &[(u32, u32)]) -> Result<ProjectedGraph> {
        let n = attrs.len();
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                bail!(Integrity, "edge ({u}, {v}) outside node range {n}");
            }
            if u != v {
                pairs.push((u.min(v), u.max(v)));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let (offsets, targets) = csr_from_pairs(n, &pairs);
        let mut clique_offsets = Vec::with_capacity(pairs.len() + 1);
        clique_offsets.push(0);
        let mut clique_members = Vec::with_capacity(2 * pairs.len());
        for &(u, v) in &pairs {
            clique_members.push(u);
            clique_members.push(v);
            clique_offsets.push(clique_members.len());
        }
        Ok(ProjectedGraph { offsets, targets, clique_offsets, clique_members, attrs })
    }

    /// Reassembles a stored graph, validating every invariant.
    pub fn from_raw(
        offsets: Vec<usize>,
        targets: Vec<u32>,
        clique_offsets: Vec<usize>,
        clique_members: Vec<u32>,
        attrs: Vec<NodeAttrs>,
    ) -> Result<ProjectedGraph> {
        let n = attrs.len();
        if offsets.len() != n + 1 || offsets[0] != 0 || *offsets.last().unwrap() != targets.len() {
            bail!(Integrity, "adjacency offsets do not match {n} nodes");
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            bail!(Integrity, "adjacency offsets are not monotone");
        }
        if clique_offsets.first() != Some(&0)
            || *clique_offsets.last().unwrap() != clique_members.len()
            || clique_offsets.windows(2).any(|w| w[1] < w[0] + 2)
        {
            bail!(Integrity, "clique offsets are malformed");
        }
        let pg = ProjectedGraph { offsets, targets, clique_offsets, clique_members, attrs };
        for u in 0..n {
            let nb = pg.neighbors(u);
            if nb.windows(2).any(|w| w[0] >= w[1]) || nb.iter().any(|&v| v as usize >= n || v as usize == u) {
                bail!(Integrity, "adjacency of node {u} is not a sorted simple list");
            }
            if nb.iter().any(|&v| !pg.has_edge(v as usize, u as u32)) {
                bail!(Integrity, "adjacency of node {u} is not symmetric");
            }
        }
        let mut covered: Vec<(u32, u32)> = Vec::new();
        for c in pg.cliques() {
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    if a == b || a as usize >= n || b as usize >= n || !pg.has_edge(a as usize, b) {
                        bail!(Integrity, "clique member pair ({a}, {b}) is not an edge");
                    }
                    covered.push((a.min(b), a.max(b)));
                }
            }
        }
        covered.sort_unstable();
        covered.dedup();
        if covered.len() != pg.edge_count() {
            bail!(Integrity, "clique cover misses {} edges", pg.edge_count() - covered.len());
        }
        Ok(pg)
    }

    pub fn n(&self) -> usize {
        self.attrs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn attrs(&self) -> &[NodeAttrs] {
        &self.attrs
    }

    pub fn gender(&self, u: usize) -> Gender {
        self.attrs[u].gender
    }

    /// Each edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u as u32, v))
        })
    }

    pub fn clique_count(&self) -> usize {
        self.clique_offsets.len() - 1
    }

    pub fn clique(&self, c: usize) -> &[u32] {
        &self.clique_members[self.clique_offsets[c]..self.clique_offsets[c + 1]]
    }

    pub fn cliques(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.clique_count()).map(move |c| self.clique(c))
    }

    /// Raw CSR and clique arrays, for serialization.
    pub fn raw_parts(&self) -> (&[usize], &[u32], &[usize], &[u32]) {
        (&self.offsets, &self.targets, &self.clique_offsets, &self.clique_members)
    }

    /// Node → clique incidence as CSR `(offsets, clique ids)`.
    pub fn clique_incidence(&self) -> (Vec<usize>, Vec<u32>) {
        let n = self.n();
        let mut offsets = vec![0usize; n + 1];
        for &m in &self.clique_members {
            offsets[m as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut ids = vec![0u32; self.clique_members.len()];
        for c in 0..self.clique_count() {
            for &m in self.clique(c) {
                ids[cursor[m as usize]] = c as u32;
                cursor[m as usize] += 1;
            }
        }
        (offsets, ids)
    }

    /// Copy with nodes and cliques renumbered in breadth-first order over the
    /// clique cover, so that co-members of a clique get nearby ids. Returns
    /// the copy and the original id of every new node.
    pub(crate) fn locality_relabelled(&self) -> (ProjectedGraph, Vec<u32>) {
        let n = self.n();
        let (inc_offsets, inc) = self.clique_incidence();
        let mut pos = vec![u32::MAX; n];
        let mut order: Vec<u32> = Vec::with_capacity(n);
        let mut clique_seen = vec![false; self.clique_count()];
        let mut clique_order: Vec<u32> = Vec::with_capacity(self.clique_count());
        for root in 0..n {
            if pos[root] != u32::MAX {
                continue;
            }
            pos[root] = order.len() as u32;
            order.push(root as u32);
            let mut head = order.len() - 1;
            while head < order.len() {
                let u = order[head] as usize;
                head += 1;
                for &c in &inc[inc_offsets[u]..inc_offsets[u + 1]] {
                    if core::mem::replace(&mut clique_seen[c as usize], true) {
                        continue;
                    }
                    clique_order.push(c);
                    for &m in self.clique(c as usize) {
                        if pos[m as usize] == u32::MAX {
                            pos[m as usize] = order.len() as u32;
                            order.push(m);
                        }
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(self.targets.len());
        for &old in &order {
            let start = targets.len();
            targets.extend(self.neighbors(old as usize).iter().map(|&w| pos[w as usize]));
            targets[start..].sort_unstable();
            offsets.push(targets.len());
        }
        let mut clique_offsets = Vec::with_capacity(clique_order.len() + 1);
        clique_offsets.push(0);
        let mut clique_members = Vec::with_capacity(self.clique_members.len());
        for &c in &clique_order {
            clique_members.extend(self.clique(c as usize).iter().map(|&m| pos[m as usize]));
            clique_offsets.push(clique_members.len());
        }
        let attrs = order.iter().map(|&u| self.attrs[u as usize].clone()).collect();
        (ProjectedGraph { offsets, targets, clique_offsets, clique_members, attrs }, order)
    }

    /// Induced subgraph on the nodes satisfying `keep`.
    pub fn induced<F: Fn(&NodeAttrs) -> bool>(&self, keep: F) -> ProjectedGraph {
        let mut map = vec![u32::MAX; self.n()];
        let mut attrs = Vec::new();
        for (u, a) in self.attrs.iter().enumerate() {
            if keep(a) {
                map[u] = attrs.len() as u32;
                attrs.push(a.clone());
            }
        }
        let mut offsets = Vec::with_capacity(attrs.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for u in 0..self.n() {
            if map[u] == u32::MAX {
                continue;
            }
            // Relabelling is monotone, so filtered lists stay sorted.
            targets.extend(
                self.neighbors(u)
                    .iter()
                    .filter(|&&v| map[v as usize] != u32::MAX)
                    .map(|&v| map[v as usize]),
            );
            offsets.push(targets.len());
        }
        let mut clique_offsets = vec![0];
        let mut clique_members = Vec::new();
        for c in self.cliques() {
            let start = clique_members.len();
            clique_members.extend(c.iter().filter(|&&m| map[m as usize] != u32::MAX).map(|&m| map[m as usize]));
            if clique_members.len() - start >= 2 {
                clique_offsets.push(clique_members.len());
            } else {
                clique_members.truncate(start);
            }
        }
        ProjectedGraph { offsets, targets, clique_offsets, clique_members, attrs }
    }
}

fn csr_from_pairs(n: usize, pairs: &[(u32, u32)]) -> (Vec<usize>, Vec<u32>) {
    let mut offsets = vec![0usize; n + 1];
    for &(u, v) in pairs {
        offsets[u as usize + 1] += 1;
        offsets[v as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut targets = vec![0u32; 2 * pairs.len()];
    for &(u, v) in pairs {
        targets[cursor[u as usize]] = v;
        cursor[u as usize] += 1;
        targets[cursor[v as usize]] = u;
        cursor[v as usize] += 1;
    }
    for u in 0..n {
        targets[offsets[u]..offsets[u + 1]].sort_unstable();
    }
    (offsets, targets)
}
