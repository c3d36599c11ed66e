//! Brandes betweenness with optional source sampling.
//!
//! Values count unordered pairs `{s, t}` with `s ≠ v ≠ t`, unnormalised:
//! `b(v) = ½ Σ_s δ_s(v)`. Sampled mode sums `δ_s` over `k` distinct sources
//! drawn without replacement and scales by `n / k`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::graph::ProjectedGraph;
use crate::par::sum_vectors;
use crate::rng::{below, block_rng, stream_id};

/// Default number of sampled sources for large graphs.
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BetweennessMode {
    Exact,
    Sampled { k: usize, seed: u64 },
}

/// Pairs covered by more than one clique, as CSR rows of
/// `(neighbour, extra)` where `extra` is the cover multiplicity minus one.
struct Overlaps {
    offsets: Vec<usize>,
    pairs: Vec<(u32, f64)>,
}

impl Overlaps {
    fn new(pg: &ProjectedGraph, inc_offsets: &[usize], inc: &[u32]) -> Overlaps {
        let n = pg.n();
        let mut count = vec![0u32; n];
        let mut touched = Vec::new();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut pairs = Vec::new();
        for v in 0..n {
            for &c in &inc[inc_offsets[v]..inc_offsets[v + 1]] {
                for &w in pg.clique(c as usize) {
                    if w as usize != v {
                        if count[w as usize] == 0 {
                            touched.push(w);
                        }
                        count[w as usize] += 1;
                    }
                }
            }
            for &w in &touched {
                if count[w as usize] > 1 {
                    pairs.push((w, f64::from(count[w as usize] - 1)));
                }
                count[w as usize] = 0;
            }
            touched.clear();
            offsets.push(pairs.len());
        }
        Overlaps { offsets, pairs }
    }

    #[inline]
    fn of(&self, v: usize) -> &[(u32, f64)] {
        &self.pairs[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// The clique cover split into connectors (nodes in two or more cliques)
/// and private members (nodes in exactly one). A private member's
/// neighbourhood is a clique, so it lies on no shortest path between other
/// nodes; searches visit connectors only and account for private members
/// per clique.
struct Graph {
    inc_offsets: Vec<usize>,
    inc: Vec<u32>,
    conn_offsets: Vec<usize>,
    connectors: Vec<u32>,
    private: Vec<u32>,
    overlaps: Overlaps,
}

impl Graph {
    fn new(pg: &ProjectedGraph) -> Graph {
        let (inc_offsets, inc) = pg.clique_incidence();
        let overlaps = Overlaps::new(pg, &inc_offsets, &inc);
        let is_connector = |v: u32| inc_offsets[v as usize + 1] - inc_offsets[v as usize] >= 2;
        let mut conn_offsets = Vec::with_capacity(pg.clique_count() + 1);
        conn_offsets.push(0);
        let mut connectors = Vec::new();
        let mut private = Vec::with_capacity(pg.clique_count());
        for c in pg.cliques() {
            let before = connectors.len();
            connectors.extend(c.iter().copied().filter(|&v| is_connector(v)));
            private.push((c.len() - (connectors.len() - before)) as u32);
            conn_offsets.push(connectors.len());
        }
        Graph { inc_offsets, inc, conn_offsets, connectors, private, overlaps }
    }

    #[inline]
    fn cliques_of(&self, v: usize) -> &[u32] {
        &self.inc[self.inc_offsets[v]..self.inc_offsets[v + 1]]
    }

    #[inline]
    fn connectors_of(&self, c: usize) -> &[u32] {
        &self.connectors[self.conn_offsets[c]..self.conn_offsets[c + 1]]
    }
}

/// Per-node search state, packed so one visit touches one cache line.
#[derive(Clone, Copy)]
#[repr(C, align(32))]
struct NodeState {
    sigma: f64,
    /// Dependency while unfinished; `(1 + δ) / σ` once added to `acc`.
    delta: f64,
    acc: f64,
    dist: u32,
}

const FRESH: NodeState = NodeState { sigma: 0.0, delta: 0.0, acc: 0.0, dist: u32::MAX };

struct Workspace {
    node: Vec<NodeState>,
    order: Vec<u32>,
    levels: Vec<usize>,
    clique_sum: Vec<f64>,
    clique_mark: Vec<u32>,
    touched: Vec<u32>,
    epoch: u32,
    /// Distance of a clique's private members, `u32::MAX` if unreached.
    clique_level: Vec<u32>,
    /// Path count into each private member of a reached clique.
    clique_sigma: Vec<f64>,
    /// Reached cliques in order; those at distance `k + 1` are
    /// `reached[reached_levels[k]..reached_levels[k + 1]]`.
    reached: Vec<u32>,
    reached_levels: Vec<usize>,
}

impl Workspace {
    fn new(n: usize, cliques: usize) -> Self {
        Workspace {
            node: vec![FRESH; n],
            order: Vec::with_capacity(n),
            levels: Vec::new(),
            clique_sum: vec![0.0; cliques],
            clique_mark: vec![0; cliques],
            touched: Vec::new(),
            epoch: 0,
            clique_level: vec![u32::MAX; cliques],
            clique_sigma: vec![0.0; cliques],
            reached: Vec::new(),
            reached_levels: Vec::new(),
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.clique_mark.fill(0);
            self.epoch = 1;
        }
        self.touched.clear();
    }

    #[inline]
    fn add_to_clique(&mut self, c: u32, x: f64) {
        let c = c as usize;
        if self.clique_mark[c] != self.epoch {
            self.clique_mark[c] = self.epoch;
            self.clique_sum[c] = 0.0;
            self.touched.push(c as u32);
        }
        self.clique_sum[c] += x;
    }
}

/// Single-source Brandes pass over the clique cover. Path counts into a node
/// are gathered per clique; pairs that share several cliques are then
/// corrected so that each edge counts once.
fn accumulate(g: &Graph, s: usize, ws: &mut Workspace) {
    ws.order.clear();
    ws.levels.clear();
    ws.reached.clear();
    ws.reached_levels.clear();
    ws.node[s].dist = 0;
    ws.node[s].sigma = 1.0;
    ws.order.push(s as u32);
    ws.levels.push(0);
    ws.reached_levels.push(0);
    let mut d = 0u32;
    loop {
        let (lo, hi) = (ws.levels[d as usize], ws.order.len());
        ws.levels.push(hi);
        ws.next_epoch();
        for i in lo..hi {
            let v = ws.order[i] as usize;
            let sv = ws.node[v].sigma;
            for &c in g.cliques_of(v) {
                ws.add_to_clique(c, sv);
            }
        }
        for t in 0..ws.touched.len() {
            let c = ws.touched[t] as usize;
            let sum = ws.clique_sum[c];
            if ws.clique_level[c] == u32::MAX {
                ws.clique_level[c] = d + 1;
                ws.clique_sigma[c] = sum;
                ws.reached.push(c as u32);
            }
            for &w in g.connectors_of(c) {
                let st = &mut ws.node[w as usize];
                if st.dist == u32::MAX {
                    st.dist = d + 1;
                    ws.order.push(w);
                }
                if st.dist == d + 1 {
                    st.sigma += sum;
                }
            }
        }
        ws.reached_levels.push(ws.reached.len());
        for i in lo..hi {
            let v = ws.order[i] as usize;
            let sv = ws.node[v].sigma;
            for &(w, extra) in g.overlaps.of(v) {
                let st = &mut ws.node[w as usize];
                if st.dist == d + 1 {
                    st.sigma -= extra * sv;
                }
            }
        }
        if ws.order.len() == hi {
            break;
        }
        d += 1;
    }
    // Connectors at distance k are order[levels[k]..levels[k + 1]]; private
    // members may sit one level below the deepest connector.
    let connector_levels = ws.levels.len() - 1;
    let source_private = g.cliques_of(s).len() == 1;
    for k in (1..ws.reached_levels.len()).rev() {
        ws.next_epoch();
        if k < connector_levels {
            for i in ws.levels[k]..ws.levels[k + 1] {
                let w = ws.order[i] as usize;
                let st = &mut ws.node[w];
                st.acc += st.delta;
                let coeff = (1.0 + st.delta) / st.sigma;
                st.delta = coeff;
                for &c in g.cliques_of(w) {
                    ws.add_to_clique(c, coeff);
                }
            }
        }
        for r in ws.reached_levels[k - 1]..ws.reached_levels[k] {
            let c = ws.reached[r];
            let mut count = g.private[c as usize];
            if source_private && k == 1 {
                // The source is one of this clique's private members.
                count -= 1;
            }
            if count > 0 {
                let x = f64::from(count) / ws.clique_sigma[c as usize];
                ws.add_to_clique(c, x);
            }
        }
        if k == 1 {
            break;
        }
        for i in ws.levels[k - 1]..ws.levels[k] {
            let v = ws.order[i] as usize;
            let mut sum = 0.0;
            for &c in g.cliques_of(v) {
                if ws.clique_mark[c as usize] == ws.epoch {
                    sum += ws.clique_sum[c as usize];
                }
            }
            for &(w, extra) in g.overlaps.of(v) {
                let st = &ws.node[w as usize];
                if st.dist == k as u32 {
                    sum -= extra * st.delta;
                }
            }
            let st = &mut ws.node[v];
            st.delta = st.sigma * sum;
        }
    }
    for &v in &ws.order {
        let st = &mut ws.node[v as usize];
        *st = NodeState { acc: st.acc, ..FRESH };
    }
    for &c in &ws.reached {
        ws.clique_level[c as usize] = u32::MAX;
    }
}

/// Sum of single-source dependencies over `sources`, in source order.
fn dependency_sums(pg: &ProjectedGraph, sources: &[u32]) -> Vec<f64> {
    let n = pg.n();
    let g = Graph::new(pg);
    sum_vectors(sources.len(), n, |range, acc| {
        let mut ws = Workspace::new(n, pg.clique_count());
        for &s in &sources[range] {
            accumulate(&g, s as usize, &mut ws);
        }
        for (a, st) in acc.iter_mut().zip(&ws.node) {
            *a = st.acc;
        }
    })
}

/// `k` distinct sources drawn uniformly with the given seed, sorted.
pub fn sample_sources(n: usize, k: usize, seed: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut rng = block_rng(seed, stream_id("betweenness-sources"), 0);
    for i in 0..k {
        let j = i + below(&mut rng, (n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool.sort_unstable();
    pool
}

pub fn betweenness(pg: &ProjectedGraph, mode: BetweennessMode) -> Result<Vec<f64>> {
    let n = pg.n();
    let (sources, scale) = match mode {
        BetweennessMode::Exact => ((0..n as u32).collect::<Vec<_>>(), 0.5),
        BetweennessMode::Sampled { k, seed } => {
            if k == 0 || k > n {
                bail!(Parameter, "sample size k = {k} must satisfy 1 <= k <= n = {n}");
            }
            (sample_sources(n, k, seed), 0.5 * (n as f64 / k as f64))
        }
    };
    let (local, order) = pg.locality_relabelled();
    let mut pos = vec![0u32; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old as usize] = new as u32;
    }
    let mut local_sources: Vec<u32> = sources.iter().map(|&s| pos[s as usize]).collect();
    local_sources.sort_unstable();
    let sums = dependency_sums(&local, &local_sources);
    let mut b = vec![0.0; n];
    for (new, &old) in order.iter().enumerate() {
        b[old as usize] = sums[new] * scale;
    }
    Ok(b)
}
