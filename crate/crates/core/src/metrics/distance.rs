//! All-pairs BFS aggregates.
//!
//! Sources are processed 512 at a time: every node carries a 256-bit mask of
//! the sources that have reached it, and one level of all 256 searches is a
//! pass over the clique cover (OR the frontier masks of each clique's
//! members) followed by a pass over the nodes (OR the masks of the node's
//! cliques). Cost per level is linear in the number of seats, independent of
//! the number of projected edges. A mask fills one cache line, and nodes are
//! renumbered so that clique members sit close together.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::ProjectedGraph;
use crate::par::{map_chunks, MAX_CHUNKS};

const WORDS: usize = 8;
const LANES: usize = 64 * WORDS;

#[derive(Clone, Copy)]
#[repr(C, align(64))]
struct Mask([u64; WORDS]);

const EMPTY: Mask = Mask([0; WORDS]);

#[inline]
fn or_into(acc: &mut Mask, m: &Mask) {
    for i in 0..WORDS {
        acc.0[i] |= m.0[i];
    }
}

/// Per-node harmonic sums and the largest finite distance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    /// `Σ_{j ≠ i, j reachable} 1 / d(i, j)` for every node `i`.
    pub reciprocal_sums: Vec<f64>,
    /// Maximum finite distance over all pairs; 0 when there are no edges.
    pub max_distance: u32,
}

impl DistanceProfile {
    /// `Σ_{i ≠ j} 1 / d(i, j)` over ordered pairs.
    pub fn total_reciprocal(&self) -> f64 {
        self.reciprocal_sums.iter().sum()
    }
}

struct Workspace {
    seen: Vec<Mask>,
    frontier: Vec<Mask>,
    next: Vec<Mask>,
    clique_front: Vec<Mask>,
}

pub fn distance_profile(pg: &ProjectedGraph) -> DistanceProfile {
    let (local, order) = pg.locality_relabelled();
    let p = local_profile(&local);
    let mut reciprocal_sums = vec![0.0; pg.n()];
    for (new, &old) in order.iter().enumerate() {
        reciprocal_sums[old as usize] = p.reciprocal_sums[new];
    }
    DistanceProfile { reciprocal_sums, max_distance: p.max_distance }
}

fn local_profile(pg: &ProjectedGraph) -> DistanceProfile {
    let n = pg.n();
    let (inc_offsets, inc) = pg.clique_incidence();
    let batches = n.div_ceil(LANES);
    let partials = map_chunks(batches, MAX_CHUNKS, |range| {
        let mut ws = Workspace {
            seen: vec![EMPTY; n],
            frontier: vec![EMPTY; n],
            next: vec![EMPTY; n],
            clique_front: vec![EMPTY; pg.clique_count()],
        };
        let mut sums = vec![0.0; n];
        let mut max_d = 0;
        for b in range {
            let sources = b * LANES..((b + 1) * LANES).min(n);
            max_d = max_d.max(run_batch(pg, &inc_offsets, &inc, sources, &mut ws, &mut sums));
        }
        (sums, max_d)
    });
    let mut reciprocal_sums = vec![0.0; n];
    let mut max_distance = 0;
    for (sums, d) in &partials {
        for (t, s) in reciprocal_sums.iter_mut().zip(sums) {
            *t += *s;
        }
        max_distance = max_distance.max(*d);
    }
    DistanceProfile { reciprocal_sums, max_distance }
}

fn run_batch(
    pg: &ProjectedGraph,
    inc_offsets: &[usize],
    inc: &[u32],
    sources: core::ops::Range<usize>,
    ws: &mut Workspace,
    sums: &mut [f64],
) -> u32 {
    ws.seen.fill(EMPTY);
    ws.frontier.fill(EMPTY);
    for (lane, s) in sources.enumerate() {
        let bit = 1u64 << (lane % 64);
        ws.seen[s].0[lane / 64] |= bit;
        ws.frontier[s].0[lane / 64] |= bit;
    }
    let mut depth = 0u32;
    loop {
        let d = depth + 1;
        for (c, slot) in ws.clique_front.iter_mut().enumerate() {
            let mut acc = EMPTY;
            for &m in pg.clique(c) {
                or_into(&mut acc, &ws.frontier[m as usize]);
            }
            *slot = acc;
        }
        let inv_d = 1.0 / f64::from(d);
        let mut any = false;
        for v in 0..pg.n() {
            let mut acc = EMPTY;
            for &c in &inc[inc_offsets[v]..inc_offsets[v + 1]] {
                or_into(&mut acc, &ws.clique_front[c as usize]);
            }
            let seen = &mut ws.seen[v];
            let mut count = 0u32;
            for i in 0..WORDS {
                acc.0[i] &= !seen.0[i];
                seen.0[i] |= acc.0[i];
                count += acc.0[i].count_ones();
            }
            ws.next[v] = acc;
            if count > 0 {
                any = true;
                // d(s, v) = d(v, s): credit the target with every source found.
                sums[v] += f64::from(count) * inv_d;
            }
        }
        if !any {
            return depth;
        }
        depth = d;
        core::mem::swap(&mut ws.frontier, &mut ws.next);
    }
}
