use alloc::vec;
use alloc::vec::Vec;

use crate::graph::ProjectedGraph;
use crate::par::{map_chunks, MAX_CHUNKS};

/// Local clustering coefficient `2 L_v / (d_v (d_v - 1))`, where `L_v` is the
/// number of edges among the neighbours of `v`; `None` when `d_v < 2`.
pub fn local_clustering(pg: &ProjectedGraph) -> Vec<Option<f64>> {
    let n = pg.n();
    let parts = map_chunks(n, 4 * MAX_CHUNKS, |range| {
        let mut stamp = vec![0u32; n];
        range
            .map(|v| {
                let d = pg.degree(v);
                if d < 2 {
                    return None;
                }
                let mark = v as u32 + 1;
                for &u in pg.neighbors(v) {
                    stamp[u as usize] = mark;
                }
                let mut links = 0u64;
                for &u in pg.neighbors(v) {
                    links += pg
                        .neighbors(u as usize)
                        .iter()
                        .filter(|&&w| w > u && stamp[w as usize] == mark)
                        .count() as u64;
                }
                Some(2.0 * links as f64 / (d as f64 * (d - 1) as f64))
            })
            .collect::<Vec<_>>()
    });
    parts.into_iter().flatten().collect()
}
