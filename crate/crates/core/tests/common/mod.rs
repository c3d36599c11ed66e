//! Slow, obviously-correct reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use interlock_core::corpus::Gender;
use interlock_core::graph::{project, BipartiteGraph, NodeAttrs, ProjectedGraph};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_gender(r: &mut StdRng) -> Gender {
    match r.random_range(0..10) {
        0..=5 => Gender::Male,
        6..=7 => Gender::Female,
        _ => Gender::Missing,
    }
}

pub fn attrs(genders: &[Gender]) -> Vec<NodeAttrs> {
    genders.iter().enumerate().map(|(i, &g)| NodeAttrs::new(i as u32, g)).collect()
}

/// Boards as director lists; sizes vary and may repeat directors.
pub fn random_boards(r: &mut StdRng, n_companies: usize, n_directors: usize, max_size: usize) -> Vec<Vec<u32>> {
    (0..n_companies)
        .map(|_| {
            let s = r.random_range(0..=max_size);
            (0..s).map(|_| r.random_range(0..n_directors as u32)).collect()
        })
        .collect()
}

pub fn projected_from_boards(boards: &[Vec<u32>], genders: &[Gender]) -> ProjectedGraph {
    project(&BipartiteGraph::from_boards(boards, attrs(genders)).unwrap())
}

/// Erdős–Rényi style graph with edge probability `p`.
pub fn random_edges(r: &mut StdRng, n: usize, p: f64) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if r.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn random_graph(r: &mut StdRng, n: usize, p: f64) -> (ProjectedGraph, Vec<(u32, u32)>) {
    let edges = random_edges(r, n, p);
    let genders: Vec<Gender> = (0..n).map(|_| random_gender(r)).collect();
    (ProjectedGraph::from_edges(attrs(&genders), &edges).unwrap(), edges)
}

/// Every pair of distinct directors sharing a board.
pub fn naive_projection(boards: &[Vec<u32>]) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for b in boards {
        for &u in b {
            for &v in b {
                if u < v {
                    out.insert((u, v));
                }
            }
        }
    }
    out
}

pub fn adjacency_matrix(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        a[u as usize][v as usize] = true;
        a[v as usize][u as usize] = true;
    }
    a
}

/// All-pairs hop distances by Floyd–Warshall; `None` when unreachable.
pub fn floyd_warshall(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<Option<u32>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(u, v) in edges {
        if u != v {
            d[u as usize][v as usize] = Some(1);
            d[v as usize][u as usize] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|ij| ik + kj < ij) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Number of shortest paths between every ordered pair, counted by extending
/// paths one hop at a time in order of distance.
pub fn path_counts(n: usize, edges: &[(u32, u32)], dist: &[Vec<Option<u32>>]) -> Vec<Vec<f64>> {
    let adj = adjacency_matrix(n, edges);
    let mut sigma = vec![vec![0.0; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&t| dist[s][t].is_some()).collect();
        order.sort_by_key(|&t| dist[s][t]);
        for &t in &order {
            if t == s {
                sigma[s][t] = 1.0;
                continue;
            }
            let dt = dist[s][t].unwrap();
            sigma[s][t] = (0..n)
                .filter(|&u| adj[u][t] && dist[s][u] == Some(dt - 1))
                .map(|u| sigma[s][u])
                .sum();
        }
    }
    sigma
}

/// Σ over unordered pairs {s,t} not containing v of σ_st(v)/σ_st.
pub fn pair_betweenness(n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
    let dist = floyd_warshall(n, edges);
    let sigma = path_counts(n, edges, &dist);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let Some(st) = dist[s][t] else { continue };
            for (v, bv) in b.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                if let (Some(sv), Some(vt)) = (dist[s][v], dist[v][t]) {
                    if sv + vt == st {
                        *bv += sigma[s][v] * sigma[v][t] / sigma[s][t];
                    }
                }
            }
        }
    }
    b
}

fn bfs(n: usize, adj: &[Vec<usize>], s: usize) -> Vec<Option<u32>> {
    let mut d = vec![None; n];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if d[w].is_none() {
                d[w] = Some(d[u].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    d
}

fn adjacency_lists(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    adj
}

/// Harmonic closeness from one BFS per node.
pub fn bfs_closeness(n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
    let adj = adjacency_lists(n, edges);
    (0..n)
        .map(|s| {
            let d = bfs(n, &adj, s);
            let sum: f64 = (0..n).filter(|&t| t != s).filter_map(|t| d[t]).map(|x| 1.0 / f64::from(x)).sum();
            sum / (n as f64 - 1.0)
        })
        .collect()
}

/// n(n−1) / Σ_{i≠j} 1/d_ij, infinite when no pair is connected.
pub fn bfs_harmonic_apl(n: usize, edges: &[(u32, u32)]) -> f64 {
    let adj = adjacency_lists(n, edges);
    let mut total = 0.0;
    for s in 0..n {
        let d = bfs(n, &adj, s);
        total += (0..n).filter(|&t| t != s).filter_map(|t| d[t]).map(|x| 1.0 / f64::from(x)).sum::<f64>();
    }
    if total == 0.0 {
        f64::INFINITY
    } else {
        (n * (n - 1)) as f64 / total
    }
}

pub fn bfs_diameter(n: usize, edges: &[(u32, u32)]) -> u32 {
    let adj = adjacency_lists(n, edges);
    (0..n).flat_map(|s| bfs(n, &adj, s)).flatten().max().unwrap_or(0)
}

/// Component index per node and component sizes, by BFS flood fill.
pub fn bfs_components(n: usize, edges: &[(u32, u32)]) -> (Vec<usize>, Vec<usize>) {
    let adj = adjacency_lists(n, edges);
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let d = bfs(n, &adj, s);
        let mut size = 0;
        for t in 0..n {
            if d[t].is_some() {
                comp[t] = sizes.len();
                size += 1;
            }
        }
        sizes.push(size);
    }
    (comp, sizes)
}

/// Local clustering by checking every neighbour pair.
pub fn triangle_clustering(n: usize, edges: &[(u32, u32)]) -> Vec<Option<f64>> {
    let adj = adjacency_matrix(n, edges);
    (0..n)
        .map(|v| {
            let nb: Vec<usize> = (0..n).filter(|&u| adj[v][u]).collect();
            let k = nb.len();
            if k < 2 {
                return None;
            }
            let mut links = 0usize;
            for i in 0..k {
                for j in i + 1..k {
                    links += usize::from(adj[nb[i]][nb[j]]);
                }
            }
            Some(2.0 * links as f64 / (k * (k - 1)) as f64)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    (a, b): (f64, f64),
    (fa, fm, fb): (f64, f64, f64),
    whole: f64,
    tol: f64,
    floor: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, (a, m), (fa, flm, fm), left, tol / 2.0, floor, depth - 1)
        + simpson_step(f, (m, b), (fm, frm, fb), right, tol / 2.0, floor, depth - 1)
}

/// Adaptive Simpson quadrature to relative accuracy `rel`, judged against
/// the magnitude of the integrand over the whole interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    // Scale from a coarse 64-panel rule so a bad first estimate cannot
    // make the tolerance unreachable.
    let h = (b - a) / 64.0;
    let scale: f64 = (0..=64).map(|i| f(a + h * i as f64).abs()).sum::<f64>() * h;
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, (a, b), (fa, fm, fb), whole, rel * scale, 1e-3 * f64::EPSILON * scale, 40)
}

/// Two-sided t p-value. With x = √ν·tan θ the t density becomes
/// proportional to cos^(ν−1) θ on (−π/2, π/2).
pub fn t_pvalue_quadrature(t: f64, dof: f64) -> f64 {
    let g = |th: f64| th.cos().powf(dof - 1.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let theta0 = (t.abs() / dof.sqrt()).atan();
    integrate(g, theta0, half_pi, 1e-14) / integrate(g, 0.0, half_pi, 1e-14)
}

/// Upper χ² tail. With x = u² the density is proportional to
/// u^(k−1)·exp(−u²/2) on (0, ∞).
pub fn chi2_pvalue_quadrature(x: f64, dof: f64) -> f64 {
    let g = |u: f64| if u == 0.0 { if dof == 1.0 { 1.0 } else { 0.0 } } else { u.powf(dof - 1.0) * (-0.5 * u * u).exp() };
    let upper = dof.sqrt() + 40.0;
    let u0 = x.sqrt();
    // Split at the mode so the adaptive rule sees the peak.
    let mode = (dof - 1.0).max(0.0).sqrt();
    let total = integrate(g, 0.0, mode, 1e-15) + integrate(g, mode, upper, 1e-15);
    let tail = if u0 < mode {
        integrate(g, u0, mode, 1e-15) + integrate(g, mode, upper, 1e-15)
    } else {
        integrate(g, u0, upper, 1e-15)
    };
    tail / total
}

/// Ranks with ties given their average position.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va * vb).sqrt()
}

pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    pearson(&average_ranks(a), &average_ranks(b))
}
