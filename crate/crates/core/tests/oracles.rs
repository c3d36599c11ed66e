mod common;

use common::*;
use interlock_core::corpus::Gender;
use interlock_core::graph::{components, fraction_in_largest};
use interlock_core::metrics::{
    avg_path_length_harmonic, betweenness, density, diameter, harmonic_closeness, local_clustering, BetweennessMode,
};
use interlock_core::nullmodel::{expected_fraction_with_women, monte_carlo_null, mu_null, BoardSizeDistribution};
use interlock_core::stats::special::{chi2_upper, t_two_sided};
use interlock_core::stats::{chi2_normality, welch_t_test};
use rand::Rng;

fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

#[test]
fn projection_matches_clique_union() {
    let mut r = rng(11);
    for _ in 0..60 {
        let (nc, nd) = (r.random_range(1..=30), r.random_range(1..=60));
        let boards = random_boards(&mut r, nc, nd, 8);
        let genders: Vec<Gender> = (0..nd).map(|_| random_gender(&mut r)).collect();
        let pg = projected_from_boards(&boards, &genders);
        let got: Vec<(u32, u32)> = pg.edges().collect();
        let want: Vec<(u32, u32)> = naive_projection(&boards).into_iter().collect();
        assert_eq!(got, want);
        assert_eq!(pg.n(), nd);
    }
}

#[test]
fn exact_betweenness_matches_path_counting() {
    let mut r = rng(12);
    for i in 0..40 {
        let n = r.random_range(2..=40);
        let p = [0.05, 0.1, 0.2, 0.5][i % 4];
        let (pg, edges) = random_graph(&mut r, n, p);
        let got = betweenness(&pg, BetweennessMode::Exact).unwrap();
        let want = pair_betweenness(n, &edges);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-9, "{g} vs {w}");
        }
    }
}

#[test]
fn betweenness_on_projected_boards() {
    let mut r = rng(13);
    for _ in 0..20 {
        let boards = random_boards(&mut r, 15, 40, 6);
        let genders = vec![Gender::Male; 40];
        let pg = projected_from_boards(&boards, &genders);
        let edges: Vec<(u32, u32)> = pg.edges().collect();
        let got = betweenness(&pg, BetweennessMode::Exact).unwrap();
        for (g, w) in got.iter().zip(pair_betweenness(40, &edges)) {
            assert!((g - w).abs() <= 1e-9);
        }
    }
}

#[test]
fn betweenness_with_overlapping_boards() {
    // Few directors on many boards: pairs share several boards and most
    // boards mix single-board and multi-board members.
    let mut r = rng(15);
    for i in 0..30 {
        let nd = r.random_range(3..=25);
        let boards = random_boards(&mut r, [40, 12, 6][i % 3], nd, [3, 5, 8][i % 3]);
        let pg = projected_from_boards(&boards, &vec![Gender::Male; nd]);
        let edges: Vec<(u32, u32)> = pg.edges().collect();
        let got = betweenness(&pg, BetweennessMode::Exact).unwrap();
        for (g, w) in got.iter().zip(pair_betweenness(nd, &edges)) {
            assert!((g - w).abs() <= 1e-9, "{g} vs {w}");
        }
    }
}

#[test]
fn harmonic_metrics_match_bfs() {
    let mut r = rng(14);
    for i in 0..60 {
        let n = r.random_range(2..=60);
        let p = [0.0, 0.02, 0.05, 0.1, 0.3][i % 5];
        let (pg, edges) = random_graph(&mut r, n, p);
        let got = harmonic_closeness(&pg).unwrap();
        for (g, w) in got.iter().zip(bfs_closeness(n, &edges)) {
            assert!(close(*g, w, 1e-12), "{g} vs {w}");
        }
        let apl = avg_path_length_harmonic(&pg).unwrap();
        assert!(close(apl, bfs_harmonic_apl(n, &edges), 1e-12));
        if !edges.is_empty() {
            assert_eq!(diameter(&pg).unwrap(), bfs_diameter(n, &edges));
        }
        let m = edges.len() as f64;
        assert_eq!(density(&pg).unwrap(), 2.0 * m / (n * (n - 1)) as f64);
    }
}

#[test]
fn components_match_flood_fill() {
    let mut r = rng(15);
    for _ in 0..50 {
        let n = r.random_range(1..=80);
        let (pg, edges) = random_graph(&mut r, n, 0.03);
        let lab = components(&pg);
        let (comp, sizes) = bfs_components(n, &edges);
        assert_eq!(lab.count(), sizes.len());
        let largest = *sizes.iter().max().unwrap();
        assert_eq!(lab.largest_size(), largest);
        for u in 0..n {
            for v in 0..n {
                assert_eq!(lab.labels[u] == lab.labels[v], comp[u] == comp[v]);
            }
        }
        // Ties are broken towards the component holding the smallest id.
        let first_largest = (0..n).find(|&u| sizes[comp[u]] == largest).unwrap();
        for u in 0..n {
            assert_eq!(lab.in_largest(u), comp[u] == comp[first_largest]);
        }
        let share = fraction_in_largest(&pg, &lab, None);
        assert_eq!(share.nodes, Some(largest as f64 / n as f64));
    }
}

#[test]
fn clustering_matches_triangle_enumeration() {
    let mut r = rng(16);
    for _ in 0..40 {
        let n = r.random_range(1..=50);
        let (pg, edges) = random_graph(&mut r, n, 0.2);
        let got = local_clustering(&pg);
        for (g, w) in got.iter().zip(triangle_clustering(n, &edges)) {
            match (g, w) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-15),
                (a, b) => assert_eq!(*a, b),
            }
        }
    }
}

#[test]
fn p_values_match_quadrature() {
    for &dof in &[1.0, 2.0, 3.5, 7.0, 15.0, 42.3, 200.0] {
        for &t in &[0.0, 0.3, 1.0, 2.0, 3.3, 6.0] {
            let (got, want) = (t_two_sided(t, dof), t_pvalue_quadrature(t, dof));
            assert!((got - want).abs() < 1e-8, "t={t} dof={dof}: {got} vs {want}");
        }
    }
    for &dof in &[1.0, 2.0, 3.0, 5.5, 10.0, 30.0, 80.0] {
        for &x in &[0.01, 0.5, 1.0, 3.84, 10.0, 40.0, 100.0] {
            let (got, want) = (chi2_upper(x, dof), chi2_pvalue_quadrature(x, dof));
            assert!((got - want).abs() < 1e-8, "x={x} dof={dof}: {got} vs {want}");
        }
    }
}

#[test]
fn welch_reference_values() {
    let r = welch_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    assert!((r.p_value - t_pvalue_quadrature(-1.0, 8.0)).abs() < 1e-6);
    assert!((r.p_value - 0.346_593_507_087_3).abs() < 1e-9);
}

#[test]
fn normality_accepts_quantile_grid_and_rejects_skew() {
    // Standard normal quantiles by bisection on the CDF, scaled to ages.
    let n = 2000;
    let cdf = |z: f64| interlock_core::stats::special::normal_cdf(z);
    let gauss: Vec<f64> = (0..n)
        .map(|i| {
            let q = (i as f64 + 0.5) / n as f64;
            let (mut lo, mut hi) = (-10.0, 10.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if cdf(mid) < q {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            55.0 + 8.0 * 0.5 * (lo + hi)
        })
        .collect();
    assert!(chi2_normality(&gauss, 1.0).unwrap().p_value > 0.5);

    let skewed: Vec<f64> = (0..n).map(|i| 30.0 - 10.0 * (1.0 - (i as f64 + 0.5) / n as f64).ln()).collect();
    assert!(chi2_normality(&skewed, 1.0).unwrap().p_value < 1e-9);
}

#[test]
fn monte_carlo_tracks_analytic_null() {
    let mut r = rng(17);
    for _ in 0..5 {
        let k = r.random_range(1..=8);
        let mut weights: Vec<(u32, f64)> = Vec::new();
        for s in 1..=25u32 {
            if weights.len() < k && r.random_bool(0.4) {
                weights.push((s, r.random_range(0.1..1.0)));
            }
        }
        if weights.is_empty() {
            weights.push((10, 1.0));
        }
        let total: f64 = weights.iter().map(|w| w.1).sum();
        let mut entries: Vec<(u32, f64)> = weights.iter().map(|&(s, w)| (s, w / total)).collect();
        let head: f64 = entries[1..].iter().map(|e| e.1).sum();
        entries[0].1 = 1.0 - head;
        let f = BoardSizeDistribution::new(entries).unwrap();
        let p = r.random_range(0.02..0.5);
        let sim = monte_carlo_null(&f, p, 200_000, r.random()).unwrap();
        let q = expected_fraction_with_women(&f, p).unwrap();
        assert!((sim.fraction_with_women - q).abs() <= 4.0 * sim.fraction_se);
        let mu = mu_null(&f, p).unwrap();
        let (sim_mu, se) = (sim.mu.unwrap(), sim.mu_se.unwrap());
        assert!(sim_mu == mu || (sim_mu - mu).abs() <= 4.0 * se);
    }
}
