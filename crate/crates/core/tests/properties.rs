mod common;

use std::collections::BTreeMap;

use common::attrs;
use interlock_core::corpus::{resolve_identity, CompanyRow, Corpus, Gender, RawDirectorRow};
use interlock_core::graph::{components, gender_subgraph, project, BipartiteGraph, NodeAttrs, ProjectedGraph};
use interlock_core::metrics::{
    avg_path_length_harmonic, betweenness, degree_stats, harmonic_closeness, local_clustering, BetweennessMode,
};
use interlock_core::nullmodel::{expected_fraction_with_women, mu_null, prob_at_least_one, BoardSizeDistribution};
use interlock_core::stats::{chi2_two_proportion, proportions_by, welch_t_test, GroupKey};
use proptest::prelude::*;

fn gender() -> impl Strategy<Value = Gender> {
    prop_oneof![Just(Gender::Male), Just(Gender::Female), Just(Gender::Missing)]
}

fn raw_rows() -> impl Strategy<Value = Vec<RawDirectorRow>> {
    let row = (0..4usize, 0..5usize, gender(), prop::option::of(40u32..43));
    prop::collection::vec(row, 0..40).prop_map(|rows| {
        rows.into_iter()
            .map(|(c, n, g, a)| RawDirectorRow::new(&format!("C{c}"), ["Ann", "Bo", " Cy", "Cy", "Di"][n], g, a))
            .collect()
    })
}

fn companies() -> Vec<CompanyRow> {
    ["SE", "SE", "JP", "UA"].iter().enumerate().map(|(i, c)| CompanyRow::new(&format!("C{i}")).with_country(c)).collect()
}

fn boards() -> impl Strategy<Value = (Vec<Vec<u32>>, Vec<Gender>)> {
    (1usize..25).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(0..n as u32, 0..7), 0..12),
            prop::collection::vec(gender(), n),
        )
    })
}

fn graph() -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    (2usize..25).prop_flat_map(|n| {
        let edge = (0..n as u32, 0..n as u32).prop_filter("loop", |(u, v)| u != v);
        (Just(n), prop::collection::vec(edge, 0..60))
    })
}

fn build(n: usize, edges: &[(u32, u32)]) -> ProjectedGraph {
    ProjectedGraph::from_edges(attrs(&vec![Gender::Male; n]), edges).unwrap()
}

fn partition(ids: &[u32]) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (row, &id) in ids.iter().enumerate() {
        classes.entry(id).or_default().push(row);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn identity_is_exact_match_equivalence(rows in raw_rows()) {
        let ids = resolve_identity(&rows);
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                let same = rows[i].name.trim() == rows[j].name.trim()
                    && rows[i].gender == rows[j].gender
                    && rows[i].age == rows[j].age;
                prop_assert_eq!(ids[i] == ids[j], same);
            }
        }
    }

    #[test]
    fn identity_ignores_row_order(rows in raw_rows(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let mut r = common::rng(seed);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut r);
        let shuffled: Vec<RawDirectorRow> = order.iter().map(|&i| rows[i].clone()).collect();
        let ids = resolve_identity(&rows);
        let moved = resolve_identity(&shuffled);
        // Ids are ranks of the key, so they survive reordering unchanged.
        for (k, &i) in order.iter().enumerate() {
            prop_assert_eq!(moved[k], ids[i]);
        }
        prop_assert_eq!(partition(&ids).len(), partition(&moved).len());
    }

    #[test]
    fn corpus_is_consistent(rows in raw_rows()) {
        let n_rows = rows.len();
        let ing = Corpus::build(companies(), rows).unwrap();
        let c = &ing.corpus;
        c.check_integrity().unwrap();
        let collapsed = ing.diagnostics.iter().filter(|d| !d.kind.is_rejection() && matches!(d.kind, interlock_core::corpus::DiagnosticKind::DuplicateSeat)).count();
        let board_total: usize = c.companies.iter().map(|x| x.board.len()).sum();
        let seat_total: usize = c.directors.iter().map(|d| d.seats.len()).sum();
        prop_assert_eq!(board_total, seat_total);
        prop_assert_eq!(board_total, n_rows - ing.rejected_rows() - collapsed);
        for (ci, comp) in c.companies.iter().enumerate() {
            for &d in &comp.board {
                prop_assert!(c.directors[d as usize].seats.contains(&(ci as u32)));
            }
        }
    }

    #[test]
    fn country_rows_add_up(rows in raw_rows()) {
        let c = Corpus::build(companies(), rows).unwrap().corpus;
        let table = proportions_by(&c, GroupKey::Country);
        let seats: u64 = table.iter().map(|r| r.n_seats).sum();
        let women: u64 = table.iter().map(|r| r.female_seats).sum();
        let directors: u64 = table.iter().map(|r| r.n_directors).sum();
        prop_assert_eq!(seats as usize, c.total_seats());
        prop_assert_eq!(directors as usize, c.directors.len());
        let female_seats = c.companies.iter().flat_map(|x| &x.board).filter(|&&d| c.gender_of(d) == Gender::Female).count();
        prop_assert_eq!(women as usize, female_seats);
        for r in &table {
            prop_assert!((0.0..=1.0).contains(&r.seat_proportion));
            prop_assert!(r.female_seats <= r.n_seats);
        }
        if seats > 0 {
            let weighted: f64 = table.iter().map(|r| r.seat_proportion * r.n_seats as f64).sum::<f64>() / seats as f64;
            prop_assert!((weighted - women as f64 / seats as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_edges_have_witnesses((boards, genders) in boards()) {
        let bg = BipartiteGraph::from_boards(&boards, attrs(&genders)).unwrap();
        let pg = project(&bg);
        for (u, v) in pg.edges() {
            prop_assert!(boards.iter().any(|b| b.contains(&u) && b.contains(&v)));
        }
        for u in 0..pg.n() {
            let bound: usize = bg.companies_of(u).iter().map(|&c| bg.board(c as usize).len() - 1).sum();
            prop_assert!(pg.degree(u) <= bound);
        }
        let degrees = degree_stats(&pg).degrees;
        prop_assert_eq!(degrees.iter().map(|&d| d as usize).sum::<usize>(), 2 * pg.edge_count());
    }

    #[test]
    fn gender_subgraphs_are_disjoint((boards, genders) in boards()) {
        let pg = project(&BipartiteGraph::from_boards(&boards, attrs(&genders)).unwrap());
        let m = gender_subgraph(&pg, Gender::Male).unwrap();
        let f = gender_subgraph(&pg, Gender::Female).unwrap();
        let orig = |g: &ProjectedGraph, u: u32| g.attrs()[u as usize].director_id;
        for sub in [&m, &f] {
            for (u, v) in sub.edges() {
                prop_assert!(pg.has_edge(orig(sub, u) as usize, orig(sub, v)));
            }
        }
        for a in m.attrs() {
            prop_assert!(f.attrs().iter().all(|b| b.director_id != a.director_id));
        }
    }

    #[test]
    fn one_board_directors_have_unit_clustering((boards, genders) in boards()) {
        let bg = BipartiteGraph::from_boards(&boards, attrs(&genders)).unwrap();
        let pg = project(&bg);
        let c = local_clustering(&pg);
        for u in 0..pg.n() {
            if bg.companies_of(u).len() == 1 && pg.degree(u) >= 2 {
                prop_assert_eq!(c[u], Some(1.0));
            }
        }
    }

    #[test]
    fn metrics_survive_relabeling((n, edges) in graph(), seed in any::<u64>()) {
        let mut perm: Vec<u32> = (0..n as u32).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut common::rng(seed));
        let moved: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (perm[u as usize], perm[v as usize])).collect();
        let (a, b) = (build(n, &edges), build(n, &moved));
        let (ca, cb) = (components(&a), components(&b));
        prop_assert_eq!(ca.count(), cb.count());
        prop_assert_eq!(ca.largest_size(), cb.largest_size());
        let (ba, bb) = (betweenness(&a, BetweennessMode::Exact).unwrap(), betweenness(&b, BetweennessMode::Exact).unwrap());
        let (ha, hb) = (harmonic_closeness(&a).unwrap(), harmonic_closeness(&b).unwrap());
        let (la, lb) = (local_clustering(&a), local_clustering(&b));
        for u in 0..n {
            let v = perm[u] as usize;
            prop_assert_eq!(ca.labels[u] == ca.labels[0], cb.labels[v] == cb.labels[perm[0] as usize]);
            prop_assert!((ba[u] - bb[v]).abs() <= 1e-9 * ba[u].max(1.0));
            prop_assert!((ha[u] - hb[v]).abs() <= 1e-12);
            prop_assert_eq!(la[u].map(|x| (x * 1e12).round()), lb[v].map(|x| (x * 1e12).round()));
        }
        let (pa, pb) = (avg_path_length_harmonic(&a).unwrap(), avg_path_length_harmonic(&b).unwrap());
        prop_assert!(pa == pb || (pa - pb).abs() <= 1e-12 * pa);
    }

    #[test]
    fn adding_an_edge_never_hurts_closeness((n, edges) in graph(), u in 0u32..25, v in 0u32..25) {
        let (u, v) = (u % n as u32, v % n as u32);
        prop_assume!(u != v);
        let before = build(n, &edges);
        let mut more = edges.clone();
        more.push((u, v));
        let after = build(n, &more);
        let (hb, ha) = (harmonic_closeness(&before).unwrap(), harmonic_closeness(&after).unwrap());
        for w in 0..n {
            prop_assert!(ha[w] >= hb[w] - 1e-15);
        }
        let lab = components(&before);
        if lab.labels[u as usize] != lab.labels[v as usize] {
            prop_assert!(avg_path_length_harmonic(&after).unwrap() < avg_path_length_harmonic(&before).unwrap());
        }
    }

    #[test]
    fn tree_betweenness_counts_interior_nodes(parents in prop::collection::vec(any::<prop::sample::Index>(), 1..40)) {
        let n = parents.len() + 1;
        let edges: Vec<(u32, u32)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1) as u32, i as u32 + 1)).collect();
        let pg = build(n, &edges);
        let total: f64 = betweenness(&pg, BetweennessMode::Exact).unwrap().iter().sum();
        let dist = common::floyd_warshall(n, &edges);
        let mut interior = 0u64;
        for s in 0..n {
            for t in s + 1..n {
                interior += u64::from(dist[s][t].unwrap() - 1);
            }
        }
        prop_assert!((total - interior as f64).abs() <= 1e-9 * (interior as f64).max(1.0));
    }

    #[test]
    fn sampled_with_every_source_is_exact((n, edges) in graph(), seed in any::<u64>()) {
        let pg = build(n, &edges);
        let exact = betweenness(&pg, BetweennessMode::Exact).unwrap();
        let full = betweenness(&pg, BetweennessMode::Sampled { k: n, seed }).unwrap();
        for (a, b) in exact.iter().zip(&full) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn prob_is_monotone(p in 0.0f64..1.0, q in 0.0f64..1.0, s in 1u32..60, t in 1u32..60) {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        let (s, t) = if s <= t { (s, t) } else { (t, s) };
        prop_assert!(prob_at_least_one(p, s).unwrap() <= prob_at_least_one(q, s).unwrap());
        prop_assert!(prob_at_least_one(p, s).unwrap() <= prob_at_least_one(p, t).unwrap());
    }

    #[test]
    fn null_model_bounds(weights in prop::collection::btree_map(1u32..41, 1u64..50, 1..10), p in 0.001f64..0.999) {
        let f = BoardSizeDistribution::from_counts(&weights).unwrap();
        let q = expected_fraction_with_women(&f, p).unwrap();
        let lo = prob_at_least_one(p, f.min_size()).unwrap();
        let hi = prob_at_least_one(p, f.max_size()).unwrap();
        prop_assert!(lo - 1e-15 <= q && q <= hi + 1e-15);
        prop_assert!(mu_null(&f, p).unwrap() >= f.mean());
    }

    #[test]
    fn welch_is_antisymmetric(a in prop::collection::vec(-50.0f64..50.0, 2..20), b in prop::collection::vec(-50.0f64..50.0, 2..20)) {
        let (ab, ba) = (welch_t_test(&a, &b), welch_t_test(&b, &a));
        if let (Ok(ab), Ok(ba)) = (ab, ba) {
            prop_assert_eq!(ab.statistic, -ba.statistic);
            prop_assert_eq!(ab.p_value, ba.p_value);
            prop_assert!((0.0..=1.0).contains(&ab.p_value));
        }
    }

    #[test]
    fn chi2_scales_with_counts(sa in 0u64..30, na in 1u64..30, sb in 0u64..30, nb in 1u64..30, k in 2u64..5) {
        let (sa, sb) = (sa.min(na), sb.min(nb));
        if let Ok(r) = chi2_two_proportion(sa, na, sb, nb) {
            let swapped = chi2_two_proportion(sb, nb, sa, na).unwrap();
            prop_assert!((r.statistic - swapped.statistic).abs() <= 1e-12 * r.statistic.max(1.0));
            let scaled = chi2_two_proportion(k * sa, k * na, k * sb, k * nb).unwrap();
            prop_assert!(scaled.statistic >= r.statistic);
            prop_assert!((scaled.statistic - k as f64 * r.statistic).abs() <= 1e-9 * scaled.statistic.max(1.0));
        }
    }
}

#[test]
fn node_attrs_keep_original_ids() {
    let pg = ProjectedGraph::from_edges(
        vec![NodeAttrs::new(0, Gender::Female), NodeAttrs::new(1, Gender::Male), NodeAttrs::new(2, Gender::Female)],
        &[(0, 1), (0, 2)],
    )
    .unwrap();
    let f = gender_subgraph(&pg, Gender::Female).unwrap();
    assert_eq!(f.attrs().iter().map(|a| a.director_id).collect::<Vec<_>>(), vec![0, 2]);
    assert_eq!(f.edge_count(), 1);
}
