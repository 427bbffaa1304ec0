use proptest::prelude::*;
use trailfuse::decompose::DEFAULT_PAIR_SAMPLE_CAP;
use trailfuse::{
    decompose_edge_wise, decompose_grid_rows_cols, decompose_median_trails, decompose_pseudo_tour,
    decompose_random_trails, grid_graph, halve_trails, odd_degree_vertices, random_sparse_graph, trail_stats,
    validate_trail_partition, DecompositionStrategy, Graph, StrategyKind,
};

fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..120, 0.0f64..3.0, any::<u64>()).prop_map(|(n, extra, seed)| {
        let pairs = (n * (n - 1) / 2) as f64;
        let target = ((n - 1) as f64 * (1.0 + extra)).min(pairs);
        let sparsity = (1.0 - target / pairs).clamp(1e-12, 1.0 - 1e-12);
        random_sparse_graph(n, sparsity, seed).unwrap()
    })
}

fn k_of(g: &Graph) -> usize {
    odd_degree_vertices(g).len() / 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_strategy_partitions_connected_graphs(g in connected_graph(), seed in any::<u64>()) {
        for kind in [StrategyKind::PseudoTour, StrategyKind::MedianTrails, StrategyKind::RandomTrails, StrategyKind::EdgeWise] {
            let ts = DecompositionStrategy::new(kind, seed).decompose(&g).unwrap();
            let report = validate_trail_partition(&g, &ts);
            prop_assert!(report.is_valid(), "{}: {:?}", kind, report.violations);
        }
    }

    #[test]
    fn pseudo_tour_count_is_minimal(g in connected_graph(), seed in any::<u64>()) {
        let ts = decompose_pseudo_tour(&g, seed).unwrap();
        prop_assert_eq!(ts.len(), k_of(&g).max(1));
    }

    #[test]
    fn path_strategies_respect_the_lower_bound(g in connected_graph(), seed in any::<u64>()) {
        let lower = k_of(&g).max(1);
        prop_assert!(decompose_median_trails(&g, seed, DEFAULT_PAIR_SAMPLE_CAP).unwrap().len() >= lower);
        prop_assert!(decompose_random_trails(&g, seed, DEFAULT_PAIR_SAMPLE_CAP).unwrap().len() >= lower);
    }

    #[test]
    fn fixed_seed_is_reproducible(g in connected_graph(), seed in any::<u64>()) {
        for kind in [StrategyKind::PseudoTour, StrategyKind::MedianTrails, StrategyKind::RandomTrails] {
            let s = DecompositionStrategy::new(kind, seed);
            prop_assert_eq!(s.decompose(&g).unwrap(), s.decompose(&g).unwrap());
        }
    }

    #[test]
    fn grid_strategies_partition_grids(rows in 2usize..30, cols in 2usize..30, seed in any::<u64>()) {
        let g = grid_graph(rows, cols);
        let rc = decompose_grid_rows_cols(rows, cols);
        prop_assert!(validate_trail_partition(&g, &rc).is_valid());
        let halved = halve_trails(&rc);
        prop_assert!(validate_trail_partition(&g, &halved).is_valid());
        let ts = decompose_pseudo_tour(&g, seed).unwrap();
        prop_assert_eq!(ts.len(), k_of(&g).max(1));
        prop_assert!(validate_trail_partition(&g, &ts).is_valid());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn median_trails_are_less_spread_than_pseudo_tour_on_grids(n in 20usize..=30, seed in any::<u64>()) {
        let g = grid_graph(n, n);
        let median = trail_stats(&decompose_median_trails(&g, seed, DEFAULT_PAIR_SAMPLE_CAP).unwrap());
        let tour = trail_stats(&decompose_pseudo_tour(&g, seed).unwrap());
        prop_assert!(
            median.variance <= tour.variance,
            "{n}x{n}: median-trails variance {} > pseudo-tour variance {}",
            median.variance,
            tour.variance
        );
    }
}

#[test]
fn edge_wise_is_one_trail_per_edge() {
    let g = grid_graph(7, 9);
    let ts = decompose_edge_wise(&g);
    assert_eq!(ts.len(), g.n_edges());
    assert!(ts.lengths().iter().all(|&l| l == 1));
    assert!(validate_trail_partition(&g, &ts).is_valid());
}

#[test]
fn grid_rows_cols_on_large_grid_halved_three_times() {
    let g = grid_graph(256, 256);
    let mut ts = decompose_grid_rows_cols(256, 256);
    for _ in 0..3 {
        ts = halve_trails(&ts);
    }
    assert_eq!(ts.len(), 512 * 8);
    assert!(validate_trail_partition(&g, &ts).is_valid());
}

#[test]
fn small_graph_counts() {
    let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    assert_eq!(decompose_pseudo_tour(&c4, 0).unwrap().len(), 1);
    let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    assert_eq!(decompose_pseudo_tour(&path, 0).unwrap().len(), 1);
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let ts = decompose_pseudo_tour(&k4, 5).unwrap();
    assert_eq!(ts.len(), 2);
    assert!(validate_trail_partition(&k4, &ts).is_valid());
}
