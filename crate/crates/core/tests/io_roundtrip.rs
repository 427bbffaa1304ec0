use proptest::prelude::*;
use trailfuse::io::{
    format_edge_list, format_matrix_market_adjacency, format_trails, format_vector_csv, parse_edge_list,
    parse_matrix_market_adjacency, parse_trails, parse_vector_csv, read_graph, write_matrix_market_adjacency,
};
use trailfuse::{decompose_pseudo_tour, grid_graph, random_sparse_graph, validate_trail_partition, Graph};

proptest! {
    #[test]
    fn matrix_market_reproduces_grids(rows in 1usize..40, cols in 1usize..40) {
        let g = grid_graph(rows, cols);
        let back = parse_matrix_market_adjacency(&format_matrix_market_adjacency(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn matrix_market_then_edge_list_is_identity(n in 2usize..150, seed in any::<u64>()) {
        let g = random_sparse_graph(n, (1.0 - 3.0 / n as f64).clamp(1e-9, 1.0 - 1e-9), seed).unwrap();
        let from_mtx = parse_matrix_market_adjacency(&format_matrix_market_adjacency(&g)).unwrap();
        let from_edges = parse_edge_list(&format_edge_list(&from_mtx)).unwrap();
        prop_assert_eq!(&from_mtx, &g);
        prop_assert_eq!(&from_edges, &g);
    }

    #[test]
    fn vectors_round_trip_bit_for_bit(v in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 0..300)) {
        let back = parse_vector_csv(&format_vector_csv(&v)).unwrap();
        prop_assert_eq!(
            back.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            v.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn trails_round_trip(rows in 2usize..15, cols in 2usize..15, seed in any::<u64>()) {
        let g = grid_graph(rows, cols);
        let ts = decompose_pseudo_tour(&g, seed).unwrap();
        let back = parse_trails(&format_trails(&ts), g.n_vertices()).unwrap();
        prop_assert!(validate_trail_partition(&g, &back).is_valid());
        prop_assert_eq!(back.bind(&g).unwrap(), ts);
    }
}

#[test]
fn entry_order_does_not_change_edge_ids() {
    let a = "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 3\n2 1\n4 3\n3 2\n";
    let b = "%%MatrixMarket matrix coordinate real general\n4 4 6\n1 2 1.0\n3 4 2.5\n2 3 1\n2 1 1\n4 3 7\n3 2 1\n";
    let ga = parse_matrix_market_adjacency(a).unwrap();
    assert_eq!(ga, parse_matrix_market_adjacency(b).unwrap());
    assert_eq!(ga.edges(), &[(0, 1), (1, 2), (2, 3)]);
}

#[test]
fn malformed_matrix_market_is_rejected() {
    let bad = [
        "",
        "4 4 1\n1 2\n",
        "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n",
        "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 3\n2 1\n4 3\n",
        "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 1\n2 1\n4 3\n",
        "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 1\n5 1\n",
        "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 1\n0 1\n",
        "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 1\nx 1\n",
        "%%MatrixMarket matrix coordinate pattern symmetric\n4 3 1\n2 1\n",
        "%%MatrixMarket matrix coordinate pattern symmetric\nfour 4 1\n2 1\n",
    ];
    for text in bad {
        assert!(parse_matrix_market_adjacency(text).is_err(), "accepted {text:?}");
    }
}

#[test]
fn malformed_edge_lists_vectors_and_trails_are_rejected() {
    for text in ["0 1\n1\n", "0 1 2\n", "0 x\n", "1 1\n", "# vertices 2\n0 5\n", "-1 2\n"] {
        assert!(parse_edge_list(text).is_err(), "edge list accepted {text:?}");
    }
    for text in ["1.0\nabc\n", "1.0,2.0\n", "nan\n", "inf\n"] {
        assert!(parse_vector_csv(text).is_err(), "vector accepted {text:?}");
    }
    for text in ["0 1 9\n", "0 a\n", "\u{0}\n"] {
        assert!(parse_trails(text, 4).is_err(), "trails accepted {text:?}");
    }
}

#[test]
fn read_graph_dispatches_on_extension() {
    let dir = tempfile::tempdir().unwrap();
    let g = grid_graph(3, 4);
    let mtx = dir.path().join("g.mtx");
    write_matrix_market_adjacency(&mtx, &g).unwrap();
    let txt = dir.path().join("g.edges");
    std::fs::write(&txt, format_edge_list(&g)).unwrap();
    assert_eq!(read_graph(&mtx).unwrap(), g);
    assert_eq!(read_graph(&txt).unwrap(), g);
    let err = read_graph(dir.path().join("missing.mtx")).unwrap_err();
    assert!(err.to_string().contains("missing.mtx"));
}

#[test]
fn isolated_trailing_vertices_survive() {
    let g = Graph::from_edges(6, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    assert_eq!(parse_matrix_market_adjacency(&format_matrix_market_adjacency(&g)).unwrap(), g);
}
