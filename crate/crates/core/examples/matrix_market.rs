// Load a Matrix Market adjacency matrix, decompose it, write the trails.

use trailfuse::io::{
    format_edge_list, parse_matrix_market_adjacency, parse_trails, parse_vector_csv, format_trails,
};
use trailfuse::{
    solve_with_trails, validate_trail_partition, DecompositionStrategy, ProblemInstance, SolverConfig, StrategyKind,
};

const PETERSEN: &str = "%%MatrixMarket matrix coordinate pattern symmetric
% Petersen graph
10 10 15
2 1
5 1
6 1
3 2
7 2
4 3
8 3
5 4
9 4
10 5
8 6
9 6
9 7
10 7
10 8
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_matrix_market_adjacency(PETERSEN)?;
    println!("{} vertices, {} edges", g.n_vertices(), g.n_edges());
    print!("{}", format_edge_list(&g));

    let ts = DecompositionStrategy::new(StrategyKind::PseudoTour, 1).decompose(&g)?;
    let text = format_trails(&ts);
    print!("{text}");

    // the trail file carries vertices only; validation does not need edge ids
    let back = parse_trails(&text, g.n_vertices())?;
    assert!(validate_trail_partition(&g, &back).is_valid());

    let y = parse_vector_csv("3.0\n2.9\n3.1\n0.1\n-0.2\n0.0\n3.05\n0.05\n-0.1\n0.2\n")?;
    let report = solve_with_trails(&back, &ProblemInstance::squared(y, 0.3), &SolverConfig::default())?;
    println!("beta: {:.3?}", report.beta);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
