// Compare trail decompositions of a grid graph.

use trailfuse::{
    grid_graph, odd_degree_vertices, trail_stats, validate_trail_partition, DecompositionStrategy, StrategyKind,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (rows, cols) = (20, 20);
    let g = grid_graph(rows, cols);
    println!("grid {rows}x{cols}: {} vertices, {} edges", g.n_vertices(), g.n_edges());
    println!("odd-degree vertices: {}", odd_degree_vertices(&g).len());

    let kinds = [
        StrategyKind::PseudoTour,
        StrategyKind::MedianTrails,
        StrategyKind::RandomTrails,
        StrategyKind::EdgeWise,
        StrategyKind::GridRowsCols { rows, cols },
    ];
    println!("{:<12} {:>7} {:>5} {:>5} {:>8} {:>10}", "strategy", "trails", "min", "max", "median", "variance");
    for kind in kinds {
        let ts = DecompositionStrategy::new(kind, 42).decompose(&g)?;
        assert!(validate_trail_partition(&g, &ts).is_valid());
        let s = trail_stats(&ts);
        println!(
            "{:<12} {:>7} {:>5} {:>5} {:>8.1} {:>10.1}",
            kind.name(),
            s.count,
            s.min,
            s.max,
            s.median,
            s.variance
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
