// Seeded multi-trial benchmark of decomposition strategies on a random graph.

use trailfuse::io::format_results_csv;
use trailfuse::{random_sparse_graph, run_trials, summarize, BenchArm, BenchSettings, DecompositionStrategy, StrategyKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = random_sparse_graph(400, 0.99, 17)?;
    println!("random graph: {} vertices, {} edges", g.n_vertices(), g.n_edges());

    let arms = vec![
        BenchArm::new(DecompositionStrategy::new(StrategyKind::PseudoTour, 1)),
        BenchArm::new(DecompositionStrategy::new(StrategyKind::PseudoTour, 1)).with_c(0.5),
        BenchArm::new(DecompositionStrategy::new(StrategyKind::MedianTrails, 1)),
        BenchArm::new(DecompositionStrategy::new(StrategyKind::EdgeWise, 1)),
    ];
    let settings = BenchSettings { n_trials: 4, master_seed: 99, ..BenchSettings::default() };
    let results = run_trials(&g, "random400", &arms, &settings);

    for s in summarize(&arms, &results) {
        println!("{:<22} {:>8.1} +- {:<6.1} ({}/{} converged)", s.label, s.mean_steps, s.std_error, s.converged, s.trials);
    }
    print!("{}", format_results_csv(&results[..2]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
