// Smoothed proximal gradient against trail ADMM on the same instance.

use trailfuse::{
    blob_signal, grid_graph, solve_gfl, spg_solve, BlobSpec, DecompositionStrategy, ProblemInstance, SolverConfig,
    SpgConfig, StrategyKind,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = grid_graph(16, 16);
    let sig = blob_signal(&g, &BlobSpec { seed: 8, ..BlobSpec::default() })?;
    let lambda = 1.0;

    let admm = solve_gfl(
        &g,
        &ProblemInstance::squared(sig.y.clone(), lambda),
        &DecompositionStrategy::new(StrategyKind::PseudoTour, 8),
        &SolverConfig { tol: 1e-6, ..SolverConfig::default() },
    )?;
    println!("admm: {} steps, objective {:.6}", admm.steps, admm.objective);

    for eps in [1e-2, 1e-4, 1e-6] {
        let spg = spg_solve(&g, &sig.y, lambda, eps, &SpgConfig::default())?;
        println!(
            "spg eps {eps:e}: {} iterations, objective {:.6} (gap {:.2e})",
            spg.iterations,
            spg.objective,
            spg.objective - admm.objective
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
