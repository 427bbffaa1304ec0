// Recover piecewise-constant blobs on a grid.

use trailfuse::{blob_signal, grid_graph, solve_gfl, BlobSpec, DecompositionStrategy, ProblemInstance, SolverConfig, StrategyKind};

fn rmse(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = grid_graph(30, 30);
    let sig = blob_signal(&g, &BlobSpec { n_blobs: 3, blob_fraction: 0.08, seed: 5, ..BlobSpec::default() })?;
    let problem = ProblemInstance::squared(sig.y.clone(), 1.5);
    let strategy = DecompositionStrategy::new(StrategyKind::GridRowsCols { rows: 30, cols: 30 }, 0);
    let report = solve_gfl(&g, &problem, &strategy, &SolverConfig::default())?.require_converged()?;

    println!("steps {}, objective {:.4}, final alpha {}", report.steps, report.objective, report.final_alpha);
    println!("rmse noisy {:.4}", rmse(&sig.y, &sig.truth));
    println!("rmse fused {:.4}", rmse(&report.beta, &sig.truth));
    for (i, blob) in sig.blobs.iter().enumerate() {
        let mean = blob.iter().map(|&v| report.beta[v]).sum::<f64>() / blob.len() as f64;
        println!("blob {i}: {} vertices, truth {:.3}, estimate {:.3}", blob.len(), sig.truth[blob[0]], mean);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
