// Per-trail penalties scaled by trail length.

use trailfuse::{
    adaptive_penalties, blob_signal, build_slack_mapping, decompose_pseudo_tour, grid_graph, AdmmSolver, BlobSpec,
    PenaltyScheme, ProblemInstance, SolverConfig,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = grid_graph(24, 24);
    let ts = decompose_pseudo_tour(&g, 3)?;
    let mapping = build_slack_mapping(&ts, g.n_vertices())?;
    let sig = blob_signal(&g, &BlobSpec { seed: 3, ..BlobSpec::default() })?;
    let problem = ProblemInstance::squared(sig.y, 1.0);

    let rho = adaptive_penalties(&mapping, 1.0, 0.5);
    let (lo, hi) = rho.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    println!("{} trails, rho in [{lo:.3}, {hi:.3}] at c = 0.5", mapping.n_trails());

    for scheme in [PenaltyScheme::Uniform, PenaltyScheme::Adaptive { c: 0.5 }, PenaltyScheme::Adaptive { c: 1.0 }] {
        let report = AdmmSolver::with_scheme(&mapping, &problem, SolverConfig::default(), scheme)?.run()?;
        println!("{scheme:?}: {} steps, objective {:.6}", report.steps, report.objective);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
