use proptest::prelude::*;
use trailfuse::bench::{mean_and_std_error, ArmSummary};
use trailfuse::spg::{smoothed_gradient, truncate};
use trailfuse::{
    blob_signal, connected_components, gfl_objective, grid_graph, random_sparse_graph, run_trials, solve_gfl,
    spg_solve, summarize, trial_seed, BenchArm, BenchSettings, BlobSpec, DecompositionStrategy, EdgeDiffMatrix, Loss,
    ProblemInstance, SolverConfig, SpgConfig, StrategyKind,
};

proptest! {
    #[test]
    fn truncate_stays_in_the_unit_box(v in prop::collection::vec(-1e6f64..1e6, 0..100)) {
        let t = truncate(&v);
        prop_assert_eq!(t.len(), v.len());
        for (a, b) in v.iter().zip(&t) {
            prop_assert!((-1.0..=1.0).contains(b));
            if a.abs() <= 1.0 {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn random_graphs_are_connected_and_seeded(n in 2usize..200, seed in any::<u64>()) {
        let sparsity = (1.0 - 2.5 / n as f64).clamp(1e-9, 1.0 - 1e-9);
        let g = random_sparse_graph(n, sparsity, seed).unwrap();
        prop_assert_eq!(connected_components(&g).len(), 1);
        prop_assert_eq!(g, random_sparse_graph(n, sparsity, seed).unwrap());
    }

    #[test]
    fn blobs_are_connected_balls_of_the_requested_size(side in 6usize..30, fraction in 0.01f64..0.2, seed in any::<u64>()) {
        let g = grid_graph(side, side);
        let spec = BlobSpec { n_blobs: 3, blob_fraction: fraction, seed, ..BlobSpec::default() };
        let sig = blob_signal(&g, &spec).unwrap();
        let size = (fraction * g.n_vertices() as f64).ceil() as usize;
        for blob in &sig.blobs {
            prop_assert_eq!(blob.len(), size);
            let sub: Vec<(usize, usize)> = g.edges().iter().copied().filter(|(a, b)| blob.contains(a) && blob.contains(b)).collect();
            let local = |v: usize| blob.iter().position(|&x| x == v).unwrap();
            let h = trailfuse::Graph::from_edges(blob.len(), &sub.iter().map(|&(a, b)| (local(a), local(b))).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(connected_components(&h).len(), 1);
        }
        prop_assert_eq!(sig, blob_signal(&g, &spec).unwrap());
    }
}

#[test]
fn spg_smoothed_gradient_is_below_tolerance_at_termination() {
    let g = grid_graph(12, 12);
    let sig = blob_signal(&g, &BlobSpec { seed: 6, ..BlobSpec::default() }).unwrap();
    let eps = 1e-4;
    let report = spg_solve(&g, &sig.y, 1.0, eps, &SpgConfig::default()).unwrap();
    assert!(report.converged && !report.stalled);
    let d = EdgeDiffMatrix::scaled(&g, 1.0);
    let mu = eps / g.n_edges() as f64;
    let grad = smoothed_gradient(&d, &sig.y, &report.beta, mu);
    let norm = grad.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(norm <= eps, "smoothed gradient inf-norm {norm:e} after {} iterations, tolerance {eps:e}", report.iterations);
}

#[test]
fn spg_smoothed_objective_never_increases() {
    let g = grid_graph(9, 9);
    let sig = blob_signal(&g, &BlobSpec { seed: 4, ..BlobSpec::default() }).unwrap();
    let mut previous = f64::INFINITY;
    for iters in 1..60 {
        let r = spg_solve(&g, &sig.y, 1.0, 1e-3, &SpgConfig { max_iters: iters, ..SpgConfig::default() }).unwrap();
        assert!(r.smoothed_objective <= previous, "iteration {iters}: {} > {previous}", r.smoothed_objective);
        previous = r.smoothed_objective;
        if r.converged {
            break;
        }
    }
}

#[test]
fn spg_objective_is_above_the_admm_optimum() {
    let g = grid_graph(10, 10);
    let sig = blob_signal(&g, &BlobSpec { seed: 2, ..BlobSpec::default() }).unwrap();
    let admm = solve_gfl(
        &g,
        &ProblemInstance::squared(sig.y.clone(), 1.0),
        &DecompositionStrategy::new(StrategyKind::PseudoTour, 2),
        &SolverConfig { tol: 1e-8, ..SolverConfig::default() },
    )
    .unwrap();
    for eps in [1e-2, 1e-4] {
        let spg = spg_solve(&g, &sig.y, 1.0, eps, &SpgConfig::default()).unwrap();
        assert_eq!(spg.objective, gfl_objective(&g, &sig.y, &spg.beta, 1.0, &Loss::Squared));
        assert!(spg.objective >= admm.objective - 1e-9);
    }
}

#[test]
fn trials_are_reproducible_and_summaries_match_a_direct_recomputation() {
    let g = grid_graph(12, 12);
    let arms = vec![
        BenchArm::new(DecompositionStrategy::new(StrategyKind::PseudoTour, 1)),
        BenchArm::new(DecompositionStrategy::new(StrategyKind::RandomTrails, 1)).with_c(0.5),
    ];
    let settings = BenchSettings { n_trials: 4, master_seed: 8, ..BenchSettings::default() };
    let a = run_trials(&g, "g", &arms, &settings);
    let b = run_trials(&g, "g", &arms, &settings);
    let key = |r: &trailfuse::TrialResult| (r.strategy.clone(), r.trial, r.seed, r.steps, r.objective.to_bits());
    assert_eq!(a.iter().map(key).collect::<Vec<_>>(), b.iter().map(key).collect::<Vec<_>>());
    assert!(a.iter().all(|r| r.seed == trial_seed(8, r.trial)));

    let sums: Vec<ArmSummary> = summarize(&arms, &a);
    for (arm, s) in arms.iter().zip(&sums) {
        let steps: Vec<f64> = a.iter().filter(|r| r.strategy == arm.label).map(|r| r.steps as f64).collect();
        let mean = steps.iter().sum::<f64>() / steps.len() as f64;
        let var = steps.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (steps.len() - 1) as f64;
        assert!((s.mean_steps - mean).abs() < 1e-12);
        assert!((s.std_error - (var / steps.len() as f64).sqrt()).abs() < 1e-12);
        assert_eq!(mean_and_std_error(&steps).0, s.mean_steps);
    }
}
