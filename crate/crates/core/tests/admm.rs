use proptest::prelude::*;
use trailfuse::{
    blob_signal, build_slack_mapping, decompose_pseudo_tour, grid_graph, random_sparse_graph, solve_gfl,
    verify_tv1d_kkt, AdmmSolver, BlobSpec, DecompositionStrategy, Graph, Loss, PenaltyScheme, PoissonLoss,
    ProblemInstance, SolverConfig, StrategyKind, Tv1dProblem,
};

fn quiet(tol: f64) -> SolverConfig {
    SolverConfig { tol, record_history: false, ..SolverConfig::default() }
}

fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn small_connected() -> impl Strategy<Value = Graph> {
    (3usize..40, any::<u64>()).prop_map(|(n, seed)| {
        let pairs = (n * (n - 1) / 2) as f64;
        let sparsity = (1.0 - (2 * n).min(n * (n - 1) / 2) as f64 / pairs).clamp(1e-12, 1.0 - 1e-12);
        random_sparse_graph(n, sparsity, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimum_does_not_depend_on_the_decomposition(
        g in small_connected(),
        seed in any::<u64>(),
        lambda in 0.05f64..3.0,
        ys in prop::collection::vec(-5.0f64..5.0, 40),
    ) {
        let y = ys[..g.n_vertices()].to_vec();
        let problem = ProblemInstance::squared(y, lambda);
        let betas: Vec<Vec<f64>> = [StrategyKind::PseudoTour, StrategyKind::MedianTrails, StrategyKind::RandomTrails, StrategyKind::EdgeWise]
            .into_iter()
            .map(|k| solve_gfl(&g, &problem, &DecompositionStrategy::new(k, seed), &quiet(1e-7)).unwrap().beta)
            .collect();
        for b in &betas[1..] {
            prop_assert!(inf_dist(&betas[0], b) <= 1e-3);
        }
    }

    #[test]
    fn slack_update_solves_every_trail_exactly(
        g in small_connected(),
        seed in any::<u64>(),
        lambda in 0.05f64..3.0,
        c in 0.0f64..1.0,
        ys in prop::collection::vec(-5.0f64..5.0, 40),
    ) {
        let y = ys[..g.n_vertices()].to_vec();
        let ts = decompose_pseudo_tour(&g, seed).unwrap();
        let mapping = build_slack_mapping(&ts, g.n_vertices()).unwrap();
        let problem = ProblemInstance::squared(y, lambda);
        let config = SolverConfig { vary_penalty: false, ..SolverConfig::default() };
        for scheme in [PenaltyScheme::Uniform, PenaltyScheme::Adaptive { c }] {
            let mut solver = AdmmSolver::with_scheme(&mapping, &problem, config.clone(), scheme).unwrap();
            for _ in 0..15 {
                solver.step().unwrap();
                let st = solver.state();
                for span in mapping.trail_spans() {
                    // after u += A beta - z, the slack targets were z + u
                    let target: Vec<f64> = span.clone().map(|j| st.z[j] + st.u[j]).collect();
                    let w: Vec<f64> = span.clone().map(|j| {
                        let rho = if st.rho.is_empty() { st.alpha } else { st.rho[j] };
                        rho / (2.0 * lambda)
                    }).collect();
                    let p = Tv1dProblem::weighted(target, w);
                    prop_assert!(verify_tv1d_kkt(&p, &st.z[span.clone()], 1e-8).unwrap());
                }
            }
        }
    }
}

#[test]
fn disjoint_components_solve_independently() {
    let left = grid_graph(6, 5);
    let right = random_sparse_graph(25, 0.8, 4).unwrap();
    let offset = left.n_vertices();
    let mut edges = left.edges().to_vec();
    edges.extend(right.edges().iter().map(|&(a, b)| (a + offset, b + offset)));
    let joint = Graph::from_edges(offset + right.n_vertices(), &edges).unwrap();

    let sig = blob_signal(&joint, &BlobSpec { n_blobs: 2, blob_fraction: 0.1, seed: 2, ..BlobSpec::default() }).unwrap();
    let strategy = DecompositionStrategy::new(StrategyKind::EdgeWise, 0);
    let config = quiet(1e-6);
    let both = solve_gfl(&joint, &ProblemInstance::squared(sig.y.clone(), 0.7), &strategy, &config).unwrap();
    let a = solve_gfl(&left, &ProblemInstance::squared(sig.y[..offset].to_vec(), 0.7), &strategy, &config).unwrap();
    let b = solve_gfl(&right, &ProblemInstance::squared(sig.y[offset..].to_vec(), 0.7), &strategy, &config).unwrap();
    assert_eq!(both.components, 2);
    assert_eq!(&both.beta[..offset], &a.beta[..]);
    assert_eq!(&both.beta[offset..], &b.beta[..]);
    assert_eq!(both.steps, a.steps.max(b.steps));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    // 100 x 100 rows and columns give 20000 slacks, enough to run the
    // trail and vertex loops in parallel
    let g = grid_graph(100, 100);
    let sig = blob_signal(&g, &BlobSpec { seed: 9, ..BlobSpec::default() }).unwrap();
    let problem = ProblemInstance::squared(sig.y, 1.0);
    let strategy = DecompositionStrategy::new(StrategyKind::GridRowsCols { rows: 100, cols: 100 }, 0);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| solve_gfl(&g, &problem, &strategy, &SolverConfig::default()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert!(one.converged);
    assert_eq!(one.steps, four.steps);
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&one.beta), bits(&four.beta));
}

#[test]
fn primal_residual_ends_below_tolerance() {
    let g = grid_graph(20, 20);
    let sig = blob_signal(&g, &BlobSpec { seed: 1, ..BlobSpec::default() }).unwrap();
    let problem = ProblemInstance::squared(sig.y, 1.0);
    for kind in [StrategyKind::PseudoTour, StrategyKind::MedianTrails, StrategyKind::EdgeWise] {
        let report = solve_gfl(&g, &problem, &DecompositionStrategy::new(kind, 1), &SolverConfig::default()).unwrap();
        assert!(report.converged);
        let first = report.history.first().unwrap().r_norm;
        let last = report.history.last().unwrap().r_norm;
        assert!(last < first.max(1e-12), "{kind}: r_norm {first} -> {last}");
    }
}

#[test]
fn constant_signal_is_a_fixed_point() {
    let g = grid_graph(5, 7);
    let problem = ProblemInstance::squared(vec![2.5; 35], 3.0);
    let report =
        solve_gfl(&g, &problem, &DecompositionStrategy::new(StrategyKind::PseudoTour, 0), &SolverConfig::default())
            .unwrap();
    assert!(report.converged);
    assert_eq!(report.steps, 1);
    assert_eq!(report.beta, vec![2.5; 35]);
}

#[test]
fn lambda_zero_skips_admm() {
    let g = grid_graph(4, 4);
    let y: Vec<f64> = (0..16).map(|i| i as f64 * 0.3 - 1.0).collect();
    let report = solve_gfl(
        &g,
        &ProblemInstance::squared(y.clone(), 0.0),
        &DecompositionStrategy::new(StrategyKind::PseudoTour, 0),
        &SolverConfig::default(),
    )
    .unwrap();
    assert_eq!(report.beta, y);
    assert_eq!(report.steps, 0);
}

/// Two Poisson counts joined by one edge:
/// unfused b1 = y1 / (1 + lambda), b2 = y2 / (1 - lambda) for y1 > y2, else
/// both at the mean.
fn poisson_pair(y1: f64, y2: f64, lambda: f64) -> [f64; 2] {
    let (hi, lo) = (y1 / (1.0 + lambda), y2 / (1.0 - lambda));
    if lambda < 1.0 && hi > lo {
        [hi, lo]
    } else {
        let m = 0.5 * (y1 + y2);
        [m, m]
    }
}

#[test]
fn poisson_pair_matches_closed_form() {
    let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
    let strategy = DecompositionStrategy::new(StrategyKind::PseudoTour, 0);
    for &(y1, y2, lambda) in &[(9.0, 2.0, 0.2), (9.0, 2.0, 0.6), (5.0, 4.0, 0.3), (3.0, 1.0, 1.5)] {
        let problem = ProblemInstance { y: vec![y1, y2], lambda, loss: Loss::smooth(PoissonLoss) };
        let report = solve_gfl(&g, &problem, &strategy, &quiet(1e-9)).unwrap();
        assert!(report.converged);
        let expected = poisson_pair(y1, y2, lambda);
        assert!(inf_dist(&report.beta, &expected) <= 1e-5, "{:?} vs {:?}", report.beta, expected);
    }
}

#[test]
fn poisson_optimum_does_not_depend_on_the_decomposition() {
    let g = grid_graph(10, 10);
    let truth: Vec<f64> = (0..100).map(|i| if (i % 10) < 5 { 4.0 } else { 10.0 }).collect();
    // deterministic positive pseudo-counts around the truth, so the loss is
    // strictly convex in every coordinate
    let y: Vec<f64> = truth.iter().enumerate().map(|(i, t)| t + ((i * 37) % 7) as f64 - 3.0).collect();
    let problem = ProblemInstance { y, lambda: 0.5, loss: Loss::smooth(PoissonLoss) };
    let betas: Vec<Vec<f64>> = [StrategyKind::PseudoTour, StrategyKind::GridRowsCols { rows: 10, cols: 10 }, StrategyKind::EdgeWise]
        .into_iter()
        .map(|k| solve_gfl(&g, &problem, &DecompositionStrategy::new(k, 3), &quiet(1e-7)).unwrap().require_converged().unwrap().beta)
        .collect();
    assert!(betas[0].iter().all(|&b| b > 0.0));
    for b in &betas[1..] {
        let d = inf_dist(&betas[0], b);
        assert!(d <= 1e-3, "inf-norm difference {d}");
    }
}

#[test]
fn mismatched_observations_are_rejected() {
    let g = grid_graph(3, 3);
    let problem = ProblemInstance::squared(vec![0.0; 8], 1.0);
    let err = solve_gfl(&g, &problem, &DecompositionStrategy::new(StrategyKind::PseudoTour, 0), &SolverConfig::default());
    assert!(err.is_err());
}
