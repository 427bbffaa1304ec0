//! Graph-fused lasso by trail decomposition.
//!
//! The graph-fused lasso estimates a signal `beta` on the vertices of a graph
//! from noisy observations `y`,
//!
//! ```text
//! minimize  0.5 * sum_i (y_i - beta_i)^2 + lambda * sum_{(r, s) in E} |beta_r - beta_s|
//! ```
//!
//! The edge set is partitioned into trails (walks that never repeat an edge),
//! and ADMM splits the problem into a cheap per-vertex update and one exact
//! 1D fused-lasso solve per trail.
//!
//! ```
//! use trailfuse::{grid_graph, solve_gfl, DecompositionStrategy, ProblemInstance, SolverConfig, StrategyKind};
//!
//! let g = grid_graph(4, 4);
//! let y: Vec<f64> = (0..16).map(|i| if i < 8 { 0.0 } else { 3.0 }).collect();
//! let problem = ProblemInstance::squared(y, 0.5);
//! let strategy = DecompositionStrategy::new(StrategyKind::PseudoTour, 7);
//! let report = solve_gfl(&g, &problem, &strategy, &SolverConfig::default()).unwrap();
//! assert!(report.converged);
//! ```

pub mod admm;
pub mod bench;
pub mod decompose;
pub mod generators;
pub mod graph;
pub mod io;
pub mod loss;
pub mod spg;
pub mod tv1d;

pub use admm::{
    adaptive_penalties, build_slack_mapping, gfl_objective, solve_gfl, solve_with_trails, AdmmSolver, AdmmState,
    IterationRecord, PenaltyScheme, ProblemInstance, Residuals, SlackMapping, SolveReport, SolverConfig,
    SolverError,
};
pub use bench::{
    blob_signal, run_trials, summarize, trail_halving_experiment, trial_seed, BenchArm, BenchError, BenchSettings,
    BlobSignal, BlobSpec,
};
pub use decompose::{
    decompose_edge_wise, decompose_grid_rows_cols, decompose_median_trails, decompose_pseudo_tour,
    decompose_random_trails, halve_trails, trail_stats, DecompositionError, DecompositionStrategy, StrategyKind,
    TrailStats,
};
pub use generators::{grid_graph, random_sparse_graph, GeneratorError};
pub use graph::{
    connected_components, eulerian_circuit, eulerian_trail, odd_degree_vertices, shortest_path,
    validate_trail_partition, Graph, GraphError, Trail, TrailSet, ValidationReport, Violation,
};
pub use io::{IoError, TrialResult};
pub use loss::{Loss, LogisticLoss, NewtonConfig, PoissonLoss, SmoothLoss};
pub use spg::{spg_solve, EdgeDiffMatrix, SpgConfig, SpgError, SpgReport};
pub use tv1d::{solve_tv1d, verify_tv1d_kkt, Tv1dError, Tv1dProblem, Weights};

/// Any error the library can return.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Spg(#[from] SpgError),
    #[error(transparent)]
    Tv1d(#[from] Tv1dError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Bind(#[from] graph::BindError),
}
