//! Seeded benchmark harness: blob signals on graphs, multi-trial strategy
//! comparisons and the trail-halving experiment.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use thiserror::Error;

use crate::admm::{solve_gfl, solve_with_trails, ProblemInstance, SolverConfig, SolverError};
use crate::decompose::{decompose_grid_rows_cols, halve_trails, DecompositionStrategy};
use crate::generators::grid_graph;
use crate::graph::Graph;
use crate::io::TrialResult;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("{n_blobs} blobs of {blob_size} vertices do not fit in {n_vertices} vertices")]
    BlobsDontFit { n_blobs: usize, blob_size: usize, n_vertices: usize },
    #[error("invalid blob specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub n_blobs: usize,
    /// Fraction of the vertices in each blob.
    pub blob_fraction: f64,
    /// Per-blob means; drawn from U[-5, 5] when `None`.
    pub means: Option<Vec<f64>>,
    pub noise_sd: f64,
    pub seed: u64,
}

impl Default for BlobSpec {
    fn default() -> Self {
        Self { n_blobs: 4, blob_fraction: 0.05, means: None, noise_sd: 1.0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlobSignal {
    pub y: Vec<f64>,
    pub truth: Vec<f64>,
    /// Vertex sets of the blobs, in claim order.
    pub blobs: Vec<Vec<usize>>,
}

/// Zero background plus `n_blobs` BFS balls, each grown from a random
/// unclaimed vertex through unclaimed vertices, each with its own mean.
/// Gaussian noise is added on top.
pub fn blob_signal(g: &Graph, spec: &BlobSpec) -> Result<BlobSignal, BenchError> {
    let n = g.n_vertices();
    if spec.n_blobs > 0 && !(spec.blob_fraction > 0.0 && spec.blob_fraction * spec.n_blobs as f64 <= 1.0) {
        return Err(BenchError::InvalidSpec(format!(
            "blob_fraction {} with {} blobs",
            spec.blob_fraction, spec.n_blobs
        )));
    }
    if !(spec.noise_sd >= 0.0) {
        return Err(BenchError::InvalidSpec(format!("noise_sd = {}", spec.noise_sd)));
    }
    if let Some(m) = &spec.means {
        if m.len() != spec.n_blobs {
            return Err(BenchError::InvalidSpec(format!("{} means for {} blobs", m.len(), spec.n_blobs)));
        }
    }
    let blob_size = (spec.blob_fraction * n as f64).ceil() as usize;
    let dont_fit = || BenchError::BlobsDontFit { n_blobs: spec.n_blobs, blob_size, n_vertices: n };
    if spec.n_blobs * blob_size > n {
        return Err(dont_fit());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let means: Vec<f64> = match &spec.means {
        Some(m) => m.clone(),
        None => (0..spec.n_blobs).map(|_| rng.gen_range(-5.0..=5.0)).collect(),
    };
    let mut claimed = vec![false; n];
    let mut truth = vec![0.0; n];
    let mut blobs = Vec::with_capacity(spec.n_blobs);
    for &mean in &means {
        let mut unclaimed: Vec<usize> = (0..n).filter(|&v| !claimed[v]).collect();
        unclaimed.shuffle(&mut rng);
        // A seed whose unclaimed region is too small is skipped.
        let ball = unclaimed
            .iter()
            .find_map(|&s| bfs_ball(g, s, blob_size, &claimed))
            .ok_or_else(dont_fit)?;
        for &v in &ball {
            claimed[v] = true;
            truth[v] = mean;
        }
        blobs.push(ball);
    }

    let y = if spec.noise_sd == 0.0 {
        truth.clone()
    } else {
        let noise = Normal::new(0.0, spec.noise_sd).expect("finite sd");
        truth.iter().map(|&t| t + noise.sample(&mut rng)).collect()
    };
    Ok(BlobSignal { y, truth, blobs })
}

fn bfs_ball(g: &Graph, start: usize, size: usize, claimed: &[bool]) -> Option<Vec<usize>> {
    if size == 0 {
        return Some(Vec::new());
    }
    let mut seen = vec![false; g.n_vertices()];
    let mut ball = Vec::with_capacity(size);
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        ball.push(v);
        if ball.len() == size {
            return Some(ball);
        }
        for &(w, _) in g.neighbors_sorted(v) {
            if !seen[w] && !claimed[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    None
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of trial `trial` under `master`; every strategy in a trial sees the
/// same instance.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    splitmix64(master ^ splitmix64(trial as u64))
}

/// A strategy plus the penalty dampening it runs with.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchArm {
    pub label: String,
    pub strategy: DecompositionStrategy,
    pub accel_c: f64,
}

impl BenchArm {
    pub fn new(strategy: DecompositionStrategy) -> Self {
        Self { label: strategy.kind.name().to_string(), strategy, accel_c: 0.0 }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.accel_c = c;
        self.label = format!("{}(c={c})", self.strategy.kind.name());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSettings {
    pub n_trials: usize,
    pub lambda: f64,
    pub master_seed: u64,
    /// Template; its seed is replaced per trial.
    pub blobs: BlobSpec,
    pub solver: SolverConfig,
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self {
            n_trials: 10,
            lambda: 1.0,
            master_seed: 0,
            blobs: BlobSpec::default(),
            solver: SolverConfig { record_history: false, ..SolverConfig::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArmSummary {
    pub label: String,
    pub trials: usize,
    pub converged: usize,
    pub mean_steps: f64,
    /// Sample standard deviation over the square root of the trial count.
    pub std_error: f64,
    pub mean_seconds: f64,
}

/// Mean and standard error (sample std / sqrt(n)).
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

pub fn summarize(arms: &[BenchArm], results: &[TrialResult]) -> Vec<ArmSummary> {
    arms.iter()
        .map(|arm| {
            let rows: Vec<&TrialResult> = results.iter().filter(|r| r.strategy == arm.label).collect();
            let steps: Vec<f64> = rows.iter().map(|r| r.steps as f64).collect();
            let (mean_steps, std_error) = mean_and_std_error(&steps);
            let secs: Vec<f64> = rows.iter().map(|r| r.seconds).collect();
            ArmSummary {
                label: arm.label.clone(),
                trials: rows.len(),
                converged: rows.iter().filter(|r| r.converged).count(),
                mean_steps,
                std_error,
                mean_seconds: mean_and_std_error(&secs).0,
            }
        })
        .collect()
}

/// Runs every arm on `n_trials` fresh blob instances. Results are ordered by
/// (trial, arm) whatever order they finish in. Solver failures are recorded
/// in the row, not propagated.
pub fn run_trials(g: &Graph, graph_name: &str, arms: &[BenchArm], settings: &BenchSettings) -> Vec<TrialResult> {
    let jobs: Vec<(usize, usize)> =
        (0..settings.n_trials).flat_map(|t| (0..arms.len()).map(move |a| (t, a))).collect();
    jobs.par_iter()
        .map(|&(trial, a)| {
            let arm = &arms[a];
            let seed = trial_seed(settings.master_seed, trial);
            let outcome = (|| -> Result<_, BenchError> {
                let signal = blob_signal(g, &BlobSpec { seed, ..settings.blobs.clone() })?;
                let problem = ProblemInstance::squared(signal.y, settings.lambda);
                let strategy = DecompositionStrategy { seed: splitmix64(seed ^ arm.strategy.seed), ..arm.strategy.clone() };
                let config = SolverConfig { accel_c: arm.accel_c, ..settings.solver.clone() };
                Ok(solve_gfl(g, &problem, &strategy, &config)?)
            })();
            let mut row = TrialResult {
                graph: graph_name.to_string(),
                strategy: arm.label.clone(),
                trial,
                seed,
                steps: 0,
                seconds: 0.0,
                objective: f64::NAN,
                converged: false,
                error: None,
            };
            match outcome {
                Ok(rep) => {
                    row.steps = rep.steps;
                    row.seconds = rep.seconds;
                    row.objective = rep.objective;
                    row.converged = rep.converged;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalvingLevel {
    pub level: usize,
    pub n_trails: usize,
    /// Steps per trial.
    pub steps: Vec<usize>,
    pub mean_steps: f64,
    pub std_error: f64,
}

/// Starts from the row and column trails of a `rows x cols` grid and halves
/// every trail `n_halvings` times, solving the same blob instances at every
/// level.
pub fn trail_halving_experiment(
    rows: usize,
    cols: usize,
    n_halvings: usize,
    settings: &BenchSettings,
) -> Result<Vec<HalvingLevel>, BenchError> {
    let g = grid_graph(rows, cols);
    let mut levels = vec![decompose_grid_rows_cols(rows, cols)];
    for _ in 0..n_halvings {
        let next = halve_trails(levels.last().unwrap());
        levels.push(next);
    }
    let problems: Vec<ProblemInstance> = (0..settings.n_trials)
        .map(|t| {
            let spec = BlobSpec { seed: trial_seed(settings.master_seed, t), ..settings.blobs.clone() };
            blob_signal(&g, &spec).map(|s| ProblemInstance::squared(s.y, settings.lambda))
        })
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, usize)> =
        (0..levels.len()).flat_map(|l| (0..problems.len()).map(move |t| (l, t))).collect();
    let steps: Vec<usize> = jobs
        .par_iter()
        .map(|&(l, t)| solve_with_trails(&levels[l], &problems[t], &settings.solver).map(|r| r.steps))
        .collect::<Result<_, _>>()?;
    Ok(levels
        .iter()
        .enumerate()
        .map(|(l, ts)| {
            let s: Vec<usize> = steps[l * problems.len()..(l + 1) * problems.len()].to_vec();
            let (mean_steps, std_error) = mean_and_std_error(&s.iter().map(|&x| x as f64).collect::<Vec<_>>());
            HalvingLevel { level: l, n_trails: ts.len(), steps: s, mean_steps, std_error }
        })
        .collect())
}
