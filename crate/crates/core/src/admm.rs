//! ADMM for the graph-fused lasso over a trail decomposition.
//!
//! Every trail of `m` edges gets `m + 1` slack variables `z`, one per visit
//! of a vertex. With `A` the binary matrix selecting `beta_{vertex(j)}` for
//! slack `j`, the solver alternates
//!
//! ```text
//! beta <- argmin_b  loss(y, b) + sum_j rho_j/2 (b_{vertex(j)} - z_j + u_j)^2
//! z_t  <- 1D fused lasso on trail t with targets (A beta + u)_t, weight rho_t / (2 lambda)
//! u    <- u + A beta - z
//! ```
//!
//! The squared loss is `0.5 * sum (y - beta)^2`, so the closed-form primal
//! update is `(y_i + sum_J rho_j (z_j - u_j)) / (1 + sum_J rho_j)`.

use std::ops::Range;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::decompose::{DecompositionError, DecompositionStrategy};
use crate::graph::{connected_components, Graph, SubGraph, TrailSet};
use crate::loss::{interior, newton_scalar, Loss, NewtonConfig, NonFiniteDerivative};
use crate::tv1d::{Tv1dWorkspace, Weights};

/// Problems with fewer slacks than this run single-threaded.
const PARALLEL_MIN_SLACKS: usize = 16_384;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("trail {trail} visits vertex {vertex}, graph has {n_vertices} vertices")]
    VertexOutOfRange { trail: usize, vertex: usize, n_vertices: usize },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("loss derivative is not finite at beta = {0}")]
    NonFiniteDerivative(f64),
    #[error("no convergence within {steps} iterations")]
    MaxItersExceeded { steps: usize },
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

impl From<NonFiniteDerivative> for SolverError {
    fn from(e: NonFiniteDerivative) -> Self {
        SolverError::NonFiniteDerivative(e.beta)
    }
}

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub y: Vec<f64>,
    pub lambda: f64,
    pub loss: Loss,
}

impl ProblemInstance {
    pub fn squared(y: Vec<f64>, lambda: f64) -> Self {
        Self { y, lambda, loss: Loss::Squared }
    }

    pub fn validate(&self, n_vertices: usize) -> Result<(), SolverError> {
        if self.y.len() != n_vertices {
            return Err(SolverError::DimensionMismatch {
                what: "y",
                expected: n_vertices,
                got: self.y.len(),
            });
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(SolverError::InvalidProblem(format!("lambda = {}", self.lambda)));
        }
        if let Some(i) = self.y.iter().position(|v| !v.is_finite()) {
            return Err(SolverError::InvalidProblem(format!("y[{i}] is not finite")));
        }
        Ok(())
    }
}

/// The sparse binary `A`: slack `j` copies `beta[slack_to_vertex[j]]`.
/// Slacks are laid out trail by trail so each trail owns a contiguous range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackMapping {
    n_vertices: usize,
    slack_to_vertex: Vec<usize>,
    trail_of_slack: Vec<usize>,
    trail_spans: Vec<Range<usize>>,
    // CSR of vertex -> slacks, slacks ascending
    vertex_offsets: Vec<usize>,
    vertex_slacks: Vec<usize>,
}

impl SlackMapping {
    pub fn n_slacks(&self) -> usize {
        self.slack_to_vertex.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_trails(&self) -> usize {
        self.trail_spans.len()
    }

    pub fn slack_to_vertex(&self) -> &[usize] {
        &self.slack_to_vertex
    }

    pub fn trail_of_slack(&self) -> &[usize] {
        &self.trail_of_slack
    }

    pub fn trail_spans(&self) -> &[Range<usize>] {
        &self.trail_spans
    }

    /// Slack indices of vertex `v` (the index set J).
    pub fn slacks_of(&self, v: usize) -> &[usize] {
        &self.vertex_slacks[self.vertex_offsets[v]..self.vertex_offsets[v + 1]]
    }

    /// Edge count of trail `t`.
    pub fn trail_length(&self, t: usize) -> usize {
        self.trail_spans[t].len() - 1
    }

    /// `A beta`
    pub fn gather(&self, beta: &[f64]) -> Vec<f64> {
        self.slack_to_vertex.iter().map(|&v| beta[v]).collect()
    }

    /// `A^T x`, summing each vertex's slacks in ascending order.
    pub fn scatter_sum(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_vertices).map(|v| self.slacks_of(v).iter().map(|&j| x[j]).sum()).collect()
    }

    /// Sum over all trail edges of `|beta_r - beta_s|`.
    pub fn total_variation(&self, beta: &[f64]) -> f64 {
        self.trail_spans
            .iter()
            .map(|span| {
                self.slack_to_vertex[span.clone()]
                    .windows(2)
                    .map(|w| (beta[w[1]] - beta[w[0]]).abs())
                    .sum::<f64>()
            })
            .sum()
    }
}

pub fn build_slack_mapping(ts: &TrailSet, n_vertices: usize) -> Result<SlackMapping, SolverError> {
    let d: usize = ts.trails.iter().map(|t| t.vertices().len()).sum();
    let mut slack_to_vertex = Vec::with_capacity(d);
    let mut trail_of_slack = Vec::with_capacity(d);
    let mut trail_spans = Vec::with_capacity(ts.len());
    let mut counts = vec![0usize; n_vertices + 1];
    for (t, trail) in ts.trails.iter().enumerate() {
        let start = slack_to_vertex.len();
        for &v in trail.vertices() {
            if v >= n_vertices {
                return Err(SolverError::VertexOutOfRange { trail: t, vertex: v, n_vertices });
            }
            counts[v + 1] += 1;
            slack_to_vertex.push(v);
            trail_of_slack.push(t);
        }
        trail_spans.push(start..slack_to_vertex.len());
    }
    for v in 0..n_vertices {
        counts[v + 1] += counts[v];
    }
    let vertex_offsets = counts;
    let mut fill = vertex_offsets.clone();
    let mut vertex_slacks = vec![0; d];
    for (j, &v) in slack_to_vertex.iter().enumerate() {
        vertex_slacks[fill[v]] = j;
        fill[v] += 1;
    }
    Ok(SlackMapping {
        n_vertices,
        slack_to_vertex,
        trail_of_slack,
        trail_spans,
        vertex_offsets,
        vertex_slacks,
    })
}

/// How the augmented-Lagrangian penalty is distributed over slacks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PenaltyScheme {
    /// One scalar `alpha` for every slack.
    Uniform,
    /// Per-slack `rho_j = (c k T(j) / d + 1 - c) alpha`, see [`adaptive_penalties`].
    Adaptive { c: f64 },
}

/// Per-slack penalties scaled by trail length: `T(j)` is the number of slacks
/// (vertex visits) on the trail holding slack `j`, `k` the trail count and `d`
/// the slack count, so `k T(j) / d` is the trail's size relative to the mean.
/// Evaluated as `(1 + c (k T / d - 1)) alpha`, which is exactly `alpha` when
/// `c = 0` or the trail has the mean size.
pub fn adaptive_penalties(mapping: &SlackMapping, alpha: f64, c: f64) -> Vec<f64> {
    let k = mapping.n_trails();
    let d = mapping.n_slacks() as f64;
    let mut rho = Vec::with_capacity(mapping.n_slacks());
    for span in mapping.trail_spans() {
        let relative = (k * span.len()) as f64 / d;
        let factor = 1.0 + c * (relative - 1.0);
        rho.extend(std::iter::repeat(factor * alpha).take(span.len()));
    }
    rho
}

/// Closed-form primal update for squared loss with per-slack penalties.
/// Vertices without slacks keep `y_i`.
pub fn beta_update_squared(
    y: &[f64],
    z: &[f64],
    u: &[f64],
    rho: &[f64],
    mapping: &SlackMapping,
    beta: &mut [f64],
) {
    let update = |(i, b): (usize, &mut f64)| {
        let mut num = y[i];
        let mut den = 1.0;
        for &j in mapping.slacks_of(i) {
            num += rho[j] * (z[j] - u[j]);
            den += rho[j];
        }
        *b = num / den;
    };
    if mapping.n_slacks() >= PARALLEL_MIN_SLACKS {
        beta.par_iter_mut().enumerate().for_each(update);
    } else {
        beta.iter_mut().enumerate().for_each(update);
    }
}

/// Closed-form primal update for squared loss with one scalar penalty:
/// `(y_i + sum_J alpha (z_j - u_j)) / (1 + sum_J alpha)`.
pub fn beta_update_uniform(
    y: &[f64],
    z: &[f64],
    u: &[f64],
    alpha: f64,
    mapping: &SlackMapping,
    beta: &mut [f64],
) {
    let update = |(i, b): (usize, &mut f64)| {
        let mut num = y[i];
        let mut den = 1.0;
        for &j in mapping.slacks_of(i) {
            num += alpha * (z[j] - u[j]);
            den += alpha;
        }
        *b = num / den;
    };
    if mapping.n_slacks() >= PARALLEL_MIN_SLACKS {
        beta.par_iter_mut().enumerate().for_each(update);
    } else {
        beta.iter_mut().enumerate().for_each(update);
    }
}

/// Primal update for any separable smooth loss: per coordinate, Newton on
/// `loss(y_i, b) + sum_J rho_j/2 (b - z_j + u_j)^2`, warm-started at `beta`.
pub fn beta_update_generic(
    loss: &Loss,
    y: &[f64],
    z: &[f64],
    u: &[f64],
    rho: &[f64],
    mapping: &SlackMapping,
    newton: NewtonConfig,
    beta: &mut [f64],
) -> Result<(), SolverError> {
    let update = |(i, b): (usize, &mut f64)| -> Result<(), NonFiniteDerivative> {
        let mut weight = 0.0;
        let mut linear = 0.0;
        for &j in mapping.slacks_of(i) {
            weight += rho[j];
            linear += rho[j] * (z[j] - u[j]);
        }
        *b = newton_scalar(loss, y[i], weight, linear, *b, newton)?;
        Ok(())
    };
    if mapping.n_slacks() >= PARALLEL_MIN_SLACKS {
        beta.par_iter_mut().enumerate().try_for_each(update)?;
    } else {
        beta.iter_mut().enumerate().try_for_each(update)?;
    }
    Ok(())
}

/// Dual (slack) update: every trail independently gets the exact 1D fused
/// lasso with targets `beta_{vertex(j)} + u_j` and weights `rho_j / (2 lambda)`.
pub fn z_update(
    beta: &[f64],
    u: &[f64],
    rho: &[f64],
    lambda: f64,
    mapping: &SlackMapping,
    z: &mut [f64],
) {
    assert!(lambda > 0.0, "the slack update needs lambda > 0");
    let solve_trail = |ws: &mut (Tv1dWorkspace, Vec<f64>), (zt, span): (&mut [f64], &Range<usize>)| {
        let (workspace, target) = ws;
        target.clear();
        target.extend(span.clone().map(|j| beta[mapping.slack_to_vertex[j]] + u[j]));
        let rho_t = &rho[span.clone()];
        let weights = if rho_t.iter().all(|&r| r == rho_t[0]) {
            Weights::Uniform(rho_t[0] / (2.0 * lambda))
        } else {
            Weights::PerPosition(rho_t.iter().map(|&r| r / (2.0 * lambda)).collect())
        };
        workspace.solve_into(target, |r| weights.at(r), zt);
    };
    let spans = mapping.trail_spans();
    let mut slices: Vec<&mut [f64]> = Vec::with_capacity(spans.len());
    let mut rest = z;
    for span in spans {
        let (head, tail) = rest.split_at_mut(span.len());
        slices.push(head);
        rest = tail;
    }
    if mapping.n_slacks() >= PARALLEL_MIN_SLACKS {
        slices
            .into_par_iter()
            .zip(spans.par_iter())
            .for_each_init(|| (Tv1dWorkspace::default(), Vec::new()), solve_trail);
    } else {
        let mut ws = (Tv1dWorkspace::default(), Vec::new());
        for item in slices.into_iter().zip(spans.iter()) {
            solve_trail(&mut ws, item);
        }
    }
}

/// Scaled dual update `u += A beta - z`.
pub fn u_update(u: &mut [f64], beta: &[f64], z: &[f64], mapping: &SlackMapping) {
    for ((uj, &v), &zj) in u.iter_mut().zip(mapping.slack_to_vertex()).zip(z) {
        *uj += beta[v] - zj;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub r_norm: f64,
    pub s_norm: f64,
    pub eps_pri: f64,
    pub eps_dual: f64,
}

impl Residuals {
    pub fn converged(&self) -> bool {
        self.r_norm <= self.eps_pri && self.s_norm <= self.eps_dual
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub alpha0: f64,
    /// Residual balancing: double or halve alpha when one residual exceeds
    /// the other tenfold.
    pub vary_penalty: bool,
    /// Alpha is frozen after this many changes, so the iteration ends as
    /// fixed-penalty ADMM.
    pub max_penalty_changes: usize,
    /// Dampening of the trail-length penalty heuristic; 0 disables it.
    pub accel_c: f64,
    pub newton: NewtonConfig,
    /// Keep per-iteration residuals and objective values.
    pub record_history: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_iters: 100_000,
            alpha0: 1.0,
            vary_penalty: true,
            max_penalty_changes: 20,
            accel_c: 0.0,
            newton: NewtonConfig::default(),
            record_history: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol > 0.0) {
            return Err(SolverError::InvalidConfig(format!("tol = {}", self.tol)));
        }
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return Err(SolverError::InvalidConfig(format!("alpha0 = {}", self.alpha0)));
        }
        if !(0.0..=1.0).contains(&self.accel_c) {
            return Err(SolverError::InvalidConfig(format!("c = {} not in [0, 1]", self.accel_c)));
        }
        if self.max_iters == 0 {
            return Err(SolverError::InvalidConfig("max_iters = 0".into()));
        }
        Ok(())
    }

    pub fn scheme(&self) -> PenaltyScheme {
        if self.accel_c > 0.0 {
            PenaltyScheme::Adaptive { c: self.accel_c }
        } else {
            PenaltyScheme::Uniform
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub beta: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    pub alpha: f64,
    /// Per-slack penalties; empty under [`PenaltyScheme::Uniform`].
    pub rho: Vec<f64>,
    pub iteration: usize,
    pub residuals: Option<Residuals>,
}

/// Residual-balancing rule: returns the factor applied to alpha (2, 1/2 or 1).
/// `u` is rescaled by the inverse so the unscaled dual `alpha * u` is unchanged.
pub fn vary_penalty(alpha: &mut f64, u: &mut [f64], res: &Residuals) -> f64 {
    const MU: f64 = 10.0;
    const TAU: f64 = 2.0;
    let factor = if res.r_norm > MU * res.s_norm {
        TAU
    } else if res.s_norm > MU * res.r_norm {
        1.0 / TAU
    } else {
        return 1.0;
    };
    *alpha *= factor;
    for uj in u.iter_mut() {
        *uj /= factor;
    }
    factor
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub r_norm: f64,
    pub s_norm: f64,
    pub alpha: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub beta: Vec<f64>,
    pub steps: usize,
    pub converged: bool,
    pub objective: f64,
    pub seconds: f64,
    pub final_alpha: f64,
    pub history: Vec<IterationRecord>,
    /// Connected components solved independently.
    pub components: usize,
}

impl SolveReport {
    /// Turns a non-converged report into [`SolverError::MaxItersExceeded`].
    pub fn require_converged(self) -> Result<Self, SolverError> {
        if self.converged {
            Ok(self)
        } else {
            Err(SolverError::MaxItersExceeded { steps: self.steps })
        }
    }
}

/// One ADMM run over a fixed slack mapping.
pub struct AdmmSolver<'a> {
    mapping: &'a SlackMapping,
    problem: &'a ProblemInstance,
    config: SolverConfig,
    scheme: PenaltyScheme,
    state: AdmmState,
    z_prev: Vec<f64>,
    penalty_changes: usize,
}

impl<'a> AdmmSolver<'a> {
    pub fn new(
        mapping: &'a SlackMapping,
        problem: &'a ProblemInstance,
        config: SolverConfig,
    ) -> Result<Self, SolverError> {
        let scheme = config.scheme();
        Self::with_scheme(mapping, problem, config, scheme)
    }

    pub fn with_scheme(
        mapping: &'a SlackMapping,
        problem: &'a ProblemInstance,
        config: SolverConfig,
        scheme: PenaltyScheme,
    ) -> Result<Self, SolverError> {
        config.validate()?;
        problem.validate(mapping.n_vertices())?;
        if !(problem.lambda > 0.0) {
            return Err(SolverError::InvalidProblem("ADMM needs lambda > 0".into()));
        }
        let domain = problem.loss.domain();
        let beta: Vec<f64> = problem.y.iter().map(|&y| interior(y, domain)).collect();
        let z = mapping.gather(&beta);
        let u = vec![0.0; mapping.n_slacks()];
        let alpha = config.alpha0;
        let rho = match scheme {
            PenaltyScheme::Uniform => Vec::new(),
            PenaltyScheme::Adaptive { c } => adaptive_penalties(mapping, alpha, c),
        };
        Ok(Self {
            mapping,
            problem,
            config,
            scheme,
            z_prev: z.clone(),
            penalty_changes: 0,
            state: AdmmState { beta, z, u, alpha, rho, iteration: 0, residuals: None },
        })
    }

    pub fn state(&self) -> &AdmmState {
        &self.state
    }

    /// One beta -> z -> u sweep, then residuals and (optionally) the penalty
    /// adjustment. Returns the residuals measured before the adjustment.
    pub fn step(&mut self) -> Result<Residuals, SolverError> {
        let m = self.mapping;
        let p = self.problem;
        let st = &mut self.state;

        match (&p.loss, self.scheme) {
            (Loss::Squared, PenaltyScheme::Uniform) => {
                beta_update_uniform(&p.y, &st.z, &st.u, st.alpha, m, &mut st.beta)
            }
            (Loss::Squared, PenaltyScheme::Adaptive { .. }) => {
                beta_update_squared(&p.y, &st.z, &st.u, &st.rho, m, &mut st.beta)
            }
            (loss, scheme) => {
                let uniform;
                let rho: &[f64] = match scheme {
                    PenaltyScheme::Uniform => {
                        uniform = vec![st.alpha; m.n_slacks()];
                        &uniform
                    }
                    PenaltyScheme::Adaptive { .. } => &st.rho,
                };
                beta_update_generic(loss, &p.y, &st.z, &st.u, rho, m, self.config.newton, &mut st.beta)?
            }
        }

        std::mem::swap(&mut self.z_prev, &mut st.z);
        match self.scheme {
            PenaltyScheme::Uniform => {
                let rho = vec![st.alpha; m.n_slacks()];
                z_update(&st.beta, &st.u, &rho, p.lambda, m, &mut st.z);
            }
            PenaltyScheme::Adaptive { .. } => {
                z_update(&st.beta, &st.u, &st.rho, p.lambda, m, &mut st.z);
            }
        }
        u_update(&mut st.u, &st.beta, &st.z, m);
        st.iteration += 1;

        let res = self.residuals();
        self.state.residuals = Some(res);
        if self.config.vary_penalty && self.penalty_changes < self.config.max_penalty_changes && !res.converged() {
            let st = &mut self.state;
            let factor = vary_penalty(&mut st.alpha, &mut st.u, &res);
            if factor != 1.0 {
                self.penalty_changes += 1;
                if let PenaltyScheme::Adaptive { c } = self.scheme {
                    st.rho = adaptive_penalties(m, st.alpha, c);
                }
            }
        }
        Ok(res)
    }

    /// Primal residual `||A beta - z||`, dual residual `||A^T P (z - z_prev)||`
    /// and the absolute/relative tolerances they are compared against.
    pub fn residuals(&self) -> Residuals {
        let m = self.mapping;
        let st = &self.state;
        let tol = self.config.tol;
        let mut r2 = 0.0;
        let mut abeta2 = 0.0;
        let mut z2 = 0.0;
        for (j, &v) in m.slack_to_vertex().iter().enumerate() {
            let b = st.beta[v];
            r2 += (b - st.z[j]) * (b - st.z[j]);
            abeta2 += b * b;
            z2 += st.z[j] * st.z[j];
        }
        let mut s2 = 0.0;
        let mut dual2 = 0.0;
        match self.scheme {
            PenaltyScheme::Uniform => {
                for v in 0..m.n_vertices() {
                    let mut dz = 0.0;
                    let mut du = 0.0;
                    for &j in m.slacks_of(v) {
                        dz += st.alpha * (st.z[j] - self.z_prev[j]);
                        du += st.alpha * st.u[j];
                    }
                    s2 += dz * dz;
                    dual2 += du * du;
                }
                s2 = s2.sqrt();
                dual2 = dual2.sqrt();
            }
            PenaltyScheme::Adaptive { .. } => {
                for v in 0..m.n_vertices() {
                    let mut dz = 0.0;
                    let mut du = 0.0;
                    for &j in m.slacks_of(v) {
                        dz += st.rho[j] * (st.z[j] - self.z_prev[j]);
                        du += st.rho[j] * st.u[j];
                    }
                    s2 += dz * dz;
                    dual2 += du * du;
                }
                s2 = s2.sqrt();
                dual2 = dual2.sqrt();
            }
        }
        let d = m.n_slacks() as f64;
        let n = m.n_vertices() as f64;
        Residuals {
            r_norm: r2.sqrt(),
            s_norm: s2,
            eps_pri: d.sqrt() * tol + tol * abeta2.sqrt().max(z2.sqrt()),
            eps_dual: n.sqrt() * tol + tol * dual2,
        }
    }

    pub fn objective(&self) -> f64 {
        trail_objective(self.mapping, &self.problem.y, &self.state.beta, self.problem.lambda, &self.problem.loss)
    }

    /// Iterates until convergence or `max_iters`.
    pub fn run(mut self) -> Result<SolveReport, SolverError> {
        let started = Instant::now();
        let mut history = Vec::new();
        let mut converged = false;
        while self.state.iteration < self.config.max_iters {
            let alpha = self.state.alpha;
            let res = self.step()?;
            if self.config.record_history {
                history.push(IterationRecord {
                    iter: self.state.iteration,
                    r_norm: res.r_norm,
                    s_norm: res.s_norm,
                    alpha,
                    objective: self.objective(),
                });
            }
            if res.converged() {
                converged = true;
                break;
            }
        }
        let objective = self.objective();
        Ok(SolveReport {
            steps: self.state.iteration,
            converged,
            objective,
            seconds: started.elapsed().as_secs_f64(),
            final_alpha: self.state.alpha,
            history,
            components: 1,
            beta: self.state.beta,
        })
    }
}

/// Objective with the penalty summed along trails (equal to the graph
/// penalty when the trails partition the edges).
pub fn trail_objective(mapping: &SlackMapping, y: &[f64], beta: &[f64], lambda: f64, loss: &Loss) -> f64 {
    let fit: f64 = y.iter().zip(beta).map(|(&y, &b)| loss.value(y, b)).sum();
    fit + lambda * mapping.total_variation(beta)
}

/// `loss(y, beta) + lambda * sum_{(r, s) in E} |beta_r - beta_s|`.
pub fn gfl_objective(g: &Graph, y: &[f64], beta: &[f64], lambda: f64, loss: &Loss) -> f64 {
    let fit: f64 = y.iter().zip(beta).map(|(&y, &b)| loss.value(y, b)).sum();
    let tv: f64 = g.edges().iter().map(|&(r, s)| (beta[r] - beta[s]).abs()).sum();
    fit + lambda * tv
}

/// Coordinate-wise minimizer of the loss alone.
pub fn loss_minimizer(problem: &ProblemInstance, newton: NewtonConfig) -> Result<Vec<f64>, SolverError> {
    match &problem.loss {
        Loss::Squared => Ok(problem.y.clone()),
        loss => {
            let cfg = NewtonConfig { max_iters: newton.max_iters.max(200), ..newton };
            problem
                .y
                .iter()
                .map(|&y| newton_scalar(loss, y, 0.0, 0.0, y, cfg).map_err(SolverError::from))
                .collect()
        }
    }
}

/// Solves over a precomputed trail set covering a graph with `ts.n_vertices`
/// vertices. The ADMM runs jointly over all trails.
pub fn solve_with_trails(
    ts: &TrailSet,
    problem: &ProblemInstance,
    config: &SolverConfig,
) -> Result<SolveReport, SolverError> {
    config.validate()?;
    problem.validate(ts.n_vertices)?;
    let mapping = build_slack_mapping(ts, ts.n_vertices)?;
    if problem.lambda == 0.0 || mapping.n_slacks() == 0 {
        let started = Instant::now();
        let beta = loss_minimizer(problem, config.newton)?;
        let objective = trail_objective(&mapping, &problem.y, &beta, problem.lambda, &problem.loss);
        return Ok(SolveReport {
            beta,
            steps: 0,
            converged: true,
            objective,
            seconds: started.elapsed().as_secs_f64(),
            final_alpha: config.alpha0,
            history: Vec::new(),
            components: 1,
        });
    }
    AdmmSolver::new(&mapping, problem, config.clone())?.run()
}

/// Decomposes `g` with `strategy` and solves. Disconnected graphs are split
/// into components, each decomposed and solved on its own; isolated vertices
/// take the loss minimizer.
pub fn solve_gfl(
    g: &Graph,
    problem: &ProblemInstance,
    strategy: &DecompositionStrategy,
    config: &SolverConfig,
) -> Result<SolveReport, SolverError> {
    config.validate()?;
    problem.validate(g.n_vertices())?;
    let started = Instant::now();
    let components = connected_components(g);
    if components.len() <= 1 {
        let ts = strategy.decompose(g)?;
        let mut report = solve_with_trails(&ts, problem, config)?;
        report.objective = gfl_objective(g, &problem.y, &report.beta, problem.lambda, &problem.loss);
        return Ok(report);
    }

    let mut beta = vec![0.0; g.n_vertices()];
    let mut steps = 0;
    let mut converged = true;
    let mut history = Vec::new();
    let mut final_alpha = config.alpha0;
    let mut largest = 0;
    for comp in &components {
        let sub = SubGraph::from_vertex_subset(g, comp);
        let local = ProblemInstance {
            y: comp.iter().map(|&v| problem.y[v]).collect(),
            lambda: problem.lambda,
            loss: problem.loss.clone(),
        };
        let report = if sub.graph.n_edges() == 0 {
            solve_with_trails(&TrailSet::new(comp.len(), 0, Vec::new()), &local, config)?
        } else {
            let ts = strategy.decompose(&sub.graph)?;
            solve_with_trails(&ts, &local, config)?
        };
        for (i, &v) in sub.vertex_map.iter().enumerate() {
            beta[v] = report.beta[i];
        }
        steps = steps.max(report.steps);
        converged &= report.converged;
        if comp.len() > largest {
            largest = comp.len();
            history = report.history;
            final_alpha = report.final_alpha;
        }
    }
    let objective = gfl_objective(g, &problem.y, &beta, problem.lambda, &problem.loss);
    Ok(SolveReport {
        beta,
        steps,
        converged,
        objective,
        seconds: started.elapsed().as_secs_f64(),
        final_alpha,
        history,
        components: components.len(),
    })
}
