//! Smoothing proximal gradient baseline.
//!
//! The penalty `lambda * sum_e |(D beta)_e|` is replaced by its Nesterov
//! smoothing with width `mu = epsilon / |E|`, a Huber function per edge, and
//! minimized by plain gradient descent with backtracking. The smoothed
//! gradient is `beta - y + lambda D^T S(lambda D beta / mu)` where `S` clamps
//! to `[-1, 1]`.

use std::time::Instant;

use thiserror::Error;

use crate::admm::gfl_objective;
use crate::graph::Graph;
use crate::loss::Loss;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpgError {
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("y has length {got}, graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Signed incidence matrix: row `e` for edge `(r, s)`, `r < s`, holds `+scale`
/// at `r` and `-scale` at `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDiffMatrix {
    n_vertices: usize,
    rows: Vec<(usize, usize)>,
    scale: f64,
}

impl EdgeDiffMatrix {
    pub fn new(g: &Graph) -> Self {
        Self::scaled(g, 1.0)
    }

    pub fn scaled(g: &Graph, scale: f64) -> Self {
        let rows = g.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        Self { n_vertices: g.n_vertices(), rows, scale }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_vertices
    }

    pub fn row(&self, e: usize) -> (usize, usize) {
        self.rows[e]
    }

    pub fn apply(&self, beta: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|&(r, s)| self.scale * (beta[r] - beta[s])).collect()
    }

    pub fn apply_transpose(&self, a: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_vertices];
        for (&(r, s), &v) in self.rows.iter().zip(a) {
            out[r] += self.scale * v;
            out[s] -= self.scale * v;
        }
        out
    }
}

/// Elementwise clamp to `[-1, 1]`.
pub fn truncate(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.clamp(-1.0, 1.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpgConfig {
    pub max_iters: usize,
    pub armijo: f64,
    pub shrink: f64,
    pub max_halvings: usize,
}

impl Default for SpgConfig {
    fn default() -> Self {
        Self { max_iters: 10_000, armijo: 1e-4, shrink: 0.5, max_halvings: 50 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpgReport {
    pub beta: Vec<f64>,
    pub iterations: usize,
    /// Stopped on the iterate-change test.
    pub converged: bool,
    /// A line search exhausted its halvings without sufficient decrease.
    pub stalled: bool,
    /// Unsmoothed objective at the returned iterate.
    pub objective: f64,
    pub smoothed_objective: f64,
    pub seconds: f64,
}

fn huber(x: f64, mu: f64) -> f64 {
    if x.abs() <= mu {
        x * x / (2.0 * mu)
    } else {
        x.abs() - 0.5 * mu
    }
}

/// `0.5 ||y - beta||^2 + sum_e h_mu(lambda (D beta)_e)`
pub fn smoothed_objective(d: &EdgeDiffMatrix, y: &[f64], beta: &[f64], mu: f64) -> f64 {
    let fit: f64 = y.iter().zip(beta).map(|(y, b)| 0.5 * (y - b) * (y - b)).sum();
    fit + d.apply(beta).iter().map(|&x| huber(x, mu)).sum::<f64>()
}

pub fn smoothed_gradient(d: &EdgeDiffMatrix, y: &[f64], beta: &[f64], mu: f64) -> Vec<f64> {
    let alpha = truncate(&d.apply(beta).iter().map(|x| x / mu).collect::<Vec<_>>());
    let dt = d.apply_transpose(&alpha);
    beta.iter().zip(y).zip(dt).map(|((b, y), t)| b - y + t).collect()
}

pub fn spg_solve(
    g: &Graph,
    y: &[f64],
    lambda: f64,
    epsilon: f64,
    config: &SpgConfig,
) -> Result<SpgReport, SpgError> {
    if !(epsilon > 0.0) {
        return Err(SpgError::InvalidEpsilon(epsilon));
    }
    if y.len() != g.n_vertices() {
        return Err(SpgError::DimensionMismatch { expected: g.n_vertices(), got: y.len() });
    }
    let started = Instant::now();
    let d = EdgeDiffMatrix::scaled(g, lambda);
    let mu = epsilon / g.n_edges().max(1) as f64;
    let mut beta = y.to_vec();
    let mut f = smoothed_objective(&d, y, &beta, mu);
    let mut converged = false;
    let mut stalled = false;
    let mut iterations = 0;
    let mut candidate = vec![0.0; beta.len()];

    while iterations < config.max_iters {
        iterations += 1;
        let grad = smoothed_gradient(&d, y, &beta, mu);
        let g2: f64 = grad.iter().map(|x| x * x).sum();
        if g2 == 0.0 {
            converged = true;
            break;
        }
        let mut eta = 1.0;
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            for ((c, b), gr) in candidate.iter_mut().zip(&beta).zip(&grad) {
                *c = b - eta * gr;
            }
            let fc = smoothed_objective(&d, y, &candidate, mu);
            if fc <= f - config.armijo * eta * g2 {
                accepted = Some(fc);
                break;
            }
            eta *= config.shrink;
        }
        let Some(fc) = accepted else {
            stalled = true;
            break;
        };
        let change = beta.iter().zip(&candidate).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut beta, &mut candidate);
        f = fc;
        if change < epsilon {
            converged = true;
            break;
        }
    }

    Ok(SpgReport {
        objective: gfl_objective(g, y, &beta, lambda, &Loss::Squared),
        smoothed_objective: f,
        beta,
        iterations,
        converged,
        stalled,
        seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncate_cases() {
        assert_eq!(truncate(&[0.5, -0.2]), vec![0.5, -0.2]);
        assert_eq!(truncate(&[3.0, -7.0]), vec![1.0, -1.0]);
        let v = [2.5, -0.3, -1.5, 0.99];
        assert_eq!(truncate(&truncate(&v)), truncate(&v));
    }

    #[test]
    fn incidence_rows() {
        let g = Graph::from_edges(3, &[(1, 0), (1, 2)]).unwrap();
        let d = EdgeDiffMatrix::new(&g);
        assert_eq!(d.row(0), (0, 1));
        assert_eq!(d.apply(&[1.0, 4.0, 2.0]), vec![-3.0, 2.0]);
        assert_eq!(d.apply_transpose(&[1.0, 1.0]), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn lambda_zero_returns_y() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let y = [0.3, -1.0, 2.0];
        let r = spg_solve(&g, &y, 0.0, 1e-6, &SpgConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.beta, y);
    }

    #[test]
    fn two_point_chain() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let r = spg_solve(&g, &[0.0, 1.0], 0.1, 1e-6, &SpgConfig::default()).unwrap();
        assert!((r.beta[0] - 0.1).abs() < 1e-3 && (r.beta[1] - 0.9).abs() < 1e-3);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let d = EdgeDiffMatrix::scaled(&g, 0.7);
        let y = [1.0, -0.5, 0.25, 2.0];
        let beta = [0.2, 0.1, 0.9, -0.4];
        let mu = 0.5;
        let grad = smoothed_gradient(&d, &y, &beta, mu);
        for i in 0..4 {
            let h = 1e-6;
            let mut p = beta;
            p[i] += h;
            let mut m = beta;
            m[i] -= h;
            let fd = (smoothed_objective(&d, &y, &p, mu) - smoothed_objective(&d, &y, &m, mu)) / (2.0 * h);
            assert!((fd - grad[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(
            spg_solve(&g, &[0.0, 1.0], 1.0, 0.0, &SpgConfig::default()),
            Err(SpgError::InvalidEpsilon(0.0))
        );
        assert!(matches!(
            spg_solve(&g, &[0.0], 1.0, 1e-3, &SpgConfig::default()),
            Err(SpgError::DimensionMismatch { .. })
        ));
    }
}
