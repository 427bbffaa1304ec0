//! Exact weighted 1D fused lasso,
//!
//! ```text
//! minimize  sum_r w_r (y_r - z_r)^2 + sum_r |z_{r+1} - z_r|
//! ```
//!
//! solved by forward message passing over the derivative of the partial
//! objective (a piecewise-linear, strictly increasing function stored as a
//! deque of knots) and backward clipping. Each position pushes at most two
//! knots, so the whole solve is linear time amortized.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Tv1dError {
    #[error("solution has length {got}, targets have length {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Data-term weights: one for the whole chain or one per position.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Uniform(f64),
    PerPosition(Vec<f64>),
}

impl Weights {
    #[inline]
    pub fn at(&self, r: usize) -> f64 {
        match self {
            Weights::Uniform(w) => *w,
            Weights::PerPosition(w) => w[r],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tv1dProblem {
    pub y_tilde: Vec<f64>,
    pub w: Weights,
}

impl Tv1dProblem {
    pub fn new(y_tilde: Vec<f64>, w: f64) -> Self {
        Self { y_tilde, w: Weights::Uniform(w) }
    }

    pub fn weighted(y_tilde: Vec<f64>, w: Vec<f64>) -> Self {
        assert_eq!(y_tilde.len(), w.len(), "one weight per position");
        Self { y_tilde, w: Weights::PerPosition(w) }
    }

    pub fn objective(&self, z: &[f64]) -> f64 {
        let fit: f64 = self
            .y_tilde
            .iter()
            .zip(z)
            .enumerate()
            .map(|(r, (y, z))| self.w.at(r) * (y - z) * (y - z))
            .sum();
        let tv: f64 = z.windows(2).map(|p| (p[1] - p[0]).abs()).sum();
        fit + tv
    }
}

pub fn solve_tv1d(p: &Tv1dProblem) -> Vec<f64> {
    let mut out = vec![0.0; p.y_tilde.len()];
    Tv1dWorkspace::default().solve_into(&p.y_tilde, |r| p.w.at(r), &mut out);
    out
}

/// Reusable scratch space for repeated solves.
#[derive(Debug, Default, Clone)]
pub struct Tv1dWorkspace {
    /// (position, slope increment, intercept increment) ascending in position
    knots: VecDeque<(f64, f64, f64)>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Tv1dWorkspace {
    /// Solves into `out` with per-position weight `w(r) > 0`.
    pub fn solve_into(&mut self, y: &[f64], w: impl Fn(usize) -> f64, out: &mut [f64]) {
        let n = y.len();
        assert_eq!(out.len(), n);
        if n == 0 {
            return;
        }
        if n == 1 {
            out[0] = y[0];
            return;
        }
        self.knots.clear();
        self.lower.clear();
        self.upper.clear();

        // Derivative of the partial objective: slope/intercept of the leftmost
        // and rightmost linear pieces, with knot increments in between.
        let w0 = 2.0 * w(0);
        let (mut a_left, mut b_left) = (w0, -w0 * y[0]);
        let (mut a_right, mut b_right) = (w0, -w0 * y[0]);

        for r in 0..n - 1 {
            // Lowest point where the derivative reaches -1.
            let (mut a, mut b) = (a_left, b_left);
            while let Some(&(x, da, db)) = self.knots.front() {
                if a * x + b > -1.0 {
                    break;
                }
                a += da;
                b += db;
                self.knots.pop_front();
            }
            let lo = (-1.0 - b) / a;
            self.knots.push_front((lo, a, b + 1.0));

            // Highest point where the derivative reaches +1.
            let (mut a, mut b) = (a_right, b_right);
            while let Some(&(x, da, db)) = self.knots.back() {
                if a * x + b < 1.0 {
                    break;
                }
                a -= da;
                b -= db;
                self.knots.pop_back();
            }
            let hi = (1.0 - b) / a;
            self.knots.push_back((hi, -a, 1.0 - b));

            self.lower.push(lo);
            self.upper.push(hi);

            let wn = 2.0 * w(r + 1);
            a_left = wn;
            b_left = -1.0 - wn * y[r + 1];
            a_right = wn;
            b_right = 1.0 - wn * y[r + 1];
        }

        // Root of the final derivative.
        let (mut a, mut b) = (a_left, b_left);
        for &(x, da, db) in &self.knots {
            if a * x + b > 0.0 {
                break;
            }
            a += da;
            b += db;
        }
        out[n - 1] = -b / a;

        for r in (0..n - 1).rev() {
            out[r] = out[r + 1].clamp(self.lower[r], self.upper[r]);
        }
    }
}

/// Certifies optimality by building edge subgradients by forward substitution,
/// `s_r = s_{r-1} + 2 w_r (z_r - y_r)` with `s_{-1} = 0`, and checking that
/// each lies in `[-1, 1]`, matches the sign of every nonzero jump, and that the
/// last position is stationary, all within `tol`.
pub fn verify_tv1d_kkt(p: &Tv1dProblem, z: &[f64], tol: f64) -> Result<bool, Tv1dError> {
    let n = p.y_tilde.len();
    if z.len() != n {
        return Err(Tv1dError::LengthMismatch { expected: n, got: z.len() });
    }
    let mut s = 0.0;
    for r in 0..n {
        s += 2.0 * p.w.at(r) * (z[r] - p.y_tilde[r]);
        if !s.is_finite() {
            return Ok(false);
        }
        if r + 1 == n {
            return Ok(s.abs() <= tol);
        }
        if s.abs() > 1.0 + tol {
            return Ok(false);
        }
        let jump = z[r + 1] - z[r];
        if jump != 0.0 && (s - jump.signum()).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form for two points: each end moves 1/(2w) toward the other
    /// unless they fuse at the midpoint.
    fn two_point(y0: f64, y1: f64, w: f64) -> [f64; 2] {
        let shrink = 1.0 / (2.0 * w);
        if (y1 - y0).abs() <= 1.0 / w {
            let m = 0.5 * (y0 + y1);
            [m, m]
        } else {
            let d = (y1 - y0).signum() * shrink;
            [y0 + d, y1 - d]
        }
    }

    #[test]
    fn constant_is_fixed_point() {
        for w in [1e-3, 0.5, 7.0, 1e3] {
            let z = solve_tv1d(&Tv1dProblem::new(vec![2.5; 9], w));
            assert!(z.iter().all(|&v| (v - 2.5).abs() < 1e-12));
        }
    }

    #[test]
    fn two_points_separate() {
        let z = solve_tv1d(&Tv1dProblem::new(vec![0.0, 1.0], 10.0));
        let expected = two_point(0.0, 1.0, 10.0);
        assert_eq!(expected, [0.05, 0.95]);
        assert!((z[0] - 0.05).abs() < 1e-12 && (z[1] - 0.95).abs() < 1e-12);
    }

    #[test]
    fn two_points_fuse() {
        let z = solve_tv1d(&Tv1dProblem::new(vec![0.0, 1.0], 0.4));
        assert!((z[0] - 0.5).abs() < 1e-12 && (z[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_point_grid_against_closed_form() {
        for &(a, b) in &[(0.0, 3.0), (2.0, -1.0), (0.3, 0.31), (-4.0, 4.0)] {
            for &w in &[0.01, 0.2, 1.0, 5.0, 100.0] {
                let z = solve_tv1d(&Tv1dProblem::new(vec![a, b], w));
                let e = two_point(a, b, w);
                assert!((z[0] - e[0]).abs() < 1e-10 && (z[1] - e[1]).abs() < 1e-10, "{a} {b} {w}");
            }
        }
    }

    #[test]
    fn degenerate_lengths() {
        assert_eq!(solve_tv1d(&Tv1dProblem::new(vec![], 1.0)), Vec::<f64>::new());
        assert_eq!(solve_tv1d(&Tv1dProblem::new(vec![3.0], 1.0)), vec![3.0]);
    }

    #[test]
    fn kkt_accepts_constant_and_rejects_unpenalized() {
        let p = Tv1dProblem::new(vec![1.0; 5], 0.1);
        assert!(verify_tv1d_kkt(&p, &p.y_tilde, 1e-8).unwrap());
        let p = Tv1dProblem::new(vec![0.0, 5.0, -3.0, 2.0], 0.01);
        assert!(!verify_tv1d_kkt(&p, &p.y_tilde, 1e-8).unwrap());
    }

    #[test]
    fn kkt_length_mismatch() {
        let p = Tv1dProblem::new(vec![1.0, 2.0], 1.0);
        assert_eq!(
            verify_tv1d_kkt(&p, &[1.0], 1e-8),
            Err(Tv1dError::LengthMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn per_position_weights_certify() {
        let y = vec![0.0, 2.0, 1.5, -1.0, 4.0, 4.2, 0.0];
        let w = vec![0.3, 2.0, 0.7, 1.0, 0.05, 3.0, 1.1];
        let p = Tv1dProblem::weighted(y, w);
        let z = solve_tv1d(&p);
        assert!(verify_tv1d_kkt(&p, &z, 1e-10).unwrap());
    }
}
