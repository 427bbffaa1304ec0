//! Separable smooth convex losses and the safeguarded scalar Newton solve
//! used by the generic primal update.

use std::fmt;
use std::sync::Arc;

/// A per-coordinate loss `l(y_i, beta_i)`, smooth and convex in `beta_i`.
pub trait SmoothLoss: Send + Sync {
    fn value(&self, y: f64, beta: f64) -> f64;
    fn derivative(&self, y: f64, beta: f64) -> f64;
    fn second_derivative(&self, y: f64, beta: f64) -> f64;

    /// Open interval on which the loss is defined.
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn name(&self) -> &str {
        "custom"
    }
}

/// `l(y, b) = b - y log b` for `b > 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PoissonLoss;

impl SmoothLoss for PoissonLoss {
    fn value(&self, y: f64, beta: f64) -> f64 {
        if y == 0.0 {
            beta
        } else {
            beta - y * beta.ln()
        }
    }

    fn derivative(&self, y: f64, beta: f64) -> f64 {
        1.0 - y / beta
    }

    fn second_derivative(&self, y: f64, beta: f64) -> f64 {
        y / (beta * beta)
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn name(&self) -> &str {
        "poisson"
    }
}

/// `l(y, b) = log(1 + e^b) - y b`, with `y` in `[0, 1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogisticLoss;

impl SmoothLoss for LogisticLoss {
    fn value(&self, y: f64, beta: f64) -> f64 {
        let softplus = if beta > 0.0 { beta + (-beta).exp().ln_1p() } else { beta.exp().ln_1p() };
        softplus - y * beta
    }

    fn derivative(&self, y: f64, beta: f64) -> f64 {
        1.0 / (1.0 + (-beta).exp()) - y
    }

    fn second_derivative(&self, _y: f64, beta: f64) -> f64 {
        let p = 1.0 / (1.0 + (-beta).exp());
        p * (1.0 - p)
    }

    fn name(&self) -> &str {
        "logistic"
    }
}

#[derive(Clone)]
pub enum Loss {
    /// `0.5 * (y - beta)^2`
    Squared,
    Smooth(Arc<dyn SmoothLoss>),
}

impl fmt::Debug for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Loss::Squared => f.write_str("Squared"),
            Loss::Smooth(l) => write!(f, "Smooth({})", l.name()),
        }
    }
}

impl Loss {
    pub fn smooth(loss: impl SmoothLoss + 'static) -> Self {
        Loss::Smooth(Arc::new(loss))
    }

    pub fn value(&self, y: f64, beta: f64) -> f64 {
        match self {
            Loss::Squared => 0.5 * (y - beta) * (y - beta),
            Loss::Smooth(l) => l.value(y, beta),
        }
    }

    pub fn derivative(&self, y: f64, beta: f64) -> f64 {
        match self {
            Loss::Squared => beta - y,
            Loss::Smooth(l) => l.derivative(y, beta),
        }
    }

    pub fn second_derivative(&self, y: f64, beta: f64) -> f64 {
        match self {
            Loss::Squared => 1.0,
            Loss::Smooth(l) => l.second_derivative(y, beta),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            Loss::Squared => (f64::NEG_INFINITY, f64::INFINITY),
            Loss::Smooth(l) => l.domain(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { max_iters: 20, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonFiniteDerivative {
    pub beta: f64,
}

/// Pulls `x` strictly inside `(lo, hi)`.
pub(crate) fn interior(x: f64, (lo, hi): (f64, f64)) -> f64 {
    if x > lo && x < hi {
        return x;
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => {
            if x <= lo {
                lo + 1.0_f64.max(lo.abs() * 1e-3)
            } else {
                x
            }
        }
        (false, true) => {
            if x >= hi {
                hi - 1.0_f64.max(hi.abs() * 1e-3)
            } else {
                x
            }
        }
        (false, false) => x,
    }
}

/// Minimizes `l(y, b) + 0.5 * quad_weight * b^2 - quad_linear * b` over the
/// loss domain, i.e. finds the root of
/// `phi(b) = l'(y, b) + quad_weight * b - quad_linear`.
///
/// Newton steps that leave the current bracket are replaced by bisection, so
/// iterates stay inside the domain.
pub(crate) fn newton_scalar(
    loss: &Loss,
    y: f64,
    quad_weight: f64,
    quad_linear: f64,
    start: f64,
    cfg: NewtonConfig,
) -> Result<f64, NonFiniteDerivative> {
    let (mut lo, mut hi) = loss.domain();
    let mut b = interior(start, (lo, hi));
    for _ in 0..cfg.max_iters {
        let phi = loss.derivative(y, b) + quad_weight * b - quad_linear;
        let dphi = loss.second_derivative(y, b) + quad_weight;
        if !phi.is_finite() || !dphi.is_finite() {
            return Err(NonFiniteDerivative { beta: b });
        }
        if phi == 0.0 {
            return Ok(b);
        }
        if phi > 0.0 {
            hi = b;
        } else {
            lo = b;
        }
        let mut next = if dphi > 0.0 { b - phi / dphi } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (true, false) => b + (b - lo).abs().max(1.0),
                (false, true) => b - (hi - b).abs().max(1.0),
                (false, false) => b,
            };
        }
        let step = (next - b).abs();
        b = next;
        if step <= cfg.tol * (1.0 + b.abs()) {
            break;
        }
    }
    Ok(b)
}
