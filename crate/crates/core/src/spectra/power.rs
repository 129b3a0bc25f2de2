//! Floating-point power iteration, used as an independent sanity check on
//! the exact Perron vector.

use super::hamiltonian::SparseIntMatrix;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone)]
pub struct PowerIteration {
    /// Rayleigh quotient `x.Hx / x.x` at the final iterate.
    pub eigenvalue: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Final iterate, normalized to unit 1-norm.
    pub vector: Vec<f64>,
}

/// Iterates `x <- Hx / |Hx|_1` from the uniform vector until successive
/// iterates agree to `1e-3 * tolerance` in the 1-norm.
pub fn power_iteration(h: &SparseIntMatrix, tolerance: f64, max_iterations: usize) -> PowerIteration {
    let dim = h.dim();
    let mut x = vec![1.0 / dim as f64; dim];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        let mut y = h.mul_f64(&x);
        let norm: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= norm);
        let change: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        iterations += 1;
        if change < 1e-3 * tolerance {
            converged = true;
            break;
        }
    }
    let hx = h.mul_f64(&x);
    let eigenvalue = dot(&x, &hx) / dot(&x, &x);
    PowerIteration { eigenvalue, iterations, converged, vector: x }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
