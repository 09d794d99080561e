//! Gauss-Legendre quadrature on the reference interval and square.

use crate::basis::legendre_with_deriv;
use crate::error::{Result, SolverError};

pub const MAX_POINTS: usize = 32;

/// 1D Gauss-Legendre rule on [-1, 1] with `m` points (exact through
/// degree 2m-1).
#[derive(Debug, Clone)]
pub struct GaussRule1d {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Tensor-product rule on the reference square [-1,1]^2; `m` points per
/// direction, weights summing to 4.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    pub per_dir: usize,
}

pub fn gauss_rule_1d(m: usize) -> Result<GaussRule1d> {
    if m < 1 || m > MAX_POINTS {
        return Err(SolverError::Argument(format!(
            "quadrature order {m} outside 1..={MAX_POINTS}"
        )));
    }
    let mut points = vec![0.0; m];
    let mut weights = vec![0.0; m];
    // Newton iteration from the Chebyshev-like initial guess; roots are
    // symmetric so only half are solved for.
    for i in 0..(m + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x.abs();
        points[m - 1 - i] = x.abs();
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        points[m / 2] = 0.0;
    }
    Ok(GaussRule1d { points, weights })
}

/// Tensor-product Gauss-Legendre rule; point index runs x-fastest.
pub fn gauss_rule(m: usize) -> Result<QuadratureRule> {
    let rule = gauss_rule_1d(m)?;
    let n = m * m;
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for iy in 0..m {
        for ix in 0..m {
            points.push((rule.points[ix], rule.points[iy]));
            weights.push(rule.weights[ix] * rule.weights[iy]);
        }
    }
    Ok(QuadratureRule {
        points,
        weights,
        per_dir: m,
    })
}
