//! Coefficients of the non-divergence form of the graph equation.

use super::SolverError;
use crate::geometry::{christoffel_trace, HalfSpacePoint};

/// `A = (aⁱʲ)` and the zeroth-order part `b` of
/// `Σ aⁱʲ u_ij + b = 0`, the divergence-form equation multiplied by `W²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPair {
    /// Row-major `k × k` symmetric matrix
    /// `aⁱʲ = x₁² W² δ_ij + x₁⁴ p_i p_j`.
    pub a: Vec<f64>,
    pub k: usize,
    pub b: f64,
}

impl CoefficientPair {
    pub fn a_at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.k + j]
    }
}

/// Assemble the coefficients at a point with gradient `p` (both of length
/// `k ≤ ambient_n`; the solution is translation-invariant in the remaining
/// coordinates). Requires the space-like condition `x₁²|p|² < 1`.
///
/// The first-order part is contracted from the model's Christoffel symbols
/// rather than written out, so it stays consistent with the geometry
/// module:
/// `b = W² (2 x₁ p₁ + x₁² Σ_j (Σ_i Γ^i_{ij}) p_j) + x₁³ p₁ |p|² − W²`.
pub fn coefficients(x: &[f64], p: &[f64], ambient_n: usize) -> Result<CoefficientPair, SolverError> {
    let k = x.len();
    assert_eq!(p.len(), k, "gradient length mismatch");
    assert!(ambient_n >= k);
    let x1 = x[0];
    assert!(x1 > 0.0, "height must stay positive");
    let p2: f64 = p.iter().map(|v| v * v).sum();
    let w2 = 1.0 - x1 * x1 * p2;
    if w2 <= 0.0 {
        return Err(SolverError::NotSpacelike { margin: w2 });
    }

    let mut a = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            let mut v = x1.powi(4) * p[i] * p[j];
            if i == j {
                v += x1 * x1 * w2;
            }
            a[i * k + j] = v;
        }
    }

    // Ambient point with the same height; only the height enters the symbols.
    let mut coords = vec![0.0; ambient_n];
    coords[0] = x1;
    let point = HalfSpacePoint::new(coords).expect("positive height");
    let mut first_order = 2.0 * x1 * p[0];
    for j in 0..k {
        first_order += x1 * x1 * christoffel_trace(&point, j) * p[j];
    }
    let b = w2 * first_order + x1.powi(3) * p[0] * p2 - w2;

    Ok(CoefficientPair { a, k, b })
}
