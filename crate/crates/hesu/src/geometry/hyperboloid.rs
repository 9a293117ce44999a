//! Hyperboloid model: the upper sheet of `⟨p,p⟩_L = −1` in Lorentz space
//! `ℝ^{n,1}`, with its foliation by distance spheres about the vertex.

use super::{GeometryError, HalfSpacePoint};
use serde::{Deserialize, Serialize};

const LORENTZ_TOL: f64 = 1e-12;

/// A point of the upper hyperboloid sheet; the last coordinate is the
/// time-like one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperboloidPoint {
    coords: Vec<f64>,
}

impl HyperboloidPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 3 {
            return Err(GeometryError::DomainError(format!(
                "need at least 3 ambient coordinates, got {}",
                coords.len()
            )));
        }
        let last = coords[coords.len() - 1];
        if !(last > 0.0) {
            return Err(GeometryError::DomainError(format!(
                "time-like coordinate must be positive, got {last}"
            )));
        }
        let q = lorentz_product(&coords, &coords);
        if (q + 1.0).abs() > LORENTZ_TOL * last.max(1.0).powi(2) {
            return Err(GeometryError::DomainError(format!(
                "Lorentz norm is {q}, expected -1"
            )));
        }
        Ok(Self { coords })
    }

    /// Point at intrinsic distance `tau` from the vertex, in the plane of
    /// spatial axes `(axis_a, axis_b)` at angle `theta`. Chiefly a test and
    /// mesh helper.
    pub fn from_polar(n: usize, tau: f64, theta: f64, axis_a: usize, axis_b: usize) -> Self {
        assert!(axis_a < n && axis_b < n && axis_a != axis_b);
        let mut coords = vec![0.0; n + 1];
        coords[n] = tau.cosh();
        coords[axis_a] = tau.sinh() * theta.cos();
        coords[axis_b] = tau.sinh() * theta.sin();
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn height(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }
}

/// Lorentz inner product `Σ x_i y_i − x_{n+1} y_{n+1}`.
pub fn lorentz_product(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() - 1;
    let spatial: f64 = x[..n].iter().zip(&y[..n]).map(|(a, b)| a * b).sum();
    spatial - x[n] * y[n]
}

/// Intrinsic distance between hyperboloid points, `acosh(−⟨p,q⟩_L)`.
pub fn hyperboloid_distance(p: &HyperboloidPoint, q: &HyperboloidPoint) -> f64 {
    (-lorentz_product(&p.coords, &q.coords)).max(1.0).acosh()
}

/// Radial foliation parameter `τ = ln(√(ρ²−1) + ρ)` with `ρ = p_{n+1}`;
/// satisfies `cosh τ = ρ`. Errors if the height lies below the sheet vertex.
pub fn tau_hyperboloid(p: &HyperboloidPoint) -> Result<f64, GeometryError> {
    let rho = p.height();
    if rho < 1.0 {
        return Err(GeometryError::DomainError(format!(
            "height {rho} below the vertex of the sheet"
        )));
    }
    Ok(((rho * rho - 1.0).sqrt() + rho).ln())
}

/// Transfer to the upper half-space model. Plumbing for mesh export only;
/// all intrinsic rotational quantities are functions of `τ` and never need
/// this map.
pub fn hyperboloid_to_half_space(p: &HyperboloidPoint) -> HalfSpacePoint {
    let c = &p.coords;
    let n = p.dim();
    let denom = c[n] - c[n - 1];
    let mut out = Vec::with_capacity(n);
    out.push(1.0 / denom);
    for i in 0..n - 1 {
        out.push(c[i] / denom);
    }
    HalfSpacePoint::new(out).expect("upper sheet maps into the half-space")
}
