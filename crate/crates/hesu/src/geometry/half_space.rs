//! Upper half-space model `{x ∈ ℝⁿ | x₁ > 0}` with metric `δ_ij / x₁²`.

use super::GeometryError;
use serde::{Deserialize, Serialize};

/// A point of the half-space model; coordinate 0 is the height `x₁ > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePoint {
    coords: Vec<f64>,
}

impl HalfSpacePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::DomainError(format!(
                "need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if !(coords[0] > 0.0) {
            return Err(GeometryError::DomainError(format!(
                "height coordinate must be positive, got {}",
                coords[0]
            )));
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Horosphere foliation parameter `ρ(x) = ln x₁`; constant exactly on the
/// horospheres `{x₁ = const}` and strictly increasing in the height.
pub fn rho_half(p: &HalfSpacePoint) -> f64 {
    p.coords[0].ln()
}

/// Hyperbolic distance in the half-space model,
/// `acosh(1 + |p−q|² / (2 p₁ q₁))`.
pub fn half_space_distance(p: &HalfSpacePoint, q: &HalfSpacePoint) -> f64 {
    assert_eq!(p.dim(), q.dim());
    let d2: f64 = p.coords.iter().zip(&q.coords).map(|(a, b)| (a - b) * (a - b)).sum();
    (1.0 + d2 / (2.0 * p.coords[0] * q.coords[0])).acosh()
}

/// One generator of the horosphere-preserving isometry group of the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum IsometryElement {
    /// `(x₁, x₂, …) ↦ (x₁, x₂ + v₁, …)` — translation along the horospheres.
    HorizontalTranslation(Vec<f64>),
    /// `x ↦ λ x` with `λ > 0`.
    Dilation(f64),
    /// Mirror across the vertical hyperplane `{x_axis = offset}`; `axis ≥ 1`.
    Reflection { axis: usize, offset: f64 },
}

/// A composite isometry, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceIsometry {
    pub elements: Vec<IsometryElement>,
}

impl HalfSpaceIsometry {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn translation(v: Vec<f64>) -> Self {
        Self { elements: vec![IsometryElement::HorizontalTranslation(v)] }
    }

    pub fn dilation(lambda: f64) -> Self {
        assert!(lambda > 0.0, "dilation factor must be positive");
        Self { elements: vec![IsometryElement::Dilation(lambda)] }
    }

    pub fn reflection(axis: usize, offset: f64) -> Self {
        assert!(axis >= 1, "reflections fix the height axis");
        Self { elements: vec![IsometryElement::Reflection { axis, offset }] }
    }

    pub fn then(mut self, other: Self) -> Self {
        self.elements.extend(other.elements);
        self
    }

    /// Image of `p`; the height coordinate stays positive for every element,
    /// so the result is again a model point.
    pub fn apply(&self, p: &HalfSpacePoint) -> HalfSpacePoint {
        let mut c = p.coords.clone();
        for e in &self.elements {
            match e {
                IsometryElement::HorizontalTranslation(v) => {
                    assert_eq!(v.len() + 1, c.len(), "translation dimension mismatch");
                    for (ci, vi) in c[1..].iter_mut().zip(v) {
                        *ci += vi;
                    }
                }
                IsometryElement::Dilation(l) => {
                    for ci in c.iter_mut() {
                        *ci *= l;
                    }
                }
                IsometryElement::Reflection { axis, offset } => {
                    assert!(*axis >= 1 && *axis < c.len(), "reflection axis out of range");
                    c[*axis] = 2.0 * offset - c[*axis];
                }
            }
        }
        HalfSpacePoint { coords: c }
    }

    /// Apply to a bare coordinate vector (used on grid nodes).
    pub fn apply_coords(&self, coords: &[f64]) -> Vec<f64> {
        let p = HalfSpacePoint { coords: coords.to_vec() };
        self.apply(&p).coords
    }
}
