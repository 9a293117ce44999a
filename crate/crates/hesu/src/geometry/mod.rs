//! Models of the hyperbolic space `H^n`: the upper half-space with its
//! foliation by horospheres, the hyperboloid sheet in Lorentz space with its
//! foliation by distance spheres, and the half-space isometries used by the
//! Dirichlet solver's symmetry checks.
//!
//! Both models are carried side by side and never converted implicitly; the
//! only transfer map, [`hyperboloid_to_half_space`], exists for mesh export.

mod half_space;
mod hyperboloid;

pub use half_space::{
    half_space_distance, rho_half, HalfSpaceIsometry, HalfSpacePoint, IsometryElement,
};
pub use hyperboloid::{
    hyperboloid_distance, hyperboloid_to_half_space, lorentz_product, tau_hyperboloid,
    HyperboloidPoint,
};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("point outside model domain: {0}")]
    DomainError(String),
}

/// The constant-curvature level sets whose mean curvature is known in
/// closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelSetKind {
    /// `{x₁ = const}` in the half-space model.
    Horosphere,
    /// A distance sphere of intrinsic radius `tau` about a point.
    GeodesicSphere,
}

/// Mean curvature of a level set of the foliation parameter, with respect
/// to the normal along which the parameter increases away from the leaf
/// family's center (spheres) or toward the ideal boundary (horospheres).
pub fn level_set_mean_curvature(
    kind: LevelSetKind,
    n: usize,
    tau: Option<f64>,
) -> Result<f64, GeometryError> {
    assert!(n >= 2, "ambient dimension must be at least 2");
    let m = (n - 1) as f64;
    match kind {
        LevelSetKind::Horosphere => Ok(m),
        LevelSetKind::GeodesicSphere => {
            let t = tau.ok_or_else(|| {
                GeometryError::DomainError("geodesic sphere needs a radius".into())
            })?;
            if t <= 0.0 {
                return Err(GeometryError::DomainError(format!(
                    "geodesic sphere radius must be positive, got {t}"
                )));
            }
            Ok(m / t.tanh())
        }
    }
}

/// Christoffel symbol `Γ^k_{ij}` of the half-space metric `δ_ij / x₁²`
/// at `p`, indices zero-based with axis 0 the height coordinate.
pub fn christoffel_half(p: &HalfSpacePoint, i: usize, j: usize, k: usize) -> f64 {
    let n = p.dim();
    assert!(i < n && j < n && k < n, "index out of range");
    let x1 = p.coords()[0];
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    (-d(i, 0) * d(j, k) - d(j, 0) * d(i, k) + d(i, j) * d(k, 0)) / x1
}

/// Contraction `Σ_i Γ^i_{ij}` used by the divergence operator; equals
/// `-n δ_{j0} / x₁` for the half-space metric but is assembled from
/// [`christoffel_half`] so the solver inherits whatever the symbols say.
pub fn christoffel_trace(p: &HalfSpacePoint, j: usize) -> f64 {
    (0..p.dim()).map(|i| christoffel_half(p, i, j, i)).sum()
}
