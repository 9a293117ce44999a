//! Translating solitons of mean curvature flow in the hyperbolic Einstein
//! static universe `H^n ×₋₁ ℝ`.
//!
//! The crate constructs and classifies the three families of translators
//! that admit a one-dimensional reduction:
//!
//! * [`horosphere`] — profiles foliated by horospheres `{x₁ = const}` of the
//!   half-space model, built from closed-form antiderivative branches.
//! * [`rotational`] — rotationally invariant profiles: the bowl (shot along
//!   the unstable manifold of the phase-plane saddle), the singular
//!   space-like cone families, time-like blow-up pieces and the spindle.
//! * [`elliptic`] — the space-like graphical Dirichlet problem on box
//!   domains of the half-space model: coefficient assembly, divergence and
//!   non-divergence residuals, and a damped Newton solver with uniqueness,
//!   symmetry and rectangle verification routines.
//!
//! Shared infrastructure lives in [`numerics`] (adaptive Runge–Kutta with
//! event detection, bracketed root finding, adaptive quadrature, banded LU)
//! and [`geometry`] (half-space and hyperboloid models of `H^n`).

pub mod elliptic;
pub mod geometry;
pub mod horosphere;
pub mod numerics;
pub mod profile;
pub mod rotational;
pub mod verify;

pub use profile::{Causal, ProfileBranch, ProfileCurve, ProfileSample};
