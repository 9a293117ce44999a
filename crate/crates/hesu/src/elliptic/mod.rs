//! The space-like graphical translator Dirichlet problem on box domains of
//! the half-space model.
//!
//! The graph function `u` satisfies `div(∇u/W) = 1/W` with
//! `W = √(1 − |∇u|²)`; multiplying through by `W²` turns it into the
//! quasilinear non-divergence operator `Σ aⁱʲ u_ij + b` assembled in
//! [`coefficients`]. Both discrete residuals are second-order on uniform
//! grids and their zero sets coincide on space-like iterates.
//!
//! Horosphere-foliated exact solutions enter through the foliation
//! parameter [`sigma`], oriented so that the profile families solve the
//! same equation as the solver (the parameter grows toward the ideal
//! boundary `x₁ → 0`).

mod checks;
mod coeffs;
mod domain;
mod residual;
mod solve;

pub use checks::{
    horosphere_graph, rectangle_problem, symmetry_extension_check, verify_uniqueness,
    RectangleReport, SymmetryReport, UniquenessReport,
};
pub use coeffs::{coefficients, CoefficientPair};
pub use domain::{Axis, BoxDomain, GridSolution, MAX_AXES};
pub use residual::{assemble_nondivergence, residual_divergence_form};
pub use solve::{solve_dirichlet, SolverConfig, SolverReport};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolverError {
    #[error("state is not space-like (margin {margin:.3e})")]
    NotSpacelike { margin: f64 },
    #[error("no Newton step maintains the space-like margin above {floor:.3e}")]
    MarginCollapse { floor: f64 },
    #[error("Newton did not converge within {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("domain is not invariant under the isometry: {0}")]
    DomainNotInvariant(String),
    #[error("invalid domain or data: {0}")]
    Domain(String),
    #[error("linear solve failed: {0}")]
    Linear(String),
    #[error("profile error while building boundary data: {0}")]
    Profile(#[from] crate::horosphere::HoroError),
}

/// Foliation parameter pulled back to the half-space height: `σ = −ln x₁`.
/// Horosphere profiles `f` give graph solutions `u = f ∘ σ`.
pub fn sigma(x1: f64) -> f64 {
    -x1.ln()
}

/// Height at which `σ` takes the value `s`.
pub fn sigma_inv(s: f64) -> f64 {
    (-s).exp()
}
