//! Shared numerical kernels: adaptive ODE integration with event detection,
//! monotone root finding, adaptive quadrature and a banded direct solver.

mod banded;
mod ode;
mod quad;
mod root;

pub use banded::BandedMatrix;
pub use ode::{integrate_ode, integrate_ode_guarded, TerminalEvent, ToleranceConfig, Trajectory};
pub use quad::{quadrature, QuadratureError};
pub use root::{find_root_monotone, NotBracketed};
