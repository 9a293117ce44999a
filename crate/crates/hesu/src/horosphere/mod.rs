//! Translator profiles foliated by horospheres.
//!
//! With `w = f'` the profile equation reduces to
//! `w' = (1 − w²)(1 − m w)`, `m = n − 1`, whose non-constant solutions are
//! recovered by inverting a closed-form antiderivative of
//! `1/((1 − x²)(1 − m x))` on each maximal interval. The eight resulting
//! families are the `Linear` (constant-slope) one plus the three `P`
//! branches for `m = 1` and the four `Q` branches for `m > 1`.

mod branch;
mod build;

pub use branch::{eval_antiderivative, invert_branch, BranchTag, HoroBranch, Interval, Monotonicity};
pub use build::{anchor_point, build_profile, classify_horosphere_families, rhs_horo};

use crate::numerics::NotBracketed;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HoroError {
    #[error("x = {x} outside branch interval ({lo}, {hi})")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },
    #[error("y = {y} outside branch image ({lo}, {hi})")]
    OutsideImage { y: f64, lo: f64, hi: f64 },
    #[error("the constant-slope family has no antiderivative branch")]
    LinearBranch,
    #[error("branch tag {tag:?} requires m {requirement}, got {m}")]
    BadSlopeParameter { tag: BranchTag, requirement: &'static str, m: f64 },
    #[error("inversion failed to bracket: {0}")]
    Bracket(#[from] NotBracketed),
    #[error("quadrature failure while reconstructing f: {0}")]
    Quadrature(#[from] crate::numerics::QuadratureError),
}
