//! Rotationally invariant translator profiles.
//!
//! The slope `w = f'` of a rotational profile solves
//! `w' = (1 − w²)(1 − (n−1) coth(s) w)` on `s > 0`. The associated
//! phase-plane vector field has a saddle at the origin whose unstable
//! manifold is the bowl; every other space-like solution develops a conic
//! singularity on the axis, and every time-like solution blows up in finite
//! `s` and glues into a spindle through the inverse-function equation.

mod phase;
mod profiles;
mod spindle;

pub use phase::{
    linearize_fixed_point, nullcline, phase_vector_field, FixedPoint, LinearizationReport,
    PhaseClassification, PhasePoint,
};
pub use profiles::{bowl, rhs_rot, spacelike_profile, timelike_profile, BlowUpReport};
pub use spindle::{seam_second_derivative, spindle, SpindleResult};

use crate::profile::{ProfileBranch, ProfileCurve, RotationalKind};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RotationalError {
    #[error("invalid input: {0}")]
    DomainError(String),
    #[error("shooting failed: {0}")]
    ShootingFailure(String),
    #[error("spindle branch inversion failed: {0}")]
    InversionFailure(String),
    #[error("no finite-time blow-up detected: {0}")]
    NoBlowUp(String),
    #[error("profile cannot be classified: {0}")]
    Unclassifiable(String),
}

/// The classification of a rotational profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationalClass {
    Bowl,
    SpaceLikeConeMinus,
    SpaceLikeConePlus,
    SpindlePiece,
}

/// Classify a profile produced by this module.
pub fn classify_rotational(profile: &ProfileCurve) -> Result<RotationalClass, RotationalError> {
    let meta = match &profile.branch {
        ProfileBranch::Rotational(meta) => meta,
        ProfileBranch::Horosphere(_) => {
            return Err(RotationalError::Unclassifiable(
                "horosphere-foliated profile handed to the rotational classifier".into(),
            ))
        }
    };
    match &meta.kind {
        RotationalKind::Bowl { .. } => Ok(RotationalClass::Bowl),
        RotationalKind::SpaceLikeSingular { limit_tag } => match limit_tag {
            -1 => Ok(RotationalClass::SpaceLikeConeMinus),
            1 => Ok(RotationalClass::SpaceLikeConePlus),
            0 => Ok(RotationalClass::Bowl),
            t => Err(RotationalError::Unclassifiable(format!("unexpected axis limit tag {t}"))),
        },
        RotationalKind::TimeLike { .. } | RotationalKind::SpindleBranch { .. } => {
            Ok(RotationalClass::SpindlePiece)
        }
    }
}
