//! Bowl shooting, singular space-like profiles and time-like blow-up pieces.

use super::RotationalError;
use crate::numerics::{integrate_ode_guarded, TerminalEvent, ToleranceConfig, Trajectory};
use crate::profile::{Causal, ProfileBranch, ProfileCurve, ProfileSample, RotationalKind, RotationalMeta};
use serde::{Deserialize, Serialize};

/// Right-hand side of the rotational slope equation,
/// `(1 − w²)(1 − (n−1) coth(s) w)`; singular at `s = 0`.
pub fn rhs_rot(s: f64, w: f64, n: usize) -> f64 {
    assert!(s > 0.0, "rotational slope equation is defined on s > 0");
    assert!(n >= 2);
    let m = (n - 1) as f64;
    (1.0 - w * w) * (1.0 - m / s.tanh() * w)
}

/// `|w|` considered to have reached its axis limit once it crosses this.
const LIMIT_THRESHOLD: f64 = 1.0 - 1e-4;
/// ... provided the axis is this close.
const LIMIT_S_WINDOW: f64 = 1e-3;
/// Endpoint for integrations toward the axis.
const S_AXIS: f64 = 1e-6;

fn rot_system(n: usize) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |s, y| [rhs_rot(s, y[0], n), y[0]]
}

fn profile_from(
    parts: Vec<Trajectory<2>>,
    n: usize,
    kind: RotationalKind,
    causal: Causal,
    s0: f64,
    f0: f64,
) -> ProfileCurve {
    let mut samples: Vec<ProfileSample> = Vec::new();
    for t in parts {
        for &(s, y) in &t.samples {
            samples.push(ProfileSample { s, w: y[0], f: y[1] });
        }
    }
    samples.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap());
    samples.dedup_by(|a, b| a.s == b.s);
    ProfileCurve {
        samples,
        branch: ProfileBranch::Rotational(RotationalMeta { n, kind }),
        causal,
        s0,
        f0,
    }
}

/// Shoot the unstable manifold of the phase-plane saddle out to `s_max`.
///
/// The trajectory starts at offset `delta` along the normalized unstable
/// eigenvector `(n, 1)`; the equation is singular at the axis, so the shot
/// never starts at `s = 0` itself. The profile satisfies `w(s) <
/// tanh(s)/(n−1)` everywhere, has slope `1/n` at the axis, and `f` is
/// anchored so that `f → 0` as `s → 0`.
pub fn bowl(
    n: usize,
    s_max: f64,
    delta: f64,
    cfg: &ToleranceConfig,
) -> Result<ProfileCurve, RotationalError> {
    if n < 2 {
        return Err(RotationalError::DomainError(format!("n = {n} below 2")));
    }
    if !(delta > 0.0 && delta < 1e-2) {
        return Err(RotationalError::DomainError(format!(
            "eigenvector offset delta = {delta} outside (0, 1e-2)"
        )));
    }
    if s_max <= delta * n as f64 {
        return Err(RotationalError::DomainError(format!(
            "s_max = {s_max} does not clear the shooting start"
        )));
    }
    let norm = ((n * n + 1) as f64).sqrt();
    let s_start = delta * n as f64 / norm;
    let w_start = delta / norm;
    // Leading-order anchor: w ≈ s/n near the axis, so f(s) ≈ s²/(2n).
    let f_start = s_start * s_start / (2.0 * n as f64);
    let traj = integrate_ode_guarded(
        rot_system(n),
        s_start,
        [w_start, f_start],
        s_max,
        cfg,
        |_, y| y[0].abs() < 1.0,
    );
    if traj.terminal_event != TerminalEvent::ReachedEnd {
        return Err(RotationalError::ShootingFailure(format!(
            "trajectory ended with {:?} before s_max (delta too large?)",
            traj.terminal_event
        )));
    }
    Ok(profile_from(vec![traj], n, RotationalKind::Bowl { delta }, Causal::SpaceLike, 0.0, 0.0))
}

/// Integrate a space-like initial condition `|z0| < 1` at `s0 > 0` in both
/// directions and report the axis limit tag: `−1`/`+1` for the two conic
/// families, `0` only when the data sits on the bowl itself.
pub fn spacelike_profile(
    n: usize,
    s0: f64,
    z0: f64,
    cfg: &ToleranceConfig,
) -> Result<(ProfileCurve, i8), RotationalError> {
    if n < 2 || !(s0 > 0.0) {
        return Err(RotationalError::DomainError(format!("need n >= 2 and s0 > 0, got n={n}, s0={s0}")));
    }
    if !(z0.abs() < 1.0) {
        return Err(RotationalError::DomainError(format!("|z0| must be below 1, got {z0}")));
    }

    // Toward the axis. The guard admits the whole strip |w| < 1 until the
    // axis window, inside which a slope beyond the limit threshold stops
    // the run; the surviving cases are decided at the endpoint.
    let back = integrate_ode_guarded(
        rot_system(n),
        s0,
        [z0, 0.0],
        S_AXIS,
        cfg,
        |s, y| !(y[0].abs() >= LIMIT_THRESHOLD && s <= LIMIT_S_WINDOW),
    );
    let (s_end, y_end) = back.last();
    let tag: i8 = match back.terminal_event {
        TerminalEvent::LeftRegion => y_end[0].signum() as i8,
        TerminalEvent::ReachedEnd | TerminalEvent::StepUnderflow => {
            if y_end[0].abs() >= 0.5 {
                y_end[0].signum() as i8
            } else if s_end <= LIMIT_S_WINDOW {
                0
            } else {
                return Err(RotationalError::ShootingFailure(format!(
                    "axis run stalled at s = {s_end} with w = {}",
                    y_end[0]
                )));
            }
        }
        TerminalEvent::BlowUpDetected => {
            return Err(RotationalError::ShootingFailure(
                "space-like run blew up; initial data violates |w| < 1".into(),
            ))
        }
    };

    let forward = integrate_ode_guarded(
        rot_system(n),
        s0,
        [z0, 0.0],
        (s0 + 20.0).max(20.0),
        cfg,
        |_, y| y[0].abs() < 1.0,
    );

    let curve = profile_from(
        vec![back, forward],
        n,
        RotationalKind::SpaceLikeSingular { limit_tag: tag },
        Causal::SpaceLike,
        s0,
        0.0,
    );
    Ok((curve, tag))
}

/// Blow-up data of a time-like run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowUpReport {
    pub s0: f64,
    pub z0: f64,
    /// `A = −½ ln(1 − 1/z0²)`. For `n ≥ 3` the slope blows up strictly
    /// inside `(s0, s0 + A)`; for `n = 2` the comparison that yields the
    /// bound degenerates and the detected time may fall slightly beyond it.
    pub a_bound: f64,
    /// Last accepted step before the slope crossed the blow-up threshold.
    pub detected_blow_up_s: f64,
}

/// Integrate a time-like initial condition `|z0| > 1`: backward the slope
/// settles to `sign(z0)` at the axis, forward it blows up in finite `s`.
pub fn timelike_profile(
    n: usize,
    s0: f64,
    z0: f64,
    cfg: &ToleranceConfig,
) -> Result<(ProfileCurve, BlowUpReport), RotationalError> {
    if n < 2 || !(s0 > 0.0) {
        return Err(RotationalError::DomainError(format!("need n >= 2 and s0 > 0, got n={n}, s0={s0}")));
    }
    if !(z0.abs() > 1.0) {
        return Err(RotationalError::DomainError(format!("|z0| must exceed 1, got {z0}")));
    }
    let a_bound = -0.5 * (1.0 - 1.0 / (z0 * z0)).ln();

    // Mirror symmetry w ↦ −w, so integrate the positive branch and flip back.
    let flip = z0 < 0.0;
    let z_start = z0.abs();

    let forward = integrate_ode_guarded(
        rot_system(n),
        s0,
        [z_start, 0.0],
        s0 + 10.0 * (a_bound + 1.0),
        cfg,
        |_, _| true,
    );
    if forward.terminal_event != TerminalEvent::BlowUpDetected {
        return Err(RotationalError::NoBlowUp(format!(
            "forward run ended with {:?}",
            forward.terminal_event
        )));
    }
    let detected_blow_up_s = forward.last().0;

    let back = integrate_ode_guarded(
        rot_system(n),
        s0,
        [z_start, 0.0],
        S_AXIS,
        cfg,
        |_, y| y[0].is_finite(),
    );

    let mut curve = profile_from(
        vec![back, forward],
        n,
        RotationalKind::TimeLike { blow_up_s: detected_blow_up_s, a_bound },
        Causal::TimeLike,
        s0,
        0.0,
    );
    if flip {
        for p in &mut curve.samples {
            p.w = -p.w;
            p.f = -p.f;
        }
    }
    Ok((curve, BlowUpReport { s0, z0, a_bound, detected_blow_up_s }))
}
