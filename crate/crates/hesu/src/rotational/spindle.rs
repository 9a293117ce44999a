//! The spindle: the time-like bigraph built from the inverse-function
//! equation for the height-over-slope parameterization.

use super::RotationalError;
use crate::numerics::{integrate_ode_guarded, TerminalEvent, ToleranceConfig, Trajectory};
use crate::profile::{Causal, ProfileBranch, ProfileCurve, ProfileSample, RotationalKind, RotationalMeta};

/// Right-hand side of the inverse-function equation
/// `g'' = (g'² − 1)((n−1) coth(g) − g')`, obtained by differentiating the
/// inverse relation of the rotational profile equation.
pub fn g_rhs(n: usize) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    let m = (n - 1) as f64;
    move |_t, y| {
        let (g, gp) = (y[0], y[1]);
        [gp, (gp * gp - 1.0) * (m / g.tanh() - gp)]
    }
}

/// `g''` at the critical point, from the equation: `−(n−1) coth(s_top)`.
pub fn seam_second_derivative(n: usize, s_top: f64) -> f64 {
    assert!(n >= 2 && s_top > 0.0);
    -((n - 1) as f64) / s_top.tanh()
}

/// A spindle around height `s_max`: the solution `g` of the inverse
/// equation through `g(t0) = s_top`, `g'(t0) = 0`, split at the maximum
/// into the two strictly monotone branches and inverted back to the
/// time-like profiles `f₊` (slope > 1) and `f₋` (slope < −1).
#[derive(Debug, Clone)]
pub struct SpindleResult {
    pub g_trajectory: Trajectory<2>,
    pub f_plus: ProfileCurve,
    pub f_minus: ProfileCurve,
    /// The critical height where the branches meet with infinite slope.
    pub s_max: f64,
    pub n: usize,
}

impl SpindleResult {
    /// Hermite evaluation of `g` at `t` inside the sampled range.
    pub fn eval_g(&self, t: f64) -> f64 {
        let rhs = g_rhs(self.n);
        self.g_trajectory.eval_component(t, 0, rhs)
    }

    /// Hermite evaluation of `g'` at `t`.
    pub fn eval_gp(&self, t: f64) -> f64 {
        let rhs = g_rhs(self.n);
        self.g_trajectory.eval_component(t, 1, rhs)
    }

    /// Largest `|f(g(t)) − t|` over off-sample probes of both branches,
    /// away from the seam where the branch slopes diverge.
    pub fn inverse_consistency_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for branch in [&self.f_plus, &self.f_minus] {
            let sign = branch.samples[0].w.signum();
            for win in self.g_trajectory.samples.windows(2) {
                let (t0, y0) = win[0];
                let (t1, y1) = win[1];
                // Keep to the branch in question, away from the seam.
                // The slope of the inverse, w = 1/g', shares the sign of g'.
                if y0[1] * sign <= 0.0 || y1[1] * sign <= 0.0 {
                    continue;
                }
                if y0[1].abs().min(y1[1].abs()) < 0.2 {
                    continue;
                }
                let t_mid = 0.5 * (t0 + t1);
                let s_mid = self.eval_g(t_mid);
                let (lo, hi) = branch.s_range();
                if s_mid <= lo || s_mid >= hi {
                    continue;
                }
                let t_back = branch.eval_f(s_mid);
                worst = worst.max((t_back - t_mid).abs());
            }
        }
        worst
    }
}

// The slope of a branch's inverse, w = 1/g', has the same sign as g'; g'
// runs in (−1, 1), so |w| > 1 on both branches.
fn branch_profile(
    points: impl Iterator<Item = (f64, [f64; 2])>,
    n: usize,
    s_top: f64,
    sign: i8,
) -> ProfileCurve {
    let mut samples: Vec<ProfileSample> = points
        .filter(|(_, y)| y[1].abs() > 1e-12)
        .map(|(t, y)| ProfileSample { s: y[0], w: 1.0 / y[1], f: t })
        .collect();
    samples.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap());
    samples.dedup_by(|a, b| a.s == b.s);
    ProfileCurve {
        samples,
        branch: ProfileBranch::Rotational(RotationalMeta {
            n,
            kind: RotationalKind::SpindleBranch { sign },
        }),
        causal: Causal::TimeLike,
        s0: s_top,
        f0: 0.0,
    }
}

pub fn spindle(n: usize, s_top: f64, cfg: &ToleranceConfig) -> Result<SpindleResult, RotationalError> {
    if n < 2 || !(s_top > 0.0) {
        return Err(RotationalError::DomainError(format!(
            "need n >= 2 and s_top > 0, got n={n}, s_top={s_top}"
        )));
    }
    let g_floor = 1e-3 * s_top.min(1.0);
    let guard = |_t: f64, y: &[f64; 2]| y[0] > g_floor && y[1].abs() < 1.0;
    let horizon = 3.0 * s_top + 10.0;

    let right = integrate_ode_guarded(g_rhs(n), 0.0, [s_top, 0.0], horizon, cfg, guard);
    let left = integrate_ode_guarded(g_rhs(n), 0.0, [s_top, 0.0], -horizon, cfg, guard);
    for (name, traj) in [("descending", &right), ("ascending", &left)] {
        if traj.terminal_event == TerminalEvent::ReachedEnd {
            return Err(RotationalError::InversionFailure(format!(
                "{name} branch never reached the axis region within t-horizon {horizon}"
            )));
        }
        if traj.samples.len() < 4 {
            return Err(RotationalError::InversionFailure(format!(
                "{name} branch too short to invert"
            )));
        }
    }
    // Strict monotonicity away from the seam.
    for (traj, expected_sign) in [(&right, -1.0f64), (&left, 1.0f64)] {
        for &(t, y) in traj.samples.iter().skip(1) {
            if y[1] * expected_sign <= 0.0 {
                return Err(RotationalError::InversionFailure(format!(
                    "slope changed sign at t = {t} before reaching the requested range"
                )));
            }
        }
    }

    let f_minus = branch_profile(right.samples.iter().copied(), n, s_top, -1);
    let f_plus = branch_profile(left.samples.iter().copied(), n, s_top, 1);

    // Fuse the two halves into one ascending-t trajectory through the seam.
    let mut merged: Vec<(f64, [f64; 2])> = left.samples.iter().rev().copied().collect();
    merged.extend(right.samples.iter().skip(1).copied());
    let g_trajectory = Trajectory { samples: merged, terminal_event: right.terminal_event };

    Ok(SpindleResult { g_trajectory, f_plus, f_minus, s_max: s_top, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seam_curvature_values() {
        // n = 2: −coth(1); n = 3: −2 coth(1).
        assert!((seam_second_derivative(2, 1.0) + 1.3130352854993312).abs() < 1e-15);
        assert!((seam_second_derivative(3, 1.0) + 2.6260705709986624).abs() < 1e-15);
    }

    #[test]
    fn branches_are_time_like_and_meet_at_the_top() {
        let cfg = ToleranceConfig::default();
        let sp = spindle(2, 1.0, &cfg).unwrap();
        assert!(sp.f_plus.min_abs_w() > 1.0);
        assert!(sp.f_minus.min_abs_w() > 1.0);
        assert!(sp.f_plus.samples.iter().all(|p| p.w > 1.0));
        assert!(sp.f_minus.samples.iter().all(|p| p.w < -1.0));
        // Both branches approach the critical height from below.
        let top_plus = sp.f_plus.s_range().1;
        let top_minus = sp.f_minus.s_range().1;
        assert!(top_plus < 1.0 && 1.0 - top_plus < 0.05);
        assert!(top_minus < 1.0 && 1.0 - top_minus < 0.05);
    }

    #[test]
    fn inverse_consistency() {
        let cfg = ToleranceConfig::default();
        let sp = spindle(3, 1.5, &cfg).unwrap();
        assert!(sp.inverse_consistency_error() < 1e-6);
    }

    #[test]
    fn g_second_difference_matches_equation_at_seam() {
        let cfg = ToleranceConfig::default();
        let sp = spindle(2, 1.0, &cfg).unwrap();
        let h = 1e-3;
        let d2 = (sp.eval_g(h) - 2.0 * sp.eval_g(0.0) + sp.eval_g(-h)) / (h * h);
        assert!(
            (d2 - seam_second_derivative(2, 1.0)).abs() < 1e-4,
            "centered second difference {d2}"
        );
    }
}
