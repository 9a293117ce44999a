//! Profile construction and family classification.

use super::branch::{invert_branch, BranchTag, HoroBranch};
use super::HoroError;
use crate::numerics::quadrature;
use crate::profile::{Causal, ProfileBranch, ProfileCurve, ProfileSample};

/// Right-hand side of the slope equation: `(1 − w²)(1 − m w)`.
pub fn rhs_horo(w: f64, m: f64) -> f64 {
    assert!(m >= 1.0, "slope parameter must satisfy m >= 1");
    (1.0 - w * w) * (1.0 - m * w)
}

/// The branches whose profiles are graphical translators of the requested
/// causal character in dimension `n`.
pub fn classify_horosphere_families(n: usize, causal: Causal) -> Vec<HoroBranch> {
    assert!(n >= 2, "ambient dimension must be at least 2");
    let m = (n - 1) as f64;
    let mk = |tag| HoroBranch::new(tag, m).expect("valid tag/m pairing");
    match (causal, n) {
        (Causal::SpaceLike, 2) => vec![mk(BranchTag::Linear), mk(BranchTag::P2)],
        (Causal::SpaceLike, _) => vec![mk(BranchTag::Linear), mk(BranchTag::Q2), mk(BranchTag::Q3)],
        (Causal::TimeLike, 2) => vec![mk(BranchTag::P1), mk(BranchTag::P3)],
        (Causal::TimeLike, _) => vec![mk(BranchTag::Q1), mk(BranchTag::Q4)],
    }
}

/// The `s` at which `f` is anchored to `f0`: the finite edge of the
/// inversion domain where the slope antiderivative has one, otherwise `s0`
/// itself.
pub fn anchor_point(branch: &HoroBranch, s0: f64) -> f64 {
    let hi = branch.image().hi;
    if hi.is_finite() {
        s0 + hi
    } else {
        s0
    }
}

/// `∫ w` from the anchor point to `s_to`. On the time-like branches the
/// slope diverges like an inverse square root at the anchor (the finite
/// edge of the domain); the substitution `v = anchor − q²` turns that leg
/// into a proper integral.
fn integral_from_anchor(branch: &HoroBranch, s0: f64, s_to: f64, tol: f64) -> Result<f64, HoroError> {
    let anchor = anchor_point(branch, s0);
    let slope = |s: f64| invert_branch(branch, s - s0).expect("s inside the branch image");
    if branch.image().hi.is_finite() {
        debug_assert!(s_to < anchor);
        let q_max = (anchor - s_to).sqrt();
        Ok(quadrature(|q| -2.0 * q * slope(anchor - q * q), 0.0, q_max, tol)?)
    } else {
        Ok(quadrature(slope, anchor, s_to, tol)?)
    }
}

/// Reconstruct the profile on `s_grid` (strictly increasing): the slope is
/// `w(s) = branch⁻¹(s − s0)` and `f` is its integral with `f = f0` at the
/// anchor point.
pub fn build_profile(
    branch: &HoroBranch,
    s0: f64,
    f0: f64,
    s_grid: &[f64],
) -> Result<ProfileCurve, HoroError> {
    assert!(!s_grid.is_empty(), "empty sample grid");
    for pair in s_grid.windows(2) {
        assert!(pair[0] < pair[1], "sample grid must be strictly increasing");
    }

    if branch.is_linear() {
        let m = branch.m();
        let samples = s_grid
            .iter()
            .map(|&s| ProfileSample { s, w: 1.0 / m, f: (s - s0) / m + f0 })
            .collect();
        return Ok(ProfileCurve {
            samples,
            branch: ProfileBranch::Horosphere(branch.clone()),
            causal: branch.causal(),
            s0,
            f0,
        });
    }

    let mut w = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        w.push(invert_branch(branch, s - s0)?);
    }

    let slope = |s: f64| invert_branch(branch, s - s0).expect("s inside the branch image");
    let s_last = *s_grid.last().unwrap();
    let mut f_val = f0 + integral_from_anchor(branch, s0, s_last, 1e-11)?;
    let mut f = vec![0.0; s_grid.len()];
    *f.last_mut().unwrap() = f_val;
    for k in (0..s_grid.len() - 1).rev() {
        f_val -= quadrature(slope, s_grid[k], s_grid[k + 1], 1e-12)?;
        f[k] = f_val;
    }

    let samples = s_grid
        .iter()
        .zip(w)
        .zip(f)
        .map(|((&s, w), f)| ProfileSample { s, w, f })
        .collect();
    Ok(ProfileCurve {
        samples,
        branch: ProfileBranch::Horosphere(branch.clone()),
        causal: branch.causal(),
        s0,
        f0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_ode, ToleranceConfig};

    fn grid(a: f64, b: f64, k: usize) -> Vec<f64> {
        (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()
    }

    #[test]
    fn rhs_fixed_points() {
        assert_eq!(rhs_horo(1.0, 1.0), 0.0);
        assert_eq!(rhs_horo(-1.0, 3.0), 0.0);
        assert_eq!(rhs_horo(0.5, 2.0), 0.0);
        assert_eq!(rhs_horo(0.0, 1.0), 1.0);
    }

    #[test]
    fn classification_tables() {
        let tags = |v: Vec<HoroBranch>| v.into_iter().map(|b| b.tag()).collect::<Vec<_>>();
        assert_eq!(
            tags(classify_horosphere_families(2, Causal::SpaceLike)),
            vec![BranchTag::Linear, BranchTag::P2]
        );
        assert_eq!(
            tags(classify_horosphere_families(3, Causal::SpaceLike)),
            vec![BranchTag::Linear, BranchTag::Q2, BranchTag::Q3]
        );
        assert_eq!(
            tags(classify_horosphere_families(2, Causal::TimeLike)),
            vec![BranchTag::P1, BranchTag::P3]
        );
        assert_eq!(
            tags(classify_horosphere_families(3, Causal::TimeLike)),
            vec![BranchTag::Q1, BranchTag::Q4]
        );
    }

    #[test]
    fn linear_profile_is_exact() {
        let b = HoroBranch::new(BranchTag::Linear, 2.0).unwrap();
        let c = build_profile(&b, 0.0, 0.0, &grid(0.0, 1.0, 11)).unwrap();
        for p in &c.samples {
            assert_eq!(p.f, p.s / 2.0);
            assert_eq!(p.w, 0.5);
        }
    }

    #[test]
    fn grid_beyond_domain_is_rejected() {
        // The Q1 image for m = 2 is (−∞, −(2/3) ln 2); s = 0.1 with s0 = 0
        // lies outside.
        let b = HoroBranch::new(BranchTag::Q1, 2.0).unwrap();
        let r = build_profile(&b, 0.0, 0.0, &[-1.0, 0.1]);
        assert!(matches!(r, Err(HoroError::OutsideImage { .. })));
    }

    #[test]
    fn profile_satisfies_slope_equation() {
        let b = HoroBranch::new(BranchTag::P2, 1.0).unwrap();
        let c = build_profile(&b, 0.0, 0.0, &grid(-2.0, 2.0, 401)).unwrap();
        // w = f' to finite-difference accuracy on this spacing.
        c.assert_consistent(1e-4);
        // w itself solves the slope equation: compare with direct
        // integration from the middle sample.
        let mid = c.samples[200];
        let cfg = ToleranceConfig::default();
        let traj = integrate_ode(
            |_, y: &[f64; 1]| [rhs_horo(y[0], 1.0)],
            mid.s,
            [mid.w],
            2.0,
            &cfg,
        );
        let (t_end, y_end) = traj.last();
        assert_eq!(t_end, 2.0);
        let w_closed = c.samples.last().unwrap().w;
        assert!((y_end[0] - w_closed).abs() < 1e-8, "{} vs {w_closed}", y_end[0]);
    }

    #[test]
    fn timelike_profile_anchor() {
        // P1-based profile: f is anchored at s0 (the finite edge of the
        // domain), approached continuously.
        let b = HoroBranch::new(BranchTag::P1, 1.0).unwrap();
        let s0 = 1.0;
        let c = build_profile(&b, s0, 2.0, &grid(-4.0, 0.9, 200)).unwrap();
        assert!(c.min_abs_w() > 1.0);
        // f(s) → f0 as s → s0⁻: the last sample plus the remaining improper
        // leg must land on f0.
        let last = c.samples.last().unwrap();
        let tail = integral_from_anchor(&b, s0, last.s, 1e-10).unwrap();
        assert!((last.f - tail - 2.0).abs() < 1e-8, "got {}", last.f - tail);
    }
}
