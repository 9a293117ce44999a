//! Sampled translator profiles `(s, w, f)` with `w = f'`, shared by the
//! horosphere and rotational constructors.

use crate::horosphere::HoroBranch;
use serde::{Deserialize, Serialize};

/// Causal character of the graph a profile generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Causal {
    /// `|f'| < 1`: the induced metric is Riemannian.
    SpaceLike,
    /// `|f'| > 1`.
    TimeLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    pub w: f64,
    pub f: f64,
}

/// Which construction produced a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileBranch {
    Horosphere(HoroBranch),
    Rotational(RotationalMeta),
}

/// Rotational profile metadata: the ambient dimension and the constructor
/// that produced the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationalMeta {
    pub n: usize,
    pub kind: RotationalKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RotationalKind {
    /// Unstable-manifold shot through the saddle; smooth across the axis.
    Bowl { delta: f64 },
    /// Space-like with axis limit `w → limit_tag` (`−1` or `+1`); conic.
    SpaceLikeSingular { limit_tag: i8 },
    /// Time-like piece with finite blow-up of the slope.
    TimeLike { blow_up_s: f64, a_bound: f64 },
    /// One monotone branch of a spindle (`sign` = slope sign).
    SpindleBranch { sign: i8 },
}

/// A sampled solution `(s, w(s), f(s))` of a profile equation, with
/// strictly increasing `s` and `w` the derivative of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub samples: Vec<ProfileSample>,
    pub branch: ProfileBranch,
    pub causal: Causal,
    /// Location of the inversion anchor (`w(s)` is recovered from the value
    /// `s − s0` for horosphere branches).
    pub s0: f64,
    /// Additive constant of `f`.
    pub f0: f64,
}

impl ProfileCurve {
    pub fn s_range(&self) -> (f64, f64) {
        (self.samples[0].s, self.samples.last().unwrap().s)
    }

    /// Derivative of `w` at a sample, from the generating profile equation.
    fn w_slope(&self, s: f64, w: f64) -> f64 {
        match &self.branch {
            ProfileBranch::Horosphere(b) => (1.0 - w * w) * (1.0 - b.m() * w),
            ProfileBranch::Rotational(meta) => {
                let m = (meta.n - 1) as f64;
                (1.0 - w * w) * (1.0 - m / s.tanh() * w)
            }
        }
    }

    fn bracket(&self, s: f64) -> (usize, usize) {
        let v = &self.samples;
        assert!(
            s >= v[0].s - 1e-12 && s <= v[v.len() - 1].s + 1e-12,
            "s = {s} outside sampled range [{}, {}]",
            v[0].s,
            v[v.len() - 1].s
        );
        let (mut lo, mut hi) = (0usize, v.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if v[mid].s <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    /// Cubic Hermite interpolation of `w` at `s` inside the sampled range.
    pub fn eval_w(&self, s: f64) -> f64 {
        let (lo, hi) = self.bracket(s);
        let (a, b) = (self.samples[lo], self.samples[hi]);
        hermite(s, a.s, b.s, a.w, b.w, self.w_slope(a.s, a.w), self.w_slope(b.s, b.w))
    }

    /// Cubic Hermite interpolation of `f` at `s` (slopes are `w`).
    pub fn eval_f(&self, s: f64) -> f64 {
        let (lo, hi) = self.bracket(s);
        let (a, b) = (self.samples[lo], self.samples[hi]);
        hermite(s, a.s, b.s, a.f, b.f, a.w, b.w)
    }

    pub fn max_abs_w(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, p| m.max(p.w.abs()))
    }

    pub fn min_abs_w(&self) -> f64 {
        self.samples.iter().fold(f64::INFINITY, |m, p| m.min(p.w.abs()))
    }

    /// Check sample ordering, the causal guard and the `w = f'` relation
    /// (by centered differences, against `fd_tol`). Panics on violation;
    /// used by constructors and tests.
    pub fn assert_consistent(&self, fd_tol: f64) {
        assert!(self.samples.len() >= 2, "profile needs at least two samples");
        for pair in self.samples.windows(2) {
            assert!(pair[0].s < pair[1].s, "sample times must increase");
        }
        let linear_exception = matches!(
            &self.branch,
            ProfileBranch::Horosphere(b) if b.is_linear() && (b.m() - 1.0).abs() < 1e-14
        );
        match self.causal {
            Causal::SpaceLike => {
                if !linear_exception {
                    assert!(self.max_abs_w() < 1.0, "space-like profile with |w| ≥ 1");
                }
            }
            Causal::TimeLike => {
                assert!(self.min_abs_w() > 1.0, "time-like profile with |w| ≤ 1");
            }
        }
        for win in self.samples.windows(3) {
            let (a, b, c) = (win[0], win[1], win[2]);
            let ha = b.s - a.s;
            let hb = c.s - b.s;
            let d = -hb / (ha * (ha + hb)) * a.f + (hb - ha) / (ha * hb) * b.f
                + ha / (hb * (ha + hb)) * c.f;
            assert!(
                (d - b.w).abs() <= fd_tol,
                "f' deviates from w at s = {}: {} vs {}",
                b.s,
                d,
                b.w
            );
        }
    }
}

fn hermite(x: f64, x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64) -> f64 {
    let h = x1 - x0;
    if h == 0.0 {
        return y0;
    }
    let t = (x - x0) / h;
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * m1
}
