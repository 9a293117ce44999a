//! The antiderivative branches and their inversion.

use super::HoroError;
use crate::numerics::find_root_monotone;
use crate::profile::Causal;
use serde::{Deserialize, Serialize};

/// Open interval, possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains_strict(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchTag {
    /// `w ≡ 1/m`, `f(s) = s/m + f₀`.
    Linear,
    P1,
    P2,
    P3,
    Q1,
    Q2,
    Q3,
    Q4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// One branch of the slope antiderivative, together with its interval of
/// slopes, its image, monotonicity and the causal character of the
/// profiles it generates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoroBranch {
    tag: BranchTag,
    m: f64,
    w_interval: Interval,
    image: Interval,
    monotonicity: Monotonicity,
    causal: Causal,
}

impl HoroBranch {
    /// Build the branch for slope parameter `m ≥ 1`. `P*` tags require
    /// `m = 1` exactly, `Q*` tags require `m > 1`; `Linear` accepts any.
    pub fn new(tag: BranchTag, m: f64) -> Result<Self, HoroError> {
        if !(m >= 1.0) {
            return Err(HoroError::BadSlopeParameter { tag, requirement: ">= 1", m });
        }
        use BranchTag::*;
        match tag {
            P1 | P2 | P3 if m != 1.0 => {
                return Err(HoroError::BadSlopeParameter { tag, requirement: "= 1", m })
            }
            Q1 | Q2 | Q3 | Q4 if m <= 1.0 => {
                return Err(HoroError::BadSlopeParameter { tag, requirement: "> 1", m })
            }
            _ => {}
        }
        let inf = f64::INFINITY;
        // Finite limit shared by the two outer Q branches.
        let q_limit = -m / (m * m - 1.0) * m.ln();
        let (w_interval, image, monotonicity, causal) = match tag {
            Linear => (
                Interval { lo: 1.0 / m, hi: 1.0 / m },
                Interval { lo: -inf, hi: inf },
                Monotonicity::Increasing,
                Causal::SpaceLike,
            ),
            P1 => (
                Interval { lo: -inf, hi: -1.0 },
                Interval { lo: -inf, hi: 0.0 },
                Monotonicity::Decreasing,
                Causal::TimeLike,
            ),
            P2 => (
                Interval { lo: -1.0, hi: 1.0 },
                Interval { lo: -inf, hi: inf },
                Monotonicity::Increasing,
                Causal::SpaceLike,
            ),
            P3 => (
                Interval { lo: 1.0, hi: inf },
                Interval { lo: -inf, hi: 0.0 },
                Monotonicity::Increasing,
                Causal::TimeLike,
            ),
            Q1 => (
                Interval { lo: -inf, hi: -1.0 },
                Interval { lo: -inf, hi: q_limit },
                Monotonicity::Decreasing,
                Causal::TimeLike,
            ),
            Q2 => (
                Interval { lo: -1.0, hi: 1.0 / m },
                Interval { lo: -inf, hi: inf },
                Monotonicity::Increasing,
                Causal::SpaceLike,
            ),
            Q3 => (
                Interval { lo: 1.0 / m, hi: 1.0 },
                Interval { lo: -inf, hi: inf },
                Monotonicity::Decreasing,
                Causal::SpaceLike,
            ),
            Q4 => (
                Interval { lo: 1.0, hi: inf },
                Interval { lo: -inf, hi: q_limit },
                Monotonicity::Increasing,
                Causal::TimeLike,
            ),
        };
        Ok(Self { tag, m, w_interval, image, monotonicity, causal })
    }

    pub fn tag(&self) -> BranchTag {
        self.tag
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn is_linear(&self) -> bool {
        self.tag == BranchTag::Linear
    }

    pub fn w_interval(&self) -> Interval {
        self.w_interval
    }

    pub fn image(&self) -> Interval {
        self.image
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub fn causal(&self) -> Causal {
        self.causal
    }
}

/// Antiderivative of `1/((1 − x²)(1 − m x))` restricted to the branch
/// interval.
///
/// For `m = 1` the double pole at `x = 1` contributes a rational term:
/// `−¼ ln|1−x| + ½/(1−x) + ¼ ln|1+x|`. For `m > 1` the three simple poles
/// give `ln|1−x|/(2m−2) + ln|1+x|/(2m+2) − m ln|1−mx|/(m²−1)`.
pub fn eval_antiderivative(branch: &HoroBranch, x: f64) -> Result<f64, HoroError> {
    if branch.is_linear() {
        return Err(HoroError::LinearBranch);
    }
    let iv = branch.w_interval;
    if !iv.contains_strict(x) {
        return Err(HoroError::OutsideDomain { x, lo: iv.lo, hi: iv.hi });
    }
    let m = branch.m;
    if m == 1.0 {
        Ok(-0.25 * (1.0 - x).abs().ln() + 0.5 / (1.0 - x) + 0.25 * (1.0 + x).abs().ln())
    } else {
        Ok((1.0 - x).abs().ln() / (2.0 * m - 2.0) + (1.0 + x).abs().ln() / (2.0 * m + 2.0)
            - m / (m * m - 1.0) * (1.0 - m * x).abs().ln())
    }
}

// How far the inversion bracket is allowed to expand toward an infinite
// interval endpoint before giving up. The antiderivative approaches its
// finite limit like 1/x², so 1e9 resolves images to ~1e-18 of the limit.
const EXPANSION_LIMIT: f64 = 1e9;

/// Unique `x` in the branch interval with `antiderivative(x) = y`, to
/// `1e-10` in the value. `y` must lie strictly inside the branch image.
pub fn invert_branch(branch: &HoroBranch, y: f64) -> Result<f64, HoroError> {
    if branch.is_linear() {
        return Err(HoroError::LinearBranch);
    }
    let im = branch.image;
    if !im.contains_strict(y) || !y.is_finite() {
        return Err(HoroError::OutsideImage { y, lo: im.lo, hi: im.hi });
    }
    let iv = branch.w_interval;
    let g = |x: f64| eval_antiderivative(branch, x).expect("bracket stays inside domain") - y;

    // On the unbounded branches (P1/Q1 and P3/Q4) the antiderivative
    // diverges to −∞ at the finite endpoint, so `g < 0` there; the bracket
    // expands geometrically toward the infinite end until `g` turns
    // positive, which it must once past the root since y < sup(image).
    let (lo, hi) = if iv.is_bounded() {
        (iv.lo, iv.hi)
    } else if iv.lo.is_finite() {
        let mut b = iv.lo + 1.0;
        while g(b) < 0.0 {
            b = iv.lo + (b - iv.lo) * 2.0;
            if b - iv.lo > EXPANSION_LIMIT {
                return Err(HoroError::OutsideImage { y, lo: im.lo, hi: im.hi });
            }
        }
        (iv.lo, b)
    } else {
        let mut a = iv.hi - 1.0;
        while g(a) < 0.0 {
            a = iv.hi - (iv.hi - a) * 2.0;
            if iv.hi - a > EXPANSION_LIMIT {
                return Err(HoroError::OutsideImage { y, lo: im.lo, hi: im.hi });
            }
        }
        (a, iv.hi)
    };
    let mut x = find_root_monotone(g, lo, hi, 1e-10)?;
    // The bracketed solve stops on the value of the antiderivative; where
    // the branch flattens out (far tails) that leaves slack in x. A few
    // Newton steps with the exact derivative 1/((1−x²)(1−mx)) polish x to
    // machine precision.
    let m = branch.m;
    for _ in 0..4 {
        let d = 1.0 / ((1.0 - x * x) * (1.0 - m * x));
        let step = g(x) / d;
        let xn = x - step;
        if !xn.is_finite() || !iv.contains_strict(xn) {
            break;
        }
        x = xn;
        if step.abs() <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(tag: BranchTag) -> HoroBranch {
        HoroBranch::new(tag, 1.0).unwrap()
    }

    fn q(tag: BranchTag, m: f64) -> HoroBranch {
        HoroBranch::new(tag, m).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(HoroBranch::new(BranchTag::P2, 2.0).is_err());
        assert!(HoroBranch::new(BranchTag::Q2, 1.0).is_err());
        assert!(HoroBranch::new(BranchTag::Q2, 0.5).is_err());
        assert!(HoroBranch::new(BranchTag::Linear, 1.0).is_ok());
    }

    #[test]
    fn antiderivative_reference_values() {
        // P(0) = 0 + 1/2 + 0.
        assert!((eval_antiderivative(&p(BranchTag::P2), 0.0).unwrap() - 0.5).abs() < 1e-15);
        // Q(0) = 0 for every m.
        assert_eq!(eval_antiderivative(&q(BranchTag::Q2, 2.0), 0.0).unwrap(), 0.0);
        // Far tail of Q1 approaches −(m/(m²−1)) ln m = −(2/3) ln 2 for m = 2.
        let v = eval_antiderivative(&q(BranchTag::Q1, 2.0), -1e6).unwrap();
        assert!((v - (-0.4620981203732969)).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn antiderivative_derivative_matches_integrand() {
        // Central difference of the antiderivative against 1/((1−x²)(1−mx)).
        let cases = [
            (p(BranchTag::P1), -3.0),
            (p(BranchTag::P2), 0.3),
            (p(BranchTag::P3), 2.2),
            (q(BranchTag::Q1, 2.0), -1.7),
            (q(BranchTag::Q2, 2.0), 0.2),
            (q(BranchTag::Q3, 2.0), 0.8),
            (q(BranchTag::Q4, 2.0), 1.9),
            (q(BranchTag::Q2, 3.5), -0.4),
        ];
        for (b, x) in cases {
            let h = 1e-6;
            let d = (eval_antiderivative(&b, x + h).unwrap()
                - eval_antiderivative(&b, x - h).unwrap())
                / (2.0 * h);
            let want = 1.0 / ((1.0 - x * x) * (1.0 - b.m() * x));
            assert!(
                (d - want).abs() < 1e-6 * want.abs().max(1.0),
                "{:?} at {x}: {d} vs {want}",
                b.tag()
            );
        }
    }

    #[test]
    fn domain_is_enforced() {
        assert!(matches!(
            eval_antiderivative(&p(BranchTag::P2), 1.5),
            Err(HoroError::OutsideDomain { .. })
        ));
        assert!(matches!(
            eval_antiderivative(&q(BranchTag::Q2, 2.0), 0.75),
            Err(HoroError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn inversion_reference_values() {
        let x = invert_branch(&p(BranchTag::P2), 0.5).unwrap();
        assert!(x.abs() < 1e-10, "P2⁻¹(1/2) = {x}");
        let x = invert_branch(&q(BranchTag::Q2, 2.0), 0.0).unwrap();
        assert!(x.abs() < 1e-10, "Q2⁻¹(0) = {x}");
    }

    #[test]
    fn image_is_enforced() {
        // Im(P1) = (−∞, 0).
        assert!(matches!(
            invert_branch(&p(BranchTag::P1), 0.1),
            Err(HoroError::OutsideImage { .. })
        ));
        // Im(Q1) = (−∞, −(2/3) ln 2) for m = 2.
        assert!(matches!(
            invert_branch(&q(BranchTag::Q1, 2.0), -0.3),
            Err(HoroError::OutsideImage { .. })
        ));
        assert!(invert_branch(&q(BranchTag::Q1, 2.0), -0.7).is_ok());
    }

    #[test]
    fn round_trip_on_every_branch() {
        let cases = [
            (p(BranchTag::P1), vec![-1.2, -2.0, -9.0]),
            (p(BranchTag::P2), vec![-0.9, -0.2, 0.0, 0.55, 0.97]),
            (p(BranchTag::P3), vec![1.05, 1.8, 6.0]),
            (q(BranchTag::Q1, 2.0), vec![-1.1, -3.0, -20.0]),
            (q(BranchTag::Q2, 2.0), vec![-0.8, 0.0, 0.45]),
            (q(BranchTag::Q3, 2.0), vec![0.55, 0.7, 0.95]),
            (q(BranchTag::Q4, 2.0), vec![1.02, 2.5, 14.0]),
        ];
        for (b, xs) in cases {
            for x in xs {
                let y = eval_antiderivative(&b, x).unwrap();
                let back = invert_branch(&b, y).unwrap();
                assert!((back - x).abs() < 1e-8 * x.abs().max(1.0), "{:?}: {x} -> {y} -> {back}", b.tag());
            }
        }
    }

    #[test]
    fn monotonicity_matches_metadata() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        let branches = [
            p(BranchTag::P1),
            p(BranchTag::P2),
            p(BranchTag::P3),
            q(BranchTag::Q1, 2.0),
            q(BranchTag::Q2, 2.0),
            q(BranchTag::Q3, 2.0),
            q(BranchTag::Q4, 2.0),
        ];
        for b in &branches {
            let iv = b.w_interval();
            let (lo, hi) = (iv.lo.max(-30.0) + 1e-3, iv.hi.min(30.0) - 1e-3);
            for _ in 0..300 {
                let x1: f64 = rng.gen_range(lo..hi);
                let x2: f64 = rng.gen_range(lo..hi);
                if (x1 - x2).abs() < 1e-9 {
                    continue;
                }
                let (a, bb) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
                let d = eval_antiderivative(b, bb).unwrap() - eval_antiderivative(b, a).unwrap();
                match b.monotonicity() {
                    Monotonicity::Increasing => assert!(d > 0.0, "{:?} not increasing", b.tag()),
                    Monotonicity::Decreasing => assert!(d < 0.0, "{:?} not decreasing", b.tag()),
                }
            }
        }
    }
}
