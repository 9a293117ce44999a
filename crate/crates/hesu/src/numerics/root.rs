//! Bracketed root finding for strictly monotone functions.

use thiserror::Error;

/// Zero was not bracketed by the supplied interval: the query lies outside
/// the function image.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("zero not bracketed on ({lo}, {hi}): f(lo)={f_lo:.6e}, f(hi)={f_hi:.6e}")]
pub struct NotBracketed {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Relative pull-in from the interval endpoints; the branch antiderivatives
/// this inverts have logarithmic singularities there.
const ENDPOINT_CUTOFF: f64 = 1e-12;

/// Find the zero of a continuous, strictly monotone `f` on the open
/// interval `(lo, hi)` by a bisection-safeguarded secant iteration.
///
/// Returns `x` with `|f(x)| <= tol` or with the bracket narrowed below
/// machine resolution around the sign change. The returned point always
/// lies in `[lo, hi]`, and the iteration count is bounded by
/// `2·log2((hi-lo)/tol) + 50`.
pub fn find_root_monotone(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, NotBracketed> {
    assert!(lo < hi, "empty bracket");
    assert!(tol > 0.0, "tolerance must be positive");
    let width = hi - lo;
    let mut a = lo + ENDPOINT_CUTOFF * width.max(lo.abs());
    let mut b = hi - ENDPOINT_CUTOFF * width.max(hi.abs());
    if a >= b {
        a = lo;
        b = hi;
    }
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.abs() <= tol {
        return Ok(a);
    }
    if fb.abs() <= tol {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(NotBracketed { lo, hi, f_lo: fa, f_hi: fb });
    }

    let max_iter = (2.0 * ((hi - lo) / tol).log2().max(0.0)).ceil() as usize + 50;
    let mut x = a;
    let mut prev_width = b - a;
    for _ in 0..max_iter {
        // Secant proposal, rejected in favor of bisection whenever it falls
        // outside the bracket or fails to shrink it meaningfully.
        let mut xn = b - fb * (b - a) / (fb - fa);
        if !xn.is_finite() || xn <= a || xn >= b {
            xn = 0.5 * (a + b);
        }
        let fx = f(xn);
        x = xn;
        if fx.abs() <= tol || (b - a) <= f64::EPSILON * (a.abs() + b.abs()).max(1.0) {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = xn;
            fa = fx;
        } else {
            b = xn;
            fb = fx;
        }
        // Safeguard: if the bracket stalls, bisect.
        if (b - a) > 0.5 * prev_width {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm.abs() <= tol {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
        prev_width = b - a;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_function() {
        let r = find_root_monotone(|x| x - 2.0, 0.0, 5.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-10);
    }

    #[test]
    fn steep_function_near_endpoint() {
        // 1/(1-x) - 1000 has its zero at x = 0.999.
        let r = find_root_monotone(|x| 1.0 / (1.0 - x) - 1000.0, 0.0, 1.0, 1e-10).unwrap();
        assert!((r - 0.999).abs() < 1e-9, "got {r}");
    }

    #[test]
    fn not_bracketed_detected() {
        let e = find_root_monotone(|x| x + 10.0, 0.0, 1.0, 1e-10);
        assert!(e.is_err());
    }

    #[test]
    fn result_stays_in_interval() {
        let r = find_root_monotone(|x| x.tan(), -1.0, 1.0, 1e-14).unwrap();
        assert!((-1.0..=1.0).contains(&r));
        assert!(r.abs() < 1e-10);
    }
}
