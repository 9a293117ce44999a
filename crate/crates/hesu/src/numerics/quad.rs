//! Adaptive quadrature built on the Gauss–Kronrod 7–15 rule.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature did not converge: error estimate {err:.3e} above {tol:.3e} after {segments} segments")]
    NonConvergence { err: f64, tol: f64, segments: usize },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },
}

// Kronrod abscissae on [0, 1] side (symmetric), Kronrod weights, and the
// embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<(f64, f64), QuadratureError> {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64, QuadratureError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFiniteIntegrand { x })
        }
    };
    let fc = eval(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let fsum = eval(c - dx)? + eval(c + dx)?;
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    let integral = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    Ok((integral, err))
}

const MAX_SEGMENTS: usize = 4096;

/// Adaptive estimate of the integral of a piecewise-smooth `f` over
/// `[a, b]` (either orientation) to absolute accuracy `tol`.
pub fn quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError> {
    assert!(tol > 0.0, "tolerance must be positive");
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Ok(-quadrature(f, b, a, tol)?);
    }

    // Worst-first refinement over a small segment heap.
    let (i0, e0) = gk15(&f, a, b)?;
    let mut segs: Vec<(f64, f64, f64, f64)> = vec![(a, b, i0, e0)];
    loop {
        let total_err: f64 = segs.iter().map(|s| s.3).sum();
        if total_err <= tol {
            return Ok(segs.iter().map(|s| s.2).sum());
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(QuadratureError::NonConvergence {
                err: total_err,
                tol,
                segments: segs.len(),
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (sa, sb, _, _) = segs.swap_remove(worst);
        let m = 0.5 * (sa + sb);
        let (il, el) = gk15(&f, sa, m)?;
        let (ir, er) = gk15(&f, m, sb)?;
        segs.push((sa, m, il, el));
        segs.push((m, sb, ir, er));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear() {
        assert!((quadrature(|_| 1.0, 0.0, 1.0, 1e-12).unwrap() - 1.0).abs() < 1e-14);
        assert!((quadrature(|x| x, 0.0, 1.0, 1e-12).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn high_degree_polynomial_is_nearly_exact() {
        // Catches transcription errors in the node/weight tables.
        let v = quadrature(|x| x.powi(10), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0 / 11.0).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn weights_are_a_partition() {
        let wk: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let wg: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((wk - 2.0).abs() < 1e-14);
        assert!((wg - 2.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = quadrature(|x| (10.0 * x).sin(), 0.0, 2.0, 1e-11).unwrap();
        let exact = (1.0 - (20.0f64).cos()) / 10.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn reversed_orientation_flips_sign() {
        let v = quadrature(|x| x * x, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hard_singularity_reports_nonconvergence() {
        let r = quadrature(|x| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(r.is_err());
    }
}
