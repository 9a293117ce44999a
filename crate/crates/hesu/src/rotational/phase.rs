//! Phase-plane structure of the rotational slope equation.

use serde::{Deserialize, Serialize};

/// A point `(s, z)` of the closed half-plane `s ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub s: f64,
    pub z: f64,
}

impl PhasePoint {
    pub fn new(s: f64, z: f64) -> Self {
        assert!(s >= 0.0, "phase points live in s >= 0");
        Self { s, z }
    }
}

/// The desingularized vector field
/// `X(s, z) = (sinh s, (1 − z²)(sinh s − (n−1) cosh(s) z))`, whose integral
/// curves with monotone first component reparameterize slope solutions.
pub fn phase_vector_field(p: PhasePoint, n: usize) -> [f64; 2] {
    assert!(n >= 2);
    let m = (n - 1) as f64;
    let (sh, ch) = (p.s.sinh(), p.s.cosh());
    [sh, (1.0 - p.z * p.z) * (sh - m * ch * p.z)]
}

/// The curve `z = tanh(s)/(n−1)` where the second component of the field
/// vanishes; it separates slope growth from slope decay.
pub fn nullcline(s: f64, n: usize) -> f64 {
    s.tanh() / (n - 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPoint {
    /// The origin `(0, 0)`.
    P0,
    /// `(0, +1)`.
    Pplus1,
    /// `(0, −1)`.
    Pminus1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseClassification {
    Saddle,
    Source,
}

/// Jacobian and eigenstructure of the field at a fixed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizationReport {
    pub fixed_point: PhasePoint,
    pub jacobian: [[f64; 2]; 2],
    pub eigenvalues: (f64, f64),
    pub eigenvectors: ([f64; 2], [f64; 2]),
    pub classification: PhaseClassification,
}

/// Closed-form linearization at the three zeros of the field:
/// `DX(p₀) = [[1, 0], [1, 1−n]]` (saddle, unstable direction `(n, 1)`)
/// and `DX(p±₁) = [[1, 0], [0, 2(n−1)]]` (sources).
pub fn linearize_fixed_point(which: FixedPoint, n: usize) -> LinearizationReport {
    assert!(n >= 2);
    let nf = n as f64;
    match which {
        FixedPoint::P0 => LinearizationReport {
            fixed_point: PhasePoint::new(0.0, 0.0),
            jacobian: [[1.0, 0.0], [1.0, 1.0 - nf]],
            eigenvalues: (1.0, 1.0 - nf),
            eigenvectors: ([nf, 1.0], [0.0, 1.0]),
            classification: PhaseClassification::Saddle,
        },
        FixedPoint::Pplus1 | FixedPoint::Pminus1 => {
            let z = if which == FixedPoint::Pplus1 { 1.0 } else { -1.0 };
            LinearizationReport {
                fixed_point: PhasePoint::new(0.0, z),
                jacobian: [[1.0, 0.0], [0.0, 2.0 * (nf - 1.0)]],
                eigenvalues: (1.0, 2.0 * (nf - 1.0)),
                eigenvectors: ([1.0, 0.0], [0.0, 1.0]),
                classification: PhaseClassification::Source,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_zeros() {
        for n in [2, 3, 5] {
            assert_eq!(phase_vector_field(PhasePoint::new(0.0, 0.0), n), [0.0, 0.0]);
            assert_eq!(phase_vector_field(PhasePoint::new(0.0, 1.0), n), [0.0, 0.0]);
            assert_eq!(phase_vector_field(PhasePoint::new(0.0, -1.0), n), [0.0, 0.0]);
        }
    }

    #[test]
    fn field_reference_value() {
        // (1, 0) for n = 2 → (sinh 1, sinh 1).
        let v = phase_vector_field(PhasePoint::new(1.0, 0.0), 2);
        let sh = 1.1752011936438014;
        assert!((v[0] - sh).abs() < 1e-15);
        assert!((v[1] - sh).abs() < 1e-15);
    }

    #[test]
    fn second_component_vanishes_on_nullcline() {
        for n in [2, 3, 4] {
            for &s in &[0.3, 1.0, 2.5] {
                let z = nullcline(s, n);
                let v = phase_vector_field(PhasePoint::new(s, z), n);
                assert!(v[1].abs() < 1e-14);
            }
        }
    }

    #[test]
    fn linearization_reference_cases() {
        let r = linearize_fixed_point(FixedPoint::P0, 2);
        assert_eq!(r.eigenvalues, (1.0, -1.0));
        assert_eq!(r.classification, PhaseClassification::Saddle);
        assert_eq!(r.eigenvectors.0, [2.0, 1.0]);

        let r = linearize_fixed_point(FixedPoint::Pplus1, 3);
        assert_eq!(r.eigenvalues, (1.0, 4.0));
        assert_eq!(r.classification, PhaseClassification::Source);

        let r = linearize_fixed_point(FixedPoint::P0, 3);
        assert_eq!(r.eigenvalues, (1.0, -2.0));
        assert_eq!(r.eigenvectors.0, [3.0, 1.0]);
    }

    #[test]
    fn eigenpairs_satisfy_the_jacobian() {
        for n in [2, 3, 4, 7] {
            for which in [FixedPoint::P0, FixedPoint::Pplus1, FixedPoint::Pminus1] {
                let r = linearize_fixed_point(which, n);
                for (lambda, v) in
                    [(r.eigenvalues.0, r.eigenvectors.0), (r.eigenvalues.1, r.eigenvectors.1)]
                {
                    for i in 0..2 {
                        let jv = r.jacobian[i][0] * v[0] + r.jacobian[i][1] * v[1];
                        assert!(
                            (jv - lambda * v[i]).abs() < 1e-12,
                            "J v != λ v at {which:?}, n = {n}"
                        );
                    }
                }
            }
        }
    }

    /// The closed-form Jacobians agree with central differences of the
    /// field at the fixed points.
    #[test]
    fn jacobian_matches_finite_differences() {
        let h = 1e-6;
        for n in [2, 3, 4] {
            for which in [FixedPoint::P0, FixedPoint::Pplus1, FixedPoint::Pminus1] {
                let r = linearize_fixed_point(which, n);
                let p = r.fixed_point;
                for (col, (ds, dz)) in [(0, (h, 0.0)), (1, (0.0, h))] {
                    // s ≥ 0 constraint: one-sided in s at s = 0.
                    let fp = phase_vector_field(PhasePoint::new(p.s + ds, p.z + dz), n);
                    let f0 = phase_vector_field(PhasePoint::new(p.s, p.z), n);
                    for row in 0..2 {
                        let fd = (fp[row] - f0[row]) / h;
                        assert!(
                            (fd - r.jacobian[row][col]).abs() < 1e-4,
                            "DX[{row}][{col}] at {which:?} n={n}: fd {fd} vs {}",
                            r.jacobian[row][col]
                        );
                    }
                }
            }
        }
    }
}
