//! Adaptive explicit Runge–Kutta integration (Dormand–Prince 5(4)) with
//! PI step-size control, region guards and blow-up detection.

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalEvent {
    /// The requested end time was reached.
    ReachedEnd,
    /// The region guard rejected the next step; the trajectory ends at the
    /// last state inside the region.
    LeftRegion,
    /// Some solution component exceeded the blow-up threshold.
    BlowUpDetected,
    /// The controller could not meet the tolerance above the minimum step;
    /// usually signals an approaching singularity of the right-hand side.
    StepUnderflow,
}

/// Tolerances and step bounds for [`integrate_ode`].
#[derive(Debug, Clone, Copy)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub blow_up_threshold: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 1e-2,
            min_step: 1e-14,
            blow_up_threshold: 1e8,
        }
    }
}

impl ToleranceConfig {
    /// Panics if a field is non-positive or the step bounds are inverted.
    pub fn assert_valid(&self) {
        assert!(self.abs_tol > 0.0, "abs_tol must be positive");
        assert!(self.rel_tol > 0.0, "rel_tol must be positive");
        assert!(self.max_step > 0.0, "max_step must be positive");
        assert!(self.min_step > 0.0, "min_step must be positive");
        assert!(self.blow_up_threshold > 0.0, "blow_up_threshold must be positive");
        assert!(self.min_step < self.max_step, "min_step must be below max_step");
    }
}

/// A sampled integral curve. Sample times are strictly monotone in the
/// direction of integration and consecutive samples satisfy the local error
/// tolerance that produced them.
#[derive(Debug, Clone)]
pub struct Trajectory<const D: usize> {
    pub samples: Vec<(f64, [f64; D])>,
    pub terminal_event: TerminalEvent,
}

impl<const D: usize> Trajectory<D> {
    pub fn first(&self) -> (f64, [f64; D]) {
        self.samples[0]
    }

    pub fn last(&self) -> (f64, [f64; D]) {
        *self.samples.last().expect("trajectory has at least one sample")
    }

    /// Largest residual of a centered finite-difference derivative against
    /// `rhs` over the interior samples (second order on nonuniform grids).
    pub fn max_fd_residual(&self, rhs: impl Fn(f64, &[f64; D]) -> [f64; D]) -> f64 {
        let mut worst: f64 = 0.0;
        for win in self.samples.windows(3) {
            let (tm, ym) = win[0];
            let (t0, y0) = win[1];
            let (tp, yp) = win[2];
            let a = t0 - tm;
            let b = tp - t0;
            let f = rhs(t0, &y0);
            for k in 0..D {
                let d = -b / (a * (a + b)) * ym[k] + (b - a) / (a * b) * y0[k]
                    + a / (b * (a + b)) * yp[k];
                worst = worst.max((d - f[k]).abs());
            }
        }
        worst
    }

    /// Cubic Hermite evaluation of component `k` at time `t`, using `rhs`
    /// for the endpoint slopes. `t` must lie inside the sampled range.
    pub fn eval_component(&self, t: f64, k: usize, rhs: impl Fn(f64, &[f64; D]) -> [f64; D]) -> f64 {
        let s = &self.samples;
        let increasing = s.last().unwrap().0 >= s[0].0;
        // Binary search for the bracketing interval.
        let (mut lo, mut hi) = (0usize, s.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let cond = if increasing { s[mid].0 <= t } else { s[mid].0 >= t };
            if cond {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (t0, y0) = s[lo];
        let (t1, y1) = s[hi];
        let h = t1 - t0;
        if h == 0.0 {
            return y0[k];
        }
        let m0 = rhs(t0, &y0)[k];
        let m1 = rhs(t1, &y1)[k];
        let x = (t - t0) / h;
        let (x2, x3) = (x * x, x * x * x);
        (2.0 * x3 - 3.0 * x2 + 1.0) * y0[k]
            + (x3 - 2.0 * x2 + x) * h * m0
            + (-2.0 * x3 + 3.0 * x2) * y1[k]
            + (x3 - x2) * h * m1
    }
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Error coefficients: 5th order minus embedded 4th order.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
const PI_ALPHA: f64 = 0.7 / 5.0;
const PI_BETA: f64 = 0.4 / 5.0;

/// Integrate `y' = rhs(t, y)` from `t0` to `t_end` (either direction).
pub fn integrate_ode<const D: usize>(
    rhs: impl Fn(f64, &[f64; D]) -> [f64; D],
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    cfg: &ToleranceConfig,
) -> Trajectory<D> {
    integrate_ode_guarded(rhs, t0, y0, t_end, cfg, |_, _| true)
}

/// As [`integrate_ode`], stopping with [`TerminalEvent::LeftRegion`] as soon
/// as an accepted step would land outside `guard`. The offending step is
/// bisected down toward `min_step`, so the final sample sits near the region
/// boundary.
pub fn integrate_ode_guarded<const D: usize>(
    rhs: impl Fn(f64, &[f64; D]) -> [f64; D],
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    cfg: &ToleranceConfig,
    guard: impl Fn(f64, &[f64; D]) -> bool,
) -> Trajectory<D> {
    cfg.assert_valid();
    assert!(t0 != t_end, "integration interval is empty");
    let dir = (t_end - t0).signum();
    let span = (t_end - t0).abs();

    let mut samples = vec![(t0, y0)];
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = (cfg.max_step).min(span);
    let mut err_prev: f64 = 1.0;

    let norm_inf = |v: &[f64; D]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    loop {
        let remaining = (t_end - t) * dir;
        if remaining <= 0.0 {
            return Trajectory { samples, terminal_event: TerminalEvent::ReachedEnd };
        }
        let (h_try, is_last) =
            if h >= remaining { (remaining, true) } else { (h.max(cfg.min_step), false) };
        let hs = h_try * dir;

        // Stage evaluations.
        let stage = |ts: f64, acc: &[f64; D]| rhs(ts, acc);
        let mut ytmp = [0.0; D];
        for i in 0..D {
            ytmp[i] = y[i] + hs * A21 * k1[i];
        }
        let k2 = stage(t + C2 * hs, &ytmp);
        for i in 0..D {
            ytmp[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = stage(t + C3 * hs, &ytmp);
        for i in 0..D {
            ytmp[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = stage(t + C4 * hs, &ytmp);
        for i in 0..D {
            ytmp[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = stage(t + C5 * hs, &ytmp);
        for i in 0..D {
            ytmp[i] =
                y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = stage(t + hs, &ytmp);
        let mut y_new = [0.0; D];
        for i in 0..D {
            y_new[i] =
                y[i] + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = stage(t + hs, &y_new);

        // Weighted RMS error estimate.
        let mut err: f64 = 0.0;
        for i in 0..D {
            let e = hs
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / D as f64).sqrt();

        let finite = err.is_finite() && y_new.iter().all(|v| v.is_finite());

        if finite && err <= 1.0 {
            // Accepted by the controller; now consult events.
            if norm_inf(&y_new) >= cfg.blow_up_threshold {
                if h_try <= cfg.min_step * 1.5 {
                    return Trajectory { samples, terminal_event: TerminalEvent::BlowUpDetected };
                }
                h = (h_try * 0.5).max(cfg.min_step);
                continue;
            }
            if !guard(t + hs, &y_new) {
                if h_try <= cfg.min_step * 1.5 {
                    return Trajectory { samples, terminal_event: TerminalEvent::LeftRegion };
                }
                h = (h_try * 0.5).max(cfg.min_step);
                continue;
            }
            t = if is_last { t_end } else { t + hs };
            y = y_new;
            k1 = k7; // FSAL
            samples.push((t, y));
            let fac = SAFETY * err.max(1e-16).powf(-PI_ALPHA) * err_prev.max(1e-16).powf(PI_BETA);
            h = (h_try * fac.clamp(FAC_MIN, FAC_MAX)).min(cfg.max_step);
            err_prev = err.max(1e-16);
        } else {
            if h_try <= cfg.min_step * 1.5 {
                // A solution diverging toward the blow-up threshold exhausts
                // floating-point time resolution before the state itself can
                // cross it; report that as the blow-up it is.
                let event = if norm_inf(&y) >= 1e-4 * cfg.blow_up_threshold {
                    TerminalEvent::BlowUpDetected
                } else {
                    TerminalEvent::StepUnderflow
                };
                return Trajectory { samples, terminal_event: event };
            }
            let fac = if finite {
                (SAFETY * err.powf(-PI_ALPHA)).clamp(FAC_MIN, 0.9)
            } else {
                0.25
            };
            h = (h_try * fac).max(cfg.min_step);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_solution() {
        let cfg = ToleranceConfig::default();
        let traj = integrate_ode(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 1.0, &cfg);
        assert_eq!(traj.terminal_event, TerminalEvent::ReachedEnd);
        let (t, y) = traj.last();
        assert_eq!(t, 1.0);
        assert!((y[0] - 2.718281828f64).abs() < 1e-8, "got {}", y[0]);
    }

    #[test]
    fn constant_rhs_gives_constant_trajectory() {
        let cfg = ToleranceConfig::default();
        let c = 3.25;
        let traj = integrate_ode(|_, _: &[f64; 1]| [0.0], 0.0, [c], 2.0, &cfg);
        for (_, y) in &traj.samples {
            assert_eq!(y[0], c);
        }
    }

    #[test]
    fn backward_integration() {
        let cfg = ToleranceConfig::default();
        let traj = integrate_ode(|_, y: &[f64; 1]| [y[0]], 1.0, [std::f64::consts::E], 0.0, &cfg);
        let (t, y) = traj.last();
        assert_eq!(t, 0.0);
        assert!((y[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fd_residual_within_tolerance_budget() {
        let cfg = ToleranceConfig {
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            max_step: 1e-3,
            ..ToleranceConfig::default()
        };
        let rhs = |_: f64, y: &[f64; 1]| [y[0]];
        let traj = integrate_ode(rhs, 0.0, [1.0], 1.0, &cfg);
        assert!(traj.max_fd_residual(rhs) < 10.0 * cfg.abs_tol);
    }

    #[test]
    fn blow_up_event_fires() {
        let cfg = ToleranceConfig { blow_up_threshold: 1e6, ..ToleranceConfig::default() };
        // y' = y^2 from y(0)=1 blows up at t=1.
        let traj = integrate_ode(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &cfg);
        assert_eq!(traj.terminal_event, TerminalEvent::BlowUpDetected);
        let (t, _) = traj.last();
        assert!((t - 1.0).abs() < 1e-5, "blow-up located at {t}");
    }

    #[test]
    fn guard_stops_at_region_boundary() {
        let cfg = ToleranceConfig::default();
        let traj = integrate_ode_guarded(
            |_, y: &[f64; 1]| [y[0]],
            0.0,
            [1.0],
            5.0,
            &cfg,
            |_, y| y[0] < 2.0,
        );
        assert_eq!(traj.terminal_event, TerminalEvent::LeftRegion);
        let (_, y) = traj.last();
        assert!(y[0] < 2.0);
        assert!(y[0] > 2.0 - 1e-6, "stopped too early at {}", y[0]);
    }

    #[test]
    fn singular_rhs_underflows_step() {
        let cfg = ToleranceConfig::default();
        // Integrate toward the coth singularity at s = 0.
        let traj = integrate_ode(
            |s: f64, w: &[f64; 1]| [(1.0 - w[0] * w[0]) * (1.0 - 1.0 / s.tanh() * w[0])],
            1.0,
            [0.3],
            0.0,
            &cfg,
        );
        assert!(matches!(
            traj.terminal_event,
            TerminalEvent::StepUnderflow | TerminalEvent::BlowUpDetected
        ));
    }
}
