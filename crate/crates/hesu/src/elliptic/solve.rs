//! Damped Newton iteration on the non-divergence residual with a
//! space-like margin constraint, banded direct linear solves and a
//! coloring-based finite-difference Jacobian.

use super::domain::GridSolution;
use super::residual::{assemble_nondivergence, residual_divergence_form};
use super::SolverError;
use crate::numerics::BandedMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Convergence threshold on the max-norm of the non-divergence residual.
    pub newton_tol: f64,
    /// Threshold on the divergence-form residual for declaring convergence;
    /// `None` picks `200 · h_max²`, the truncation gap between the two
    /// discretizations.
    pub div_tol: Option<f64>,
    /// Iterates must keep `spacelike_margin` above this.
    pub margin_floor: f64,
    pub max_line_search: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            newton_tol: 1e-11,
            div_tol: None,
            margin_floor: 1e-3,
            max_line_search: 30,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub final_spacelike_margin: f64,
    pub damping_events: usize,
    pub final_div_residual: f64,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Solve the Dirichlet problem with the given boundary data (full-grid
/// array, boundary entries read) starting from `guess`.
pub fn solve_dirichlet(
    boundary: &[f64],
    guess: &GridSolution,
    cfg: &SolverConfig,
) -> Result<(GridSolution, SolverReport), SolverError> {
    let domain = guess.domain.clone();
    let mut current = GridSolution::new(domain.clone(), guess.values().to_vec(), boundary.to_vec())?;
    if current.spacelike_margin() <= cfg.margin_floor {
        return Err(SolverError::MarginCollapse { floor: cfg.margin_floor });
    }

    let n_int = domain.interior_count();
    let band = domain.interior_bandwidth();
    let div_tol = cfg.div_tol.unwrap_or(200.0 * domain.max_spacing().powi(2));

    let mut residual_history = Vec::new();
    let mut damping_events = 0usize;

    let mut f = assemble_nondivergence(&current)?;
    let mut res = inf_norm(&f);
    residual_history.push(res);

    for iter in 0..cfg.max_iterations {
        if res < cfg.newton_tol {
            let report = SolverReport {
                iterations: iter,
                residual_history,
                converged: true,
                final_spacelike_margin: current.spacelike_margin(),
                damping_events,
                final_div_residual: inf_norm(&residual_divergence_form(&current)?),
            };
            let ok = report.final_div_residual < div_tol;
            if !ok {
                return Err(SolverError::NonConvergence { iterations: iter, residual: report.final_div_residual });
            }
            return Ok((current, report));
        }

        let jac = fd_jacobian(&current, &f, n_int, band)?;
        let mut delta: Vec<f64> = f.iter().map(|v| -v).collect();
        jac.solve(&mut delta);

        // Backtracking line search under the margin constraint.
        let interior = current.interior_values();
        let mut alpha = 1.0f64;
        let mut accepted = None;
        let mut margin_blocked = true;
        for _ in 0..cfg.max_line_search {
            let trial_interior: Vec<f64> =
                interior.iter().zip(&delta).map(|(u, d)| u + alpha * d).collect();
            let trial = current.with_interior(&trial_interior);
            if trial.spacelike_margin() > cfg.margin_floor {
                margin_blocked = false;
                if let Ok(tf) = assemble_nondivergence(&trial) {
                    let tres = inf_norm(&tf);
                    if tres < (1.0 - 1e-4 * alpha) * res {
                        accepted = Some((trial, tf, tres));
                        break;
                    }
                }
            }
            alpha *= 0.5;
            damping_events += 1;
        }
        match accepted {
            Some((trial, tf, tres)) => {
                current = trial;
                f = tf;
                res = tres;
                residual_history.push(res);
            }
            None => {
                if margin_blocked {
                    return Err(SolverError::MarginCollapse { floor: cfg.margin_floor });
                }
                return Err(SolverError::NonConvergence { iterations: iter, residual: res });
            }
        }
    }
    Err(SolverError::NonConvergence { iterations: cfg.max_iterations, residual: res })
}

/// Finite-difference Jacobian of the interior residual map, built with a
/// 3-per-axis node coloring so one residual evaluation serves every
/// perturbed node of a color.
fn fd_jacobian(
    sol: &GridSolution,
    f0: &[f64],
    n_int: usize,
    band: usize,
) -> Result<BandedMatrix, SolverError> {
    let domain = &sol.domain;
    let k = domain.k();
    let mut jac = BandedMatrix::new(n_int, band, band);
    let base_interior = sol.interior_values();
    let n_colors = 3usize.pow(k as u32);
    let fd = f64::EPSILON.sqrt();

    for color in 0..n_colors {
        let mut members: Vec<(usize, f64)> = Vec::new();
        let mut perturbed = base_interior.clone();
        for (j, m) in domain.iter_interior().enumerate() {
            let mut c = 0usize;
            for a in 0..k {
                c = c * 3 + (m[a] - 1) % 3;
            }
            if c == color {
                let h = fd * (1.0 + base_interior[j].abs());
                perturbed[j] += h;
                members.push((j, h));
            }
        }
        if members.is_empty() {
            continue;
        }
        let trial = sol.with_interior(&perturbed);
        let f1 = assemble_nondivergence(&trial)?;
        for &(j, h) in &members {
            // Rows affected by column j: interior nodes within one cell.
            let mj = domain.interior_de_index(j);
            for_neighborhood(domain, &mj, |mi| {
                let i = domain.interior_index(&mi);
                let val = (f1[i] - f0[i]) / h;
                if val != 0.0 {
                    jac.set(i, j, val);
                }
            });
        }
    }
    jac.factor().map_err(|e| SolverError::Linear(e.to_string()))?;
    Ok(jac)
}

/// Visit the interior multi-indices within L∞ distance 1 of `m`.
fn for_neighborhood(
    domain: &super::domain::BoxDomain,
    m: &super::domain::Multi,
    mut visit: impl FnMut(super::domain::Multi),
) {
    let k = domain.k();
    let mut offsets = vec![-1isize; k];
    loop {
        let mut cand = *m;
        let mut ok = true;
        for a in 0..k {
            let v = m[a] as isize + offsets[a];
            if v < 1 || v > domain.axes()[a].count as isize - 2 {
                ok = false;
                break;
            }
            cand[a] = v as usize;
        }
        if ok {
            visit(cand);
        }
        // Advance the odometer over {-1, 0, 1}^k.
        let mut a = 0;
        loop {
            if a == k {
                return;
            }
            offsets[a] += 1;
            if offsets[a] <= 1 {
                break;
            }
            offsets[a] = -1;
            a += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::domain::{Axis, BoxDomain};
    use crate::elliptic::sigma;

    fn exact_linear_setup(count: usize) -> (BoxDomain, Vec<f64>, GridSolution) {
        let n = 3;
        let d = BoxDomain::new(
            n,
            vec![Axis { lo: 0.5, hi: 0.9, count }, Axis { lo: 0.0, hi: 0.4, count }],
        )
        .unwrap();
        let exact: Vec<f64> =
            d.iter_nodes().map(|m| sigma(d.coords(&m)[0]) / (n as f64 - 1.0)).collect();
        // Multilinear-in-x₁ initial guess between the two height faces.
        let (lo, hi) = (d.axes()[0].lo, d.axes()[0].hi);
        let (ulo, uhi) = (sigma(lo) / 2.0, sigma(hi) / 2.0);
        let guess_vals: Vec<f64> = d
            .iter_nodes()
            .map(|m| {
                let x = d.coords(&m);
                ulo + (uhi - ulo) * (x[0] - lo) / (hi - lo)
            })
            .collect();
        let guess = GridSolution::new(d.clone(), guess_vals, exact.clone()).unwrap();
        (d, exact, guess)
    }

    #[test]
    fn recovers_exact_linear_solution() {
        let (d, exact, guess) = exact_linear_setup(17);
        let cfg = SolverConfig::default();
        let (sol, report) = solve_dirichlet(&exact, &guess, &cfg).unwrap();
        assert!(report.converged);
        assert!(report.final_spacelike_margin > 0.5);
        let mut err = 0.0f64;
        for m in d.iter_interior() {
            let i = d.index(&m);
            err = err.max((sol.values()[i] - exact[i]).abs());
        }
        assert!(err < 2e-4, "interior error {err}");
    }

    #[test]
    fn exact_solution_error_refines_at_second_order() {
        let mut errs = Vec::new();
        for count in [9, 17, 33] {
            let (d, exact, guess) = exact_linear_setup(count);
            let (sol, _) = solve_dirichlet(&exact, &guess, &SolverConfig::default()).unwrap();
            let mut err = 0.0f64;
            for m in d.iter_interior() {
                let i = d.index(&m);
                err = err.max((sol.values()[i] - exact[i]).abs());
            }
            errs.push(err);
        }
        let order = (errs[1] / errs[2]).log2();
        assert!(order > 1.9, "orders from {errs:?}");
    }

    #[test]
    fn causally_impossible_boundary_collapses_margin() {
        let d = BoxDomain::new(
            2,
            vec![Axis { lo: 0.8, hi: 1.2, count: 9 }, Axis { lo: 0.0, hi: 1.0, count: 9 }],
        )
        .unwrap();
        // Boundary oscillation too steep for any space-like filling.
        let b: Vec<f64> = d.iter_nodes().map(|m| 3.0 * d.coords(&m)[1]).collect();
        let guess_vals = b.clone();
        let guess = GridSolution::new(d, guess_vals, b.clone()).unwrap();
        let r = solve_dirichlet(&b, &guess, &SolverConfig::default());
        assert!(matches!(r, Err(SolverError::MarginCollapse { .. })));
    }
}
