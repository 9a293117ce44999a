//! Uniqueness, symmetry-extension and rectangle-problem verification on
//! top of the Dirichlet solver.

use super::domain::{Axis, BoxDomain, GridSolution};
use super::solve::{solve_dirichlet, SolverConfig, SolverReport};
use super::{sigma, sigma_inv, SolverError};
use crate::geometry::HalfSpaceIsometry;
use crate::horosphere::{build_profile, HoroBranch};
use serde::{Deserialize, Serialize};

/// Full-grid values of the graph `u = f ∘ σ` of a horosphere profile over
/// the domain; the profile is evaluated exactly on the grid's σ-columns.
pub fn horosphere_graph(
    domain: &BoxDomain,
    branch: &HoroBranch,
    s0: f64,
    f0: f64,
) -> Result<Vec<f64>, SolverError> {
    let ax = domain.axes()[0];
    let count = ax.count;
    // σ is decreasing in the height, so the column order reverses.
    let s_grid: Vec<f64> =
        (0..count).rev().map(|i| sigma(ax.lo + ax.spacing() * i as f64)).collect();
    let profile = build_profile(branch, s0, f0, &s_grid)?;
    let f_of_col = |i: usize| profile.samples[count - 1 - i].f;

    let mut out = vec![0.0; domain.node_count()];
    for m in domain.iter_nodes() {
        out[domain.index(&m)] = f_of_col(m[0]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub max_pairwise_diff: f64,
    pub reports: Vec<SolverReport>,
}

/// Solve the same Dirichlet data from several space-like guesses; the
/// converged solutions must coincide.
pub fn verify_uniqueness(
    boundary: &[f64],
    guesses: &[GridSolution],
    cfg: &SolverConfig,
) -> Result<UniquenessReport, SolverError> {
    assert!(guesses.len() >= 2, "need at least two guesses");
    let mut solutions = Vec::new();
    let mut reports = Vec::new();
    for g in guesses {
        let (sol, rep) = solve_dirichlet(boundary, g, cfg)?;
        solutions.push(sol);
        reports.push(rep);
    }
    let mut max_pairwise_diff = 0.0f64;
    for i in 0..solutions.len() {
        for j in (i + 1)..solutions.len() {
            max_pairwise_diff = max_pairwise_diff.max(solutions[i].max_interior_diff(&solutions[j]));
        }
    }
    Ok(UniquenessReport { max_pairwise_diff, reports })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub max_asymmetry: f64,
    pub report: SolverReport,
}

/// Multilinear interpolation of grid values at a point inside the box.
fn interpolate(domain: &BoxDomain, values: &[f64], x: &[f64]) -> Option<f64> {
    let k = domain.k();
    let mut base = [0usize; super::domain::MAX_AXES];
    let mut frac = [0.0f64; super::domain::MAX_AXES];
    for a in 0..k {
        let ax = domain.axes()[a];
        let t = (x[a] - ax.lo) / ax.spacing();
        if t < -1e-9 || t > (ax.count - 1) as f64 + 1e-9 {
            return None;
        }
        let i = (t.floor().max(0.0) as usize).min(ax.count - 2);
        base[a] = i;
        frac[a] = (t - i as f64).clamp(0.0, 1.0);
    }
    let mut acc = 0.0;
    for corner in 0..(1usize << k) {
        let mut m = base;
        let mut weight = 1.0;
        for a in 0..k {
            if corner & (1 << a) != 0 {
                m[a] += 1;
                weight *= frac[a];
            } else {
                weight *= 1.0 - frac[a];
            }
        }
        acc += weight * values[domain.index(&m)];
    }
    Some(acc)
}

/// Solve once and measure the deviation of the solution from its pullback
/// under an isometry that preserves the box and the boundary data.
pub fn symmetry_extension_check(
    boundary: &[f64],
    guess: &GridSolution,
    sym: &HalfSpaceIsometry,
    cfg: &SolverConfig,
) -> Result<SymmetryReport, SolverError> {
    let domain = guess.domain.clone();
    let k = domain.k();

    // The box closure must be invariant and the boundary data symmetric.
    let mut boundary_gap = 0.0f64;
    for m in domain.iter_nodes() {
        let x = domain.coords(&m);
        let image = sym.apply_coords(&x[..k]);
        let Some(_) = interpolate(&domain, boundary, &image) else {
            return Err(SolverError::DomainNotInvariant(format!(
                "node {:?} maps outside the box",
                &x[..k]
            )));
        };
        if domain.is_boundary(&m) {
            let mapped = interpolate(&domain, boundary, &image).unwrap();
            boundary_gap = boundary_gap.max((boundary[domain.index(&m)] - mapped).abs());
        }
    }
    if boundary_gap > 1e-8 {
        return Err(SolverError::DomainNotInvariant(format!(
            "boundary data differs from its pullback by {boundary_gap:.3e}"
        )));
    }

    let (sol, report) = solve_dirichlet(boundary, guess, cfg)?;
    let mut max_asymmetry = 0.0f64;
    for m in domain.iter_nodes() {
        let x = domain.coords(&m);
        let image = sym.apply_coords(&x[..k]);
        let pulled = interpolate(&domain, sol.values(), &image).expect("box is invariant");
        max_asymmetry = max_asymmetry.max((sol.values()[domain.index(&m)] - pulled).abs());
    }
    Ok(SymmetryReport { max_asymmetry, report })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RectangleReport {
    pub max_interior_error: f64,
    pub report: SolverReport,
}

/// The rectangle problem: boundary data from a space-like horosphere
/// profile `f` on the box `σ ∈ [a1, b1]` × cross-sections, solved and
/// compared against `f ∘ σ` in the interior.
///
/// The σ-faces carry the constants `f(a1)`, `f(b1)` and the remaining faces
/// carry `f(σ)`, which is the same trace; `counts[0]` nodes resolve the
/// height axis.
pub fn rectangle_problem(
    branch: &HoroBranch,
    s0: f64,
    f0: f64,
    sigma_interval: (f64, f64),
    cross_intervals: &[(f64, f64)],
    counts: &[usize],
    ambient_n: usize,
    cfg: &SolverConfig,
) -> Result<(GridSolution, RectangleReport), SolverError> {
    let (a1, b1) = sigma_interval;
    if !(0.0 < a1 && a1 < b1) {
        return Err(SolverError::Domain(format!(
            "need 0 < a1 < b1 in the foliation parameter, got ({a1}, {b1})"
        )));
    }
    if counts.len() != cross_intervals.len() + 1 {
        return Err(SolverError::Domain("one node count per axis".into()));
    }
    let mut axes = vec![Axis { lo: sigma_inv(b1), hi: sigma_inv(a1), count: counts[0] }];
    for (i, &(lo, hi)) in cross_intervals.iter().enumerate() {
        if !(lo < hi) {
            return Err(SolverError::Domain(format!("cross interval {i} is empty")));
        }
        axes.push(Axis { lo, hi, count: counts[i + 1] });
    }
    let domain = BoxDomain::new(ambient_n, axes)?;

    let exact = horosphere_graph(&domain, branch, s0, f0)?;

    // Initial guess: linear in the height between the two σ-faces.
    let ax = domain.axes()[0];
    let (u_lo, u_hi) = {
        let m_lo = [0usize; super::domain::MAX_AXES];
        let mut m_hi = m_lo;
        m_hi[0] = ax.count - 1;
        (exact[domain.index(&m_lo)], exact[domain.index(&m_hi)])
    };
    let guess_vals: Vec<f64> = domain
        .iter_nodes()
        .map(|m| {
            let x = domain.coords(&m);
            u_lo + (u_hi - u_lo) * (x[0] - ax.lo) / (ax.hi - ax.lo)
        })
        .collect();
    let guess = GridSolution::new(domain.clone(), guess_vals, exact.clone())?;

    let (sol, report) = solve_dirichlet(&exact, &guess, cfg)?;
    let mut max_interior_error = 0.0f64;
    for m in domain.iter_interior() {
        let i = domain.index(&m);
        max_interior_error = max_interior_error.max((sol.values()[i] - exact[i]).abs());
    }
    Ok((sol, RectangleReport { max_interior_error, report }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horosphere::BranchTag;

    #[test]
    fn rectangle_with_linear_profile_is_machine_exact_in_structure() {
        // n = 3 keeps the linear family space-like.
        let b = HoroBranch::new(BranchTag::Linear, 2.0).unwrap();
        let (_, rep) = rectangle_problem(
            &b,
            0.0,
            0.0,
            (0.2, 0.9),
            &[(0.0, 0.5)],
            &[17, 17],
            3,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(rep.report.converged);
        assert!(rep.max_interior_error < 5e-4, "error {}", rep.max_interior_error);
    }

    #[test]
    fn rectangle_rejects_bad_parameter_interval() {
        let b = HoroBranch::new(BranchTag::Linear, 2.0).unwrap();
        let r = rectangle_problem(
            &b,
            0.0,
            0.0,
            (-0.5, 0.9),
            &[(0.0, 0.5)],
            &[9, 9],
            3,
            &SolverConfig::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn uniqueness_from_distinct_guesses() {
        let b = HoroBranch::new(BranchTag::P2, 1.0).unwrap();
        let domain = BoxDomain::new(
            2,
            vec![Axis { lo: 0.5, hi: 0.9, count: 17 }, Axis { lo: 0.0, hi: 0.4, count: 17 }],
        )
        .unwrap();
        let exact = horosphere_graph(&domain, &b, 0.0, 0.0).unwrap();
        // Space-like guesses: a height-linear interpolant and an exact start
        // deformed by an interior bump.
        let ax = domain.axes()[0];
        let (u_lo, u_hi) = (exact[domain.index(&[0, 0, 0])], {
            let m = [ax.count - 1, 0, 0];
            exact[domain.index(&m)]
        });
        let lin: Vec<f64> = domain
            .iter_nodes()
            .map(|m| {
                let x = domain.coords(&m);
                u_lo + (u_hi - u_lo) * (x[0] - ax.lo) / (ax.hi - ax.lo)
            })
            .collect();
        let bumped: Vec<f64> = domain
            .iter_nodes()
            .enumerate()
            .map(|(i, m)| {
                let x = domain.coords(&m);
                let bump = ((x[0] - 0.5) * (0.9 - x[0]) * x[1] * (0.4 - x[1])) / 0.04;
                exact[i] + 0.05 * bump
            })
            .collect();
        let g1 = GridSolution::new(domain.clone(), lin, exact.clone()).unwrap();
        let g2 = GridSolution::new(domain.clone(), bumped, exact.clone()).unwrap();
        assert!(g1.spacelike_margin() > 0.1 && g2.spacelike_margin() > 0.1);
        let rep = verify_uniqueness(&exact, &[g1, g2], &SolverConfig::default()).unwrap();
        assert!(rep.max_pairwise_diff < 1e-9, "diff {}", rep.max_pairwise_diff);
    }

    #[test]
    fn mirror_symmetric_problem_yields_symmetric_solution() {
        let b = HoroBranch::new(BranchTag::P2, 1.0).unwrap();
        let domain = BoxDomain::new(
            2,
            vec![Axis { lo: 0.5, hi: 0.9, count: 17 }, Axis { lo: -0.4, hi: 0.4, count: 17 }],
        )
        .unwrap();
        // Horosphere data is independent of x₂, hence mirror symmetric.
        let exact = horosphere_graph(&domain, &b, 0.0, 0.0).unwrap();
        let guess = GridSolution::new(domain.clone(), exact.clone(), exact.clone()).unwrap();
        let sym = HalfSpaceIsometry::reflection(1, 0.0);
        let rep =
            symmetry_extension_check(&exact, &guess, &sym, &SolverConfig::default()).unwrap();
        assert!(rep.max_asymmetry < 1e-8, "asymmetry {}", rep.max_asymmetry);
    }
}
