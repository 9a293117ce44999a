//! Self-contained property suites over the three subsystems, runnable from
//! the command line. Deterministic: every randomized case is seeded.

use crate::elliptic::{
    self, assemble_nondivergence, coefficients, horosphere_graph, residual_divergence_form,
    solve_dirichlet, Axis, BoxDomain, GridSolution, SolverConfig,
};
use crate::horosphere::{
    build_profile, classify_horosphere_families, eval_antiderivative, invert_branch, BranchTag,
    HoroBranch, HoroError, Monotonicity,
};
use crate::numerics::{integrate_ode, ToleranceConfig};
use crate::profile::Causal;
use crate::rotational::{bowl, nullcline, spacelike_profile, spindle, timelike_profile};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub passes: usize,
    pub failures: usize,
    pub tolerances: BTreeMap<String, f64>,
}

impl SuiteReport {
    fn from_cases(suite: &str, cases: Vec<CaseResult>, tolerances: BTreeMap<String, f64>) -> Self {
        let passes = cases.iter().filter(|c| c.pass).count();
        let failures = cases.len() - passes;
        Self { suite: suite.into(), cases, passes, failures, tolerances }
    }

    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

pub const SUITES: &[&str] = &["horosphere", "rotational", "elliptic"];

pub fn run_suite(name: &str) -> Option<SuiteReport> {
    match name {
        "horosphere" => Some(horosphere_suite()),
        "rotational" => Some(rotational_suite()),
        "elliptic" => Some(elliptic_suite()),
        _ => None,
    }
}

pub fn run_all() -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s).unwrap()).collect()
}

fn case(name: &str, pass: bool, detail: String) -> CaseResult {
    CaseResult { name: name.into(), pass, detail }
}

fn horosphere_suite() -> SuiteReport {
    let mut cases = Vec::new();
    let mut tol = BTreeMap::new();
    tol.insert("round_trip".into(), 1e-9);
    tol.insert("far_tail".into(), 1e-5);
    tol.insert("closed_form_vs_ode".into(), 1e-6);

    // Round trip through inversion on interior points of every branch.
    let mut rng = StdRng::seed_from_u64(101);
    let branches = [
        HoroBranch::new(BranchTag::P1, 1.0).unwrap(),
        HoroBranch::new(BranchTag::P2, 1.0).unwrap(),
        HoroBranch::new(BranchTag::P3, 1.0).unwrap(),
        HoroBranch::new(BranchTag::Q1, 2.0).unwrap(),
        HoroBranch::new(BranchTag::Q2, 2.0).unwrap(),
        HoroBranch::new(BranchTag::Q3, 2.0).unwrap(),
        HoroBranch::new(BranchTag::Q4, 2.0).unwrap(),
    ];
    let mut worst = 0.0f64;
    for b in &branches {
        let iv = b.w_interval();
        let (lo, hi) = (iv.lo.max(-20.0), iv.hi.min(20.0));
        for _ in 0..200 {
            let x = rng.gen_range(lo + 1e-3..hi - 1e-3);
            let y = eval_antiderivative(b, x).unwrap();
            if !y.is_finite() {
                continue;
            }
            if let Ok(back) = invert_branch(b, y) {
                worst = worst.max((back - x).abs() / x.abs().max(1.0));
            } else {
                worst = f64::INFINITY;
            }
        }
    }
    cases.push(case("round_trip", worst < 1e-9, format!("worst relative error {worst:.3e}")));

    // Far-tail limit of Q1 at m = 2.
    let q1 = HoroBranch::new(BranchTag::Q1, 2.0).unwrap();
    let v = eval_antiderivative(&q1, -1e6).unwrap();
    let want = -2.0 / 3.0 * 2.0f64.ln();
    cases.push(case(
        "far_tail",
        (v - want).abs() < 1e-5,
        format!("Q1(-1e6) = {v:.9}, limit {want:.9}"),
    ));

    // Image guard on P1.
    let p1 = HoroBranch::new(BranchTag::P1, 1.0).unwrap();
    let guarded = matches!(invert_branch(&p1, 0.1), Err(HoroError::OutsideImage { .. }));
    cases.push(case("image_guard", guarded, "P1 query above its image".into()));

    // Monotonicity on sampled pairs.
    let mut ok = true;
    for b in &branches {
        let iv = b.w_interval();
        let (lo, hi) = (iv.lo.max(-20.0) + 1e-3, iv.hi.min(20.0) - 1e-3);
        for _ in 0..1000 {
            let (mut x1, mut x2) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
            if x1 == x2 {
                continue;
            }
            if x1 > x2 {
                std::mem::swap(&mut x1, &mut x2);
            }
            let d = eval_antiderivative(b, x2).unwrap() - eval_antiderivative(b, x1).unwrap();
            let want_up = b.monotonicity() == Monotonicity::Increasing;
            if (d > 0.0) != want_up {
                ok = false;
            }
        }
    }
    cases.push(case("monotonicity", ok, "1000 sampled pairs per branch".into()));

    // Closed-form reconstruction matches direct integration of the slope
    // equation (one space-like and one time-like branch).
    let mut worst = 0.0f64;
    for (b, s_span) in [
        (HoroBranch::new(BranchTag::P2, 1.0).unwrap(), (-2.0, 2.0)),
        (HoroBranch::new(BranchTag::Q2, 2.0).unwrap(), (-2.0, 2.0)),
        (HoroBranch::new(BranchTag::Q1, 2.0).unwrap(), (-4.0, -1.0)),
    ] {
        let grid: Vec<f64> =
            (0..101).map(|i| s_span.0 + (s_span.1 - s_span.0) * i as f64 / 100.0).collect();
        let prof = build_profile(&b, 0.0, 0.0, &grid).unwrap();
        let mid = prof.samples[50];
        let cfg = ToleranceConfig::default();
        let m = b.m();
        for dir in [s_span.0, s_span.1] {
            let traj = integrate_ode(
                |_, y: &[f64; 1]| [(1.0 - y[0] * y[0]) * (1.0 - m * y[0])],
                mid.s,
                [mid.w],
                dir,
                &cfg,
            );
            let rhs = |_: f64, y: &[f64; 1]| [(1.0 - y[0] * y[0]) * (1.0 - m * y[0])];
            for p in &prof.samples {
                let (lo, hi) = (mid.s.min(dir), mid.s.max(dir));
                if p.s >= lo && p.s <= hi {
                    let w_ode = traj.eval_component(p.s, 0, rhs);
                    worst = worst.max((w_ode - p.w).abs());
                }
            }
        }
    }
    cases.push(case(
        "closed_form_vs_ode",
        worst < 1e-6,
        format!("max |Δw| = {worst:.3e} across three branches"),
    ));

    // The classification tables list exactly the advertised families.
    let sl2: Vec<_> =
        classify_horosphere_families(2, Causal::SpaceLike).iter().map(|b| b.tag()).collect();
    let tl3: Vec<_> =
        classify_horosphere_families(3, Causal::TimeLike).iter().map(|b| b.tag()).collect();
    cases.push(case(
        "classification",
        sl2 == vec![BranchTag::Linear, BranchTag::P2] && tl3 == vec![BranchTag::Q1, BranchTag::Q4],
        format!("space-like n=2: {sl2:?}; time-like n=3: {tl3:?}"),
    ));

    SuiteReport::from_cases("horosphere", cases, tol)
}

fn rotational_suite() -> SuiteReport {
    let mut cases = Vec::new();
    let mut tol = BTreeMap::new();
    tol.insert("bowl_asymptote".into(), 1e-4);
    tol.insert("blow_up_shift".into(), 1e-6);
    tol.insert("spindle_consistency".into(), 1e-6);
    let cfg = ToleranceConfig::default();

    // Bowl trapping below the nullcline and terminal slope, n = 3.
    match bowl(3, 20.0, 1e-6, &cfg) {
        Ok(b) => {
            let trapped = b.samples.iter().all(|p| p.w < nullcline(p.s, 3));
            let w_end = b.samples.last().unwrap().w;
            let close = (w_end - 0.5).abs() < 1e-4;
            cases.push(case(
                "bowl_n3",
                trapped && close,
                format!("trapped = {trapped}, w(20) = {w_end:.8}"),
            ));
        }
        Err(e) => cases.push(case("bowl_n3", false, e.to_string())),
    }

    // Trichotomy around the bowl, n = 2.
    let mut rng = StdRng::seed_from_u64(202);
    let mut ok = true;
    let mut detail = String::new();
    if let Ok(b) = bowl(2, 6.0, 1e-6, &cfg) {
        for _ in 0..6 {
            let s0 = rng.gen_range(0.4..3.0);
            let offset = rng.gen_range(0.02..0.3);
            let wb = b.eval_w(s0);
            for (z0, want) in [(wb - offset, -1), ((wb + offset).min(0.999), 1)] {
                if z0.abs() >= 1.0 {
                    continue;
                }
                match spacelike_profile(2, s0, z0, &cfg) {
                    Ok((_, tag)) if tag == want => {}
                    Ok((_, tag)) => {
                        ok = false;
                        detail = format!("s0={s0:.3}, z0={z0:.3}: tag {tag}, wanted {want}");
                    }
                    Err(e) => {
                        ok = false;
                        detail = e.to_string();
                    }
                }
            }
        }
    } else {
        ok = false;
    }
    cases.push(case("trichotomy", ok, if ok { "12 shots, both sides".into() } else { detail }));

    // Blow-up inside the comparison window, n = 3.
    let mut ok = true;
    let mut detail = String::new();
    for _ in 0..5 {
        let s0 = rng.gen_range(0.3..2.0);
        let z0 = rng.gen_range(1.1..10.0);
        match timelike_profile(3, s0, z0, &cfg) {
            Ok((_, rep)) => {
                if !(rep.detected_blow_up_s > s0 && rep.detected_blow_up_s < s0 + rep.a_bound) {
                    ok = false;
                    detail = format!(
                        "s0={s0:.3}, z0={z0:.3}: detected {:.6} vs bound {:.6}",
                        rep.detected_blow_up_s,
                        s0 + rep.a_bound
                    );
                }
            }
            Err(e) => {
                ok = false;
                detail = e.to_string();
            }
        }
    }
    cases.push(case("blow_up_bound", ok, if ok { "5 random time-like shots".into() } else { detail }));

    // Spindle inverse consistency and seam curvature.
    match spindle(2, 1.0, &cfg) {
        Ok(sp) => {
            let c = sp.inverse_consistency_error();
            let h = 1e-3;
            let d2 = (sp.eval_g(h) - 2.0 * sp.eval_g(0.0) + sp.eval_g(-h)) / (h * h);
            let want = crate::rotational::seam_second_derivative(2, 1.0);
            let pass = c < 1e-6 && (d2 - want).abs() < 1e-4;
            cases.push(case(
                "spindle",
                pass,
                format!("inverse consistency {c:.3e}, seam curvature {d2:.8} vs {want:.8}"),
            ));
        }
        Err(e) => cases.push(case("spindle", false, e.to_string())),
    }

    SuiteReport::from_cases("rotational", cases, tol)
}

fn elliptic_suite() -> SuiteReport {
    let mut cases = Vec::new();
    let mut tol = BTreeMap::new();
    tol.insert("eigen_identity".into(), 1e-12);
    tol.insert("consistency_order".into(), 1.9);
    tol.insert("recovery_order".into(), 1.9);

    // Eigenvalue identity of the coefficient matrix on random admissible
    // states.
    let mut rng = StdRng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x1: f64 = rng.gen_range(0.2..2.5);
        let mut p: [f64; 2] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let cap = rng.gen_range(0.1..0.98) / x1;
        let norm = (p[0] * p[0] + p[1] * p[1]).sqrt().max(1e-12);
        p[0] *= cap / norm;
        p[1] *= cap / norm;
        let c = coefficients(&[x1, 0.7], &p, 2).expect("admissible");
        let w2 = 1.0 - x1 * x1 * (p[0] * p[0] + p[1] * p[1]);
        for i in 0..2 {
            let ap = c.a_at(i, 0) * p[0] + c.a_at(i, 1) * p[1];
            worst = worst.max((ap - x1 * x1 * p[i]).abs());
            let q = [-p[1], p[0]];
            let aq = c.a_at(i, 0) * q[0] + c.a_at(i, 1) * q[1];
            worst = worst.max((aq - x1 * x1 * w2 * q[i]).abs());
        }
    }
    cases.push(case("eigen_identity", worst < 1e-11, format!("worst deviation {worst:.3e}")));

    // Divergence / non-divergence consistency under refinement.
    let mut gaps = Vec::new();
    for count in [9usize, 17, 33] {
        let d = BoxDomain::new(
            2,
            vec![Axis { lo: 0.6, hi: 1.2, count }, Axis { lo: -0.3, hi: 0.5, count }],
        )
        .unwrap();
        let v: Vec<f64> = d
            .iter_nodes()
            .map(|m| {
                let x = d.coords(&m);
                0.2 * (1.3 * x[0] + 0.4).sin() * (0.9 * x[1] - 0.2).cos() + 0.1 * x[1]
            })
            .collect();
        let g = GridSolution::new(d.clone(), v.clone(), v).unwrap();
        let nd = assemble_nondivergence(&g).unwrap();
        let dv = residual_divergence_form(&g).unwrap();
        let mut gap = 0.0f64;
        for (j, m) in d.iter_interior().enumerate() {
            let x = d.coords(&m);
            let mut g2 = 0.0;
            for a in 0..2 {
                let h = d.axes()[a].spacing();
                let mut mp = m;
                let mut mm = m;
                mp[a] += 1;
                mm[a] -= 1;
                let der = (g.values()[d.index(&mp)] - g.values()[d.index(&mm)]) / (2.0 * h);
                g2 += der * der;
            }
            let w3 = (1.0 - x[0] * x[0] * g2).powf(1.5);
            gap = gap.max((nd[j] - w3 * dv[j]).abs());
        }
        gaps.push(gap);
    }
    let order = (gaps[1] / gaps[2]).log2();
    cases.push(case(
        "consistency_order",
        order > 1.9,
        format!("gaps {gaps:?}, observed order {order:.3}"),
    ));

    // Exact-solution recovery with the linear profile (n = 3 reduction).
    let mut errs = Vec::new();
    let mut all_ok = true;
    for count in [17usize, 33] {
        let d = BoxDomain::new(
            3,
            vec![Axis { lo: 0.5, hi: 0.9, count }, Axis { lo: 0.0, hi: 0.4, count }],
        )
        .unwrap();
        let exact: Vec<f64> =
            d.iter_nodes().map(|m| elliptic::sigma(d.coords(&m)[0]) / 2.0).collect();
        let guess = GridSolution::new(d.clone(), vec![0.0; d.node_count()], exact.clone()).unwrap();
        match solve_dirichlet(&exact, &guess, &SolverConfig::default()) {
            Ok((sol, _)) => {
                let mut err = 0.0f64;
                for m in d.iter_interior() {
                    let i = d.index(&m);
                    err = err.max((sol.values()[i] - exact[i]).abs());
                }
                errs.push(err);
            }
            Err(e) => {
                all_ok = false;
                errs.push(f64::NAN);
                let _ = e;
            }
        }
    }
    let order = if errs.len() == 2 { (errs[0] / errs[1]).log2() } else { f64::NAN };
    cases.push(case(
        "recovery_order",
        all_ok && order > 1.9,
        format!("errors {errs:?}, observed order {order:.3}"),
    ));

    // Exact solution from a horosphere graph on a box (P2 family, n = 2).
    let d = BoxDomain::new(
        2,
        vec![Axis { lo: 0.5, hi: 0.9, count: 33 }, Axis { lo: 0.0, hi: 0.4, count: 33 }],
    )
    .unwrap();
    let b = HoroBranch::new(BranchTag::P2, 1.0).unwrap();
    let exact = horosphere_graph(&d, &b, 0.0, 0.0).unwrap();
    let guess = GridSolution::new(d.clone(), vec![0.0; d.node_count()], exact.clone()).unwrap();
    match solve_dirichlet(&exact, &guess, &SolverConfig::default()) {
        Ok((sol, rep)) => {
            let mut err = 0.0f64;
            for m in d.iter_interior() {
                let i = d.index(&m);
                err = err.max((sol.values()[i] - exact[i]).abs());
            }
            cases.push(case(
                "p2_graph_recovery",
                rep.converged && err < 1e-4,
                format!("interior error {err:.3e}"),
            ));
        }
        Err(e) => cases.push(case("p2_graph_recovery", false, e.to_string())),
    }

    SuiteReport::from_cases("elliptic", cases, tol)
}
