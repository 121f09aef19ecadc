//! Verification workflows: identities, observability trials, and the
//! aggregate check battery.

#![allow(clippy::needless_range_loop)]

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::output::{to_json, write_text, Sink};
use anyhow::Result;
use microbeam::modes::{boundary_identities, gram_matrix};
use microbeam::observability::{
    classify, observability_constants, observe_mode, OperatorId, Verdict,
};
use microbeam::simulate::{multiplier_identity_check, observability_check, random_state};
use microbeam::spectrum::{gap_profile, SpectralBasis};
use serde::Serialize;

#[derive(Serialize)]
struct IdentityRow {
    n: usize,
    lambda: f64,
    /// zeta (phi'''(0))^2 - lambda^2 - integral term, over lambda^2
    root_moment_rel: f64,
    /// strain-integral identity residual over lambda^2
    strain_rel: f64,
    /// violation of the two-sided bound (0 when it holds)
    bound_violation: f64,
    /// zeta (phi'''(0))^2 / lambda^2 (must lie in [4, 6])
    ratio: f64,
}

#[derive(Serialize)]
struct IdentitiesOut {
    schema: u32,
    zeta: f64,
    n_modes: usize,
    max_root_moment_rel: f64,
    max_strain_rel: f64,
    bound_violations: usize,
    reports: Vec<IdentityRow>,
    pass: bool,
}

pub fn identities(cfg: &RunConfig) -> Result<i32> {
    let basis = crate::build_basis(cfg)?;
    let quad = basis.quadrature();
    let mut rows = Vec::new();
    let mut max_rm = 0.0f64;
    let mut max_st = 0.0f64;
    let mut violations = 0usize;
    for mode in basis.modes() {
        let rep = boundary_identities(mode, quad)?;
        let lam2 = mode.lambda * mode.lambda;
        let row = IdentityRow {
            n: mode.n,
            lambda: mode.lambda,
            root_moment_rel: rep.r_root_moment.abs() / lam2,
            strain_rel: rep.r_strain.abs() / lam2,
            bound_violation: rep.bound_violation,
            ratio: rep.ratio,
        };
        max_rm = max_rm.max(row.root_moment_rel);
        max_st = max_st.max(row.strain_rel);
        if row.bound_violation > 0.0 {
            violations += 1;
        }
        rows.push(row);
    }
    let pass = max_rm < 1e-7 && max_st < 1e-7 && violations == 0;
    let out = IdentitiesOut {
        schema: SCHEMA_VERSION,
        zeta: cfg.zeta,
        n_modes: cfg.n_modes,
        max_root_moment_rel: max_rm,
        max_strain_rel: max_st,
        bound_violations: violations,
        reports: rows,
        pass,
    };
    write_text(&Sink::from_config(cfg), &to_json(&out)?)?;
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct TrialRow {
    seed: u64,
    integral_y2: f64,
    lower_margin: f64,
    upper_margin: f64,
    holds: bool,
}

#[derive(Serialize)]
struct ObservabilityOut {
    schema: u32,
    zeta: f64,
    n_modes: usize,
    #[serde(rename = "T")]
    horizon: f64,
    trials: u64,
    seed: u64,
    threshold: f64,
    lower_constant: f64,
    upper_constant: f64,
    lower_applicable: bool,
    violations: usize,
    results: Vec<TrialRow>,
    pass: bool,
}

pub fn observability(cfg: &RunConfig, trials: u64) -> Result<i32> {
    let basis = crate::build_basis(cfg)?;
    let consts = observability_constants(cfg.zeta, cfg.horizon);
    let mut rows = Vec::new();
    let mut violations = 0usize;
    for i in 0..trials {
        let seed = cfg.seed.wrapping_add(i);
        let state = random_state(&basis, basis.len(), seed)?;
        let rep = observability_check(&state, cfg.horizon)?;
        if !rep.holds {
            violations += 1;
        }
        rows.push(TrialRow {
            seed,
            integral_y2: rep.integral_y2,
            lower_margin: rep.lower_margin,
            upper_margin: rep.upper_margin,
            holds: rep.holds,
        });
    }
    let pass = violations == 0;
    let out = ObservabilityOut {
        schema: SCHEMA_VERSION,
        zeta: cfg.zeta,
        n_modes: cfg.n_modes,
        horizon: cfg.horizon,
        trials,
        seed: cfg.seed,
        threshold: consts.threshold,
        lower_constant: consts.lower,
        upper_constant: consts.upper,
        lower_applicable: consts.lower_is_positive,
        violations,
        results: rows,
        pass,
    };
    write_text(&Sink::from_config(cfg), &to_json(&out)?)?;
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct AllOut {
    schema: u32,
    zeta: f64,
    n_modes: usize,
    #[serde(rename = "T")]
    horizon: f64,
    seed: u64,
    checks: Vec<Check>,
    pass: bool,
}

pub fn all(cfg: &RunConfig) -> Result<i32> {
    let basis = crate::build_basis(cfg)?;
    let checks = vec![
        check_orthonormality(&basis),
        check_identities(&basis),
        check_c3_bounds(&basis),
        check_classification(&basis),
        check_gap_growth(&basis),
        check_multiplier(&basis, cfg)?,
        check_sandwich(&basis, cfg)?,
    ];

    let pass = checks.iter().all(|c| c.pass);
    // human-readable table on stderr, machine-readable JSON on the sink
    eprintln!("{:<22} {:<6} detail", "check", "result");
    for c in &checks {
        eprintln!(
            "{:<22} {:<6} {}",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    eprintln!("overall: {}", if pass { "PASS" } else { "FAIL" });

    let out = AllOut {
        schema: SCHEMA_VERSION,
        zeta: cfg.zeta,
        n_modes: cfg.n_modes,
        horizon: cfg.horizon,
        seed: cfg.seed,
        checks,
        pass,
    };
    write_text(&Sink::from_config(cfg), &to_json(&out)?)?;
    Ok(if pass { 0 } else { 1 })
}

fn check_orthonormality(basis: &SpectralBasis<f64>) -> Check {
    match gram_matrix(basis) {
        Ok(g) => {
            let n = g.len();
            let mut off = 0.0f64;
            let mut diag = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        diag = diag.max((g[i][j] - 1.0).abs());
                    } else {
                        off = off.max(g[i][j].abs());
                    }
                }
            }
            Check {
                name: "orthonormality",
                pass: off < 1e-6 && diag < 1e-7,
                detail: format!("max offdiag {off:.2e}, max |diag-1| {diag:.2e}"),
            }
        }
        Err(e) => Check {
            name: "orthonormality",
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn check_identities(basis: &SpectralBasis<f64>) -> Check {
    let mut max_rel = 0.0f64;
    let mut violations = 0usize;
    for mode in basis.modes() {
        match boundary_identities(mode, basis.quadrature()) {
            Ok(rep) => {
                let lam2 = mode.lambda * mode.lambda;
                if mode.n <= 10 {
                    max_rel = max_rel.max(rep.r_root_moment.abs() / lam2);
                    max_rel = max_rel.max(rep.r_strain.abs() / lam2);
                }
                if rep.bound_violation > 0.0 {
                    violations += 1;
                }
            }
            Err(e) => {
                return Check {
                    name: "identities",
                    pass: false,
                    detail: e.to_string(),
                };
            }
        }
    }
    Check {
        name: "identities",
        pass: max_rel < 1e-7 && violations == 0,
        detail: format!("max relative residual {max_rel:.2e}, bound violations {violations}"),
    }
}

fn check_c3_bounds(basis: &SpectralBasis<f64>) -> Check {
    let zeta = basis.zeta();
    let (lo, hi) = ((2.0 * zeta).sqrt(), (3.0 * zeta).sqrt());
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for k in 1..=basis.len() {
        match observe_mode(basis, k as i32, OperatorId::C3) {
            Ok(v) => {
                min = min.min(v);
                max = max.max(v);
            }
            Err(e) => {
                return Check {
                    name: "c3-bounds",
                    pass: false,
                    detail: e.to_string(),
                }
            }
        }
    }
    Check {
        name: "c3-bounds",
        pass: min >= lo && max <= hi,
        detail: format!("|C3 psi| in [{min:.6}, {max:.6}], theory [{lo:.6}, {hi:.6}]"),
    }
}

fn check_classification(basis: &SpectralBasis<f64>) -> Check {
    let run = || -> microbeam::Result<(Verdict, Verdict, Verdict)> {
        Ok((
            classify(basis, OperatorId::C1)?.verdict,
            classify(basis, OperatorId::C2)?.verdict,
            classify(basis, OperatorId::C3)?.verdict,
        ))
    };
    match run() {
        Ok((v1, v2, v3)) => Check {
            name: "classification",
            pass: v1 == Verdict::NotAdmissible
                && v2 == Verdict::NotAdmissible
                && v3 == Verdict::AdmissibleExact,
            detail: format!("C1 {v1:?}, C2 {v2:?}, C3 {v3:?}"),
        },
        Err(e) => Check {
            name: "classification",
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn check_gap_growth(basis: &SpectralBasis<f64>) -> Check {
    match gap_profile(basis) {
        Ok(p) => Check {
            name: "gap-growth",
            pass: p.gaps_diverging && p.gaps.iter().all(|g| *g > 0.0),
            detail: format!(
                "gaps diverging {}, lambda exponent {:.3}, gap exponent {:.3}",
                p.gaps_diverging, p.lambda_exponent, p.gap_exponent
            ),
        },
        Err(e) => Check {
            name: "gap-growth",
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn check_multiplier(basis: &SpectralBasis<f64>, cfg: &RunConfig) -> Result<Check> {
    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let state = random_state(basis, basis.len().min(5), cfg.seed.wrapping_add(i))?;
        let rep = multiplier_identity_check(&state, cfg.horizon)?;
        worst = worst.max(rep.relative_residual);
    }
    Ok(Check {
        name: "multiplier-identity",
        pass: worst < 1e-6,
        detail: format!("worst relative residual {worst:.2e} over 20 states"),
    })
}

fn check_sandwich(basis: &SpectralBasis<f64>, cfg: &RunConfig) -> Result<Check> {
    let consts = observability_constants(cfg.zeta, cfg.horizon);
    if !consts.lower_is_positive {
        return Ok(Check {
            name: "observability",
            pass: false,
            detail: format!(
                "horizon {} below threshold {:.3}: no lower bound to verify",
                cfg.horizon, consts.threshold
            ),
        });
    }
    let mut violations = 0usize;
    let trials = 100u64;
    for i in 0..trials {
        let state = random_state(basis, basis.len().min(10), cfg.seed.wrapping_add(1000 + i))?;
        if !observability_check(&state, cfg.horizon)?.holds {
            violations += 1;
        }
    }
    Ok(Check {
        name: "observability",
        pass: violations == 0,
        detail: format!(
            "{} trials, {} violations, constants [{:.3}, {:.3}]",
            trials, violations, consts.lower, consts.upper
        ),
    })
}
