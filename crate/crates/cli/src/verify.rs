//! RK4 cross-check of reported invariants.
//!
//! Initial points are exact rational solutions of the relevant generators,
//! found by the core sampler or taken from the spec. A polynomial fails when
//! it leaves `tolerance·(1 + scale)` anywhere along a trajectory, `scale`
//! being its largest term magnitude on that trajectory.

use num_traits::ToPrimitive;
use odeinv_core::numeric::{check_along, integrate, sample_points, Rk4Config};
use odeinv_core::{Polynomial, Rational};

use crate::report::{NumericFailure, NumericReport, QueryResult, ReportContent};
use crate::spec::{NumericSpec, System};
use crate::CliError;

fn to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Which polynomials a report claims are invariant, and the generators
/// whose variety the trajectories must start from.
fn claims(content: &ReportContent, system: &System) -> Result<(Vec<Polynomial>, Vec<Polynomial>), CliError> {
    let parse = |v: &[String]| system.parse_all(v, "reported polynomial");
    Ok(match &content.result {
        QueryResult::Post { invariants, j_basis, .. } => {
            let mut ps = parse(invariants)?;
            ps.extend(parse(j_basis)?);
            (ps, system.precondition.generators().to_vec())
        }
        QueryResult::Pre { ideal_basis, .. } => {
            let b = parse(ideal_basis)?;
            (b.clone(), b)
        }
        QueryResult::Check { postcondition, .. } if content.outcome.exit_code() == 0 => {
            (parse(postcondition)?, system.precondition.generators().to_vec())
        }
        QueryResult::Invariant { invariant: true, basis } => {
            let b = parse(basis)?;
            (b.clone(), b)
        }
        _ => (Vec::new(), Vec::new()),
    })
}

/// Cross-checks what `content` reports against RK4 trajectories.
pub fn numeric_verify(content: &ReportContent, system: &System, cfg: &NumericSpec) -> Result<NumericReport, CliError> {
    let (polys, gens) = claims(content, system)?;
    let mut points = system.explicit_points()?;
    if points.is_empty() && polys.iter().any(|p| !p.is_zero()) {
        points = sample_points(&system.ring, &gens, cfg.samples, cfg.seed)?;
    }
    Ok(verify_polynomials(system, &polys, &points, cfg))
}

/// Integrates from each point and reports every polynomial that leaves its
/// tolerance band.
pub fn verify_polynomials(system: &System, polys: &[Polynomial], points: &[Vec<Rational>], cfg: &NumericSpec) -> NumericReport {
    let polys: Vec<Polynomial> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut report = NumericReport {
        horizon: cfg.horizon,
        step: cfg.step,
        tolerance: cfg.tolerance,
        points: points.iter().map(|p| p.iter().map(Rational::to_string).collect()).collect(),
        polynomials: polys.len(),
        truncated: 0,
        failures: Vec::new(),
        note: None,
    };
    if polys.is_empty() {
        return report;
    }
    if points.is_empty() {
        report.note = Some("no initial point satisfying the generators was found".into());
        return report;
    }
    let rk = Rk4Config { step: cfg.step, horizon: cfg.horizon, escape: cfg.escape, resolution: cfg.resolution };
    for (point, label) in points.iter().zip(&report.points) {
        let x0: Vec<f64> = point.iter().map(to_f64).collect();
        let traj = integrate(&system.field, &x0, &rk);
        if traj.escaped_at.is_some() {
            report.truncated += 1;
        }
        for v in check_along(&traj, &polys, cfg.tolerance) {
            report.failures.push(NumericFailure {
                polynomial: polys[v.polynomial].to_string(),
                point: label.clone(),
                time: v.time,
                value: v.value,
                bound: v.bound,
            });
        }
    }
    report
}
