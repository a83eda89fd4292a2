use std::collections::BTreeMap;
use std::time::Instant;

use odeinv_core::algorithms::{ChainStep, RadicalMode};
use odeinv_core::{
    check_invariant_ideal, check_safety, post, pre, weakest_precondition_via_post, Ideal, Polynomial, Verdict,
};

use crate::report::{Outcome, QueryResult, ReportContent, RunReport, Timings, TraceStep, WitnessReport};
use crate::spec::{QuerySpec, System, SystemSpec};
use crate::verify::numeric_verify;
use crate::CliError;

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn trace(steps: &[ChainStep]) -> Vec<TraceStep> {
    steps.iter().map(|s| TraceStep { dim_v: s.dim_v, j_generators: s.j_generators, j_checked: s.j_checked }).collect()
}

fn mode_name(m: RadicalMode) -> &'static str {
    match m {
        RadicalMode::Generators => "generators",
        RadicalMode::Singleton => "singleton",
        RadicalMode::UserSupplied => "user-supplied",
    }
}

fn millis(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Parses and runs the spec's own query.
pub fn run(spec: &SystemSpec) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let system = spec.compile()?;
    let parse_ms = millis(start);
    let query = spec.query.clone().ok_or_else(|| CliError::Spec(format!("spec `{}` has no query", spec.name)))?;
    let mut report = run_query(&system, &query)?;
    report.timings.phases_ms.insert("parse".into(), parse_ms);
    Ok(report)
}

/// Runs `query` against a compiled system, adding the numeric cross-check
/// when the spec's options ask for it.
pub fn run_query(system: &System, query: &QuerySpec) -> Result<RunReport, CliError> {
    let mut phases = BTreeMap::new();
    let start = Instant::now();
    let opts = system.options;
    let (outcome, result) = match query {
        QuerySpec::Post { template, weakest_precondition } => {
            let t = system.template(template)?;
            let res = if *weakest_precondition {
                weakest_precondition_via_post(&system.precondition, &t, &system.field, opts)?.post
            } else {
                post(&system.precondition, &t, &system.field, opts)?
            };
            let invariants = res.invariants();
            let summands: Vec<String> = invariants
                .iter()
                .zip(res.result_template.params())
                .map(|(p, b)| if p.len() > 1 { format!("{b}*({p})") } else { format!("{b}*{p}") })
                .collect();
            let result = QueryResult::Post {
                template_parameters: t.n_params(),
                radical_mode: mode_name(system.precondition.mode()).into(),
                mode_exact: res.mode_exact,
                weakest_precondition: *weakest_precondition,
                iterations: res.iterations,
                dim_v: res.v.dim(),
                trace: trace(&res.trace),
                result_template: if summands.is_empty() { "0".into() } else { summands.join(" + ") },
                invariants: strings(&invariants),
                j_basis: strings(res.j.groebner_basis()?),
                precondition_basis: strings(&res.precondition_basis),
            };
            (Outcome::Success, result)
        }
        QuerySpec::Pre { postcondition } => {
            let p = system.parse_all(postcondition, "postcondition")?;
            let res = pre(&p, &system.field, opts)?;
            let result = QueryResult::Pre {
                iterations: res.iterations,
                generator_counts: res.trace.clone(),
                ideal_basis: strings(res.ideal.groebner_basis()?),
                derivative_closure: strings(&res.derivative_closure),
            };
            (Outcome::Success, result)
        }
        QuerySpec::Check { postcondition } => {
            let q = system.parse_all(postcondition, "postcondition")?;
            let res = check_safety(&system.precondition, &q, &system.field, opts)?;
            let outcome = match res.verdict {
                Verdict::Holds => Outcome::Holds,
                Verdict::Fails => Outcome::Fails,
                Verdict::Inconclusive => Outcome::Inconclusive,
            };
            let witness = res.witness.map(|w| WitnessReport {
                point: w.point.iter().map(|c| c.to_string()).collect(),
                polynomial: q[w.polynomial].to_string(),
                order: w.order,
            });
            let result = QueryResult::Check {
                postcondition: strings(&q),
                mode_exact: res.post.mode_exact,
                iterations: res.post.iterations,
                dim_v: res.post.v.dim(),
                trace: trace(&res.post.trace),
                witness,
            };
            (outcome, result)
        }
        QuerySpec::Invariant { generators } => {
            let g = system.parse_all(generators, "ideal generator")?;
            let ideal = Ideal::with_options(&system.ring, g, opts.gb)?;
            let invariant = check_invariant_ideal(&ideal, &system.field)?;
            let result = QueryResult::Invariant { invariant, basis: strings(ideal.groebner_basis()?) };
            (if invariant { Outcome::Holds } else { Outcome::Fails }, result)
        }
    };
    phases.insert("algorithm".into(), millis(start));
    let mut content = ReportContent {
        name: system.spec.name.clone(),
        query: query.kind().into(),
        outcome,
        order: system.spec.options.order.name().into(),
        variables: system.spec.variables.clone(),
        result,
        numeric: None,
    };
    if system.spec.options.numeric_check {
        let start = Instant::now();
        content.numeric = Some(numeric_verify(&content, system, &system.spec.numeric)?);
        phases.insert("numeric".into(), millis(start));
    }
    Ok(RunReport { content, timings: Timings { phases_ms: phases } })
}

/// The derivatives `p, L(p), …, Lᵏ(p)`.
pub fn lie_chain(system: &System, p: &Polynomial, k: usize) -> Result<Vec<Polynomial>, CliError> {
    let mut out = vec![p.clone()];
    for _ in 0..k {
        let next = system.field.lie_derivative(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}
