//! Acceptance runner: one PASS/FAIL line per criterion, each with a pinned
//! wall-clock budget. Exits nonzero when any criterion fails.

#[path = "../../core/tests/laws/mod.rs"]
mod laws;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use odeinv_cli::{corpus_dir, corpus_specs, lie_chain, run_many, QueryResult, System, SystemSpec, TemplateSpec};
use odeinv_core::linalg::LinearForm;
use odeinv_core::poly::{parse_polynomial, rat, Polynomial, Ring};
use odeinv_core::{
    check_safety, post, pre, weakest_precondition_via_post, ChainOptions, Ideal, OrderKind, PostResult, Precondition,
    Subspace, Template, Verdict, VectorField,
};

/// Numeric harness settings the corpus must be checked with.
const NUMERIC_TOLERANCE: f64 = 1e-6;
const NUMERIC_HORIZON: f64 = 1.0;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn polys(r: &Arc<Ring>, texts: &[&str]) -> Result<Vec<Polynomial>, String> {
    texts.iter().map(|t| parse_polynomial(t, r).map_err(|e| format!("{t}: {e}"))).collect()
}

fn ideal(r: &Arc<Ring>, texts: &[&str]) -> Result<Ideal, String> {
    Ideal::new(r, polys(r, texts)?).map_err(|e| e.to_string())
}

fn same_ideal(a: &Ideal, b: &Ideal) -> Result<bool, String> {
    a.equals(b).map_err(|e| e.to_string())
}

/// The chain `V_0 ⊋ V_1 ⊋ …` only shrinks, and ends on a step that tested
/// `J` for stability.
fn chain_descends(res: &PostResult) -> Result<(), String> {
    let dims: Vec<usize> = res.trace.iter().map(|s| s.dim_v).collect();
    ensure!(dims.windows(2).all(|w| w[0] >= w[1]), "dim V chain not descending: {dims:?}");
    ensure!(dims.last() == Some(&res.v.dim()), "chain ends at {dims:?} but dim V = {}", res.v.dim());
    ensure!(res.trace.last().is_some_and(|s| s.j_checked), "chain stopped without testing J");
    Ok(())
}

fn running() -> Result<(Arc<Ring>, VectorField), String> {
    let r = Ring::state(&["x", "y"], OrderKind::Lex).map_err(|e| e.to_string())?;
    let f = VectorField::new(&r, polys(&r, &["y^2", "x*y"])?).map_err(|e| e.to_string())?;
    Ok((r, f))
}

fn running_post() -> Check {
    let (r, f) = running()?;
    let psi = Precondition::new(&r, polys(&r, &["x - y"])?).map_err(|e| e.to_string())?;
    let t = Template::complete(&r, &[0, 1], 2).map_err(|e| e.to_string())?;
    let res = post(&psi, &t, &f, ChainOptions::default()).map_err(|e| e.to_string())?;
    chain_descends(&res)?;
    ensure!(res.v.dim() == 3, "dim V = {}", res.v.dim());
    // Parameters: a1 (1), a2 (x), a3 (y), a4 (x^2), a5 (x*y), a6 (y^2).
    let d = |pairs: &[(u32, i64)]| LinearForm::from_pairs(pairs.iter().map(|(i, c)| (*i, rat(*c, 1))));
    let expected_v = Subspace::solve_homogeneous(&[d(&[(0, 1)]), d(&[(1, 1), (2, 1)]), d(&[(3, 1), (4, 1), (5, 1)])], 6);
    ensure!(res.v == expected_v, "V differs from v1 = 0, v2 = -v3, v4 = -v5 - v6");
    let found = res.invariants();
    let expected = polys(&r, &["y^2 - x^2", "x*y - x^2", "y - x"])?;
    for p in &expected {
        ensure!(in_linear_span(p, &found), "{p} not in the span of the result template");
    }
    for p in &found {
        ensure!(in_linear_span(p, &expected), "{p} not in the expected span");
    }
    let gb = res.j.groebner_basis().map_err(|e| e.to_string())?;
    ensure!(gb == polys(&r, &["x - y"])?, "GB of J = {gb:?}");
    ensure!(res.iterations == 0, "m = {}", res.iterations);
    Ok(format!("dim V = 3, J = <x - y>, m = 0, chain {:?}", res.trace.iter().map(|s| s.dim_v).collect::<Vec<_>>()))
}

fn ghost_post() -> Check {
    let r = Ring::state(&["x", "y", "x0", "y0"], OrderKind::DegRevLex).map_err(|e| e.to_string())?;
    let f = VectorField::new(&r, polys(&r, &["y^2", "x*y", "0", "0"])?).map_err(|e| e.to_string())?;
    let psi = Precondition::new(&r, polys(&r, &["x - x0", "y - y0"])?).map_err(|e| e.to_string())?;
    let t = Template::complete(&r, &[0, 1, 2, 3], 2).map_err(|e| e.to_string())?;
    let res = post(&psi, &t, &f, ChainOptions::default()).map_err(|e| e.to_string())?;
    chain_descends(&res)?;
    let gb = res.j.groebner_basis().map_err(|e| e.to_string())?;
    let expected = polys(&r, &["x0^2 - y0^2 - x^2 + y^2"])?;
    let monic: Vec<Polynomial> = expected.iter().map(|p| p.monic()).collect();
    ensure!(gb == monic, "GB of J = {gb:?}");

    let (r2, f2) = running()?;
    let t2 = Template::complete(&r2, &[0, 1], 2).map_err(|e| e.to_string())?;
    let trivial = post(&Precondition::everywhere(&r2), &t2, &f2, ChainOptions::default()).map_err(|e| e.to_string())?;
    chain_descends(&trivial)?;
    ensure!(trivial.result_template.is_zero(), "trivial precondition gave {}", trivial.result_template);
    Ok(format!("J = <{}>, trivial variant zero", gb[0]))
}

fn pre_example() -> Check {
    let (r, f) = running()?;
    let res = pre(&polys(&r, &["x^2 - x*y"])?, &f, ChainOptions::default()).map_err(|e| e.to_string())?;
    ensure!(res.iterations == 1, "m = {}", res.iterations);
    let oracle = ideal(&r, &["x^2 - x*y", "-x^2*y + 2*x*y^2 - y^3"])?;
    ensure!(same_ideal(&res.ideal, &oracle)?, "ideal differs from the oracle");
    let q2 = parse_polynomial("-x^3*y + 4*x^2*y^2 - 5*x*y^3 + 2*y^4", &r).map_err(|e| e.to_string())?;
    ensure!(res.ideal.member(&q2).map_err(|e| e.to_string())?, "q(2) not a member");
    Ok("m = 1, ideal matches, q(2) member".into())
}

fn lie_table() -> Check {
    let spec = SystemSpec::from_toml(
        "name = \"running\"\nvariables = [\"x\", \"y\"]\nfield = { x = \"y^2\", y = \"x*y\" }\noptions = { order = \"lex\" }",
    )
    .map_err(|e| e.to_string())?;
    let system: System = spec.compile().map_err(|e| e.to_string())?;
    let p = |s: &str| system.parse(s, "").map_err(|e| e.to_string());
    let chain = lie_chain(&system, &p("x - y")?, 2).map_err(|e| e.to_string())?;
    ensure!(chain[1] == p("y^2 - x*y")?, "L(x - y) = {}", chain[1]);
    ensure!(chain[2] == p("2*x*y^2 - x^2*y - y^3")?, "L^2(x - y) = {}", chain[2]);
    let other = lie_chain(&system, &p("x^2 - x*y")?, 1).map_err(|e| e.to_string())?;
    ensure!(other[1] == p("-x^2*y + 2*x*y^2 - y^3")?, "L(x^2 - x*y) = {}", other[1]);
    Ok("three derivatives exact".into())
}

fn safety() -> Check {
    let (r, f) = running()?;
    let psi = Precondition::new(&r, polys(&r, &["x - y"])?).map_err(|e| e.to_string())?;
    let good = check_safety(&psi, &polys(&r, &["x^2 - x*y"])?, &f, ChainOptions::default()).map_err(|e| e.to_string())?;
    chain_descends(&good.post)?;
    ensure!(good.verdict == Verdict::Holds, "x^2 - x*y: {:?}", good.verdict);
    let bad = check_safety(&psi, &polys(&r, &["x"])?, &f, ChainOptions::default()).map_err(|e| e.to_string())?;
    chain_descends(&bad.post)?;
    ensure!(bad.verdict != Verdict::Holds, "corrupted postcondition reported as holding");
    Ok(format!("holds, corrupted variant {:?}", bad.verdict))
}

fn corpus_system(name: &str) -> Result<(System, Template), String> {
    let spec = SystemSpec::load(&corpus_dir().join(format!("{name}.toml"))).map_err(|e| e.to_string())?;
    let system = spec.compile().map_err(|e| e.to_string())?;
    let Some(odeinv_cli::QuerySpec::Post { template, .. }) = &spec.query else {
        return Err(format!("{name} has no post query"));
    };
    let template: &TemplateSpec = template;
    let t = system.template(template).map_err(|e| e.to_string())?;
    Ok((system, t))
}

const COLLISION_REFERENCE: [&str; 12] = [
    "x10^2*d20 + x20^2*d20 - 2*x10*d20*x1 + d20*x1^2 - 2*x20*d20*x2 + d20*x2^2 - 2*x10*x20*d1 + 2*x20*x1*d1 \
     + 2*x10*x2*d1 - 2*x1*x2*d1 + x10^2*d2 - x20^2*d2 - 2*x10*x1*d2 + x1^2*d2 + 2*x20*x2*d2 - x2^2*d2",
    "y10^2*e20 + y20^2*e20 - 2*y10*e20*y1 + e20*y1^2 - 2*y20*e20*y2 + e20*y2^2 - 2*y10*y20*e1 + 2*y20*y1*e1 \
     + 2*y10*y2*e1 - 2*y1*y2*e1 + y10^2*e2 - y20^2*e2 - 2*y10*y1*e2 + y1^2*e2 + 2*y20*y2*e2 - y2^2*e2",
    "omega1*x10 - omega1*x1 - d20 + d2",
    "omega1*x20 - omega1*x2 + d10 - d1",
    "omega2*y10 - omega2*y1 - e20 + e2",
    "omega2*y20 - omega2*y2 + e10 - e1",
    "x10*d10 + x20*d20 - d10*x1 - d20*x2 - x10*d1 + x1*d1 - x20*d2 + x2*d2",
    "x20*d10 - x10*d20 + d20*x1 - d10*x2 + x20*d1 - x2*d1 - x10*d2 + x1*d2",
    "d10^2 + d20^2 - d1^2 - d2^2",
    "y10*e10 + y20*e20 - e10*y1 - e20*y2 - y10*e1 + y1*e1 - y20*e2 + y2*e2",
    "y20*e10 - y10*e20 + e20*y1 - e10*y2 + y20*e1 - y2*e1 - y10*e2 + y1*e2",
    "e10^2 + e20^2 - e1^2 - e2^2",
];

fn collision() -> Check {
    let (system, t) = corpus_system("collision")?;
    ensure!(t.n_params() == 190, "{} template parameters", t.n_params());
    let res = post(&system.precondition, &t, &system.field, ChainOptions::default()).map_err(|e| e.to_string())?;
    chain_descends(&res)?;
    ensure!(res.v.dim() == 10, "dim V = {}", res.v.dim());
    ensure!(res.iterations == 3, "m = {}", res.iterations);
    let reference_ideal = ideal(&system.ring, &COLLISION_REFERENCE)?;
    ensure!(same_ideal(&res.j, &reference_ideal)?, "J differs from the reference ideal");
    let gb = res.j.groebner_basis().map_err(|e| e.to_string())?;
    ensure!(gb.len() == 12, "reduced GB has {} elements", gb.len());
    let reference = reference_ideal.groebner_basis().map_err(|e| e.to_string())?;
    ensure!(gb == reference, "reduced bases differ");
    Ok(format!("190 parameters, dim V = 10, m = 3, chain {:?}", res.trace.iter().map(|s| s.dim_v).collect::<Vec<_>>()))
}

fn airplane() -> Check {
    let (system, t) = corpus_system("airplane")?;
    ensure!(t.n_params() == 207, "{} template parameters", t.n_params());
    let wp = weakest_precondition_via_post(&system.precondition, &t, &system.field, ChainOptions::default())
        .map_err(|e| e.to_string())?;
    chain_descends(&wp.post)?;
    ensure!(wp.result_template.n_params() == 4, "{} result parameters", wp.result_template.n_params());
    ensure!(wp.post.iterations == 8, "m = {}", wp.post.iterations);
    let p = polys(
        &system.ring,
        &[
            "c^2 + s^2 - 1",
            "-1/2*q^2 + theta*Mi + 1/2*q0^2",
            "u*q*c + w*q*s - Xm*s + Zm*c - Mi*x + Mi*x0 - u0*q0 - Zm",
            "w*q*c - u*q*s - theta*g - Xm*c - Zm*s - Mi*z + Mi*z0 - w0*q0 + Xm",
        ],
    )?;
    // Membership of p1 and p2 in the linear span of the result instances.
    let instances = wp.result_template.unit_instances();
    for target in &p[..2] {
        ensure!(in_linear_span(target, &instances), "{target} not in the span of the result template");
    }
    let expected = Ideal::new(&system.ring, p).map_err(|e| e.to_string())?;
    ensure!(same_ideal(&wp.ideal, &expected)?, "J differs from <p1, p2, p3, p4>");
    Ok(format!("207 parameters, 4 result parameters, m = 8, chain {:?}", wp.post.trace.iter().map(|s| s.dim_v).collect::<Vec<_>>()))
}

fn in_linear_span(target: &Polynomial, spanning: &[Polynomial]) -> bool {
    let mut monomials: Vec<_> =
        spanning.iter().chain(std::iter::once(target)).flat_map(|p| p.terms().iter().map(|(m, _)| m.clone())).collect();
    monomials.sort_by(|a, b| a.exponents().cmp(b.exponents()));
    monomials.dedup();
    let row = |p: &Polynomial| monomials.iter().map(|m| p.coefficient(m)).collect::<Vec<_>>();
    let rows: Vec<_> = spanning.iter().map(row).collect();
    Subspace::span(monomials.len(), &rows).contains(&row(target))
}

fn property_suites() -> Check {
    let mut counts = Vec::new();
    for suite in laws::suites() {
        suite.run_deterministic().map_err(|e| format!("{}: {e}", suite.name))?;
        counts.push(format!("{} x{}", suite.name, suite.cases));
    }
    let specs = corpus_specs().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for (path, result) in run_many(&specs, 4) {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("?").to_string();
        let Some(report) = result.map_err(|e| format!("{name}: {e}"))? else { continue };
        if let QueryResult::Post { trace, .. } | QueryResult::Check { trace, .. } = &report.content.result {
            ensure!(trace.windows(2).all(|w| w[0].dim_v >= w[1].dim_v), "{name}: chain not descending");
        }
        let numeric = report.content.numeric.as_ref().ok_or(format!("{name}: no numeric check"))?;
        ensure!(numeric.tolerance == NUMERIC_TOLERANCE, "{name}: tolerance {}", numeric.tolerance);
        ensure!(numeric.horizon == NUMERIC_HORIZON, "{name}: horizon {}", numeric.horizon);
        ensure!(numeric.passed(), "{name}: {} numeric failures", numeric.failures.len());
        checked += 1;
    }
    Ok(format!("{}; {checked} corpus specs pass RK4", counts.join(", ")))
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    check: fn() -> Check,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, title: "running-example POST", budget: secs(1), check: running_post },
        Criterion { id: 2, title: "ghost-variable POST", budget: secs(5), check: ghost_post },
        Criterion { id: 3, title: "PRE example", budget: secs(1), check: pre_example },
        Criterion { id: 4, title: "Lie derivative table", budget: Duration::from_millis(100), check: lie_table },
        Criterion { id: 5, title: "safety check", budget: secs(1), check: safety },
        Criterion { id: 6, title: "collision avoidance", budget: secs(600), check: collision },
        Criterion { id: 7, title: "airplane vertical motion", budget: secs(600), check: airplane },
        Criterion { id: 8, title: "property suites", budget: secs(600), check: property_suites },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if elapsed <= c.budget => "PASS",
            _ => "FAIL",
        };
        let detail = match outcome {
            Ok(d) if elapsed <= c.budget => d,
            Ok(d) => format!("{d}; over budget"),
            Err(e) => e,
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} {} {} ({:.3} s of {} s): {detail}", c.id, c.title, elapsed.as_secs_f64(), c.budget.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
