use std::process::Command;

use odeinv_cli::spec::NumericSpec;
use odeinv_cli::{corpus_dir, run, verify_polynomials, QueryResult, SystemSpec};
use odeinv_core::poly::{parse_polynomial, rat, Monomial, ParseErrorKind, Polynomial, Rational};
use odeinv_core::{Ideal, Ring, Subspace};

const RUNNING: &str = r#"
name = "running"
variables = ["x", "y"]
field = { x = "y^2", y = "x*y" }
options = { order = "lex" }
"#;

fn with_query(base: &str, extra: &str) -> SystemSpec {
    SystemSpec::from_toml(&format!("{base}\n{extra}")).unwrap()
}

/// Whether two lists of polynomials span the same vector space.
fn same_span(a: &[Polynomial], b: &[Polynomial]) -> bool {
    let mut monomials: Vec<Monomial> = a.iter().chain(b).flat_map(|p| p.terms().iter().map(|(m, _)| m.clone())).collect();
    monomials.sort_by(|x, y| x.exponents().cmp(y.exponents()));
    monomials.dedup();
    let dense = |ps: &[Polynomial]| -> Subspace {
        let rows: Vec<Vec<Rational>> =
            ps.iter().map(|p| monomials.iter().map(|m| p.coefficient(m)).collect()).collect();
        Subspace::span(monomials.len(), &rows)
    };
    dense(a) == dense(b)
}

#[test]
fn parser_examples() {
    let r = Ring::state(&["x", "y"], odeinv_core::OrderKind::Lex).unwrap();
    let p = |s: &str| parse_polynomial(s, &r).unwrap();
    assert_eq!(p("x^2 - x*y").to_string(), "x^2 - x*y");
    assert!(p("0").is_zero());
    assert_eq!(p("(x - y)^2"), p("x^2 - 2*x*y + y^2"));
    assert_eq!(p("0.25*x"), p("1/4*x"));
    let err = parse_polynomial("x + w", &r).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(_)), "{err:?}");
    assert_eq!(err.position, 4);
    assert!(parse_polynomial("x^-1", &r).is_err());
    assert!(parse_polynomial("2x", &r).is_err());
}

#[test]
fn running_example_report() {
    let spec = with_query(
        RUNNING,
        "[precondition]\ngenerators = [\"x - y\"]\n[query]\nkind = \"post\"\ntemplate = { type = \"complete\", degree = 2 }",
    );
    let report = run(&spec).unwrap();
    let system = spec.compile().unwrap();
    let QueryResult::Post { invariants, j_basis, dim_v, iterations, .. } = &report.content.result else {
        panic!("post report expected")
    };
    assert_eq!((*dim_v, *iterations), (3, 0));
    assert_eq!(j_basis, &["x - y"]);
    let got = system.parse_all(invariants, "").unwrap();
    let want = system.parse_all(&["y^2 - x^2".into(), "x*y - x^2".into(), "y - x".into()], "").unwrap();
    assert!(same_span(&got, &want));
}

#[test]
fn pre_example_report() {
    let spec = with_query(RUNNING, "[query]\nkind = \"pre\"\npostcondition = [\"x^2 - x*y\"]");
    let report = run(&spec).unwrap();
    let system = spec.compile().unwrap();
    let QueryResult::Pre { iterations, ideal_basis, .. } = &report.content.result else { panic!() };
    assert_eq!(*iterations, 1);
    let got = Ideal::new(&system.ring, system.parse_all(ideal_basis, "").unwrap()).unwrap();
    let want = Ideal::new(
        &system.ring,
        system.parse_all(&["x^2 - x*y".into(), "-x^2*y + 2*x*y^2 - y^3".into()], "").unwrap(),
    )
    .unwrap();
    assert!(got.equals(&want).unwrap());
}

#[test]
fn empty_precondition_and_zero_template() {
    let spec = with_query(
        RUNNING,
        "[query]\nkind = \"post\"\ntemplate = { type = \"explicit\", expression = \"0*a\", parameters = [\"a\"] }",
    );
    let report = run(&spec).unwrap();
    let QueryResult::Post { dim_v, result_template, j_basis, .. } = &report.content.result else { panic!() };
    assert_eq!(*dim_v, 1);
    assert_eq!(result_template, "b1*0");
    assert!(j_basis.is_empty());

    let trivial = with_query(RUNNING, "[query]\nkind = \"post\"\ntemplate = { type = \"complete\", degree = 2 }");
    let report = run(&trivial).unwrap();
    let QueryResult::Post { dim_v, result_template, .. } = &report.content.result else { panic!() };
    assert_eq!(*dim_v, 0);
    assert_eq!(result_template, "0");
}

#[test]
fn numeric_verify_examples() {
    let ghost = SystemSpec::load(&corpus_dir().join("ghost.toml")).unwrap().compile().unwrap();
    let cfg = NumericSpec::default();
    let p = ghost.parse("x0^2 - y0^2 - x^2 + y^2", "").unwrap();
    let from = vec![rat(2, 1), rat(1, 1), rat(2, 1), rat(1, 1)];
    let ok = verify_polynomials(&ghost, std::slice::from_ref(&p), std::slice::from_ref(&from), &cfg);
    assert!(ok.passed(), "{:?}", ok.failures);

    let zero = ghost.parse("0", "").unwrap();
    assert!(verify_polynomials(&ghost, &[zero], &[from], &cfg).passed());

    let running = SystemSpec::from_toml(RUNNING).unwrap().compile().unwrap();
    let wrong = running.parse("x - 2*y", "").unwrap();
    let bad = verify_polynomials(&running, &[wrong], &[vec![rat(1, 1), rat(1, 1)]], &cfg);
    assert_eq!(bad.failures.len(), 1);
    assert!(bad.failures[0].time <= cfg.horizon);
}

fn odeinv(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_odeinv")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn exit_codes_encode_verdicts() {
    let dir = corpus_dir();
    let safety = dir.join("safety.toml");
    let safety = safety.to_str().unwrap();
    let (code, out) = odeinv(&["check", safety]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("holds"));
    assert_eq!(odeinv(&["check", safety, "-p", "x"]).0, 1);

    let tmp = std::env::temp_dir().join(format!("odeinv-curved-{}.toml", std::process::id()));
    std::fs::write(&tmp, format!("{RUNNING}\n[precondition]\ngenerators = [\"x^2 - y^2\"]\n")).unwrap();
    let curved = tmp.to_str().unwrap();
    assert_eq!(odeinv(&["check", curved, "-p", "x"]).0, 2);
    assert_eq!(odeinv(&["post", curved, "--degree", "1", "--weakest-precondition"]).0, 5);
    assert_eq!(odeinv(&["post", curved, "--degree", "2", "--max-iterations", "0"]).0, 4);
    assert_eq!(odeinv(&["check", "/nonexistent/spec.toml", "-p", "x"]).0, 3);
    assert_eq!(odeinv(&["invariant", safety, "-g", "x - y"]).0, 0);
    assert_eq!(odeinv(&["invariant", safety, "-g", "x"]).0, 1);
}

#[test]
fn subcommands_print_reports() {
    let running = corpus_dir().join("running.toml");
    let running = running.to_str().unwrap();
    let (code, out) = odeinv(&["lie", running, "--poly", "x - y", "--steps", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("L^1: -x*y + y^2"), "{out}");
    let (code, out) = odeinv(&["post", running, "--json"]);
    assert_eq!(code, 0);
    let report: odeinv_cli::RunReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.content.query, "post");
    let (code, out) = odeinv(&["verify-numeric", running, "--samples", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pass"));
    let (code, out) = odeinv(&["pre", running, "-p", "x^2 - x*y"]);
    assert_eq!(code, 0);
    assert!(out.contains("m = 1"));
}
