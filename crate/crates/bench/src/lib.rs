//! Benchmark workloads: the systems timed by `cargo bench -p odeinv-bench`.

use std::sync::Arc;

use odeinv_core::poly::{parse_polynomial, Monomial, OrderKind, Polynomial, Ring};
use odeinv_core::{Precondition, Template, VectorField};

/// A POST problem: precondition, template and field over one ring.
pub struct Workload {
    pub ring: Arc<Ring>,
    pub field: VectorField,
    pub precondition: Precondition,
    pub template: Template,
}

fn polys(r: &Arc<Ring>, texts: &[&str]) -> Vec<Polynomial> {
    texts.iter().map(|t| parse_polynomial(t, r).expect("workload polynomial")).collect()
}

fn build(vars: &[&str], drifts: &[&str], pre: &[&str], template: impl FnOnce(&Arc<Ring>) -> Template) -> Workload {
    let ring = Ring::state(vars, OrderKind::DegRevLex).expect("workload ring");
    let mut f = polys(&ring, drifts);
    f.resize(vars.len(), Polynomial::zero(&ring));
    let field = VectorField::new(&ring, f).expect("workload field");
    let precondition = Precondition::new(&ring, polys(&ring, pre)).expect("workload precondition");
    let template = template(&ring);
    Workload { ring, field, precondition, template }
}

fn complete(r: &Arc<Ring>, k: u32) -> Template {
    Template::complete(r, &(0..r.len()).collect::<Vec<_>>(), k).expect("complete template")
}

/// `ẋ = y², ẏ = xy` from the line `x = y`, degree-2 template.
pub fn running() -> Workload {
    build(&["x", "y"], &["y^2", "x*y"], &["x - y"], |r| complete(r, 2))
}

/// The same field with ghost copies of the initial state.
pub fn ghost() -> Workload {
    build(&["x", "y", "x0", "y0"], &["y^2", "x*y"], &["x - x0", "y - y0"], |r| complete(r, 2))
}

/// Two aircraft in roundabout motion, 18 variables, 190 template parameters.
pub fn collision() -> Workload {
    build(
        &[
            "x1", "x2", "y1", "y2", "d1", "d2", "e1", "e2", "omega1", "omega2", "x10", "x20", "y10", "y20", "d10",
            "d20", "e10", "e20",
        ],
        &["d1", "d2", "e1", "e2", "-omega1*d2", "omega1*d1", "-omega2*e2", "omega2*e1"],
        &["x1 - x10", "x2 - x20", "y1 - y10", "y2 - y20", "d1 - d10", "d2 - d20", "e1 - e10", "e2 - e20"],
        |r| complete(r, 2),
    )
}

/// Longitudinal airplane motion, 17 variables plus the atoms `q*u` and `q*w`.
pub fn airplane() -> Workload {
    build(
        &["u", "w", "x", "z", "q", "theta", "c", "s", "g", "Xm", "Zm", "Mi", "u0", "w0", "x0", "z0", "q0"],
        &["Xm - g*s - q*w", "Zm + g*c + q*u", "u*c + w*s", "-u*s + w*c", "Mi", "q", "-q*s", "q*c"],
        &["theta", "s", "c - 1", "u - u0", "w - w0", "x - x0", "z - z0", "q - q0"],
        |r| {
            let mut atoms: Vec<Monomial> = (0..r.len()).map(|i| Monomial::var(r.len(), i)).collect();
            for s in ["q*u", "q*w"] {
                atoms.extend(polys(r, &[s])[0].leading_monomial().cloned());
            }
            Template::complete_over_atoms(r, &atoms, 2).expect("atom template")
        },
    )
}

/// Generators whose Gröbner basis is a standard stress test (cyclic-4).
pub fn cyclic4(kind: OrderKind) -> (Arc<Ring>, Vec<Polynomial>) {
    let r = Ring::state(&["a", "b", "c", "d"], kind).expect("ring");
    let g = polys(
        &r,
        &["a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c + b*c*d + c*d*a + d*a*b", "a*b*c*d - 1"],
    );
    (r, g)
}
