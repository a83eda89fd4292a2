//! Randomized laws for the algebra kernel, cross-checked against independent
//! oracles where one exists. Shared by the property tests and the
//! acceptance runner, which drive the same suites with fixed case counts.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use odeinv_core::groebner::{buchberger, divide, normal_form, s_polynomial, GbOptions};
use odeinv_core::linalg::{rref, LinearForm, Subspace};
use odeinv_core::numeric::{time_derivative, CompiledPolynomial};
use odeinv_core::poly::{
    monomials_up_to_degree, parse_polynomial, rat, Monomial, MonomialOrder, OrderKind, Polynomial, Rational, Ring,
};
use odeinv_core::{Error, Ideal, Template, VectorField};
use proptest::prelude::*;
use proptest::test_runner::{RngAlgorithm, TestCaseError, TestRng, TestRunner};

type Raw = Vec<(Vec<u32>, i64)>;
type Outcome = Result<(), TestCaseError>;

const NAMES: [&str; 3] = ["x", "y", "z"];

fn order_kind() -> impl Strategy<Value = OrderKind> {
    prop_oneof![Just(OrderKind::Lex), Just(OrderKind::DegLex), Just(OrderKind::DegRevLex)]
}

fn ring(nvars: usize, kind: OrderKind) -> Arc<Ring> {
    Ring::state(&NAMES[..nvars], kind).unwrap()
}

/// Exponent vectors of total degree at most `deg` with small integer
/// coefficients.
fn raw_terms(nvars: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Raw> {
    prop::collection::vec((prop::collection::vec(0..=deg, nvars), -4i64..=4), 0..=max_terms)
        .prop_map(move |ts| ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= deg).collect())
}

fn build(r: &Arc<Ring>, raw: &[(Vec<u32>, i64)]) -> Polynomial {
    Polynomial::from_terms(r, raw.iter().map(|(e, c)| (Monomial::new(e.clone()), rat(*c, 1))))
}

fn nonzero(r: &Arc<Ring>, raw: &[(Vec<u32>, i64)]) -> Polynomial {
    let p = build(r, raw);
    if p.is_zero() {
        Polynomial::one(r)
    } else {
        p
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn add(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.checked_add(b).unwrap()
}

fn mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.checked_mul(b).unwrap()
}

/// Decides `p ∈ ⟨gens⟩` restricted to cofactors of degree at most `d` by
/// solving the linear system `Σ hᵢ gᵢ = p` for the cofactor coefficients.
pub fn truncated_member(p: &Polynomial, gens: &[Polynomial], d: u32) -> bool {
    let r = p.ring();
    let all: Vec<usize> = (0..r.len()).collect();
    let multipliers = monomials_up_to_degree(r, &all, d);
    let columns: Vec<Polynomial> =
        gens.iter().flat_map(|g| multipliers.iter().map(move |u| g.mul_monomial(u, &rat(1, 1)))).collect();
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for q in columns.iter().chain(std::iter::once(p)) {
        for (m, _) in q.terms() {
            let k = index.len();
            index.entry(m.clone()).or_insert(k);
        }
    }
    let ncols = columns.len() + 1;
    let mut rows = vec![vec![Rational::zero(); ncols]; index.len()];
    for (j, q) in columns.iter().enumerate() {
        for (m, c) in q.terms() {
            rows[index[m]][j] = c.clone();
        }
    }
    for (m, c) in p.terms() {
        rows[index[m]][ncols - 1] = c.clone();
    }
    let (_, pivots) = rref(&rows, ncols);
    !pivots.contains(&(ncols - 1))
}

/// A Gröbner basis under tight caps; `None` when a cap trips.
fn small_gb(gens: &[Polynomial], r: &Arc<Ring>) -> Option<Vec<Polynomial>> {
    let opts = GbOptions { pair_budget: 5_000, degree_cap: 12 };
    match buchberger(gens, r, opts) {
        Ok(g) => Some(g),
        Err(Error::ResourceCap { .. }) => None,
        Err(e) => panic!("unexpected error {e}"),
    }
}

pub fn division_reassembles((kind, p, gs): (OrderKind, Raw, Vec<Raw>)) -> Outcome {
    let r = ring(3, kind);
    let p = build(&r, &p);
    let gs: Vec<Polynomial> = gs.iter().map(|g| nonzero(&r, g)).collect();
    let d = divide(&p, &gs).unwrap();
    let mut acc = d.remainder.clone();
    for (q, g) in d.quotients.iter().zip(&gs) {
        let qg = mul(q, g);
        if let (Some(lp), Some(lq)) = (p.leading_monomial(), qg.leading_monomial()) {
            prop_assert_ne!(r.order().cmp(lq, lp), std::cmp::Ordering::Greater);
        }
        acc = add(&acc, &qg);
    }
    prop_assert_eq!(&acc, &p);
    for (m, _) in d.remainder.terms() {
        prop_assert!(gs.iter().all(|g| !g.leading_monomial().unwrap().divides(m)));
    }
    Ok(())
}

pub fn lie_is_a_derivation((kind, drifts, p, q, c): (OrderKind, Vec<Raw>, Raw, Raw, Rational)) -> Outcome {
    let r = ring(3, kind);
    let f = VectorField::new(&r, drifts.iter().map(|d| build(&r, d)).collect()).unwrap();
    let (p, q) = (build(&r, &p), build(&r, &q));
    let l = |a: &Polynomial| f.lie_derivative(a).unwrap();
    prop_assert_eq!(l(&add(&p, &q)), add(&l(&p), &l(&q)));
    prop_assert_eq!(l(&mul(&p, &q)), add(&mul(&l(&p), &q), &mul(&p, &l(&q))));
    prop_assert!(l(&Polynomial::constant(&r, c.clone())).is_zero());
    prop_assert_eq!(l(&p.scale(&c)), l(&p).scale(&c));
    Ok(())
}

pub fn evaluation_is_a_homomorphism((p, q, pt): (Raw, Raw, Vec<Rational>)) -> Outcome {
    let r = ring(3, OrderKind::DegRevLex);
    let (p, q) = (build(&r, &p), build(&r, &q));
    prop_assert_eq!(add(&p, &q).evaluate_at(&pt), p.evaluate_at(&pt) + q.evaluate_at(&pt));
    prop_assert_eq!(mul(&p, &q).evaluate_at(&pt), p.evaluate_at(&pt) * q.evaluate_at(&pt));
    Ok(())
}

pub fn print_parse_round_trip((kind, p, c): (OrderKind, Raw, Rational)) -> Outcome {
    let r = ring(3, kind);
    let p = build(&r, &p).scale(&c);
    prop_assert_eq!(parse_polynomial(&p.to_string(), &r).unwrap(), p);
    Ok(())
}

pub fn orders_are_admissible((kind, a, b, c): (OrderKind, Vec<u32>, Vec<u32>, Vec<u32>)) -> Outcome {
    use std::cmp::Ordering::*;
    let o = MonomialOrder::new(kind);
    let (a, b, c) = (Monomial::new(a), Monomial::new(b), Monomial::new(c));
    prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
    prop_assert_eq!(o.cmp(&a, &b) == Equal, a == b);
    prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), o.cmp(&a, &b));
    prop_assert_ne!(o.cmp(&Monomial::one(3), &c), Greater);
    if o.cmp(&a, &b) == Less && o.cmp(&b, &c) == Less {
        prop_assert_eq!(o.cmp(&a, &c), Less);
    }
    Ok(())
}

pub fn s_polynomials_reduce_to_zero((kind, gs): (OrderKind, Vec<Raw>)) -> Outcome {
    let r = ring(3, kind);
    let gs: Vec<Polynomial> = gs.iter().map(|g| build(&r, g)).filter(|g| !g.is_zero()).collect();
    let Some(gb) = small_gb(&gs, &r) else { return Err(TestCaseError::reject("cap")) };
    for i in 0..gb.len() {
        for j in i + 1..gb.len() {
            prop_assert!(normal_form(&s_polynomial(&gb[i], &gb[j]), &gb).is_zero());
        }
    }
    for g in &gs {
        prop_assert!(normal_form(g, &gb).is_zero());
    }
    Ok(())
}

pub fn membership_matches_linear_algebra(
    (kind, nvars, gs, hs, noise): (OrderKind, usize, Vec<Raw>, Vec<Raw>, Raw),
) -> Outcome {
    let r = ring(nvars, kind);
    let cut = |raw: &[(Vec<u32>, i64)]| -> Raw { raw.iter().map(|(e, c)| (e[..nvars].to_vec(), *c)).collect() };
    let gs: Vec<Polynomial> = gs.iter().map(|g| build(&r, &cut(g))).filter(|g| !g.is_zero()).collect();
    if gs.is_empty() {
        return Err(TestCaseError::reject("no generators"));
    }
    let ideal = Ideal::new(&r, gs.clone()).unwrap();
    let combo = gs.iter().zip(&hs).fold(Polynomial::zero(&r), |acc, (g, h)| add(&acc, &mul(g, &build(&r, &cut(h)))));
    prop_assert!(ideal.member(&combo).unwrap());
    prop_assert!(truncated_member(&combo, &gs, 1));
    let perturbed = add(&combo, &build(&r, &cut(&noise)));
    let gb_says = ideal.member(&perturbed).unwrap();
    // A degree-2 certificate proves membership; its absence does not
    // disprove it, so only that direction is forced.
    if truncated_member(&perturbed, &gs, 2) {
        prop_assert!(gb_says);
    }
    prop_assert_eq!(gb_says, ideal.reduce(&perturbed).unwrap().is_zero());
    Ok(())
}

type TemplateCase = (OrderKind, Vec<(Vec<u32>, Vec<i64>)>, Vec<Raw>, Vec<Raw>, Vec<Rational>);

pub fn template_commutes((kind, raw, drifts, gs, v): TemplateCase) -> Outcome {
    let r = ring(3, kind);
    let params: Vec<String> = (1..=3).map(|i| format!("a{i}")).collect();
    let terms = raw.iter().map(|(e, cs)| {
        (Monomial::new(e.clone()), LinearForm::from_pairs(cs.iter().enumerate().map(|(i, c)| (i as u32, rat(*c, 1)))))
    });
    let t = Template::new(&r, params.clone(), terms).unwrap();
    let f = VectorField::new(&r, drifts.iter().map(|d| build(&r, d)).collect()).unwrap();
    prop_assert_eq!(t.lie(&f).unwrap().instantiate(&v), f.lie_derivative(&t.instantiate(&v)).unwrap());

    let values: HashMap<String, Rational> = params.iter().cloned().zip(v.iter().cloned()).collect();
    prop_assert_eq!(t.to_polynomial().unwrap().substitute_params(&values).unwrap(), t.instantiate(&v));

    let gs: Vec<Polynomial> = gs.iter().map(|g| nonzero(&r, g)).collect();
    let Some(gb) = small_gb(&gs, &r) else { return Err(TestCaseError::reject("cap")) };
    let rem = t.remainder(&gb).unwrap();
    prop_assert_eq!(rem.instantiate(&v), normal_form(&t.instantiate(&v), &gb));
    prop_assert_eq!(&rem, &t.remainder_via_parameter_ring(&gb).unwrap());
    Ok(())
}

pub fn refinement_is_monotone((n, first, second): (usize, Vec<Vec<i64>>, Vec<Vec<i64>>)) -> Outcome {
    let forms = |raw: &[Vec<i64>]| -> Vec<LinearForm> {
        raw.iter().map(|row| LinearForm::from_dense(&row[..n].iter().map(|c| rat(*c, 1)).collect::<Vec<_>>())).collect()
    };
    let (a, b) = (forms(&first), forms(&second));
    let s0 = Subspace::full(n);
    let s1 = s0.refine(&a);
    let s2 = s1.refine(&b);
    prop_assert!(s1.is_subspace_of(&s0));
    prop_assert!(s2.is_subspace_of(&s1));
    prop_assert_eq!(&s1.refine(&a), &s1);
    prop_assert_eq!(&s2, &Subspace::solve_homogeneous(&[a.clone(), b.clone()].concat(), n));
    for basis in s2.basis() {
        prop_assert!(a.iter().chain(&b).all(|l| l.evaluate(basis).is_zero()));
    }
    prop_assert_eq!(&Subspace::span(n, s2.basis()), &s2);
    prop_assert_eq!(&Subspace::solve_homogeneous(&s2.constraints(), n), &s2);
    Ok(())
}

pub fn numeric_derivative_matches_lie((drifts, p, x0): (Vec<Raw>, Raw, Vec<f64>)) -> Outcome {
    let r = ring(2, OrderKind::DegRevLex);
    let f = VectorField::new(&r, drifts.iter().map(|d| build(&r, d)).collect()).unwrap();
    let p = build(&r, &p);
    let lp = CompiledPolynomial::new(&f.lie_derivative(&p).unwrap());
    let (exact, scale) = (lp.eval(&x0), 1.0 + lp.magnitude(&x0));
    let est = time_derivative(&f, &p, &x0, 1e-2);
    prop_assert!((est - exact).abs() <= 1e-4 * scale, "estimate {} exact {}", est, exact);
    Ok(())
}

pub fn reduced_basis_is_canonical((kind, gs, scales, shift): (OrderKind, Vec<Raw>, Vec<i64>, usize)) -> Outcome {
    let r = ring(3, kind);
    let gs: Vec<Polynomial> = gs.iter().map(|g| build(&r, g)).filter(|g| !g.is_zero()).collect();
    let Some(reference) = small_gb(&gs, &r) else { return Err(TestCaseError::reject("cap")) };
    let mut permuted: Vec<Polynomial> = gs.iter().zip(&scales).map(|(g, s)| g.scale(&rat(*s, 1))).collect();
    let k = permuted.len().max(1);
    permuted.rotate_left(shift % k);
    if shift & 1 == 1 {
        permuted.reverse();
    }
    let Some(other) = small_gb(&permuted, &r) else { return Err(TestCaseError::reject("cap")) };
    prop_assert_eq!(reference, other);
    Ok(())
}

/// A named law with the number of random instances it must pass.
pub struct Suite {
    pub name: &'static str,
    pub cases: u32,
    run: fn(&mut TestRunner) -> Result<(), String>,
}

impl Suite {
    /// Runs the suite with a fixed seed, so results are reproducible.
    pub fn run_deterministic(&self) -> Result<(), String> {
        let config = ProptestConfig { cases: self.cases, failure_persistence: None, ..ProptestConfig::default() };
        let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
        (self.run)(&mut runner)
    }

    pub fn run_random(&self) -> Result<(), String> {
        let config = ProptestConfig { cases: self.cases, failure_persistence: None, ..ProptestConfig::default() };
        (self.run)(&mut TestRunner::new(config))
    }
}

fn drive<S: Strategy>(
    runner: &mut TestRunner,
    strategy: S,
    law: fn(S::Value) -> Outcome,
) -> Result<(), String> {
    runner.run(&strategy, law).map_err(|e| e.to_string())
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "division reassembly",
            cases: 500,
            run: |r| {
                let s = (order_kind(), raw_terms(3, 4, 8), prop::collection::vec(raw_terms(3, 2, 4), 1..=3));
                drive(r, s, division_reassembles)
            },
        },
        Suite {
            name: "S-polynomials reduce to zero",
            cases: 100,
            run: |r| drive(r, (order_kind(), prop::collection::vec(raw_terms(3, 2, 3), 1..=3)), s_polynomials_reduce_to_zero),
        },
        Suite {
            name: "membership vs truncated linear algebra",
            cases: 100,
            run: |r| {
                let s = (
                    order_kind(),
                    1usize..=3,
                    prop::collection::vec(raw_terms(3, 2, 3), 1..=2),
                    prop::collection::vec(raw_terms(3, 1, 3), 2),
                    raw_terms(3, 2, 2),
                );
                drive(r, s, membership_matches_linear_algebra)
            },
        },
        Suite {
            name: "reduced basis canonical under permutation",
            cases: 50,
            run: |r| {
                let s = (
                    order_kind(),
                    prop::collection::vec(raw_terms(3, 2, 3), 1..=4),
                    prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 4),
                    any::<usize>(),
                );
                drive(r, s, reduced_basis_is_canonical)
            },
        },
        Suite {
            name: "Lie sum and product laws",
            cases: 500,
            run: |r| {
                let s = (
                    order_kind(),
                    prop::collection::vec(raw_terms(3, 2, 3), 3),
                    raw_terms(3, 3, 5),
                    raw_terms(3, 3, 5),
                    small_rational(),
                );
                drive(r, s, lie_is_a_derivation)
            },
        },
        Suite {
            name: "template commutation",
            cases: 100,
            run: |r| {
                let s = (
                    order_kind(),
                    prop::collection::vec((prop::collection::vec(0u32..=2, 3), prop::collection::vec(-3i64..=3, 3)), 1..6),
                    prop::collection::vec(raw_terms(3, 2, 3), 3),
                    prop::collection::vec(raw_terms(3, 2, 3), 1..=2),
                    prop::collection::vec(small_rational(), 3),
                );
                drive(r, s, template_commutes)
            },
        },
        Suite {
            name: "evaluation homomorphism",
            cases: 200,
            run: |r| {
                let s = (raw_terms(3, 3, 5), raw_terms(3, 3, 5), prop::collection::vec(small_rational(), 3));
                drive(r, s, evaluation_is_a_homomorphism)
            },
        },
        Suite {
            name: "print then parse",
            cases: 200,
            run: |r| drive(r, (order_kind(), raw_terms(3, 4, 6), small_rational()), print_parse_round_trip),
        },
        Suite {
            name: "monomial orders admissible",
            cases: 300,
            run: |r| {
                let e = || prop::collection::vec(0u32..4, 3);
                drive(r, (order_kind(), e(), e(), e()), orders_are_admissible)
            },
        },
        Suite {
            name: "subspace refinement monotone",
            cases: 100,
            run: |r| {
                let rows = || prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 0..4);
                drive(r, (1usize..6, rows(), rows()), refinement_is_monotone)
            },
        },
        Suite {
            name: "RK4 derivative matches Lie",
            cases: 100,
            run: |r| {
                let s = (
                    prop::collection::vec(raw_terms(2, 2, 3), 2),
                    raw_terms(2, 3, 4),
                    prop::collection::vec(-1.0f64..1.0, 2),
                );
                drive(r, s, numeric_derivative_matches_lie)
            },
        },
    ]
}

pub fn suite(name: &str) -> Suite {
    suites().into_iter().find(|s| s.name == name).unwrap_or_else(|| panic!("no suite `{name}`"))
}
