use num_traits::Zero;

use crate::algorithms::{post, ChainOptions, PostResult, Precondition};
use crate::dynamics::{Template, VectorField};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::linalg::LinearForm;
use crate::numeric::sample_points;
use crate::poly::{Polynomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A point of `ψ` from which the trajectory leaves `φ`: the `order`-th Lie
/// derivative of postcondition polynomial `polynomial` is nonzero there.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: Vec<Rational>,
    pub polynomial: usize,
    pub order: usize,
}

#[derive(Debug, Clone)]
pub struct SafetyResult {
    pub verdict: Verdict,
    pub post: PostResult,
    pub witness: Option<Witness>,
}

/// Decides `ψ ⊨ [F] Var(Q)` by running POST on the template `Σ aᵢ·qᵢ` and
/// asking whether every valuation survives.
pub fn check_safety(
    psi: &Precondition,
    q: &[Polynomial],
    field: &VectorField,
    options: ChainOptions,
) -> Result<SafetyResult> {
    let ring = field.ring();
    if q.iter().any(|p| p.ring() != ring) {
        return Err(Error::UniverseMismatch);
    }
    let params: Vec<String> = (1..=q.len()).map(|i| format!("a{i}")).collect();
    let terms = q
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| (m.clone(), LinearForm::var(i as u32).scale(c))));
    let template = Template::new(ring, params, terms)?;
    let post = post(psi, &template, field, options)?;
    let verdict = if post.v.is_full() {
        Verdict::Holds
    } else if post.mode_exact {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    let witness = if verdict == Verdict::Fails { find_witness(psi, q, field, post.iterations + 1)? } else { None };
    Ok(SafetyResult { verdict, post, witness })
}

fn find_witness(psi: &Precondition, q: &[Polynomial], field: &VectorField, depth: usize) -> Result<Option<Witness>> {
    let points = match psi.point_coordinates() {
        Some(p) => vec![p],
        None => sample_points(psi.ring(), psi.generators(), 8, 0)?,
    };
    for point in points {
        for (k, p) in q.iter().enumerate() {
            let mut d = p.clone();
            for order in 0..=depth {
                if !d.evaluate_at(&point).is_zero() {
                    return Ok(Some(Witness { point, polynomial: k, order }));
                }
                d = field.lie_derivative(&d)?;
            }
        }
    }
    Ok(None)
}

/// Whether `L_F(J) ⊆ J`, tested on the reduced Gröbner basis.
pub fn check_invariant_ideal(j: &Ideal, field: &VectorField) -> Result<bool> {
    if j.ring() != field.ring() {
        return Err(Error::UniverseMismatch);
    }
    for g in j.groebner_basis()? {
        if !j.member(&field.lie_derivative(g)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct WeakestPrecondition {
    /// Defines `φ = Var(π[V])`.
    pub result_template: Template,
    /// `Var(J)` is the weakest precondition of `φ`, equivalently the largest
    /// algebraic invariant inside `φ`.
    pub ideal: Ideal,
    pub post: PostResult,
}

/// Runs POST from an exact precondition and reads `J` as the weakest
/// precondition of the postcondition it discovers.
pub fn weakest_precondition_via_post(
    psi0: &Precondition,
    template: &Template,
    field: &VectorField,
    options: ChainOptions,
) -> Result<WeakestPrecondition> {
    if !psi0.is_exact() {
        return Err(Error::ModeViolation(
            "the weakest-precondition reading of POST needs an exact precondition ideal".into(),
        ));
    }
    let post = post(psi0, template, field, options)?;
    Ok(WeakestPrecondition { result_template: post.result_template.clone(), ideal: post.j.clone(), post })
}
