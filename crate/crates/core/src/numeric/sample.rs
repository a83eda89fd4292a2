use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::groebner::{buchberger, reduce_basis, GbOptions};
use crate::poly::{rat, MonomialOrder, Polynomial, Rational, Ring};

/// Rational points on `Var(gens)`, found by back-substitution through a
/// lexicographic Gröbner basis.
///
/// Variables are assigned from the smallest to the largest. A variable that
/// no basis element leads gets a small random rational; otherwise the
/// leading elements, after substituting the values chosen so far, must share
/// a root among the linear solution and a few small candidates. Attempts that
/// dead-end are retried with fresh random choices. Every returned point
/// satisfies all generators exactly; fewer than `count` points may come back.
pub fn sample_points(ring: &Arc<Ring>, gens: &[Polynomial], count: usize, seed: u64) -> Result<Vec<Vec<Rational>>> {
    let lex = ring.with_order(MonomialOrder::lex())?;
    let lex_gens: Vec<Polynomial> = gens.iter().map(|g| g.to_ring(&lex)).collect::<Result<_>>()?;
    let gb = reduce_basis(&buchberger(&lex_gens, &lex, GbOptions::default())?);
    if gb.first().is_some_and(|g| g.is_constant()) {
        return Ok(Vec::new());
    }
    let n = ring.len();
    let mut by_var: Vec<Vec<&Polynomial>> = vec![Vec::new(); n];
    for g in &gb {
        let lead = g.leading_monomial().expect("nonzero").exponents().iter().position(|&e| e > 0);
        if let Some(k) = lead {
            by_var[k].push(g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let attempts = 50 * count.max(1);
    for _ in 0..attempts {
        if out.len() >= count {
            break;
        }
        let Some(point) = attempt(n, &by_var, &mut rng) else { continue };
        if gens.iter().all(|g| g.evaluate_at(&point).is_zero()) && !out.contains(&point) {
            out.push(point);
        }
    }
    Ok(out)
}

fn attempt(n: usize, by_var: &[Vec<&Polynomial>], rng: &mut ChaCha8Rng) -> Option<Vec<Rational>> {
    let mut values: Vec<Option<Rational>> = vec![None; n];
    for k in (0..n).rev() {
        let polys: Vec<Vec<Rational>> = by_var[k]
            .iter()
            .map(|g| univariate(g, k, &values))
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .collect();
        let value = if polys.is_empty() {
            random_small(rng)
        } else {
            let mut candidates: Vec<Rational> = Vec::new();
            if let Some(lin) = polys.iter().find(|c| degree(c) == 1) {
                candidates.push(-lin[0].clone() / lin[1].clone());
            }
            for (a, b) in [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)] {
                candidates.push(rat(a, b));
            }
            candidates.extend(values.iter().flatten().cloned());
            candidates.into_iter().find(|c| polys.iter().all(|p| horner(p, c).is_zero()))?
        };
        values[k] = Some(value);
    }
    values.into_iter().collect()
}

fn random_small(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.random_range(-4..=4);
    let den: i64 = if rng.random_bool(0.5) { 1 } else { 2 };
    rat(num, den)
}

/// Coefficients (constant first) of `g` as a polynomial in variable `k`,
/// with every other variable replaced by its assigned value.
fn univariate(g: &Polynomial, k: usize, values: &[Option<Rational>]) -> Vec<Rational> {
    let mut coeffs: Vec<Rational> = Vec::new();
    for (m, c) in g.terms() {
        let mut v = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            if i == k || e == 0 {
                continue;
            }
            let x = values[i].as_ref().expect("smaller variables are assigned first");
            v *= num_traits::pow(x.clone(), e as usize);
        }
        let d = m.exponents()[k] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Rational::zero());
        }
        coeffs[d] += v;
    }
    coeffs
}

fn degree(c: &[Rational]) -> usize {
    c.iter().rposition(|x| !x.is_zero()).unwrap_or(0)
}

fn horner(c: &[Rational], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
}
