use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational};

/// Outcome of multivariate division of `p` by an ordered list of divisors:
/// `p = Σ quotients[i] · divisors[i] + remainder`.
#[derive(Debug, Clone)]
pub struct DivisionResult {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Multivariate division with remainder. Divisors are tried in list order at
/// every step; a leading term that no divisor's leading term divides moves to
/// the remainder.
pub fn divide(p: &Polynomial, divisors: &[Polynomial]) -> Result<DivisionResult> {
    for g in divisors {
        if g.is_zero() {
            return Err(Error::InvalidInput("division by the zero polynomial".into()));
        }
        if !std::sync::Arc::ptr_eq(g.ring(), p.ring()) && g.ring() != p.ring() {
            return Err(Error::UniverseMismatch);
        }
    }
    let ring = p.ring().clone();
    let mut quotients: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); divisors.len()];
    let mut remainder = Vec::new();
    let mut work = p.clone();
    while let Some((lm, lc)) = work.leading_term() {
        let (lm, lc) = (lm.clone(), lc.clone());
        let hit = divisors.iter().enumerate().find_map(|(i, g)| {
            let (gm, gc) = g.leading_term().expect("nonzero divisor");
            gm.quotient_of(&lm).map(|q| (i, q, &lc / gc))
        });
        match hit {
            Some((i, q, c)) => {
                work = work.add_scaled_unchecked(&-c.clone(), Some(&q), &divisors[i]);
                // Quotient terms arrive in strictly decreasing order per divisor.
                quotients[i].push((q, c));
            }
            None => {
                remainder.push((lm, lc));
                let rest = work.terms()[1..].to_vec();
                work = Polynomial::from_sorted(&ring, rest);
            }
        }
    }
    Ok(DivisionResult {
        quotients: quotients.into_iter().map(|t| Polynomial::from_sorted(&ring, t)).collect(),
        remainder: Polynomial::from_sorted(&ring, remainder),
    })
}

/// Remainder of full reduction of `p` by `divisors` (fastest when the
/// divisors are monic, e.g. a reduced Gröbner basis).
pub fn normal_form(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let ring = p.ring().clone();
    let masks: Vec<u64> = divisors.iter().map(|g| mask(g.leading_monomial().expect("nonzero"))).collect();
    let mut terms = p.terms().to_vec();
    let mut k = 0;
    while k < terms.len() {
        let t = terms[k].0.clone();
        let tm = mask(&t);
        let hit = divisors.iter().zip(&masks).find_map(|(g, &gm)| {
            if gm & !tm != 0 {
                return None;
            }
            g.leading_monomial().unwrap().quotient_of(&t).map(|q| (g, q))
        });
        match hit {
            Some((g, q)) => {
                let c = &terms[k].1 / g.leading_coefficient().unwrap();
                let tail = Polynomial::from_sorted(&ring, terms.split_off(k));
                let reduced = tail.add_scaled_unchecked(&-c, Some(&q), g);
                terms.extend(reduced.into_terms());
            }
            None => k += 1,
        }
    }
    debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
    Polynomial::from_sorted(&ring, terms)
}

pub(crate) fn mask(m: &Monomial) -> u64 {
    let mut out = 0u64;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            out |= 1 << (i % 64);
        }
    }
    out
}
