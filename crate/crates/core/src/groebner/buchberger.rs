//! Buchberger's algorithm over ℚ with fraction-free (content-free integer)
//! reduction, the Gebauer–Möller installation of Buchberger's coprime and
//! chain criteria, and normal pair selection.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Resource, Result};
use crate::groebner::division::{mask, normal_form};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational, Ring};

/// Resource caps for Gröbner computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbOptions {
    /// Maximum number of S-pairs reduced in one Buchberger run.
    pub pair_budget: usize,
    /// Maximum total degree of any basis element.
    pub degree_cap: u32,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { pair_budget: 1_000_000, degree_cap: 64 }
    }
}

struct Element {
    poly: Polynomial,
    lm: Monomial,
    mask: u64,
    active: bool,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine {
    ring: Arc<Ring>,
    order: MonomialOrder,
    basis: Vec<Element>,
    pairs: Vec<Pair>,
    options: GbOptions,
    reduced_pairs: usize,
}

impl Engine {
    fn new(ring: &Arc<Ring>, options: GbOptions) -> Self {
        Engine {
            ring: ring.clone(),
            order: *ring.order(),
            basis: Vec::new(),
            pairs: Vec::new(),
            options,
            reduced_pairs: 0,
        }
    }

    /// Seeds the engine with a set already known to be a Gröbner basis: no
    /// pairs among these need processing.
    fn seed(&mut self, gb: &[Polynomial]) {
        for g in gb.iter().filter(|g| !g.is_zero()) {
            let poly = g.primitive();
            let lm = poly.leading_monomial().unwrap().clone();
            let divisible = self.basis.iter().any(|e| e.active && e.lm.divides(&lm));
            self.basis.push(Element { mask: mask(&lm), lm, poly, active: !divisible });
        }
    }

    /// Fraction-free full reduction by the active basis elements.
    fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut terms = p.terms().to_vec();
        let mut k = 0;
        let mut steps = 0usize;
        while k < terms.len() {
            let t = &terms[k].0;
            let tm = mask(t);
            let hit = self.basis.iter().find_map(|e| {
                if !e.active || e.mask & !tm != 0 {
                    return None;
                }
                e.lm.quotient_of(t).map(|q| (e, q))
            });
            let Some((e, q)) = hit else {
                k += 1;
                continue;
            };
            let ct = terms[k].1.numer().clone();
            let lc = e.poly.leading_coefficient().unwrap().numer().clone();
            let g = ct.gcd(&lc);
            let a = Rational::from_integer(&lc / &g);
            let b = Rational::from_integer(&ct / &g);
            let head = Polynomial::from_sorted(&self.ring, std::mem::take(&mut terms));
            let scaled = if a.is_one() { head } else { head.scale(&a) };
            terms = scaled.add_scaled_unchecked(&-b, Some(&q), &e.poly).into_terms();
            steps += 1;
            if steps.is_multiple_of(8) {
                terms = content_free(&self.ring, terms);
            }
        }
        Polynomial::from_sorted(&self.ring, terms).primitive()
    }

    fn s_polynomial(&self, pair: &Pair) -> Polynomial {
        let (f, g) = (&self.basis[pair.i].poly, &self.basis[pair.j].poly);
        let mf = self.basis[pair.i].lm.quotient_of(&pair.lcm).unwrap();
        let mg = self.basis[pair.j].lm.quotient_of(&pair.lcm).unwrap();
        let cf = f.leading_coefficient().unwrap().numer().clone();
        let cg = g.leading_coefficient().unwrap().numer().clone();
        let d = cf.gcd(&cg);
        let a = Rational::from_integer(&cg / &d);
        let b = Rational::from_integer(&cf / &d);
        let left = f.mul_monomial(&mf, &a);
        left.add_scaled_unchecked(&-b, Some(&mg), g)
    }

    /// Gebauer–Möller update for a new element `h` (already reduced,
    /// primitive, nonzero).
    fn insert(&mut self, h: Polynomial) -> Result<()> {
        let deg = h.total_degree().unwrap_or(0);
        if deg > self.options.degree_cap {
            return Err(Error::ResourceCap { resource: Resource::DegreeCap, limit: self.options.degree_cap as usize });
        }
        let lm_h = h.leading_monomial().unwrap().clone();
        let hi = self.basis.len();

        let mut candidates: Vec<Pair> = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, e)| e.active)
            .map(|(i, e)| Pair { i, j: hi, lcm: e.lm.lcm(&lm_h) })
            .collect();

        // Chain criterion among the new pairs, keeping coprime ones for now.
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = candidates.pop() {
            let coprime = self.basis[p.i].lm.gcd_is_one(&lm_h);
            let dominated = candidates.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            }
        }
        // Coprime criterion.
        kept.retain(|p| !self.basis[p.i].lm.gcd_is_one(&lm_h));

        // Chain criterion on old pairs.
        let basis = &self.basis;
        self.pairs.retain(|p| {
            if !lm_h.divides(&p.lcm) {
                return true;
            }
            let l1 = basis[p.i].lm.lcm(&lm_h);
            let l2 = basis[p.j].lm.lcm(&lm_h);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(kept);

        for e in self.basis.iter_mut().filter(|e| e.active) {
            if lm_h.divides(&e.lm) {
                e.active = false;
            }
        }
        self.basis.push(Element { mask: mask(&lm_h), lm: lm_h, poly: h, active: true });
        Ok(())
    }

    fn add_generator(&mut self, p: &Polynomial) -> Result<()> {
        let r = self.reduce(&p.primitive());
        if !r.is_zero() {
            self.insert(r)?;
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        while !self.pairs.is_empty() {
            let order = self.order;
            let (best, _) = self
                .pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    order.cmp(&a.lcm, &b.lcm).then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
                })
                .unwrap();
            let pair = self.pairs.swap_remove(best);
            self.reduced_pairs += 1;
            if self.reduced_pairs > self.options.pair_budget {
                return Err(Error::ResourceCap { resource: Resource::PairBudget, limit: self.options.pair_budget });
            }
            let s = self.s_polynomial(&pair);
            if s.is_zero() {
                continue;
            }
            let r = self.reduce(&s);
            if !r.is_zero() {
                self.insert(r)?;
            }
        }
        Ok(())
    }

    fn into_basis(self) -> Vec<Polynomial> {
        self.basis.into_iter().filter(|e| e.active).map(|e| e.poly.monic()).collect()
    }
}

fn content_free(ring: &Arc<Ring>, terms: Vec<(Monomial, Rational)>) -> Vec<(Monomial, Rational)> {
    Polynomial::from_sorted(ring, terms).primitive().into_terms()
}

/// A Gröbner basis of ⟨gens⟩ (minimal, monic, not yet inter-reduced).
pub fn buchberger(gens: &[Polynomial], ring: &Arc<Ring>, options: GbOptions) -> Result<Vec<Polynomial>> {
    extend_basis(&[], gens, ring, options)
}

/// A Gröbner basis of ⟨gb ∪ more⟩, where `gb` is already a Gröbner basis; only
/// pairs involving the new elements are processed.
pub fn extend_basis(gb: &[Polynomial], more: &[Polynomial], ring: &Arc<Ring>, options: GbOptions) -> Result<Vec<Polynomial>> {
    for p in gb.iter().chain(more) {
        if p.ring() != ring {
            return Err(Error::UniverseMismatch);
        }
    }
    let mut engine = Engine::new(ring, options);
    engine.seed(gb);
    let order = *ring.order();
    let mut gens: Vec<&Polynomial> = more.iter().filter(|p| !p.is_zero()).collect();
    gens.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for g in gens {
        engine.add_generator(g)?;
        engine.run()?;
    }
    Ok(engine.into_basis())
}

/// Reduced Gröbner basis from any Gröbner basis: monic, inter-reduced,
/// sorted by leading monomial descending. Unique for the ideal and order.
pub fn reduce_basis(gb: &[Polynomial]) -> Vec<Polynomial> {
    let Some(first) = gb.iter().find(|g| !g.is_zero()) else {
        return Vec::new();
    };
    let order = *first.ring().order();
    let mut monic: Vec<Polynomial> = gb.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    monic.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in monic {
        let lm = g.leading_monomial().unwrap();
        if !minimal.iter().any(|h| h.leading_monomial().unwrap().divides(lm)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let g = &minimal[i];
        let (lm, lc) = g.leading_term().unwrap();
        let head = Polynomial::term(g.ring(), lm.clone(), lc.clone());
        let tail = g - &head;
        let r = &head + &normal_form(&tail, &others);
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    reduced
}

/// S-polynomial of two nonzero polynomials over ℚ (monic scaling).
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_monomial(&fm.quotient_of(&l).unwrap(), &fc.recip());
    let b = g.mul_monomial(&gm.quotient_of(&l).unwrap(), &gc.recip());
    &a - &b
}
