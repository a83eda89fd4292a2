use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dynamics::VectorField;
use crate::error::{Error, Result};
use crate::groebner::divide;
use crate::linalg::{LinearForm, Subspace};
use crate::poly::{parse_polynomial, Monomial, MonomialOrder, Polynomial, Rational, Ring};

/// A polynomial over the state variables whose coefficients are linear forms
/// in the parameters `params[0..n]`, i.e. an element of `Lin(a)[x]`.
///
/// Terms are sorted descending in the state ring's order and carry nonzero
/// forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    ring: Arc<Ring>,
    params: Vec<String>,
    terms: Vec<(Monomial, LinearForm)>,
}

impl Template {
    pub fn new(
        ring: &Arc<Ring>,
        params: Vec<String>,
        terms: impl IntoIterator<Item = (Monomial, LinearForm)>,
    ) -> Result<Self> {
        if ring.parameter_count() > 0 {
            return Err(Error::InvalidInput("template ring must hold state variables only".into()));
        }
        let mut seen = HashSet::new();
        for p in &params {
            if ring.index_of(p).is_some() || !seen.insert(p.as_str()) {
                return Err(Error::DuplicateSymbol(p.clone()));
            }
        }
        let n = params.len() as u32;
        let mut acc: HashMap<Monomial, LinearForm> = HashMap::new();
        for (m, l) in terms {
            if m.nvars() != ring.len() {
                return Err(Error::UniverseMismatch);
            }
            if l.max_index().is_some_and(|i| i >= n) {
                return Err(Error::InvalidInput("linear form refers to an unknown parameter".into()));
            }
            acc.entry(m).or_default().add_scaled_assign(&Rational::one(), &l);
        }
        Ok(Template::from_acc(ring, params, acc))
    }

    fn from_acc(ring: &Arc<Ring>, params: Vec<String>, acc: HashMap<Monomial, LinearForm>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, l)| !l.is_zero()).collect();
        let order = *ring.order();
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Template { ring: ring.clone(), params, terms }
    }

    pub fn zero(ring: &Arc<Ring>, params: Vec<String>) -> Result<Self> {
        Template::new(ring, params, [])
    }

    /// The complete template `Σ_α a_α·α` over all monomials of degree ≤ k in
    /// `vars` (ring indices). Parameters `a1, a2, …` are assigned by
    /// ascending degree, and within a degree by descending exponent vector.
    pub fn complete(ring: &Arc<Ring>, vars: &[usize], k: u32) -> Result<Self> {
        let atoms: Vec<Monomial> = vars.iter().map(|&i| Monomial::var(ring.len(), i)).collect();
        Template::complete_over_atoms(ring, &atoms, k)
    }

    /// Like [`Template::complete`], with arbitrary monomials as the atoms:
    /// one parameter per distinct product of at most `k` atoms.
    pub fn complete_over_atoms(ring: &Arc<Ring>, atoms: &[Monomial], k: u32) -> Result<Self> {
        let mut products: HashSet<Monomial> = HashSet::new();
        fn rec(atoms: &[Monomial], start: usize, left: u32, cur: &Monomial, out: &mut HashSet<Monomial>) {
            out.insert(cur.clone());
            if left == 0 {
                return;
            }
            for i in start..atoms.len() {
                rec(atoms, i, left - 1, &cur.mul(&atoms[i]), out);
            }
        }
        rec(atoms, 0, k, &Monomial::one(ring.len()), &mut products);
        let mut monos: Vec<Monomial> = products.into_iter().collect();
        monos.sort_unstable_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
        let params = (1..=monos.len()).map(|i| format!("a{i}")).collect();
        let terms = monos.into_iter().enumerate().map(|(i, m)| (m, LinearForm::var(i as u32)));
        Template::new(ring, params, terms)
    }

    /// Reads a template from a polynomial over a ring with parameters. Every
    /// term must have parameter degree exactly one.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let ring = p.ring();
        let state = ring.without_parameters()?;
        let param_idx: Vec<usize> = (0..ring.len()).filter(|&i| ring.is_parameter(i)).collect();
        let params: Vec<String> = param_idx.iter().map(|&i| ring.symbol(i).name.clone()).collect();
        let state_idx: Vec<usize> = (0..ring.len()).filter(|&i| !ring.is_parameter(i)).collect();
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let e = m.exponents();
            let pdeg: u32 = param_idx.iter().map(|&i| e[i]).sum();
            if pdeg != 1 {
                return Err(Error::NonLinearTemplate(format!("term of parameter degree {pdeg} in `{p}`")));
            }
            let k = param_idx.iter().position(|&i| e[i] == 1).expect("one parameter");
            let sm = Monomial::new(state_idx.iter().map(|&i| e[i]).collect());
            terms.push((sm, LinearForm::from_pairs([(k as u32, c.clone())])));
        }
        Template::new(&state, params, terms)
    }

    /// Parses an explicit template such as `a1*x + a2*y^2 + a3` with the
    /// given parameter names over `ring`'s state variables.
    pub fn parse(text: &str, ring: &Arc<Ring>, params: &[String]) -> Result<Self> {
        let full = ring.with_parameters(params)?;
        let p = parse_polynomial(text, &full)?;
        let t = Template::from_polynomial(&p)?;
        Ok(Template { ring: ring.clone(), params: params.to_vec(), terms: t.terms })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn terms(&self) -> &[(Monomial, LinearForm)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The template as a polynomial in `ℚ[a, x]` under the block-elimination
    /// order with the parameters first.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        let full = self.ring.with_parameters(&self.params)?;
        let np = self.params.len();
        let mut terms = Vec::new();
        for (m, l) in &self.terms {
            for (i, c) in l.coefficients() {
                let mut e = vec![0u32; full.len()];
                e[*i as usize] = 1;
                e[np..].copy_from_slice(m.exponents());
                terms.push((Monomial::new(e), c.clone()));
            }
        }
        Ok(Polynomial::from_terms(&full, terms))
    }

    /// `π[v]`.
    pub fn instantiate(&self, v: &[Rational]) -> Polynomial {
        assert_eq!(v.len(), self.params.len(), "valuation length must match the parameter count");
        Polynomial::from_terms(&self.ring, self.terms.iter().map(|(m, l)| (m.clone(), l.evaluate(v))))
    }

    /// `π[e_k]`: the polynomial multiplying parameter `k`.
    pub fn unit_instance(&self, k: usize) -> Polynomial {
        let k = k as u32;
        let terms: Vec<(Monomial, Rational)> = self
            .terms
            .iter()
            .filter_map(|(m, l)| {
                let c = l.coefficient(k);
                (!c.is_zero()).then(|| (m.clone(), c))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// `π[e_1], …, π[e_n]`.
    pub fn unit_instances(&self) -> Vec<Polynomial> {
        let mut per: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); self.params.len()];
        for (m, l) in &self.terms {
            for (i, c) in l.coefficients() {
                per[*i as usize].push((m.clone(), c.clone()));
            }
        }
        per.into_iter().map(|t| Polynomial::from_terms(&self.ring, t)).collect()
    }

    /// The Lie derivative, treating linear forms as constants.
    pub fn lie(&self, field: &VectorField) -> Result<Template> {
        if field.ring() != &self.ring {
            return Err(Error::UniverseMismatch);
        }
        let mut acc: HashMap<Monomial, LinearForm> = HashMap::new();
        for (m, l) in &self.terms {
            for (i, f) in field.drifts().iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let Some((e, dm)) = m.derivative(i) else { continue };
                let k = Rational::from_integer(BigInt::from(e));
                for (fm, fc) in f.terms() {
                    acc.entry(dm.mul(fm)).or_default().add_scaled_assign(&(&k * fc), l);
                }
            }
        }
        Ok(Template::from_acc(&self.ring, self.params.clone(), acc))
    }

    /// Substitutes `aᵢ = Σⱼ bⱼ·rows[j][i]`, producing a template over the
    /// new parameters `names` (one per row).
    pub fn reparametrize(&self, rows: &[Vec<Rational>], names: Vec<String>) -> Result<Template> {
        if rows.len() != names.len() || rows.iter().any(|r| r.len() != self.params.len()) {
            return Err(Error::InvalidInput("reparametrization shape mismatch".into()));
        }
        let terms = self.terms.iter().map(|(m, l)| (m.clone(), l.compose(rows)));
        Template::new(&self.ring, names, terms)
    }

    /// `π mod G` for parameter-free divisors `G`, computed directly in
    /// `Lin(a)[x]`. This agrees with division in `ℚ[a, x]` under an order
    /// with every parameter above every state variable.
    pub fn remainder(&self, divisors: &[Polynomial]) -> Result<Template> {
        let order = *self.ring.order();
        let mut divs = Vec::with_capacity(divisors.len());
        for g in divisors {
            if g.ring() != &self.ring {
                return Err(Error::UniverseMismatch);
            }
            let Some((lm, lc)) = g.leading_term() else {
                return Err(Error::InvalidInput("division by the zero polynomial".into()));
            };
            let inv = -lc.recip();
            let tail: Vec<(Monomial, Rational)> = g.terms()[1..].iter().map(|(m, c)| (m.clone(), c * &inv)).collect();
            divs.push((lm.clone(), tail));
        }
        let mut acc: HashMap<Monomial, LinearForm> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for (m, l) in &self.terms {
            acc.insert(m.clone(), l.clone());
            heap.push(Key { m: m.clone(), order });
        }
        let mut rem: HashMap<Monomial, LinearForm> = HashMap::new();
        while let Some(Key { m, .. }) = heap.pop() {
            let Some(l) = acc.remove(&m) else { continue };
            if l.is_zero() {
                continue;
            }
            let hit = divs.iter().find_map(|(lm, tail)| lm.quotient_of(&m).map(|q| (q, tail)));
            match hit {
                Some((q, tail)) => {
                    for (tm, tc) in tail {
                        let target = q.mul(tm);
                        match acc.get_mut(&target) {
                            Some(existing) => existing.add_scaled_assign(tc, &l),
                            None => {
                                acc.insert(target.clone(), l.scale(tc));
                                heap.push(Key { m: target, order });
                            }
                        }
                    }
                }
                None => {
                    rem.insert(m, l);
                }
            }
        }
        Ok(Template::from_acc(&self.ring, self.params.clone(), rem))
    }

    /// Reference implementation of [`Template::remainder`]: divides the
    /// template's image in `ℚ[a, x]` and reads the remainder back, failing
    /// if linearity was lost.
    pub fn remainder_via_parameter_ring(&self, divisors: &[Polynomial]) -> Result<Template> {
        let p = self.to_polynomial()?;
        let full = p.ring().clone();
        let gs: Vec<Polynomial> = divisors.iter().map(|g| g.to_ring(&full)).collect::<Result<_>>()?;
        let r = divide(&p, &gs)?.remainder;
        if r.is_zero() {
            return Template::zero(&self.ring, self.params.clone());
        }
        let Template { ring, params, terms } = Template::from_polynomial(&r)?;
        Template::new(
            &self.ring,
            self.params.clone(),
            terms.into_iter().map(|(m, l)| (map_monomial(&m, &ring, &self.ring), remap_form(&l, &params, &self.params))),
        )
    }

    /// The coefficients of the template: `π[v] = 0` iff every form vanishes
    /// at `v`.
    pub fn zero_constraints(&self) -> Vec<LinearForm> {
        self.terms.iter().map(|(_, l)| l.clone()).collect()
    }

    /// `π′ = Σ bᵢ·π[Bᵢ]` for the canonical basis `B` of `V`, with fresh
    /// parameters `b1 … bd`.
    pub fn result_template(&self, v: &Subspace) -> Result<Template> {
        if v.ambient_dim() != self.params.len() {
            return Err(Error::InvalidInput("subspace dimension does not match the parameter count".into()));
        }
        let names = (1..=v.dim()).map(|i| format!("b{i}")).collect();
        self.reparametrize(v.basis(), names)
    }
}

fn map_monomial(m: &Monomial, from: &Ring, to: &Ring) -> Monomial {
    let mut e = vec![0u32; to.len()];
    for (i, &x) in m.exponents().iter().enumerate() {
        if x > 0 {
            e[to.index_of(&from.symbol(i).name).expect("same state symbols")] = x;
        }
    }
    Monomial::new(e)
}

fn remap_form(l: &LinearForm, from: &[String], to: &[String]) -> LinearForm {
    LinearForm::from_pairs(l.coefficients().iter().map(|(i, c)| {
        let name = &from[*i as usize];
        (to.iter().position(|n| n == name).expect("known parameter") as u32, c.clone())
    }))
}

struct Key {
    m: Monomial,
    order: MonomialOrder,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&self.m, &other.m)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let one = Monomial::one(self.ring.len());
        for (k, (m, l)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let single = l.len() == 1 && l.coefficients()[0].1.is_one();
            let form = l.display_with(&self.params);
            match (single, *m == one) {
                (true, true) => write!(f, "{form}")?,
                (true, false) => write!(f, "{form}*{}", Polynomial::term(&self.ring, m.clone(), Rational::one()))?,
                (false, true) => write!(f, "({form})")?,
                (false, false) => {
                    write!(f, "({form})*{}", Polynomial::term(&self.ring, m.clone(), Rational::one()))?
                }
            }
        }
        Ok(())
    }
}
