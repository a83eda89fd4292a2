use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::ring::same_ring;
use crate::poly::{Monomial, Rational, Ring, SymbolKind};

/// Exact multivariate polynomial over ℚ.
///
/// Terms are kept sorted by the ring's monomial order, leading term first,
/// with no zero coefficients; two polynomials over the same ring are equal
/// iff their term lists are.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        Polynomial::term(ring, Monomial::one(ring.len()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Polynomial::constant(ring, Rational::one())
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Rational) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(Polynomial::term(ring, Monomial::var(ring.len(), i), Rational::one()))
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero)
    /// terms.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.len());
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Polynomial::from_map(ring, acc)
    }

    pub(crate) fn from_map(ring: &Arc<Ring>, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = *ring.order();
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Caller guarantees `terms` is sorted descending without zeros.
    pub(crate) fn from_sorted(ring: &Arc<Ring>, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        debug_assert!(terms.windows(2).all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Indices of symbols that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.len()).filter(|&i| self.uses_symbol(i)).collect()
    }

    pub fn uses_symbol(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[i] > 0)
    }

    pub fn is_parameter_free(&self) -> bool {
        (0..self.ring.len()).all(|i| !self.ring.is_parameter(i) || !self.uses_symbol(i))
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    /// `self + c * m * other` by a single sorted merge.
    pub fn add_scaled(&self, c: &Rational, m: Option<&Monomial>, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled_unchecked(c, m, other))
    }

    pub(crate) fn add_scaled_unchecked(&self, c: &Rational, m: Option<&Monomial>, other: &Polynomial) -> Polynomial {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let order = *self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let shifted = other.terms.iter().map(|(t, k)| {
            let t = match m {
                Some(m) => t.mul(m),
                None => t.clone(),
            };
            (t, k * c)
        });
        for (tb, kb) in shifted {
            while let Some((ta, _)) = a.peek() {
                if order.cmp(ta, &tb) == Ordering::Greater {
                    out.push(a.next().unwrap().clone());
                } else {
                    break;
                }
            }
            match a.peek() {
                Some((ta, ka)) if *ta == tb => {
                    let s = ka + &kb;
                    a.next();
                    if !s.is_zero() {
                        out.push((tb, s));
                    }
                }
                _ => out.push((tb, kb)),
            }
        }
        out.extend(a.cloned());
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add_scaled(&Rational::one(), None, other)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add_scaled(&-Rational::one(), None, other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Polynomial::from_map(&self.ring, acc))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        // Multiplication by a monomial preserves the order.
        let terms = self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base).expect("same ring");
            }
        }
        result
    }

    /// Exact value at a point given by symbol name.
    pub fn evaluate(&self, point: &HashMap<String, Rational>) -> Result<Rational> {
        let mut values = Vec::with_capacity(self.ring.len());
        for (i, s) in self.ring.symbols().iter().enumerate() {
            match point.get(&s.name) {
                Some(v) => values.push(Some(v.clone())),
                None if self.uses_symbol(i) => return Err(Error::UnboundSymbol(s.name.clone())),
                None => values.push(None),
            }
        }
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let v = values[i].as_ref().expect("bound");
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Exact value at a point given positionally (one value per ring symbol).
    pub fn evaluate_at(&self, values: &[Rational]) -> Rational {
        debug_assert_eq!(values.len(), self.ring.len());
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(values[i].clone(), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Floating-point evaluation (one value per ring symbol).
    pub fn evaluate_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        t *= values[i].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Sum of absolute term values at a point; the natural cancellation scale
    /// for tolerance checks.
    pub fn magnitude_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN).abs();
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        t *= values[i].abs().powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// ∂/∂x_i.
    pub fn partial(&self, i: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| m.derivative(i).map(|(e, d)| (d, c * Rational::from_integer(BigInt::from(e)))))
            .collect::<Vec<_>>();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Replaces every parameter by its value, yielding a polynomial over the
    /// ring's state variables.
    pub fn substitute_params(&self, values: &HashMap<String, Rational>) -> Result<Polynomial> {
        let target = self.ring.without_parameters()?;
        let mut map = Vec::with_capacity(self.ring.len());
        for (i, s) in self.ring.symbols().iter().enumerate() {
            match s.kind {
                SymbolKind::Parameter => match values.get(&s.name) {
                    Some(v) => map.push(Err(v.clone())),
                    None if self.uses_symbol(i) => return Err(Error::UnboundSymbol(s.name.clone())),
                    None => map.push(Err(Rational::zero())),
                },
                SymbolKind::State => map.push(Ok(target.index_of(&s.name).expect("state symbol kept"))),
            }
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            let mut k = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &map[i] {
                    Ok(j) => exps[*j] = e,
                    Err(v) => k *= num_traits::pow(v.clone(), e as usize),
                }
            }
            if !k.is_zero() {
                *acc.entry(Monomial::new(exps)).or_insert_with(Rational::zero) += k;
            }
        }
        Ok(Polynomial::from_map(&target, acc))
    }

    /// Re-expresses this polynomial in another ring, matching symbols by name.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        if Arc::ptr_eq(&self.ring, target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ring.len());
        for (i, s) in self.ring.symbols().iter().enumerate() {
            match target.index_of(&s.name) {
                Some(j) => map.push(Some(j)),
                None if self.uses_symbol(i) => return Err(Error::UnknownSymbol(s.name.clone())),
                None => map.push(None),
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if let Some(j) = map[i] {
                    exps[j] = e;
                }
            }
            (Monomial::new(exps), c.clone())
        });
        let mut terms: Vec<_> = terms.collect();
        let order = *target.order();
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Ok(Polynomial { ring: target.clone(), terms })
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    /// Scaled to integer coefficients with content 1 and positive leading
    /// coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&den / c.denom());
            g = g.gcd(&n);
            if g.is_one() {
                break;
            }
        }
        let mut factor = Rational::new(den, g);
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        if factor.is_one() {
            self.clone()
        } else {
            self.scale(&factor)
        }
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomials over different rings")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomials over different rings")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomials over different rings")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

pub(crate) fn fmt_monomial(f: &mut fmt::Formatter<'_>, ring: &Ring, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&ring.symbol(i).name)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    if first {
        f.write_str("1")?;
    }
    Ok(())
}

pub(crate) fn fmt_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                fmt_rational(f, &a)?;
            } else {
                if !a.is_one() {
                    fmt_rational(f, &a)?;
                    f.write_str("*")?;
                }
                fmt_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

/// All monomials over `vars` (ring indices) of total degree at most `k`,
/// sorted descending in the ring's order. There are C(|vars|+k, k) of them.
pub fn monomials_up_to_degree(ring: &Ring, vars: &[usize], k: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; ring.len()];
    fn rec(vars: &[usize], left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => out.push(Monomial::new(exps.clone())),
            Some((&v, rest)) => {
                for e in 0..=left {
                    exps[v] = e;
                    rec(rest, left - e, exps, out);
                }
                exps[v] = 0;
            }
        }
    }
    rec(vars, k, &mut exps, &mut out);
    let order = *ring.order();
    out.sort_unstable_by(|a, b| order.cmp(b, a));
    out
}
