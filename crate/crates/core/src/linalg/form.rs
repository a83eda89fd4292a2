use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

/// A linear form `Σ cᵢ·aᵢ` over parameters indexed from zero, with no
/// constant term. Stored sparsely, sorted by parameter index, without zero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    coeffs: Vec<(u32, Rational)>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm { coeffs: Vec::new() }
    }

    /// The form `aᵢ`.
    pub fn var(i: u32) -> Self {
        LinearForm { coeffs: vec![(i, Rational::one())] }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut coeffs: Vec<(u32, Rational)> = pairs.into_iter().collect();
        coeffs.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(u32, Rational)> = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LinearForm { coeffs: out }
    }

    /// Builds a form from a dense coefficient vector.
    pub fn from_dense(values: &[Rational]) -> Self {
        LinearForm {
            coeffs: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u32, c.clone()))
                .collect(),
        }
    }

    pub fn coefficients(&self) -> &[(u32, Rational)] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: u32) -> Rational {
        match self.coeffs.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.coeffs[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest parameter index with a nonzero coefficient.
    pub fn max_index(&self) -> Option<u32> {
        self.coeffs.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Rational) -> LinearForm {
        if c.is_zero() {
            return LinearForm::zero();
        }
        LinearForm { coeffs: self.coeffs.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: &Rational, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled_assign(c, other);
        out
    }

    pub fn add_scaled_assign(&mut self, c: &Rational, other: &LinearForm) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + other.coeffs.len());
        let mut a = std::mem::take(&mut self.coeffs).into_iter().peekable();
        let mut b = other.coeffs.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, y * c));
                }
                (Some(_), Some(_)) => {
                    let (i, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let s = x + y * c;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, y * c));
                }
                (None, None) => break,
            }
        }
        self.coeffs = out;
    }

    /// `ℓ[v]`.
    pub fn evaluate(&self, v: &[Rational]) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, (i, c)| acc + c * &v[*i as usize])
    }

    /// Dense coefficient vector of length `n`.
    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (i, c) in &self.coeffs {
            out[*i as usize] = c.clone();
        }
        out
    }

    /// Reparametrization by `aᵢ = Σⱼ bⱼ·rows[j][i]`: the result is a form in
    /// the new parameters `bⱼ`.
    pub fn compose(&self, rows: &[Vec<Rational>]) -> LinearForm {
        LinearForm::from_pairs(rows.iter().enumerate().filter_map(|(j, row)| {
            let s = self.evaluate(row);
            (!s.is_zero()).then_some((j as u32, s))
        }))
    }

    /// Renders the form with the given parameter names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        FormDisplay { form: self, names }
    }
}

struct FormDisplay<'a> {
    form: &'a LinearForm,
    names: &'a [String],
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return f.write_str("0");
        }
        for (k, (i, c)) in self.form.coeffs.iter().enumerate() {
            let name = &self.names[*i as usize];
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{abs}*{name}")?;
            }
        }
        Ok(())
    }
}
