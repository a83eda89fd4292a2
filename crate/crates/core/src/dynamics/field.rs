use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// A polynomial vector field `ẋ = F(x)`: one drift per state variable of
/// the ring, in ring order. Ghost variables are state variables with drift 0.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    ring: Arc<Ring>,
    drifts: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(ring: &Arc<Ring>, drifts: Vec<Polynomial>) -> Result<Self> {
        if ring.parameter_count() > 0 {
            return Err(Error::InvalidInput("a vector field lives over state variables only".into()));
        }
        if drifts.len() != ring.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} drifts, got {}",
                ring.len(),
                drifts.len()
            )));
        }
        if drifts.iter().any(|d| d.ring() != ring) {
            return Err(Error::UniverseMismatch);
        }
        Ok(VectorField { ring: ring.clone(), drifts })
    }

    /// Drifts given by name; unnamed variables get drift 0.
    pub fn from_named(ring: &Arc<Ring>, drifts: impl IntoIterator<Item = (String, Polynomial)>) -> Result<Self> {
        let mut out = vec![Polynomial::zero(ring); ring.len()];
        let mut seen = vec![false; ring.len()];
        for (name, p) in drifts {
            let i = ring.index_of(&name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            if seen[i] {
                return Err(Error::DuplicateSymbol(name));
            }
            seen[i] = true;
            out[i] = p;
        }
        VectorField::new(ring, out)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn drifts(&self) -> &[Polynomial] {
        &self.drifts
    }

    pub fn drift(&self, i: usize) -> &Polynomial {
        &self.drifts[i]
    }

    /// `L_F(p) = Σᵢ ∂p/∂xᵢ · fᵢ`.
    pub fn lie_derivative(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.ring() != &self.ring {
            return Err(Error::UniverseMismatch);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in p.terms() {
            for (i, f) in self.drifts.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let Some((e, dm)) = m.derivative(i) else { continue };
                let k = c * Rational::from_integer(BigInt::from(e));
                for (fm, fc) in f.terms() {
                    *acc.entry(dm.mul(fm)).or_insert_with(Rational::zero) += &k * fc;
                }
            }
        }
        Ok(Polynomial::from_terms(&self.ring, acc))
    }

    /// `L_F^{(j)}(p)`; `j = 0` is the identity.
    pub fn lie_iterate(&self, p: &Polynomial, j: usize) -> Result<Polynomial> {
        let mut q = p.clone();
        for _ in 0..j {
            q = self.lie_derivative(&q)?;
        }
        if j == 0 && p.ring() != &self.ring {
            return Err(Error::UniverseMismatch);
        }
        Ok(q)
    }

    /// The field with every drift re-expressed in another ring with the same
    /// state symbols (for example under a different monomial order).
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<VectorField> {
        let mut drifts = vec![Polynomial::zero(target); target.len()];
        for (i, s) in self.ring.symbols().iter().enumerate() {
            let j = target.index_of(&s.name).ok_or_else(|| Error::UnknownSymbol(s.name.clone()))?;
            drifts[j] = self.drifts[i].to_ring(target)?;
        }
        VectorField::new(target, drifts)
    }
}
