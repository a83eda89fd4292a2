use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, extend_basis, normal_form, reduce_basis, GbOptions};
use crate::poly::{Polynomial, Ring};

/// A polynomial ideal given by generators, with a lazily computed reduced
/// Gröbner basis under the ring's order.
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    options: GbOptions,
    gb: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal { ring: self.ring.clone(), generators: self.generators.clone(), options: self.options, gb }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal").field("generators", &self.generators).field("gb", &self.gb.get()).finish()
    }
}

impl Ideal {
    /// Zero generators are dropped; `⟨⟩` is the zero ideal.
    pub fn new(ring: &Arc<Ring>, generators: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        Ideal::with_options(ring, generators, GbOptions::default())
    }

    pub fn with_options(
        ring: &Arc<Ring>,
        generators: impl IntoIterator<Item = Polynomial>,
        options: GbOptions,
    ) -> Result<Self> {
        let mut gens = Vec::new();
        for g in generators {
            if g.ring() != ring {
                return Err(Error::UniverseMismatch);
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), generators: gens, options, gb: OnceLock::new() })
    }

    /// Ideal whose generators are trusted to be a Gröbner basis already.
    pub fn from_groebner_basis(ring: &Arc<Ring>, gb: Vec<Polynomial>, options: GbOptions) -> Result<Self> {
        let ideal = Ideal::with_options(ring, gb, options)?;
        let reduced = reduce_basis(&ideal.generators);
        let _ = ideal.gb.set(reduced);
        Ok(ideal)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn options(&self) -> GbOptions {
        self.options
    }

    /// The reduced Gröbner basis (computed once, then cached).
    pub fn groebner_basis(&self) -> Result<&[Polynomial]> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = reduce_basis(&buchberger(&self.generators, &self.ring, self.options)?);
        Ok(self.gb.get_or_init(|| gb))
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner_basis()?.first().is_some_and(|g| g.is_constant()))
    }

    pub fn member(&self, p: &Polynomial) -> Result<bool> {
        if p.ring() != &self.ring {
            return Err(Error::UniverseMismatch);
        }
        if p.is_zero() {
            return Ok(true);
        }
        Ok(normal_form(p, self.groebner_basis()?).is_zero())
    }

    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(normal_form(p, self.groebner_basis()?))
    }

    /// `other ⊆ self`, by membership of every generator of `other`.
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        for g in &other.generators {
            if !self.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality by identical reduced Gröbner bases.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        if self.ring != other.ring {
            return Err(Error::UniverseMismatch);
        }
        Ok(self.groebner_basis()? == other.groebner_basis()?)
    }

    /// `self + ⟨more⟩`, reusing the cached basis when present.
    pub fn extended(&self, more: &[Polynomial]) -> Result<Ideal> {
        let mut generators = self.generators.clone();
        generators.extend(more.iter().filter(|p| !p.is_zero()).cloned());
        let next = Ideal::with_options(&self.ring, generators, self.options)?;
        let gb = reduce_basis(&extend_basis(self.groebner_basis()?, more, &self.ring, self.options)?);
        let _ = next.gb.set(gb);
        Ok(next)
    }
}

/// `p ∈ I`.
pub fn member(p: &Polynomial, ideal: &Ideal) -> Result<bool> {
    ideal.member(p)
}

/// `I = J` as ideals.
pub fn ideal_equal(i: &Ideal, j: &Ideal) -> Result<bool> {
    i.equals(j)
}

/// `J ⊆ I`.
pub fn ideal_contains(i: &Ideal, j: &Ideal) -> Result<bool> {
    i.contains(j)
}

/// Elements of a Gröbner basis (computed under an order eliminating the
/// parameters) that mention no parameter. They form a Gröbner basis of the
/// ideal's intersection with the state-variable ring.
pub fn eliminate_parameters(gb: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let Some(first) = gb.first() else {
        return Ok(Vec::new());
    };
    if !first.ring().is_elimination_order() {
        return Err(Error::NotEliminationOrder);
    }
    Ok(gb.iter().filter(|g| g.is_parameter_free()).cloned().collect())
}
