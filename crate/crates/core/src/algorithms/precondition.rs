use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groebner::{GbOptions, Ideal};
use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// How the ideal used for the precondition relates to `Id(ψ)`, the ideal of
/// all polynomials vanishing on `ψ = Var(Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadicalMode {
    /// Use `⟨Q⟩ ⊆ Id(ψ)`. Always sound; exact when `Q` is affine-linear.
    Generators,
    /// `Q = {x₁ − c₁, …, x_N − c_N}`: `⟨Q⟩` is the ideal of the point.
    Singleton,
    /// A caller-supplied Gröbner basis of some `I ⊆ Id(ψ)`; not checked.
    UserSupplied,
}

/// An algebraic precondition `ψ = Var(Q)` together with the ideal that
/// stands in for `Id(ψ)`.
#[derive(Debug, Clone)]
pub struct Precondition {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    mode: RadicalMode,
}

impl Precondition {
    /// `ψ = Var(Q)`; singleton mode is selected when `Q` has the point shape.
    pub fn new(ring: &Arc<Ring>, generators: Vec<Polynomial>) -> Result<Self> {
        let mode = if singleton_point(ring, &generators).is_some() {
            RadicalMode::Singleton
        } else {
            RadicalMode::Generators
        };
        Precondition::with_mode(ring, generators, mode)
    }

    /// `ψ = ℝᴺ`.
    pub fn everywhere(ring: &Arc<Ring>) -> Self {
        Precondition { ring: ring.clone(), generators: Vec::new(), mode: RadicalMode::Generators }
    }

    /// The single point `x = c`.
    pub fn point(ring: &Arc<Ring>, values: &[Rational]) -> Result<Self> {
        if values.len() != ring.len() {
            return Err(Error::InvalidInput(format!("point needs {} coordinates", ring.len())));
        }
        let gens = values
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let x = Polynomial::term(ring, Monomial::var(ring.len(), i), Rational::one());
                &x - &Polynomial::constant(ring, c.clone())
            })
            .collect();
        Precondition::with_mode(ring, gens, RadicalMode::Singleton)
    }

    pub fn with_mode(ring: &Arc<Ring>, generators: Vec<Polynomial>, mode: RadicalMode) -> Result<Self> {
        if ring.parameter_count() > 0 {
            return Err(Error::InvalidInput("precondition ring must hold state variables only".into()));
        }
        if generators.iter().any(|g| g.ring() != ring) {
            return Err(Error::UniverseMismatch);
        }
        if mode == RadicalMode::Singleton && singleton_point(ring, &generators).is_none() {
            return Err(Error::ModeViolation(
                "singleton mode needs generators x_i - c_i covering every state variable".into(),
            ));
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Precondition { ring: ring.clone(), generators, mode })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn mode(&self) -> RadicalMode {
        self.mode
    }

    /// Whether the ideal handed to the algorithms is known to equal `Id(ψ)`.
    ///
    /// Singleton ideals are exact. So are ideals generated by affine-linear
    /// polynomials: a consistent linear system generates the (real) prime
    /// ideal of an affine subspace, and an inconsistent one generates
    /// `⟨1⟩ = Id(∅)`.
    pub fn is_exact(&self) -> bool {
        match self.mode {
            RadicalMode::Singleton => true,
            RadicalMode::Generators => self.generators.iter().all(|g| g.total_degree().unwrap_or(0) <= 1),
            RadicalMode::UserSupplied => false,
        }
    }

    /// The point of a singleton precondition, in ring order.
    pub fn point_coordinates(&self) -> Option<Vec<Rational>> {
        singleton_point(&self.ring, &self.generators)
    }

    pub fn ideal(&self, options: GbOptions) -> Result<Ideal> {
        match self.mode {
            RadicalMode::UserSupplied => Ideal::from_groebner_basis(&self.ring, self.generators.clone(), options),
            _ => Ideal::with_options(&self.ring, self.generators.clone(), options),
        }
    }
}

/// Recognizes `{a·x_i − c}` with one generator per state variable.
fn singleton_point(ring: &Arc<Ring>, gens: &[Polynomial]) -> Option<Vec<Rational>> {
    if gens.len() != ring.len() {
        return None;
    }
    let mut point: Vec<Option<Rational>> = vec![None; ring.len()];
    for g in gens {
        if g.total_degree()? != 1 {
            return None;
        }
        let support = g.support();
        let [i] = support[..] else { return None };
        let (m, a) = g.leading_term()?;
        if m.degree() != 1 {
            return None;
        }
        let c = g.terms().get(1).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero);
        if point[i].is_some() {
            return None;
        }
        point[i] = Some(-c / a);
    }
    point.into_iter().collect()
}
