//! Exact multivariate polynomials over ℚ.

mod monomial;
mod parse;
mod polynomial;
mod ring;

pub use monomial::Monomial;
pub use parse::{parse_polynomial, parse_rational, ParseError, ParseErrorKind};
pub use polynomial::{monomials_up_to_degree, Polynomial};
pub use ring::{MonomialOrder, OrderKind, Ring, Symbol, SymbolKind};

pub type Rational = num_rational::BigRational;

/// Shorthand for `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
