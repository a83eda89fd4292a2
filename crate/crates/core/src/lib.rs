//! Exact algebraic reasoning about polynomial ODEs `ẋ = F(x)`.
//!
//! Given an algebraic precondition and a parameterized polynomial template,
//! [`algorithms::post`] finds every instance of the template that is a
//! conservation law along all trajectories starting in the precondition,
//! together with the smallest invariant ideal containing them.
//! [`algorithms::pre`] computes weakest algebraic preconditions, and
//! [`algorithms::check_safety`] decides algebraic safety assertions.
//!
//! Everything is exact over ℚ and built on the crate's own Gröbner basis
//! engine ([`groebner`]).

pub mod algorithms;
pub mod dynamics;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod numeric;
pub mod poly;

pub use algorithms::{
    check_invariant_ideal, check_safety, post, pre, weakest_precondition_via_post, ChainOptions, PostResult,
    PreResult, Precondition, RadicalMode, SafetyResult, Verdict,
};
pub use dynamics::{Template, VectorField};
pub use error::{Error, Resource, Result};
pub use groebner::{GbOptions, Ideal};
pub use linalg::{LinearForm, Subspace};
pub use poly::{parse_polynomial, MonomialOrder, OrderKind, Polynomial, Rational, Ring};
