//! Multivariate division, Buchberger's algorithm, reduced Gröbner bases and
//! ideal predicates.

mod buchberger;
mod division;
mod ideal;

pub use buchberger::{buchberger, extend_basis, reduce_basis, s_polynomial, GbOptions};
pub use division::{divide, normal_form, DivisionResult};
pub use ideal::{eliminate_parameters, ideal_contains, ideal_equal, member, Ideal};
