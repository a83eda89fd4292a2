//! Exact linear algebra over ℚ: sparse linear forms over template
//! parameters and canonical subspaces of parameter valuations.

mod form;
mod subspace;

pub use form::LinearForm;
pub use subspace::{nullspace, rref, Subspace};
