//! The POST double chain, the PRE ascending chain, safety checking and
//! invariance checking.

mod post;
mod pre;
mod precondition;
mod safety;

pub use post::{post, ChainStep, PostResult};
pub use pre::{pre, PreResult};
pub use precondition::{Precondition, RadicalMode};
pub use safety::{
    check_invariant_ideal, check_safety, weakest_precondition_via_post, SafetyResult, Verdict, WeakestPrecondition,
    Witness,
};

use crate::groebner::GbOptions;

/// Caps and checks shared by the chain algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainOptions {
    pub gb: GbOptions,
    /// Maximum number of chain steps before giving up.
    pub max_iterations: usize,
    /// Re-check the result invariants (`π[V] ⊆ J`, Lie closure) after a run.
    pub verify: bool,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions { gb: GbOptions::default(), max_iterations: 64, verify: true }
    }
}
