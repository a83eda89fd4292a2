//! Floating-point falsification harness: fixed-step RK4 trajectories,
//! invariant checks along them, and rational sampling of preconditions.

mod rk4;
mod sample;

pub use rk4::{
    check_along, integrate, time_derivative, CompiledField, CompiledPolynomial, Rk4Config, Trajectory, Violation,
};
pub use sample::sample_points;
