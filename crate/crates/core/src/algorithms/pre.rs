use crate::algorithms::{check_invariant_ideal, ChainOptions};
use crate::dynamics::VectorField;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::Polynomial;

#[derive(Debug, Clone)]
pub struct PreResult {
    /// `I_m = ⟨P_0 ∪ … ∪ P_m⟩`, whose variety is the weakest precondition.
    pub ideal: Ideal,
    /// The least `m` with `I_{m+1} = I_m`.
    pub iterations: usize,
    /// `P_0 ∪ … ∪ P_m`.
    pub derivative_closure: Vec<Polynomial>,
    /// Number of generators of `I_j` at each step.
    pub trace: Vec<usize>,
}

/// The weakest algebraic precondition of `Var(P)`: iterate `P_{j+1} =
/// L_F(P_j)` until the ideal stops growing.
pub fn pre(p: &[Polynomial], field: &VectorField, options: ChainOptions) -> Result<PreResult> {
    if p.is_empty() {
        return Err(Error::InvalidInput("the postcondition needs at least one polynomial".into()));
    }
    let ring = field.ring();
    if p.iter().any(|q| q.ring() != ring) {
        return Err(Error::UniverseMismatch);
    }
    let mut ideal = Ideal::with_options(ring, p.to_vec(), options.gb)?;
    let mut current: Vec<Polynomial> = p.to_vec();
    let mut closure = current.clone();
    let mut trace = vec![closure.len()];
    let mut j = 0;
    loop {
        if j >= options.max_iterations {
            return Err(Error::IterationCap(options.max_iterations));
        }
        let next: Vec<Polynomial> = current.iter().map(|q| field.lie_derivative(q)).collect::<Result<_>>()?;
        let mut grows = false;
        for q in &next {
            if !ideal.member(q)? {
                grows = true;
                break;
            }
        }
        if !grows {
            break;
        }
        ideal = ideal.extended(&next)?;
        closure.extend(next.iter().cloned());
        trace.push(closure.len());
        current = next;
        j += 1;
    }
    if options.verify && !check_invariant_ideal(&ideal, field)? {
        return Err(Error::Invariant("PRE ideal is not closed under the Lie derivative".into()));
    }
    Ok(PreResult { ideal, iterations: j, derivative_closure: closure, trace })
}
