use num_traits::{One, Zero};

use crate::algorithms::{check_invariant_ideal, ChainOptions, Precondition};
use crate::dynamics::{Template, VectorField};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::linalg::{nullspace, Subspace};
use crate::poly::{Polynomial, Rational};

/// One step of the double chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    /// `dim V_i`.
    pub dim_v: usize,
    /// Number of generators `π⁽ʲ⁾[B]` (j ≤ i) of `J_i`, once `V_i` is known.
    pub j_generators: usize,
    /// Whether `J_{i+1} = J_i` was tested at this step (only done when
    /// `V_{i+1} = V_i`).
    pub j_checked: bool,
}

#[derive(Debug, Clone)]
pub struct PostResult {
    /// The space `V` of parameter valuations whose instances are invariants.
    pub v: Subspace,
    /// `π′` with `π′[ℚᵈ] = π[V]`, over fresh parameters `b1 … bd`.
    pub result_template: Template,
    /// The invariant ideal `J = ⟨∪ⱼ π⁽ʲ⁾[V]⟩`.
    pub j: Ideal,
    /// The least `m` with `V_{m+1} = V_m` and `J_{m+1} = J_m`.
    pub iterations: usize,
    /// Whether the precondition ideal is known to equal `Id(ψ)`, which makes
    /// `V` and `J` complete rather than merely sound.
    pub mode_exact: bool,
    /// Reduced Gröbner basis used for the precondition.
    pub precondition_basis: Vec<Polynomial>,
    pub trace: Vec<ChainStep>,
}

impl PostResult {
    /// The summands `π[Bᵢ]` of the result template.
    pub fn invariants(&self) -> Vec<Polynomial> {
        self.result_template.unit_instances()
    }
}

/// The relativized strongest postcondition of `ψ` for template `π`.
///
/// The chain `V_0 ⊇ V_1 ⊇ …` is tracked by a working basis `W` of `V_i`
/// (rows in ℚⁿ) and the derivatives `π⁽ʲ⁾` re-expressed over coordinates
/// in that basis. Each new derivative is reduced modulo the precondition
/// basis; its coefficients restrict the coordinates, and every stored
/// derivative is composed with the restriction. When `V` does not shrink,
/// the new generators are tested for membership in `J_i`, whose Gröbner
/// basis is extended incrementally.
pub fn post(psi: &Precondition, template: &Template, field: &VectorField, options: ChainOptions) -> Result<PostResult> {
    let ring = field.ring();
    if psi.ring() != ring || template.ring() != ring {
        return Err(Error::UniverseMismatch);
    }
    let g: Vec<Polynomial> = psi.ideal(options.gb)?.groebner_basis()?.to_vec();
    let n = template.n_params();

    let mut w: Vec<Vec<Rational>> = identity(n);
    let mut chain = vec![template.clone()];
    let mut trace = Vec::new();

    restrict(&mut chain, &mut w, &g)?;
    trace.push(ChainStep { dim_v: w.len(), j_generators: 0, j_checked: false });

    let mut j_ideal: Option<Ideal> = None;
    let mut i = 0;
    let final_ideal = loop {
        if i >= options.max_iterations {
            return Err(Error::IterationCap(options.max_iterations));
        }
        let next = chain[i].lie(field)?;
        chain.push(next);
        let before = w.len();
        let changed = restrict(&mut chain, &mut w, &g)?;
        if w.len() > before {
            return Err(Error::Invariant("parameter space grew along the chain".into()));
        }
        trace[i].j_generators = before * (i + 1);
        if changed {
            j_ideal = None;
            trace.push(ChainStep { dim_v: w.len(), j_generators: 0, j_checked: false });
            i += 1;
            continue;
        }
        trace[i].j_checked = true;
        let ideal = match j_ideal.take() {
            Some(ideal) => ideal,
            None => {
                let gens: Vec<Polynomial> = chain[..=i].iter().flat_map(|t| t.unit_instances()).collect();
                Ideal::with_options(ring, gens, options.gb)?
            }
        };
        let fresh: Vec<Polynomial> = chain[i + 1].unit_instances().into_iter().filter(|p| !p.is_zero()).collect();
        let mut stable = true;
        for p in &fresh {
            if !ideal.member(p)? {
                stable = false;
                break;
            }
        }
        if stable {
            break ideal;
        }
        j_ideal = Some(ideal.extended(&fresh)?);
        trace.push(ChainStep { dim_v: w.len(), j_generators: 0, j_checked: false });
        i += 1;
    };

    let v = Subspace::span(n, &w);
    let result_template = template.result_template(&v)?;
    let result = PostResult {
        v,
        result_template,
        j: final_ideal,
        iterations: i,
        mode_exact: psi.is_exact(),
        precondition_basis: g,
        trace,
    };
    if options.verify {
        verify(&result, field)?;
    }
    Ok(result)
}

/// Restricts the current coordinates to those where the newest derivative
/// vanishes modulo `g`. Returns whether the space shrank.
fn restrict(chain: &mut [Template], w: &mut Vec<Vec<Rational>>, g: &[Polynomial]) -> Result<bool> {
    let d = w.len();
    let newest = chain.last().expect("nonempty chain");
    let r = newest.remainder(g)?;
    if r.is_zero() {
        return Ok(false);
    }
    let rows: Vec<Vec<Rational>> = r.zero_constraints().iter().map(|l| l.to_dense(d)).collect();
    let c = nullspace(&rows, d);
    if c.len() == d {
        return Ok(false);
    }
    let names: Vec<String> = (1..=c.len()).map(|k| format!("c{k}")).collect();
    for t in chain.iter_mut() {
        *t = t.reparametrize(&c, names.clone())?;
    }
    *w = c.iter().map(|row| combine(row, w)).collect();
    Ok(true)
}

fn combine(coeffs: &[Rational], rows: &[Vec<Rational>]) -> Vec<Rational> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut out = vec![Rational::zero(); n];
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Checks the postconditions of a POST run: the chain never grew,
/// `π[V] ⊆ J`, and `J` is closed under the Lie derivative.
fn verify(result: &PostResult, field: &VectorField) -> Result<()> {
    if result.trace.windows(2).any(|s| s[1].dim_v > s[0].dim_v) {
        return Err(Error::Invariant("V chain is not descending".into()));
    }
    for p in result.invariants() {
        if !result.j.member(&p)? {
            return Err(Error::Invariant(format!("instance {p} of the result template is not in J")));
        }
    }
    if !check_invariant_ideal(&result.j, field)? {
        return Err(Error::Invariant("J is not closed under the Lie derivative".into()));
    }
    Ok(())
}
