use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::linalg::LinearForm;
use crate::poly::Rational;

/// Reduced row echelon form of a rational matrix with `ncols` columns.
/// Returns the nonzero rows (pivot entries equal to one) and their pivot
/// columns.
///
/// Elimination runs on integer rows with cross-multiplication and content
/// removal; rationals only appear in the final normalization.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r, ncols)).filter(|r| !is_zero_row(r)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let Some(p) = (rank..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r].iter().filter(|x| !x.is_zero()).count())
        else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        let pv = pivot_row[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[col]);
            let a = &pv / &g;
            let b = &row[col] / &g;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if y.is_zero() {
                    if !x.is_zero() {
                        *x *= &a;
                    }
                } else {
                    *x = &*x * &a - &b * y;
                }
            }
            remove_content(row);
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    let out = m
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let pv = row[p].clone();
            row.into_iter().map(|x| Rational::new(x, pv.clone())).collect()
        })
        .collect();
    (out, pivots)
}

/// A basis of `{v : M·v = 0}` for the matrix with the given rows.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

fn integer_row(r: &[Rational], ncols: usize) -> Vec<BigInt> {
    debug_assert_eq!(r.len(), ncols);
    let lcm = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut row: Vec<BigInt> = r.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    remove_content(&mut row);
    row
}

fn is_zero_row(r: &[BigInt]) -> bool {
    r.iter().all(|x| x.is_zero())
}

fn remove_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

/// A linear subspace of ℚⁿ held as its canonical reduced row echelon basis.
/// Two subspaces are equal exactly when their bases are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// ℚⁿ.
    pub fn full(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Subspace { n, rows, pivots: (0..n).collect() }
    }

    /// `{0} ⊆ ℚⁿ`.
    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new(), pivots: Vec::new() }
    }

    /// The span of `rows`.
    pub fn span(n: usize, rows: &[Vec<Rational>]) -> Self {
        let (rows, pivots) = rref(rows, n);
        Subspace { n, rows, pivots }
    }

    /// `{v : ℓ[v] = 0 for every ℓ}`.
    pub fn solve_homogeneous(constraints: &[LinearForm], n: usize) -> Self {
        let m: Vec<Vec<Rational>> = constraints.iter().map(|l| l.to_dense(n)).collect();
        Subspace::span(n, &nullspace(&m, n))
    }

    /// `self ∩ {v : ℓ[v] = 0 for every ℓ}`, computed in the coordinates of
    /// the current basis.
    pub fn refine(&self, constraints: &[LinearForm]) -> Self {
        if constraints.iter().all(|l| l.is_zero()) || self.rows.is_empty() {
            return self.clone();
        }
        let m: Vec<Vec<Rational>> =
            constraints.iter().map(|l| self.rows.iter().map(|b| l.evaluate(b)).collect()).collect();
        let c = nullspace(&m, self.rows.len());
        let combined: Vec<Vec<Rational>> = c.iter().map(|coeffs| self.combine(coeffs)).collect();
        Subspace::span(self.n, &combined)
    }

    /// `Σ coeffs[i]·basis[i]`.
    pub fn combine(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.n];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
        v
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.n, "ambient dimension mismatch");
        let coeffs: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        self.combine(&coeffs) == v
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Canonical defining equations: an RREF basis of the annihilator, as
    /// linear forms `ℓ` with `V = {v : ℓ[v] = 0}`.
    pub fn constraints(&self) -> Vec<LinearForm> {
        let (rows, _) = rref(&nullspace(&self.rows, self.n), self.n);
        rows.iter().map(|r| LinearForm::from_dense(r)).collect()
    }
}
