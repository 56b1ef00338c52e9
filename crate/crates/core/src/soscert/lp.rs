//! Exact rational phase-one simplex for `A x = b, x >= 0`.

use crate::algebra::Rational;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// A nonnegative solution.
    Feasible(Vec<Rational>),
    /// `z` with `zᵀ A >= 0` column-wise and `zᵀ b < 0`.
    Infeasible(Vec<Rational>),
}

/// Decides `A x = b, x >= 0` with Bland's rule, so it always terminates.
///
/// `a` holds `m` rows of length `n`.
pub fn solve_feasibility(a: &[Vec<Rational>], b: &[Rational], n: usize) -> LpOutcome {
    let m = a.len();
    // Tableau [A' | I | b'] with rows sign-flipped so b' >= 0.
    let signs: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for (j, x) in a[i].iter().enumerate() {
                row[j] = if signs[i] { -x } else { x.clone() };
            }
            row[n + i] = Rational::one();
            row[width - 1] = if signs[i] { -&b[i] } else { b[i].clone() };
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let cost = |j: usize| if j >= n { Rational::one() } else { Rational::zero() };
    loop {
        // Reduced costs c_j - c_Bᵀ B⁻¹ A_j.
        let entering = (0..n + m).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut r = cost(j);
            for (i, &bv) in basis.iter().enumerate() {
                if bv >= n && !t[i][j].is_zero() {
                    r -= &t[i][j];
                }
            }
            r.is_negative()
        });
        let Some(j) = entering else { break };
        let leaving = (0..m)
            .filter(|&i| t[i][j].is_positive())
            .min_by(|&p, &q| {
                let rp = &t[p][width - 1] / &t[p][j];
                let rq = &t[q][width - 1] / &t[q][j];
                rp.cmp(&rq).then(basis[p].cmp(&basis[q]))
            });
        let Some(r) = leaving else {
            // Unbounded directions cannot occur in phase one.
            unreachable!("phase-one objective is bounded below");
        };
        pivot(&mut t, r, j);
        basis[r] = j;
    }
    let value: Rational = basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(i, _)| t[i][width - 1].clone())
        .sum();
    if value.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[i][width - 1].clone();
            }
        }
        return LpOutcome::Feasible(x);
    }
    // y' = c_Bᵀ B⁻¹, read off the artificial columns; undo the row flips
    // and negate to get the witness.
    let z = (0..m)
        .map(|k| {
            let mut y = Rational::zero();
            for (i, &bv) in basis.iter().enumerate() {
                if bv >= n {
                    y += &t[i][n + k];
                }
            }
            if signs[k] { y } else { -y }
        })
        .collect();
    LpOutcome::Infeasible(z)
}

fn pivot(t: &mut [Vec<Rational>], r: usize, j: usize) {
    let inv = t[r][j].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let row = t[r].clone();
    for (i, other) in t.iter_mut().enumerate() {
        if i == r || other[j].is_zero() {
            continue;
        }
        let factor = other[j].clone();
        for (x, p) in other.iter_mut().zip(&row) {
            if !p.is_zero() {
                *x -= &factor * p;
            }
        }
    }
}
