//! Exact rational matrices: semidefinite LDLᵀ, bounded-denominator rounding
//! and least-norm solutions of consistent linear systems.

use crate::algebra::Rational;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense square rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Rational::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Option<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.n + j] = value;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    /// Replaces each pair of mirrored entries by their mean.
    pub fn symmetrized(&self) -> Self {
        let mut out = self.clone();
        let two = Rational::from_integer(2.into());
        for i in 0..self.n {
            for j in 0..i {
                let m = (self.get(i, j) + self.get(j, i)) / &two;
                out.set(i, j, m.clone());
                out.set(j, i, m);
            }
        }
        out
    }

    /// `L D Lᵀ` with unit lower-triangular `L` and diagonal `D`.
    pub fn ldl(&self) -> Result<Ldl, LdlFailure> {
        self.ldl_clipped(&Rational::zero()).map(|(ldl, _)| ldl)
    }

    /// As [`Self::ldl`], but a pivot `p` with `-tol <= p < 0` is clipped to
    /// zero together with the rest of its column. Returns the factorization
    /// and whether anything was clipped; the factorization then describes a
    /// nearby PSD matrix rather than `self`.
    pub fn ldl_clipped(&self, tol: &Rational) -> Result<(Ldl, bool), LdlFailure> {
        if !self.is_symmetric() {
            return Err(LdlFailure::NotSymmetric);
        }
        let n = self.n;
        // Schur complement, updated in place.
        let mut s = self.data.clone();
        let mut l = vec![Rational::zero(); n * n];
        let mut d = Vec::with_capacity(n);
        let mut clipped = false;
        for k in 0..n {
            l[k * n + k] = Rational::one();
            let mut pivot = s[k * n + k].clone();
            if pivot.is_negative() {
                if -&pivot <= *tol {
                    pivot = Rational::zero();
                    clipped = true;
                } else {
                    return Err(LdlFailure::NegativePivot { index: k, value: pivot });
                }
            }
            if pivot.is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !s[j * n + k].is_zero()) {
                    if tol.is_zero() {
                        return Err(LdlFailure::ZeroPivotWithCoupling { index: k, row: j });
                    }
                    clipped = true;
                }
                d.push(pivot);
                continue;
            }
            for i in k + 1..n {
                l[i * n + k] = &s[i * n + k] / &pivot;
            }
            for i in k + 1..n {
                if l[i * n + k].is_zero() {
                    continue;
                }
                for j in k + 1..=i {
                    let delta = &l[i * n + k] * &s[k * n + j];
                    s[i * n + j] -= &delta;
                    if i != j {
                        s[j * n + i] -= delta;
                    }
                }
            }
            d.push(pivot);
        }
        Ok((Ldl { n, l, d }, clipped))
    }

    /// True if the matrix is symmetric positive semidefinite.
    pub fn is_psd(&self) -> bool {
        self.ldl().is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ldl {
    n: usize,
    l: Vec<Rational>,
    d: Vec<Rational>,
}

impl Ldl {
    pub fn pivots(&self) -> &[Rational] {
        &self.d
    }

    /// Column `k` of `L`.
    pub fn column(&self, k: usize) -> Vec<Rational> {
        (0..self.n).map(|i| self.l[i * self.n + k].clone()).collect()
    }

    pub fn reconstruct(&self) -> RationalMatrix {
        let n = self.n;
        let mut out = RationalMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut acc = Rational::zero();
                for k in 0..=j {
                    if !self.d[k].is_zero() {
                        acc += &self.l[i * n + k] * &self.d[k] * &self.l[j * n + k];
                    }
                }
                out.set(i, j, acc.clone());
                out.set(j, i, acc);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LdlFailure {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("pivot {index} is negative ({value})")]
    NegativePivot { index: usize, value: Rational },
    #[error("pivot {index} vanishes but row {row} still couples to it")]
    ZeroPivotWithCoupling { index: usize, row: usize },
}

/// Closest fraction to `x` whose denominator is at most `bound`.
///
/// Returns `None` for non-finite input.
pub fn round_bounded(x: f64, bound: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let bound = BigInt::from(bound.max(1));
    let exact = Rational::from_float(x)?;
    // Convergents h/k of the continued fraction of `exact`.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let k2 = &a * &k1 + &k0;
        if k2 > bound {
            // Best semiconvergent below the bound versus the last convergent.
            let t = (&bound - &k0) / &k1;
            let semi = Rational::new(&t * &h1 + &h0, &t * &k1 + &k0);
            let conv = Rational::new(h1.clone(), k1.clone());
            let better = if (&semi - &exact).abs() < (&conv - &exact).abs() { semi } else { conv };
            return Some(better);
        }
        let h2 = &a * &h1 + &h0;
        h0 = core::mem::replace(&mut h1, h2);
        k0 = core::mem::replace(&mut k1, k2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return Some(Rational::new(h1, k1));
        }
        rest = frac.recip();
    }
}

/// Least-norm solution of `a x = b`, or `None` if the system is inconsistent.
///
/// `a` is given as rows of length `cols`.
pub fn least_norm_solution(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    // x = aᵀ w with (a aᵀ) w = b.
    let m = a.len();
    let gram: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| dot(&a[i], &a[j])).collect())
        .collect();
    let w = solve_consistent(gram, b.to_vec())?;
    let mut x = vec![Rational::zero(); cols];
    for (row, wi) in a.iter().zip(&w) {
        if wi.is_zero() {
            continue;
        }
        for (xj, aij) in x.iter_mut().zip(row) {
            if !aij.is_zero() {
                *xj += aij * wi;
            }
        }
    }
    Some(x)
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
}

/// Some solution of a square system by Gauss-Jordan elimination, free
/// variables set to zero; `None` if inconsistent.
fn solve_consistent(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        b[row] *= &inv;
        for r in 0..m {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..cols {
                let delta = &factor * &a[row][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[row];
            b[r] -= delta;
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn ldl_of_definite_and_semidefinite() {
        let a = RationalMatrix::from_integers(&[&[4, 2], &[2, 3]]).unwrap();
        let f = a.ldl().unwrap();
        assert_eq!(f.pivots(), &[q(4, 1), q(2, 1)]);
        assert_eq!(f.reconstruct(), a);
        let b = RationalMatrix::from_integers(&[&[1, -1], &[-1, 1]]).unwrap();
        assert_eq!(b.ldl().unwrap().pivots(), &[q(1, 1), q(0, 1)]);
        let z = RationalMatrix::from_integers(&[&[0, 0], &[0, 2]]).unwrap();
        assert!(z.is_psd());
    }

    #[test]
    fn ldl_rejects_indefinite() {
        let a = RationalMatrix::from_integers(&[&[1, 2], &[2, 1]]).unwrap();
        assert!(matches!(a.ldl(), Err(LdlFailure::NegativePivot { index: 1, .. })));
        let b = RationalMatrix::from_integers(&[&[0, 1], &[1, 5]]).unwrap();
        assert_eq!(b.ldl(), Err(LdlFailure::ZeroPivotWithCoupling { index: 0, row: 1 }));
        let c = RationalMatrix::from_integers(&[&[1, 2], &[3, 1]]).unwrap();
        assert_eq!(c.ldl(), Err(LdlFailure::NotSymmetric));
    }

    #[test]
    fn clipping_small_negative_pivots() {
        let mut a = RationalMatrix::from_integers(&[&[1, 1], &[1, 1]]).unwrap();
        a.set(1, 1, q(999_999, 1_000_000));
        assert!(!a.is_psd());
        let (f, clipped) = a.ldl_clipped(&q(1, 1000)).unwrap();
        assert!(clipped);
        let fixed = f.reconstruct();
        assert!(fixed.is_psd());
        assert_eq!(fixed, RationalMatrix::from_integers(&[&[1, 1], &[1, 1]]).unwrap());
    }

    #[test]
    fn bounded_rounding() {
        assert_eq!(round_bounded(0.25, 10), Some(q(1, 4)));
        assert_eq!(round_bounded(-1.0 / 12.0 + 1e-9, 100), Some(q(-1, 12)));
        assert_eq!(round_bounded(core::f64::consts::PI, 1000), Some(q(355, 113)));
        assert_eq!(round_bounded(core::f64::consts::PI, 7), Some(q(22, 7)));
        assert_eq!(round_bounded(0.4999, 1), Some(q(0, 1)));
        assert_eq!(round_bounded(f64::NAN, 10), None);
    }

    #[test]
    fn least_norm() {
        let a = vec![vec![q(1, 1), q(1, 1)]];
        let x = least_norm_solution(&a, &[q(2, 1)], 2).unwrap();
        assert_eq!(x, vec![q(1, 1), q(1, 1)]);
        let dependent = vec![vec![q(1, 1), q(0, 1)], vec![q(2, 1), q(0, 1)]];
        assert!(least_norm_solution(&dependent, &[q(1, 1), q(2, 1)], 2).is_some());
        assert!(least_norm_solution(&dependent, &[q(1, 1), q(3, 1)], 2).is_none());
    }
}
