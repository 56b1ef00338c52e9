//! Small dense symmetric matrices in `f64`.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Mat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.at(i, k);
                if x == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += x * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.at(i, j);
            }
        }
        out
    }

    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (self.at(i, j) + self.at(j, i));
                *self.at_mut(i, j) = m;
                *self.at_mut(j, i) = m;
            }
        }
    }

    pub fn add_scaled(&mut self, alpha: f64, other: &Self) {
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += alpha * y;
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    /// Lower Cholesky factor, or `None` if not numerically positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self.at(j, j);
            for k in 0..j {
                d -= l.at(j, k) * l.at(j, k);
            }
            if !(d > 0.0) {
                return None;
            }
            let d = libm::sqrt(d);
            *l.at_mut(j, j) = d;
            for i in j + 1..n {
                let mut s = self.at(i, j);
                for k in 0..j {
                    s -= l.at(i, k) * l.at(j, k);
                }
                *l.at_mut(i, j) = s / d;
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> Self {
        let n = self.n;
        let mut inv = Self::zeros(n);
        for j in 0..n {
            *inv.at_mut(j, j) = 1.0 / self.at(j, j);
            for i in j + 1..n {
                let mut s = 0.0;
                for k in j..i {
                    s -= self.at(i, k) * inv.at(k, j);
                }
                *inv.at_mut(i, j) = s / self.at(i, i);
            }
        }
        inv
    }

    /// Inverse of a positive definite matrix.
    pub fn spd_inverse(&self) -> Option<Self> {
        let li = self.cholesky()?.lower_inverse();
        Some(li.transpose().mul(&li))
    }

    /// Eigenvalues (ascending) and eigenvectors (as columns) by cyclic Jacobi.
    pub fn eigen(&self) -> (Vec<f64>, Self) {
        let n = self.n;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        for _sweep in 0..100 {
            let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a.at(i, j) * a.at(i, j))
                .sum();
            if off < 1e-30 * (1.0 + a.dot(&a)) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a.at(p, q);
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.at(k, p);
                        let akq = a.at(k, q);
                        *a.at_mut(k, p) = c * akp - s * akq;
                        *a.at_mut(k, q) = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a.at(p, k);
                        let aqk = a.at(q, k);
                        *a.at_mut(p, k) = c * apk - s * aqk;
                        *a.at_mut(q, k) = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v.at(k, p);
                        let vkq = v.at(k, q);
                        *v.at_mut(k, p) = c * vkp - s * vkq;
                        *v.at_mut(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a.at(i, i).total_cmp(&a.at(j, j)));
        let values = order.iter().map(|&i| a.at(i, i)).collect();
        let mut vecs = Self::zeros(n);
        for (new, &old) in order.iter().enumerate() {
            for k in 0..n {
                *vecs.at_mut(k, new) = v.at(k, old);
            }
        }
        (values, vecs)
    }
}

/// Solves `m x = b` for symmetric positive definite `m`, regularizing the
/// diagonal if the factorization breaks down.
pub(crate) fn spd_solve(m: &Mat, b: &[f64]) -> Vec<f64> {
    let n = m.n;
    let scale = (0..n).fold(0.0f64, |s, i| s.max(m.at(i, i).abs())).max(1e-300);
    let mut shift = 0.0;
    let l = loop {
        let mut shifted = m.clone();
        for i in 0..n {
            *shifted.at_mut(i, i) += shift;
        }
        if let Some(l) = shifted.cholesky() {
            break l;
        }
        shift = if shift == 0.0 { 1e-14 * scale } else { shift * 10.0 };
    };
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l.at(i, k) * y[k];
        }
        y[i] /= l.at(i, i);
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l.at(k, i) * y[k];
        }
        y[i] /= l.at(i, i);
    }
    y
}
