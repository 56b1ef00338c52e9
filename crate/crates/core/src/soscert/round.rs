//! Turning approximate Gram matrices and dual vectors into exact
//! certificates.
//!
//! Entries are rounded to fractions with bounded denominators, trying the
//! bounds `1, 10, 100, ...` up to the configured maximum. When the numeric
//! solution was feasible to within `projection_tolerance`, the rounded point
//! is moved exactly back onto the affine constraint space by a least-norm
//! correction; a grossly wrong input is never repaired that way. Slightly
//! negative pivots are clipped once, followed by another projection.
//!
//! Solutions on the boundary of the cone lose exact PSD-ness under entrywise
//! rounding. Each dense block is therefore first restricted to a rational
//! approximation of its numerical range, `Q = V Q' V^T`, and only `Q'` is
//! rounded and projected.

use super::certificate::{CertificateBlock, CertificateError, Gram, InfeasibilityCertificate, SosCertificate};
use super::exact::{least_norm_solution, round_bounded, RationalMatrix};
use super::ipm::{NumericBlock, NumericSolution};
use super::linalg::Mat;
use super::sdp::{BlockKind, SdpProblem};
use crate::algebra::Rational;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundingOptions {
    pub max_denominator: u64,
    /// Largest numeric residual for which exact projection is attempted.
    pub projection_tolerance: f64,
    /// Negative pivots down to `-clip_tolerance` are clipped to zero.
    pub clip_tolerance: f64,
    /// Eigenvalues below this (relative to the largest diagonal entry) are
    /// treated as exact zeros.
    pub kernel_tolerance: f64,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        Self { max_denominator: 1_000_000, projection_tolerance: 1e-6, clip_tolerance: 1e-6, kernel_tolerance: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RoundingFailure {
    #[error("numeric solution does not match the problem shape")]
    Shape,
    #[error("numeric solution contains a non-finite entry")]
    NonFinite,
    #[error("rounded point cannot be projected onto the constraints")]
    Inconsistent,
    #[error("with denominators up to {bound}: {error}")]
    Rejected { bound: u64, error: CertificateError },
}

/// Denominator bounds `1, 10, ..., max`.
pub fn denominator_schedule(max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut b = 1u64;
    while b < max {
        out.push(b);
        b = b.saturating_mul(10);
    }
    out.push(max.max(1));
    out
}

/// Rationalizes `num` against `problem` and verifies the result exactly.
pub fn round_and_verify(
    problem: &SdpProblem,
    num: &NumericSolution,
    options: &RoundingOptions,
) -> Result<SosCertificate, RoundingFailure> {
    if num.blocks.len() != problem.blocks.len()
        || num.blocks.iter().zip(&problem.blocks).any(|(n, b)| n.size() != b.size())
    {
        return Err(RoundingFailure::Shape);
    }
    if num.blocks.iter().any(|b| !block_is_finite(b)) {
        return Err(RoundingFailure::NonFinite);
    }
    let f = problem.target();
    let project = num.residual_against(problem) <= options.projection_tolerance;
    let clip = Rational::from_float(options.clip_tolerance).unwrap_or_else(Rational::zero);
    let mut last = RoundingFailure::Inconsistent;
    for bound in denominator_schedule(options.max_denominator) {
        // Restricting to the numerical face first keeps exact zeros exact;
        // the full space is the fallback when the face guess is wrong.
        let mut tried_full = false;
        for reduce in [true, false] {
            let faces: Vec<Face> = problem
                .blocks
                .iter()
                .zip(&num.blocks)
                .map(|(b, nb)| Face::of(b.kind, nb, if reduce { options.kernel_tolerance } else { -1.0 }, bound))
                .collect::<Option<_>>()
                .ok_or(RoundingFailure::NonFinite)?;
            let full = faces.iter().all(Face::is_full);
            if full && tried_full {
                continue;
            }
            tried_full |= full;
            let mut reduced: Vec<Reduced> = faces
                .iter()
                .zip(&num.blocks)
                .map(|(face, nb)| face.round(nb, bound))
                .collect::<Option<_>>()
                .ok_or(RoundingFailure::NonFinite)?;
            if project && !project_onto_constraints(problem, &faces, &mut reduced) {
                last = RoundingFailure::Inconsistent;
                continue;
            }
            if clip_pivots(&mut reduced, &clip) && project && !project_onto_constraints(problem, &faces, &mut reduced) {
                last = RoundingFailure::Inconsistent;
                continue;
            }
            let certificate = SosCertificate {
                blocks: problem
                    .blocks
                    .iter()
                    .zip(faces.iter().zip(&reduced))
                    .map(|(b, (face, r))| CertificateBlock { graphs: b.graphs.clone(), gram: face.expand(r) })
                    .collect(),
            };
            match certificate.verify(&f) {
                Ok(()) => return Ok(certificate),
                Err(error) => last = RoundingFailure::Rejected { bound, error },
            }
        }
    }
    Err(last)
}

fn block_is_finite(b: &NumericBlock) -> bool {
    match b {
        NumericBlock::Dense { values, .. } => values.iter().all(|x| x.is_finite()),
        NumericBlock::Diagonal(d) => d.iter().all(|x| x.is_finite()),
    }
}

/// The subspace a rounded Gram block is confined to.
enum Face {
    /// Entries outside `support` are exactly zero.
    Diagonal { support: Vec<bool> },
    /// `Q = V Q' V^T` with `v` holding the rows of `V`. Row `free[j]` of `V`
    /// is the unit vector `e_j`, so `Q'` is read off `Q` directly.
    Dense { v: Vec<Vec<Rational>>, free: Vec<usize> },
}

/// Coordinates of a block on its face.
enum Reduced {
    Diagonal(Vec<Rational>),
    Dense(RationalMatrix),
}

impl Face {
    /// A negative `tol` gives the whole cone.
    fn of(kind: BlockKind, nb: &NumericBlock, tol: f64, bound: u64) -> Option<Self> {
        let n = nb.size();
        let scale = (0..n).fold(1.0f64, |m, i| m.max(nb.get(i, i).abs()));
        match kind {
            BlockKind::Diagonal => {
                Some(Self::Diagonal { support: (0..n).map(|i| nb.get(i, i) > tol * scale).collect() })
            }
            BlockKind::Dense => {
                let mut m = Mat::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        *m.at_mut(i, j) = nb.get(i, j);
                    }
                }
                m.symmetrize();
                let (values, vectors) = m.eigen();
                let kernel: Vec<Vec<f64>> = values
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l <= tol * scale)
                    .map(|(c, _)| (0..n).map(|r| vectors.at(r, c)).collect())
                    .collect();
                let (rref, pivots) = numeric_rref(kernel);
                let mut v = vec![vec![Rational::zero(); n - pivots.len()]; n];
                let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
                for (j, &c) in free.iter().enumerate() {
                    v[c][j] = Rational::one();
                    for (row, &p) in rref.iter().zip(&pivots) {
                        v[p][j] = -round_bounded(row[c], bound)?;
                    }
                }
                Some(Self::Dense { v, free })
            }
        }
    }

    fn is_full(&self) -> bool {
        match self {
            Self::Diagonal { support } => support.iter().all(|&s| s),
            Self::Dense { v, free } => free.len() == v.len(),
        }
    }

    fn round(&self, nb: &NumericBlock, bound: u64) -> Option<Reduced> {
        match self {
            Self::Diagonal { support } => Some(Reduced::Diagonal(
                support
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| if s { round_bounded(nb.get(i, i), bound) } else { Some(Rational::zero()) })
                    .collect::<Option<_>>()?,
            )),
            Self::Dense { free, .. } => {
                let r = free.len();
                let mut m = RationalMatrix::zeros(r);
                for p in 0..r {
                    for q in p..r {
                        let (i, j) = (free[p], free[q]);
                        let x = round_bounded(0.5 * (nb.get(i, j) + nb.get(j, i)), bound)?;
                        m.set(q, p, x.clone());
                        m.set(p, q, x);
                    }
                }
                Some(Reduced::Dense(m))
            }
        }
    }

    fn expand(&self, reduced: &Reduced) -> Gram {
        match (self, reduced) {
            (Self::Dense { v, free }, Reduced::Dense(q)) => {
                let n = v.len();
                let r = free.len();
                // V Q' first, then (V Q') V^T.
                let vq: Vec<Vec<Rational>> = v
                    .iter()
                    .map(|row| (0..r).map(|k| dot(row, q.rows().nth(k).unwrap_or(&[]))).collect())
                    .collect();
                let mut m = RationalMatrix::zeros(n);
                for i in 0..n {
                    for j in i..n {
                        let x = dot(&vq[i], &v[j]);
                        m.set(j, i, x.clone());
                        m.set(i, j, x);
                    }
                }
                Gram::Dense(m)
            }
            (_, Reduced::Diagonal(d)) => Gram::Diagonal(d.clone()),
            (Self::Diagonal { .. }, Reduced::Dense(_)) => unreachable!("face and coordinates disagree"),
        }
    }

    /// Number of coordinates, and the coefficient of each in `Q[i][j]`.
    fn coordinates(&self) -> usize {
        match self {
            Self::Diagonal { support } => support.len(),
            Self::Dense { free, .. } => free.len() * (free.len() + 1) / 2,
        }
    }

    fn add_entry(&self, i: usize, j: usize, weight: &Rational, row: &mut [Rational]) {
        match self {
            Self::Diagonal { support } => {
                if i == j && support[i] {
                    row[i] += weight;
                }
            }
            Self::Dense { v, free } => {
                let r = free.len();
                let mut k = 0;
                for p in 0..r {
                    for q in p..r {
                        let c = if p == q {
                            &v[i][p] * &v[j][p]
                        } else {
                            &v[i][p] * &v[j][q] + &v[i][q] * &v[j][p]
                        };
                        if !c.is_zero() {
                            row[k] += c * weight;
                        }
                        k += 1;
                    }
                }
            }
        }
    }
}

impl Reduced {
    fn add(&mut self, delta: &[Rational]) {
        match self {
            Self::Diagonal(d) => {
                for (x, y) in d.iter_mut().zip(delta) {
                    *x += y;
                }
            }
            Self::Dense(m) => {
                let r = m.size();
                let mut k = 0;
                for p in 0..r {
                    for q in p..r {
                        if !delta[k].is_zero() {
                            let x = m.get(p, q) + &delta[k];
                            m.set(q, p, x.clone());
                            m.set(p, q, x);
                        }
                        k += 1;
                    }
                }
            }
        }
    }
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
}

/// Reduced row echelon form of the rows of `k` with complete pivoting, and
/// the pivot column of each row. The remaining columns are where the kernel
/// is weakest, which keeps the range parametrization well conditioned.
fn numeric_rref(mut k: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<usize>) {
    let cols = k.first().map_or(0, Vec::len);
    let mut pivots: Vec<usize> = Vec::new();
    for row in 0..k.len() {
        let best = (row..k.len())
            .flat_map(|r| (0..cols).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .max_by(|&(r1, c1), &(r2, c2)| k[r1][c1].abs().total_cmp(&k[r2][c2].abs()));
        let Some((p, col)) = best else { break };
        if k[p][col].abs() < 1e-8 {
            break;
        }
        k.swap(row, p);
        let inv = 1.0 / k[row][col];
        for x in k[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..k.len() {
            if r != row {
                let factor = k[r][col];
                for c in 0..cols {
                    k[r][c] -= factor * k[row][c];
                }
            }
        }
        pivots.push(col);
    }
    k.truncate(pivots.len());
    (k, pivots)
}

/// Least-norm exact correction of the face coordinates making every
/// constraint hold. Returns false if the constraints cannot be met at all.
fn project_onto_constraints(problem: &SdpProblem, faces: &[Face], reduced: &mut [Reduced]) -> bool {
    let grams: Vec<Gram> = faces.iter().zip(reduced.iter()).map(|(f, r)| f.expand(r)).collect();
    let values = problem.evaluate(|b, r, c| grams[b].get(r, c));
    let residual: Vec<Rational> = problem.rhs().iter().zip(&values).map(|(b, v)| b - v).collect();
    if residual.iter().all(Zero::is_zero) {
        return true;
    }
    let offsets: Vec<usize> = faces
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.coordinates();
            Some(o)
        })
        .collect();
    let total = faces.iter().map(Face::coordinates).sum();
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let rows: Vec<Vec<Rational>> = problem
        .constraints
        .iter()
        .map(|c| {
            let mut row = vec![Rational::zero(); total];
            for e in &c.entries {
                let face = &faces[e.block];
                let slot = &mut row[offsets[e.block]..offsets[e.block] + face.coordinates()];
                face.add_entry(e.row, e.col, if e.row == e.col { &one } else { &two }, slot);
            }
            row
        })
        .collect();
    let Some(delta) = least_norm_solution(&rows, &residual, total) else { return false };
    for ((r, f), &o) in reduced.iter_mut().zip(faces).zip(&offsets) {
        r.add(&delta[o..o + f.coordinates()]);
    }
    true
}

/// Replaces blocks with slightly negative pivots by their clipped
/// factorization. Returns whether anything changed.
fn clip_pivots(reduced: &mut [Reduced], tol: &Rational) -> bool {
    let mut changed = false;
    for g in reduced.iter_mut() {
        match g {
            Reduced::Diagonal(d) => {
                for x in d.iter_mut() {
                    if x.is_negative() && -x.clone() <= *tol {
                        *x = Rational::zero();
                        changed = true;
                    }
                }
            }
            Reduced::Dense(m) => {
                if let Ok((ldl, true)) = m.ldl_clipped(tol) {
                    *m = ldl.reconstruct();
                    changed = true;
                }
            }
        }
    }
    changed
}

/// Tries to turn the solver's dual vector into an exact
/// [`InfeasibilityCertificate`].
pub fn round_dual(
    problem: &SdpProblem,
    num: &NumericSolution,
    max_denominator: u64,
) -> Option<InfeasibilityCertificate> {
    if num.dual.len() != problem.constraints.len() {
        return None;
    }
    let scale = num.dual.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    let f = problem.target();
    // The solver maximizes <b, y> subject to C - sum y_i A_i PSD; a
    // direction of unbounded improvement is the negative of the witness.
    for bound in denominator_schedule(max_denominator) {
        let mut values = BTreeMap::new();
        for (c, &y) in problem.constraints.iter().zip(&num.dual) {
            let v = round_bounded(-y / scale, bound)?;
            if !v.is_zero() {
                values.insert(c.graph.clone(), v);
            }
        }
        let cert = InfeasibilityCertificate { values };
        if cert.verify(problem, &f).is_ok() {
            return Some(cert);
        }
    }
    None
}
