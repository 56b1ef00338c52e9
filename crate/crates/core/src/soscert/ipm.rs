//! Primal-dual interior-point method for the Gram-matrix problems.
//!
//! Solves
//!
//! ```text
//! min  rho * sum_i (p_i + n_i)
//! s.t. <A_i, Q> + p_i - n_i = b_i,   Q PSD,  p, n >= 0
//! ```
//!
//! with the HKM search direction and a Mehrotra-style choice of centering.
//! The slacks `p`, `n` make the start strictly feasible and keep the problem
//! bounded when no Gram matrix exists; the certificate problem is feasible
//! iff the optimum has `p = n = 0`. Nothing else is optimized, so the
//! iterates approach the analytic center of the whole feasible set. That
//! point is interior whenever an interior exists, and otherwise lies in the
//! relative interior of the smallest face, which is what the exact rounding
//! wants. (Minimizing a trace instead would pull the solution to a vertex,
//! often an irrational one.)

use super::linalg::{spd_solve, Mat};
use super::sdp::{BlockKind, SdpProblem};
use alloc::vec;
use alloc::vec::Vec;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Weight of the residual slacks.
    pub penalty: f64,
    /// Stop once the duality measure `<X, S> / N` drops below this.
    pub gap_tolerance: f64,
    /// `max_i |<A_i, Q> - b_i|` below which the solution counts as feasible.
    pub feasibility_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 200, penalty: 1e6, gap_tolerance: 1e-10, feasibility_tolerance: 1e-8 }
    }
}

/// An approximate Gram matrix for one block.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericBlock {
    /// Row-major `n x n`.
    Dense { n: usize, values: Vec<f64> },
    Diagonal(Vec<f64>),
}

impl NumericBlock {
    pub fn size(&self) -> usize {
        match self {
            Self::Dense { n, .. } => *n,
            Self::Diagonal(d) => d.len(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            Self::Dense { n, values } => values[i * n + j],
            Self::Diagonal(d) if i == j => d[i],
            Self::Diagonal(_) => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    /// `Q` satisfies the constraints up to the feasibility tolerance.
    Feasible,
    /// Converged with the residual bounded away from zero.
    Infeasible,
    /// Ran out of iterations.
    NotConverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericSolution {
    pub status: SolveStatus,
    pub blocks: Vec<NumericBlock>,
    /// Dual multipliers, one per constraint.
    pub dual: Vec<f64>,
    /// `max_i |<A_i, Q> - b_i|`.
    pub residual: f64,
    pub iterations: usize,
}

impl NumericSolution {
    /// `max_i |<A_i, Q> - b_i|` for these blocks against `problem`.
    pub fn residual_against(&self, problem: &SdpProblem) -> f64 {
        primal_residual(problem, &self.blocks)
    }
}

pub(crate) fn primal_residual(problem: &SdpProblem, blocks: &[NumericBlock]) -> f64 {
    problem
        .constraints
        .iter()
        .map(|c| {
            let lhs: f64 = c
                .entries
                .iter()
                .map(|e| {
                    let v = blocks[e.block].get(e.row, e.col);
                    if e.row == e.col { v } else { 2.0 * v }
                })
                .sum();
            (lhs - c.rhs.to_f64().unwrap_or(f64::NAN)).abs()
        })
        .fold(0.0, f64::max)
}

/// Internal block: dense, or diagonal stored as a vector.
#[derive(Debug, Clone)]
enum Blk {
    Dense(Mat),
    Diag(Vec<f64>),
}

impl Blk {
    fn dim(&self) -> usize {
        match self {
            Self::Dense(m) => m.n,
            Self::Diag(d) => d.len(),
        }
    }

    fn dot(&self, other: &Self) -> f64 {
        match (self, other) {
            (Self::Dense(a), Self::Dense(b)) => a.dot(b),
            (Self::Diag(a), Self::Diag(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            _ => unreachable!("block kinds agree"),
        }
    }

    fn add_scaled(&mut self, alpha: f64, other: &Self) {
        match (self, other) {
            (Self::Dense(a), Self::Dense(b)) => a.add_scaled(alpha, b),
            (Self::Diag(a), Self::Diag(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += alpha * y;
                }
            }
            _ => unreachable!("block kinds agree"),
        }
    }

    fn zeros_like(&self) -> Self {
        match self {
            Self::Dense(m) => Self::Dense(Mat::zeros(m.n)),
            Self::Diag(d) => Self::Diag(vec![0.0; d.len()]),
        }
    }

    fn inverse(&self) -> Option<Self> {
        match self {
            Self::Dense(m) => m.spd_inverse().map(Self::Dense),
            Self::Diag(d) => d.iter().all(|&x| x > 0.0).then(|| Self::Diag(d.iter().map(|x| 1.0 / x).collect())),
        }
    }

    /// Largest `alpha <= 1 / fraction` keeping `self + alpha * dir` positive
    /// definite, scaled by `fraction`.
    fn step(&self, dir: &Self, fraction: f64) -> f64 {
        let worst = match (self, dir) {
            (Self::Dense(x), Self::Dense(d)) => {
                let Some(l) = x.cholesky() else { return 0.0 };
                let li = l.lower_inverse();
                let mut t = li.mul(d).mul(&li.transpose());
                t.symmetrize();
                t.eigen().0.first().copied().unwrap_or(0.0)
            }
            (Self::Diag(x), Self::Diag(d)) => {
                x.iter().zip(d).map(|(x, d)| d / x).fold(f64::INFINITY, f64::min)
            }
            _ => unreachable!("block kinds agree"),
        };
        if worst >= 0.0 { 1.0 } else { (fraction / -worst).min(1.0) }
    }
}

/// Sparse symmetric constraint matrix restricted to one block.
#[derive(Debug, Clone)]
struct Part {
    block: usize,
    /// `(row, col, value)` with `row <= col`.
    entries: Vec<(usize, usize, f64)>,
}

struct Model {
    blocks: Vec<Blk>,
    c: Vec<Blk>,
    /// Per constraint, its parts in increasing block order.
    a: Vec<Vec<Part>>,
    b: Vec<f64>,
    class_blocks: usize,
}

impl Model {
    fn new(problem: &SdpProblem, penalty: f64) -> Self {
        let m = problem.constraints.len();
        let mut blocks: Vec<Blk> = problem
            .blocks
            .iter()
            .map(|b| match b.kind {
                BlockKind::Dense => Blk::Dense(Mat::identity(b.size())),
                BlockKind::Diagonal => Blk::Diag(vec![1.0; b.size()]),
            })
            .collect();
        let class_blocks = blocks.len();
        let mut c: Vec<Blk> = blocks
            .iter()
            .map(|b| match b {
                Blk::Dense(m) => Blk::Dense(Mat::zeros(m.n)),
                Blk::Diag(d) => Blk::Diag(vec![0.0; d.len()]),
            })
            .collect();
        // Slack block: p_i at index i, n_i at index m + i.
        blocks.push(Blk::Diag(vec![penalty; 2 * m]));
        c.push(Blk::Diag(vec![penalty; 2 * m]));
        let a = problem
            .constraints
            .iter()
            .enumerate()
            .map(|(i, con)| {
                let mut parts: Vec<Part> = Vec::new();
                for e in &con.entries {
                    match parts.last_mut() {
                        Some(p) if p.block == e.block => p.entries.push((e.row, e.col, 1.0)),
                        _ => parts.push(Part { block: e.block, entries: vec![(e.row, e.col, 1.0)] }),
                    }
                }
                parts.push(Part { block: class_blocks, entries: vec![(i, i, 1.0), (m + i, m + i, -1.0)] });
                parts
            })
            .collect();
        let b = problem.constraints.iter().map(|c| c.rhs.to_f64().unwrap_or(f64::NAN)).collect();
        Self { blocks, c, a, b, class_blocks }
    }

    fn apply(&self, x: &[Blk]) -> Vec<f64> {
        self.a
            .iter()
            .map(|parts| {
                parts
                    .iter()
                    .map(|p| {
                        p.entries
                            .iter()
                            .map(|&(r, c, v)| match &x[p.block] {
                                Blk::Dense(m) if r == c => v * m.at(r, r),
                                Blk::Dense(m) => v * (m.at(r, c) + m.at(c, r)),
                                Blk::Diag(d) if r == c => v * d[r],
                                Blk::Diag(_) => 0.0,
                            })
                            .sum::<f64>()
                    })
                    .sum()
            })
            .collect()
    }

    /// `sum_i y_i A_i`.
    fn adjoint(&self, y: &[f64]) -> Vec<Blk> {
        let mut out: Vec<Blk> = self.blocks.iter().map(Blk::zeros_like).collect();
        for (parts, &yi) in self.a.iter().zip(y) {
            for p in parts {
                for &(r, c, v) in &p.entries {
                    match &mut out[p.block] {
                        Blk::Dense(m) => {
                            *m.at_mut(r, c) += yi * v;
                            if r != c {
                                *m.at_mut(c, r) += yi * v;
                            }
                        }
                        Blk::Diag(d) => d[r] += yi * v,
                    }
                }
            }
        }
        out
    }

    fn dense_part(&self, p: &Part, n: usize) -> Mat {
        let mut m = Mat::zeros(n);
        for &(r, c, v) in &p.entries {
            *m.at_mut(r, c) += v;
            if r != c {
                *m.at_mut(c, r) += v;
            }
        }
        m
    }

    /// Schur complement `M_ij = <A_i, X A_j S^-1>`.
    fn schur(&self, x: &[Blk], s_inv: &[Blk]) -> Mat {
        let m = self.a.len();
        let mut out = Mat::zeros(m);
        // Products X A_j S^-1, per block, for every constraint touching it.
        let mut touching: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.blocks.len()];
        for (j, parts) in self.a.iter().enumerate() {
            for (k, p) in parts.iter().enumerate() {
                touching[p.block].push((j, k));
            }
        }
        for (blk, list) in touching.iter().enumerate() {
            match (&x[blk], &s_inv[blk]) {
                (Blk::Dense(xm), Blk::Dense(si)) => {
                    let g: Vec<Mat> = list
                        .iter()
                        .map(|&(j, k)| xm.mul(&self.dense_part(&self.a[j][k], xm.n)).mul(si))
                        .collect();
                    for (ii, &(i, ki)) in list.iter().enumerate() {
                        let ai = self.dense_part(&self.a[i][ki], xm.n);
                        for (jj, &(j, _)) in list.iter().enumerate().skip(ii) {
                            let v = ai.dot(&g[jj]);
                            out.a[i * m + j] += v;
                            if i != j {
                                out.a[j * m + i] += v;
                            }
                        }
                    }
                }
                (Blk::Diag(xd), Blk::Diag(sd)) => {
                    let diag_of = |i: usize, k: usize| -> Vec<(usize, f64)> {
                        self.a[i][k].entries.iter().filter(|e| e.0 == e.1).map(|&(r, _, v)| (r, v)).collect()
                    };
                    let rows: Vec<Vec<(usize, f64)>> = list.iter().map(|&(i, k)| diag_of(i, k)).collect();
                    let w: Vec<f64> = xd.iter().zip(sd).map(|(x, s)| x * s).collect();
                    let mut dense = vec![0.0; xd.len()];
                    for (ii, &(i, _)) in list.iter().enumerate() {
                        for &(r, v) in &rows[ii] {
                            dense[r] += v * w[r];
                        }
                        for (jj, &(j, _)) in list.iter().enumerate().skip(ii) {
                            let v: f64 = rows[jj].iter().map(|&(r, v)| v * dense[r]).sum();
                            out.a[i * m + j] += v;
                            if i != j {
                                out.a[j * m + i] += v;
                            }
                        }
                        for &(r, _) in &rows[ii] {
                            dense[r] = 0.0;
                        }
                    }
                }
                _ => unreachable!("block kinds agree"),
            }
        }
        out
    }
}

fn mul3(x: &Blk, d: &Blk, s_inv: &Blk) -> Blk {
    match (x, d, s_inv) {
        (Blk::Dense(x), Blk::Dense(d), Blk::Dense(si)) => {
            let mut p = x.mul(d).mul(si);
            p.symmetrize();
            Blk::Dense(p)
        }
        (Blk::Diag(x), Blk::Diag(d), Blk::Diag(si)) => {
            Blk::Diag(x.iter().zip(d).zip(si).map(|((x, d), s)| x * d * s).collect())
        }
        _ => unreachable!("block kinds agree"),
    }
}

fn inner(x: &[Blk], s: &[Blk]) -> f64 {
    x.iter().zip(s).map(|(a, b)| a.dot(b)).sum()
}

/// Runs the interior-point method on `problem`.
pub fn solve_embedded(problem: &SdpProblem, options: &SolverOptions) -> NumericSolution {
    let mut model = Model::new(problem, options.penalty);
    let m = model.a.len();
    let dim: usize = model.blocks.iter().map(Blk::dim).sum();
    // Strictly feasible start: Q = I, slacks absorbing the residual.
    let r: Vec<f64> = {
        let ax = model.apply(&model.blocks);
        model.b.iter().zip(&ax).map(|(b, a)| b - a).collect()
    };
    if let Blk::Diag(sl) = &mut model.blocks[model.class_blocks] {
        for i in 0..m {
            sl[i] = 1.0 + r[i].max(0.0);
            sl[m + i] = sl[i] - r[i];
        }
    }
    let mut x = model.blocks.clone();
    // Dual start: identity on the Gram blocks, the penalty on the slacks.
    let mut s = model.blocks.clone();
    s[model.class_blocks] = model.c[model.class_blocks].clone();
    let mut y = vec![0.0; m];
    let mut iterations = 0;
    let mut converged = false;
    let mut stalled = 0;
    while iterations < options.max_iterations {
        let mu = inner(&x, &s) / dim as f64;
        let ax = model.apply(&x);
        let rp: Vec<f64> = model.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let aty = model.adjoint(&y);
        let rd: Vec<Blk> = model
            .c
            .iter()
            .zip(&s)
            .zip(&aty)
            .map(|((c, s), a)| {
                let mut r = c.clone();
                r.add_scaled(-1.0, s);
                r.add_scaled(-1.0, a);
                r
            })
            .collect();
        let rp_norm = rp.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if mu < options.gap_tolerance && rp_norm < 1e-11 {
            converged = true;
            break;
        }
        let Some(s_inv): Option<Vec<Blk>> = s.iter().map(Blk::inverse).collect() else { break };
        let schur = model.schur(&x, &s_inv);
        let direction = |sigma: f64| {
            // dX = sigma mu S^-1 - X - X dS S^-1 with dS = Rd - A^T dy.
            let base: Vec<Blk> = x
                .iter()
                .zip(&s_inv)
                .map(|(xb, si)| {
                    let mut t = si.clone();
                    match &mut t {
                        Blk::Dense(m) => m.a.iter_mut().for_each(|v| *v *= sigma * mu),
                        Blk::Diag(d) => d.iter_mut().for_each(|v| *v *= sigma * mu),
                    }
                    t.add_scaled(-1.0, xb);
                    t
                })
                .collect();
            let t: Vec<Blk> = base
                .iter()
                .zip(x.iter().zip(&s_inv).zip(&rd))
                .map(|(b, ((xb, si), rdb))| {
                    let mut t = b.clone();
                    t.add_scaled(-1.0, &mul3(xb, rdb, si));
                    t
                })
                .collect();
            let at = model.apply(&t);
            let h: Vec<f64> = rp.iter().zip(&at).map(|(r, a)| r - a).collect();
            let dy = spd_solve(&schur, &h);
            let mut ds = rd.clone();
            for (d, a) in ds.iter_mut().zip(model.adjoint(&dy)) {
                d.add_scaled(-1.0, &a);
            }
            let mut dx = base;
            for ((d, xb), (dsb, si)) in dx.iter_mut().zip(&x).zip(ds.iter().zip(&s_inv)) {
                d.add_scaled(-1.0, &mul3(xb, dsb, si));
            }
            (dx, dy, ds)
        };
        let steps = |dx: &[Blk], ds: &[Blk], fraction: f64| {
            let ap = x.iter().zip(dx).map(|(b, d)| b.step(d, fraction)).fold(1.0, f64::min);
            let ad = s.iter().zip(ds).map(|(b, d)| b.step(d, fraction)).fold(1.0, f64::min);
            (ap, ad)
        };
        let (dx, _, ds) = direction(0.0);
        let (ap, ad) = steps(&dx, &ds, 1.0);
        let mut xa = x.clone();
        let mut sa = s.clone();
        for (b, d) in xa.iter_mut().zip(&dx) {
            b.add_scaled(ap, d);
        }
        for (b, d) in sa.iter_mut().zip(&ds) {
            b.add_scaled(ad, d);
        }
        let mu_aff = inner(&xa, &sa) / dim as f64;
        let ratio = (mu_aff / mu).clamp(0.0, 1.0);
        let sigma = ratio * ratio * ratio;
        let (dx, dy, ds) = direction(sigma);
        let (ap, ad) = steps(&dx, &ds, 0.95);
        for (b, d) in x.iter_mut().zip(&dx) {
            b.add_scaled(ap, d);
        }
        for (b, d) in s.iter_mut().zip(&ds) {
            b.add_scaled(ad, d);
        }
        for (yi, di) in y.iter_mut().zip(&dy) {
            *yi += ad * di;
        }
        iterations += 1;
        // Numerically singular iterates make no further progress.
        stalled = if ap < 1e-10 && ad < 1e-10 || ap < 1e-10 && mu < 1e3 * options.gap_tolerance { stalled + 1 } else { 0 };
        if stalled >= 3 {
            break;
        }
    }
    let blocks: Vec<NumericBlock> = x[..model.class_blocks]
        .iter()
        .map(|b| match b {
            Blk::Dense(m) => NumericBlock::Dense { n: m.n, values: m.a.clone() },
            Blk::Diag(d) => NumericBlock::Diagonal(d.clone()),
        })
        .collect();
    let residual = primal_residual(problem, &blocks);
    let status = if residual < options.feasibility_tolerance {
        SolveStatus::Feasible
    } else if converged {
        SolveStatus::Infeasible
    } else {
        SolveStatus::NotConverged
    };
    NumericSolution { status, blocks, dual: y, residual, iterations }
}
