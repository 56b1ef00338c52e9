//! Exact sum-of-squares certificates in Gram form and exact infeasibility
//! witnesses for the Gram problem.

use super::exact::{LdlFailure, RationalMatrix};
use super::sdp::{BlockKind, SdpProblem};
use crate::algebra::{glue, GraphCombination, Rational};
use crate::graph::{canonicalize, CanonicalGraph};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gram {
    Dense(RationalMatrix),
    Diagonal(Vec<Rational>),
}

impl Gram {
    pub fn size(&self) -> usize {
        match self {
            Self::Dense(m) => m.size(),
            Self::Diagonal(d) => d.len(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self {
            Self::Dense(m) => m.get(i, j).clone(),
            Self::Diagonal(d) if i == j => d[i].clone(),
            Self::Diagonal(_) => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Dense(m) => m.is_zero(),
            Self::Diagonal(d) => d.iter().all(Zero::is_zero),
        }
    }

    fn check_psd(&self) -> Result<(), LdlFailure> {
        match self {
            Self::Dense(m) => m.ldl().map(|_| ()),
            Self::Diagonal(d) => match d.iter().position(Signed::is_negative) {
                Some(index) => Err(LdlFailure::NegativePivot { index, value: d[index].clone() }),
                None => Ok(()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateBlock {
    pub graphs: Vec<CanonicalGraph>,
    pub gram: Gram,
}

/// `f = sum_blocks sum_{j,k} Q[j,k] [[H_j H_k]]` with every `Q` PSD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosCertificate {
    pub blocks: Vec<CertificateBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("block {block}: Gram matrix has size {gram}, basis has {basis} graphs")]
    Dimension { block: usize, gram: usize, basis: usize },
    #[error("coefficient of {graph:?} is {found}, expected {expected}")]
    Mismatch { graph: CanonicalGraph, expected: Rational, found: Rational },
    #[error("block {block} is not PSD: {failure}")]
    NotPsd { block: usize, failure: LdlFailure },
}

impl SosCertificate {
    /// `sum_blocks sum_{j,k} Q[j,k] [[H_j H_k]]`.
    pub fn expand(&self) -> GraphCombination {
        let two = Rational::from_integer(2.into());
        let mut out = GraphCombination::zero();
        for block in &self.blocks {
            let n = block.graphs.len().min(block.gram.size());
            for j in 0..n {
                for k in j..n {
                    let q = block.gram.get(j, k);
                    if q.is_zero() {
                        continue;
                    }
                    let weight = if j == k { q } else { q * &two };
                    let product = glue(&block.graphs[j], &block.graphs[k]).without_labels();
                    out.add_term(canonicalize(&product), weight);
                }
            }
        }
        out
    }

    /// Checks shapes, the expansion against `f`, and exact PSD-ness, in that
    /// order.
    pub fn verify(&self, f: &GraphCombination) -> Result<(), CertificateError> {
        for (block, b) in self.blocks.iter().enumerate() {
            if b.gram.size() != b.graphs.len() {
                return Err(CertificateError::Dimension { block, gram: b.gram.size(), basis: b.graphs.len() });
            }
        }
        let diff = &self.expand() - f;
        if let Some((graph, _)) = diff.terms().next() {
            return Err(CertificateError::Mismatch {
                graph: graph.clone(),
                expected: f.coefficient_of(graph),
                found: self.expand().coefficient_of(graph),
            });
        }
        for (block, b) in self.blocks.iter().enumerate() {
            b.gram.check_psd().map_err(|failure| CertificateError::NotPsd { block, failure })?;
        }
        Ok(())
    }

    /// Rewrites the certificate as `sum_s w_s [[a_s^2]]` with `w_s > 0`,
    /// from an `L D Lᵀ` factorization of each block.
    pub fn to_squares(&self) -> Result<Vec<(Rational, GraphCombination)>, CertificateError> {
        let mut out = Vec::new();
        for (block, b) in self.blocks.iter().enumerate() {
            match &b.gram {
                Gram::Diagonal(d) => {
                    for (g, w) in b.graphs.iter().zip(d) {
                        if w.is_negative() {
                            let failure = LdlFailure::NegativePivot { index: 0, value: w.clone() };
                            return Err(CertificateError::NotPsd { block, failure });
                        }
                        if w.is_positive() {
                            out.push((w.clone(), GraphCombination::graph(g)));
                        }
                    }
                }
                Gram::Dense(m) => {
                    let ldl = m.ldl().map_err(|failure| CertificateError::NotPsd { block, failure })?;
                    for (k, w) in ldl.pivots().iter().enumerate() {
                        if w.is_zero() {
                            continue;
                        }
                        let mut a = GraphCombination::zero();
                        for (g, c) in b.graphs.iter().zip(ldl.column(k)) {
                            a.add_term(g.clone(), c);
                        }
                        out.push((w.clone(), a));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Number of nonzero blocks.
    pub fn support(&self) -> usize {
        self.blocks.iter().filter(|b| !b.gram.is_zero()).count()
    }

    /// Drops graphs whose Gram row is zero, then empty blocks. The expansion
    /// is unchanged.
    pub fn pruned(&self) -> Self {
        let mut blocks = Vec::new();
        for b in &self.blocks {
            let n = b.gram.size();
            let keep: Vec<usize> = (0..n).filter(|&i| (0..n).any(|j| !b.gram.get(i, j).is_zero())).collect();
            if keep.is_empty() {
                continue;
            }
            let graphs = keep.iter().map(|&i| b.graphs[i].clone()).collect();
            let gram = match &b.gram {
                Gram::Dense(_) => {
                    let rows = keep.iter().map(|&i| keep.iter().map(|&j| b.gram.get(i, j)).collect()).collect();
                    Gram::Dense(RationalMatrix::from_rows(rows).expect("square"))
                }
                Gram::Diagonal(d) => Gram::Diagonal(keep.iter().map(|&i| d[i].clone()).collect()),
            };
            blocks.push(CertificateBlock { graphs, gram });
        }
        Self { blocks }
    }
}

/// A linear functional `y` on unlabeled graphs with `y(f) < 0` whose Gram
/// matrices `M[j,k] = y([[H_j H_k]])` are PSD on every block. Any sum of
/// squares over the basis has `y >= 0`, so `f` has no certificate there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub values: BTreeMap<CanonicalGraph, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualFailure {
    #[error("functional is nonnegative on the target ({0})")]
    NonnegativeOnTarget(Rational),
    #[error("block {block} is not PSD under the functional: {failure}")]
    NotPsd { block: usize, failure: LdlFailure },
}

impl InfeasibilityCertificate {
    pub fn value(&self, f: &GraphCombination) -> Rational {
        f.terms()
            .map(|(g, c)| self.values.get(g).map_or_else(Rational::zero, |y| y * c))
            .sum()
    }

    /// Checks the certificate against the blocks of `problem`; returns
    /// `y(f) < 0` on success.
    pub fn verify(&self, problem: &SdpProblem, f: &GraphCombination) -> Result<Rational, DualFailure> {
        let target = self.value(f);
        if !target.is_negative() {
            return Err(DualFailure::NonnegativeOnTarget(target));
        }
        let y = |g: &CanonicalGraph, h: &CanonicalGraph| {
            let product = canonicalize(&glue(g, h).without_labels());
            self.values.get(&product).cloned().unwrap_or_else(Rational::zero)
        };
        for (block, b) in problem.blocks.iter().enumerate() {
            let n = b.size();
            let gram = match b.kind {
                BlockKind::Diagonal => Gram::Diagonal(b.graphs.iter().map(|g| y(g, g)).collect()),
                BlockKind::Dense => {
                    let mut m = RationalMatrix::zeros(n);
                    for j in 0..n {
                        for k in j..n {
                            let v = y(&b.graphs[j], &b.graphs[k]);
                            m.set(k, j, v.clone());
                            m.set(j, k, v);
                        }
                    }
                    Gram::Dense(m)
                }
            };
            gram.check_psd().map_err(|failure| DualFailure::NotPsd { block, failure })?;
        }
        Ok(target)
    }
}
