//! Gram-matrix encoding of a homogeneous sum-of-squares search.
//!
//! Each class of the basis becomes one PSD block `Q`; classes with a single
//! graph are collected into one diagonal block. For every unlabeled graph
//! `F` the constraint reads `sum_{j,k} Q[j,k] [ [[H_j H_k]] = F ] = f_F`,
//! summing over ordered pairs, so an off-diagonal entry counts twice.

use super::basis::HomogeneousBasis;
use crate::algebra::{glue, GraphCombination, Rational};
use crate::graph::{canonicalize, CanonicalGraph};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Dense,
    Diagonal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpBlock {
    pub kind: BlockKind,
    pub graphs: Vec<CanonicalGraph>,
}

impl SdpBlock {
    pub fn size(&self) -> usize {
        self.graphs.len()
    }
}

/// Position `(row, col)` with `row <= col` inside block `block`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SdpEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

/// One linear constraint; every listed entry has coefficient 1 in the
/// symmetric constraint matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpConstraint {
    pub graph: CanonicalGraph,
    pub rhs: Rational,
    pub entries: Vec<SdpEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpProblem {
    pub degree: usize,
    pub blocks: Vec<SdpBlock>,
    pub constraints: Vec<SdpConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SdpError {
    #[error("combination is not homogeneous")]
    NotHomogeneous,
    #[error("combination has degree {found}, basis has degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("constituent {0:?} is labeled")]
    LabeledConstituent(CanonicalGraph),
}

/// Assembles the Gram-matrix feasibility problem for `f` over `basis`.
pub fn build_sdp(f: &GraphCombination, basis: &HomogeneousBasis) -> Result<SdpProblem, SdpError> {
    if let Some((g, _)) = f.terms().find(|(g, _)| !g.is_unlabeled()) {
        return Err(SdpError::LabeledConstituent(g.clone()));
    }
    if !f.is_homogeneous() {
        return Err(SdpError::NotHomogeneous);
    }
    if let Some(found) = f.min_degree().filter(|&m| m != basis.degree) {
        return Err(SdpError::DegreeMismatch { expected: basis.degree, found });
    }
    let mut blocks = Vec::new();
    let mut singletons = Vec::new();
    for class in &basis.classes {
        if class.graphs.len() == 1 {
            singletons.push(class.graphs[0].clone());
        } else {
            blocks.push(SdpBlock { kind: BlockKind::Dense, graphs: class.graphs.clone() });
        }
    }
    if !singletons.is_empty() {
        blocks.push(SdpBlock { kind: BlockKind::Diagonal, graphs: singletons });
    }
    let mut by_graph: BTreeMap<CanonicalGraph, Vec<SdpEntry>> = BTreeMap::new();
    for (b, block) in blocks.iter().enumerate() {
        for (row, g) in block.graphs.iter().enumerate() {
            let cols = match block.kind {
                BlockKind::Dense => row..block.size(),
                BlockKind::Diagonal => row..row + 1,
            };
            for col in cols {
                let product = canonicalize(&glue(g, &block.graphs[col]).without_labels());
                by_graph.entry(product).or_default().push(SdpEntry { block: b, row, col });
            }
        }
    }
    for (g, _) in f.terms() {
        by_graph.entry(g.clone()).or_default();
    }
    let constraints = by_graph
        .into_iter()
        .map(|(graph, entries)| SdpConstraint { rhs: f.coefficient_of(&graph), graph, entries })
        .collect();
    Ok(SdpProblem { degree: basis.degree, blocks, constraints })
}

impl SdpProblem {
    /// `<A_i, Q>` for every constraint, given one Gram matrix per block as a
    /// lookup `(block, row, col) -> value` over `row <= col`.
    pub fn evaluate<F>(&self, entry: F) -> Vec<Rational>
    where
        F: Fn(usize, usize, usize) -> Rational,
    {
        let two = Rational::from_integer(2.into());
        self.constraints
            .iter()
            .map(|c| {
                let mut acc = Rational::zero();
                for e in &c.entries {
                    let v = entry(e.block, e.row, e.col);
                    acc += if e.row == e.col { v } else { v * &two };
                }
                acc
            })
            .collect()
    }

    /// Right-hand sides in constraint order.
    pub fn rhs(&self) -> Vec<Rational> {
        self.constraints.iter().map(|c| c.rhs.clone()).collect()
    }

    /// The combination the problem certifies.
    pub fn target(&self) -> GraphCombination {
        let mut f = GraphCombination::zero();
        for c in &self.constraints {
            f.add_term(c.graph.clone(), c.rhs.clone());
        }
        f
    }
}
