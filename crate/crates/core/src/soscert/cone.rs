//! Membership of a binomial `F1 - F2` in the cone spanned by the squares
//! `[[(H - H')^2]]` over compatible pairs of degree-`d` roots.
//!
//! For such binomials this cone is exactly the set of sums of squares, so
//! either answer is conclusive: a nonnegative decomposition, or a Farkas
//! functional that is nonnegative on every generator and negative on `f`.

use super::basis::{enumerate_basis, BasisCaps, BasisError};
use super::lp::{solve_feasibility, LpOutcome};
use crate::algebra::{expand_weighted_square_sum, GraphCombination, Rational};
use crate::graph::CanonicalGraph;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("expected c (F1 - F2) with c > 0 and unlabeled F1, F2 of degree {d}")]
    NotBinomial { d: usize },
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// `[[(first - second)^2]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialGenerator {
    pub first: CanonicalGraph,
    pub second: CanonicalGraph,
    pub square: GraphCombination,
}

/// `f = sum_k lambda_k [[(H_k - H'_k)^2]]` with `lambda_k > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDecomposition {
    pub terms: Vec<(Rational, BinomialGenerator)>,
}

impl ConeDecomposition {
    pub fn expand(&self) -> GraphCombination {
        let squares: Vec<(Rational, GraphCombination)> = self
            .terms
            .iter()
            .map(|(w, g)| (w.clone(), GraphCombination::graph(&g.first) - GraphCombination::graph(&g.second)))
            .collect();
        expand_weighted_square_sum(&squares)
    }

    pub fn verify(&self, f: &GraphCombination) -> bool {
        self.terms.iter().all(|(w, _)| w.is_positive()) && self.expand() == *f
    }
}

/// A functional on unlabeled graphs, nonnegative on every generator and
/// negative on the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub values: BTreeMap<CanonicalGraph, Rational>,
}

impl FarkasCertificate {
    pub fn value(&self, a: &GraphCombination) -> Rational {
        a.terms().map(|(g, c)| self.values.get(g).map_or_else(Rational::zero, |y| y * c)).sum()
    }

    pub fn verify(&self, generators: &[BinomialGenerator], f: &GraphCombination) -> bool {
        self.value(f).is_negative() && generators.iter().all(|g| !self.value(&g.square).is_negative())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeOutcome {
    Member(ConeDecomposition),
    NotMember(FarkasCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeResult {
    pub degree: usize,
    /// Distinct generators after merging equal squares.
    pub generators: Vec<BinomialGenerator>,
    pub outcome: ConeOutcome,
}

/// Decides whether the binomial `f` of degree `d` is a nonnegative
/// combination of binomial squares over the degree-`d` basis with `caps`.
pub fn binomial_cone_membership(
    f: &GraphCombination,
    d: usize,
    caps: BasisCaps,
) -> Result<ConeResult, ConeError> {
    check_shape(f, d)?;
    let basis = enumerate_basis(d, caps)?;
    let mut distinct: BTreeMap<Vec<(CanonicalGraph, Rational)>, BinomialGenerator> = BTreeMap::new();
    for class in &basis.classes {
        for (j, h) in class.graphs.iter().enumerate() {
            for h2 in &class.graphs[j + 1..] {
                let a = GraphCombination::graph(h) - GraphCombination::graph(h2);
                let square = a.square().unlabel();
                if square.is_zero() {
                    continue;
                }
                let key: Vec<_> = square.terms().map(|(g, c)| (g.clone(), c.clone())).collect();
                distinct.entry(key).or_insert_with(|| BinomialGenerator {
                    first: h.clone(),
                    second: h2.clone(),
                    square,
                });
            }
        }
    }
    let generators: Vec<BinomialGenerator> = distinct.into_values().collect();
    let rows: BTreeSet<CanonicalGraph> = generators
        .iter()
        .flat_map(|g| g.square.terms().map(|(h, _)| h.clone()))
        .chain(f.terms().map(|(h, _)| h.clone()))
        .collect();
    let rows: Vec<CanonicalGraph> = rows.into_iter().collect();
    let a: Vec<Vec<Rational>> =
        rows.iter().map(|r| generators.iter().map(|g| g.square.coefficient_of(r)).collect()).collect();
    let b: Vec<Rational> = rows.iter().map(|r| f.coefficient_of(r)).collect();
    let outcome = match solve_feasibility(&a, &b, generators.len()) {
        LpOutcome::Feasible(x) => ConeOutcome::Member(ConeDecomposition {
            terms: x
                .into_iter()
                .zip(&generators)
                .filter(|(w, _)| !w.is_zero())
                .map(|(w, g)| (w, g.clone()))
                .collect(),
        }),
        LpOutcome::Infeasible(z) => ConeOutcome::NotMember(FarkasCertificate {
            values: rows.into_iter().zip(z).filter(|(_, v)| !v.is_zero()).collect(),
        }),
    };
    Ok(ConeResult { degree: d, generators, outcome })
}

fn check_shape(f: &GraphCombination, d: usize) -> Result<(), ConeError> {
    let terms: Vec<_> = f.terms().collect();
    let ok = match terms.as_slice() {
        [] => true,
        [(g1, c1), (g2, c2)] => {
            g1.is_unlabeled()
                && g2.is_unlabeled()
                && g1.degree() == d
                && g2.degree() == d
                && (*c1 + *c2).is_zero()
        }
        _ => false,
    };
    if ok { Ok(()) } else { Err(ConeError::NotBinomial { d }) }
}
