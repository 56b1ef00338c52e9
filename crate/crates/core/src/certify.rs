//! Certificates that a combination of unlabeled graphs is not a sum of squares.
//!
//! Let `d_min` be the smallest degree among the constituents of `f`. If some
//! degree-`d_min` term has a negative coefficient and every degree-`d_min`
//! term with a positive coefficient is a trivial square, then `f` is not a
//! sum of squares. Since the criterion only reads the lowest-degree part, a
//! positive verdict also rules out certificates `f (1 + g)` with `g` a sum
//! of squares: the lowest-degree part of `f (1 + g)` is a positive multiple
//! of that of `f`.
//!
//! `Inconclusive` only means the criterion does not apply.

use crate::algebra::{GraphCombination, Rational};
use crate::graph::CanonicalGraph;
use crate::squares::{involution_census, is_trivial_square, InvolutionCensus, SquareError, SquareWitness};
use crate::squares::TrivialSquareOutcome;
use alloc::vec::Vec;
use num_traits::Signed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("the zero combination has no lowest-degree part")]
    ZeroCombination,
    #[error("constituent {0:?} is labeled; the criterion applies to unlabeled graphs")]
    LabeledConstituent(CanonicalGraph),
    #[error("combination is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Square(#[from] SquareError),
}

/// Why the verdict holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Negative lowest-degree term plus trivial squares on every positive one.
    TrivialSquares,
    /// Homogeneous with no positive coefficient, while every nonzero
    /// homogeneous sum of squares has a positive one.
    NoPositiveCoefficient,
}

#[derive(Debug, Clone)]
pub struct TrivialSquareConfirmation {
    pub graph: CanonicalGraph,
    pub coefficient: Rational,
    pub census: InvolutionCensus,
}

#[derive(Debug, Clone)]
pub struct NotSosWitness {
    pub criterion: Criterion,
    pub min_degree: usize,
    pub negative_term: (CanonicalGraph, Rational),
    pub trivial_squares: Vec<TrivialSquareConfirmation>,
    /// Also rules out `f (1 + g)` for every sum of squares `g`.
    pub multiplier_obstruction: bool,
}

#[derive(Debug, Clone)]
pub enum InconclusiveReason {
    /// No lowest-degree term has a negative coefficient.
    NoNegativeMinDegreeTerm { min_degree: usize },
    /// A positive lowest-degree term is a non-trivial square.
    NonTrivialSquare { graph: CanonicalGraph, witness: SquareWitness },
    /// Some coefficient is positive.
    HasPositiveCoefficient { graph: CanonicalGraph },
}

#[derive(Debug, Clone)]
pub enum Verdict {
    NotSos(NotSosWitness),
    Inconclusive(InconclusiveReason),
}

impl Verdict {
    pub fn is_not_sos(&self) -> bool {
        matches!(self, Self::NotSos(_))
    }
}

/// Applies the trivial-square criterion to the lowest-degree part of `f`.
///
/// `cap` bounds the automorphism search run on each positive lowest-degree
/// constituent.
pub fn check_not_sos(f: &GraphCombination, cap: usize) -> Result<Verdict, CertifyError> {
    check_unlabeled(f)?;
    let low = f.min_degree_component().map_err(|_| CertifyError::ZeroCombination)?;
    let min_degree = low.min_degree().expect("nonzero");
    let Some((g, c)) = low.terms().find(|(_, c)| c.is_negative()) else {
        return Ok(Verdict::Inconclusive(InconclusiveReason::NoNegativeMinDegreeTerm {
            min_degree,
        }));
    };
    let negative_term = (g.clone(), c.clone());
    let mut trivial_squares = Vec::new();
    for (g, c) in low.terms().filter(|(_, c)| c.is_positive()) {
        match is_trivial_square(g, cap)? {
            TrivialSquareOutcome::NonTrivial(witness) => {
                return Ok(Verdict::Inconclusive(InconclusiveReason::NonTrivialSquare {
                    graph: g.clone(),
                    witness,
                }))
            }
            TrivialSquareOutcome::Trivial => trivial_squares.push(TrivialSquareConfirmation {
                graph: g.clone(),
                coefficient: c.clone(),
                census: involution_census(g, cap)?,
            }),
        }
    }
    Ok(Verdict::NotSos(NotSosWitness {
        criterion: Criterion::TrivialSquares,
        min_degree,
        negative_term,
        trivial_squares,
        multiplier_obstruction: false,
    }))
}

/// Same test, reported as an obstruction to every certificate `f (1 + g)`.
pub fn check_multiplier_obstruction(
    f: &GraphCombination,
    cap: usize,
) -> Result<Verdict, CertifyError> {
    let low = {
        check_unlabeled(f)?;
        f.min_degree_component().map_err(|_| CertifyError::ZeroCombination)?
    };
    Ok(match check_not_sos(&low, cap)? {
        Verdict::NotSos(mut w) => {
            w.multiplier_obstruction = true;
            Verdict::NotSos(w)
        }
        other => other,
    })
}

/// A nonzero homogeneous combination without positive coefficients is not
/// a sum of squares.
pub fn negative_lambda_shortcut(f: &GraphCombination) -> Result<Verdict, CertifyError> {
    check_unlabeled(f)?;
    if f.is_zero() {
        return Err(CertifyError::ZeroCombination);
    }
    if !f.is_homogeneous() {
        return Err(CertifyError::NotHomogeneous);
    }
    if let Some((g, _)) = f.terms().find(|(_, c)| c.is_positive()) {
        return Ok(Verdict::Inconclusive(InconclusiveReason::HasPositiveCoefficient {
            graph: g.clone(),
        }));
    }
    let (g, c) = f.terms().next().expect("nonzero");
    Ok(Verdict::NotSos(NotSosWitness {
        criterion: Criterion::NoPositiveCoefficient,
        min_degree: g.degree(),
        negative_term: (g.clone(), c.clone()),
        trivial_squares: Vec::new(),
        multiplier_obstruction: false,
    }))
}

fn check_unlabeled(f: &GraphCombination) -> Result<(), CertifyError> {
    match f.terms().find(|(g, _)| !g.is_unlabeled()) {
        Some((g, _)) => Err(CertifyError::LabeledConstituent(g.clone())),
        None => Ok(()),
    }
}
