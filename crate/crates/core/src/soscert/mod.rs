//! Sum-of-squares certificates at a fixed homogeneous degree.
//!
//! A homogeneous `f` of degree `d` is a sum of squares iff it has one whose
//! squares only pair roots `H` with `deg([[H^2]]) = d` inside one class of
//! [`enumerate_basis`]. The search assembles the Gram problem
//! ([`build_sdp`]), solves it numerically ([`solve_embedded`]), and then
//! either rounds the Gram matrices to an exact [`SosCertificate`] or rounds
//! the dual vector to an exact [`InfeasibilityCertificate`]. Nothing is
//! claimed that was not checked in exact arithmetic; a purely numerical
//! infeasibility is reported with its residual floor.

pub mod basis;
pub mod certificate;
pub mod cone;
pub mod exact;
pub mod ipm;
mod linalg;
pub mod lp;
pub mod round;
pub mod sdp;

pub use basis::{enumerate_basis, BasisCaps, BasisClass, BasisError, HomogeneousBasis};
pub use certificate::{CertificateBlock, CertificateError, Gram, InfeasibilityCertificate, SosCertificate};
pub use cone::{binomial_cone_membership, ConeDecomposition, ConeError, ConeOutcome, ConeResult, FarkasCertificate};
pub use exact::RationalMatrix;
pub use ipm::{solve_embedded, NumericBlock, NumericSolution, SolveStatus, SolverOptions};
pub use round::{round_and_verify, round_dual, RoundingFailure, RoundingOptions};
pub use sdp::{build_sdp, BlockKind, SdpBlock, SdpConstraint, SdpEntry, SdpError, SdpProblem};

use crate::algebra::GraphCombination;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchOptions {
    /// Defaults to [`BasisCaps::for_degree`].
    pub caps: Option<BasisCaps>,
    pub solver: SolverOptions,
    pub rounding: RoundingOptions,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    /// An exactly verified certificate.
    Certificate(SosCertificate),
    /// No certificate over this basis. `dual` is present when the solver's
    /// dual vector rounded to an exactly verified witness.
    NoCertificate { residual: f64, dual: Option<InfeasibilityCertificate> },
    /// The solver did not settle, or rounding failed.
    Inconclusive { status: SolveStatus, residual: f64, rounding: Option<RoundingFailure> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub degree: usize,
    pub caps: BasisCaps,
    pub basis_size: usize,
    pub blocks: usize,
    pub constraints: usize,
    pub iterations: usize,
    pub outcome: SearchOutcome,
}

/// Searches for a certificate of the homogeneous `f` at degree `d`.
pub fn sos_search(f: &GraphCombination, d: usize, options: &SearchOptions) -> Result<SearchReport, SearchError> {
    let caps = options.caps.unwrap_or_else(|| BasisCaps::for_degree(d));
    let basis = enumerate_basis(d, caps)?;
    let problem = build_sdp(f, &basis)?;
    let num = solve_embedded(&problem, &options.solver);
    // Exact verification decides; the numeric status only picks the route.
    let rounded = (num.status == SolveStatus::Feasible
        || num.residual <= options.rounding.projection_tolerance)
        .then(|| round_and_verify(&problem, &num, &options.rounding));
    let outcome = match (rounded, &num.status) {
        (Some(Ok(c)), _) => SearchOutcome::Certificate(c),
        (Some(Err(e)), SolveStatus::Feasible) => {
            SearchOutcome::Inconclusive { status: num.status.clone(), residual: num.residual, rounding: Some(e) }
        }
        (rounded, status) => match round_dual(&problem, &num, options.rounding.max_denominator) {
            Some(dual) => SearchOutcome::NoCertificate { residual: num.residual, dual: Some(dual) },
            None if *status == SolveStatus::Infeasible => {
                SearchOutcome::NoCertificate { residual: num.residual, dual: None }
            }
            None => SearchOutcome::Inconclusive {
                status: status.clone(),
                residual: num.residual,
                rounding: rounded.and_then(Result::err),
            },
        },
    };
    Ok(SearchReport {
        degree: d,
        caps,
        basis_size: basis.graph_count(),
        blocks: problem.blocks.len(),
        constraints: problem.constraints.len(),
        iterations: num.iterations,
        outcome,
    })
}
