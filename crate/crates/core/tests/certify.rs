mod common;

use common::*;
use gluon_core::algebra::GraphCombination;
use gluon_core::certify::{
    check_multiplier_obstruction, check_not_sos, negative_lambda_shortcut, CertifyError, Criterion, InconclusiveReason,
    Verdict,
};
use gluon_core::graph::DEFAULT_SEARCH_CAP;
use gluon_core::soscert::{binomial_cone_membership, sos_search, BasisCaps, ConeOutcome, SearchOptions, SearchOutcome};
use num_traits::Signed;
use proptest::prelude::*;

const CAP: usize = DEFAULT_SEARCH_CAP;

fn sidorenko() -> GraphCombination {
    comb(&k55_minus_c10()) - comb(&edges(15))
}

#[test]
fn p3_minus_e3_is_not_sos() {
    let Verdict::NotSos(w) = check_not_sos(&blakley_roy(q(1, 1), 3), CAP).unwrap() else { panic!() };
    assert_eq!(w.criterion, Criterion::TrivialSquares);
    assert_eq!(w.min_degree, 3);
    assert_eq!(w.negative_term.0.graph(), &edges(3));
    assert!(w.negative_term.1.is_negative());
    assert_eq!(w.trivial_squares.len(), 1);
    assert_eq!(w.trivial_squares[0].census.total(), 1);
}

#[test]
fn p2_minus_e2_is_inconclusive() {
    let f = comb(&path(2)) - comb(&edges(2));
    let v = check_not_sos(&f, CAP).unwrap();
    assert!(matches!(v, Verdict::Inconclusive(InconclusiveReason::NonTrivialSquare { .. })), "{v:?}");
    assert!(!check_multiplier_obstruction(&f, CAP).unwrap().is_not_sos());
}

#[test]
fn sidorenko_smallest_open_case() {
    let Verdict::NotSos(w) = check_not_sos(&sidorenko(), CAP).unwrap() else { panic!() };
    assert_eq!(w.min_degree, 15);
    assert_eq!(w.trivial_squares[0].census.total(), 11);
    let Verdict::NotSos(w) = check_multiplier_obstruction(&sidorenko(), CAP).unwrap() else { panic!() };
    assert!(w.multiplier_obstruction);
}

#[test]
fn multiplier_obstruction_for_paths_of_length_five() {
    for lambda in [q(1, 2), q(1, 1), q(2, 1)] {
        let Verdict::NotSos(w) = check_multiplier_obstruction(&blakley_roy(lambda.clone(), 5), CAP).unwrap() else {
            panic!("lambda = {lambda}")
        };
        assert!(w.multiplier_obstruction);
    }
}

#[test]
fn odd_path_sweep() {
    for k in [3, 5, 7] {
        for lambda in [q(-1, 1), q(1, 3), q(1, 1), q(10, 1)] {
            assert!(check_not_sos(&blakley_roy(lambda.clone(), k), CAP).unwrap().is_not_sos(), "k = {k}, lambda = {lambda}");
        }
    }
}

#[test]
fn shortcut_examples() {
    let f = -comb(&path(3)) - comb(&edges(3));
    let Verdict::NotSos(w) = negative_lambda_shortcut(&f).unwrap() else { panic!() };
    assert_eq!(w.criterion, Criterion::NoPositiveCoefficient);
    let zero = comb(&path(3)).scale(&q(0, 1));
    assert_eq!(negative_lambda_shortcut(&zero).unwrap_err(), CertifyError::ZeroCombination);
    assert!(!negative_lambda_shortcut(&blakley_roy(q(1, 1), 3)).unwrap().is_not_sos());
}

#[test]
fn labeled_constituents_are_rejected() {
    let f = comb(&g(2, &[(0, 1)], &[(1, 0)])) - comb(&edges(1));
    assert!(matches!(check_not_sos(&f, CAP), Err(CertifyError::LabeledConstituent(_))));
}

/// Degree-3 combinations the criterion rejects; the solvers must agree.
#[test]
fn not_sos_agrees_with_sdp_and_cone() {
    let k3 = g(3, &[(0, 1), (1, 2), (0, 2)], &[]);
    let cases = [
        blakley_roy(q(1, 1), 3),
        blakley_roy(q(10, 1), 3),
        comb(&path(3)) - comb(&star(3)),
        comb(&k3) - comb(&edges(3)),
    ];
    for f in cases {
        assert!(check_not_sos(&f, CAP).unwrap().is_not_sos(), "{f:?}");
        let report = sos_search(&f, 3, &SearchOptions::default()).unwrap();
        assert!(!matches!(report.outcome, SearchOutcome::Certificate(_)), "{f:?}");
        if f.terms().all(|(_, c)| c.abs() == q(1, 1)) {
            let cone = binomial_cone_membership(&f, 3, BasisCaps::for_degree(3)).unwrap();
            let ConeOutcome::NotMember(z) = &cone.outcome else { panic!("{f:?}") };
            assert!(z.verify(&cone.generators, &f));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn positive_scaling_keeps_the_verdict(k in 2usize..=6, n in 1i64..=9, d in 1i64..=9, lam in -3i64..=3) {
        let f = blakley_roy(q(lam, 2), k);
        if f.is_zero() {
            return Ok(());
        }
        let a = check_not_sos(&f, CAP).unwrap().is_not_sos();
        let b = check_not_sos(&f.scale(&q(n, d)), CAP).unwrap().is_not_sos();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn higher_degree_terms_do_not_matter(
        k in 2usize..=5,
        lam in -3i64..=3,
        extra in arb_combination(3, 6, vec![]),
    ) {
        let f = blakley_roy(q(lam, 1), k);
        let shifted: GraphCombination = extra
            .terms()
            .filter(|(h, _)| h.degree() > k)
            .map(|(h, c)| GraphCombination::term(c.clone(), h.graph()))
            .fold(GraphCombination::zero(), |a, b| a + b);
        let a = check_not_sos(&f, CAP).unwrap().is_not_sos();
        let b = check_not_sos(&(f + shifted), CAP).unwrap().is_not_sos();
        prop_assert_eq!(a, b);
    }
}
