mod common;

use common::*;
use gluon_core::algebra::{cross_degree, expand_square_sum, expand_weighted_square_sum, glue, GraphCombination, Rational};
use gluon_core::graph::{canonicalize, CanonicalGraph, Label, PartiallyLabeledGraph as G};
use gluon_core::soscert::{
    binomial_cone_membership, build_sdp, enumerate_basis, round_and_verify, solve_embedded, sos_search, BasisCaps,
    BasisError, CertificateBlock, CertificateError, ConeOutcome, Gram, NumericBlock, RationalMatrix, RoundingFailure,
    RoundingOptions, SdpError, SearchOptions, SearchOutcome, SolveStatus, SolverOptions, SosCertificate,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn caps(d: usize) -> BasisCaps {
    BasisCaps::for_degree(d)
}

fn p2_minus_e2() -> GraphCombination {
    comb(&path(2)) - comb(&edges(2))
}

fn e1() -> G {
    g(2, &[(0, 1)], &[(1, 0)])
}
fn h21() -> G {
    g(3, &[(0, 1), (1, 2)], &[(1, 0), (2, 1)])
}
fn h12() -> G {
    g(3, &[(0, 1), (0, 2)], &[(1, 0), (2, 1)])
}
fn e13e() -> G {
    g(4, &[(0, 1), (2, 3)], &[(1, 0), (3, 1)])
}

fn f3() -> GraphCombination {
    comb(&star(3)).scale(&q(2, 1)) + comb(&edges(3)) - comb(&path(3)).scale(&q(2, 1))
}

/// Every graph without isolated vertices, labels injective from `1..=2d`,
/// with `2 deg - l = d`, by direct enumeration of shapes and label maps.
fn brute_basis(d: usize) -> BTreeSet<CanonicalGraph> {
    let max_labels = 2 * d as Label;
    let mut out = BTreeSet::new();
    for shape in unlabeled_catalog(2 * d).into_iter().filter(|h| h.degree() <= d) {
        let n = shape.vertex_count();
        let e: Vec<_> = shape.edges().collect();
        for mask in 0u32..1 << n {
            let chosen: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let l = e.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count();
            if 2 * e.len() != d + l {
                continue;
            }
            injective_maps(chosen.len(), max_labels, &mut |values| {
                let labels: Vec<_> = values.iter().zip(&chosen).map(|(&x, &v)| (x, v)).collect();
                out.insert(canonicalize(&g(n, &e, &labels)));
            });
        }
    }
    out
}

fn injective_maps(k: usize, max: Label, visit: &mut dyn FnMut(&[Label])) {
    fn go(k: usize, max: Label, cur: &mut Vec<Label>, visit: &mut dyn FnMut(&[Label])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for x in 1..=max {
            if !cur.contains(&x) {
                cur.push(x);
                go(k, max, cur, visit);
                cur.pop();
            }
        }
    }
    go(k, max, &mut Vec::new(), visit);
}

/// Classes of the relation `cross_degree = d`, closed transitively.
fn brute_classes(graphs: &[CanonicalGraph], d: usize) -> BTreeSet<BTreeSet<CanonicalGraph>> {
    let mut parent: Vec<usize> = (0..graphs.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            if cross_degree(&graphs[i], &graphs[j]) == d {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut classes: BTreeMap<usize, BTreeSet<CanonicalGraph>> = BTreeMap::new();
    for i in 0..graphs.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().insert(graphs[i].clone());
    }
    classes.into_values().collect()
}

#[test]
fn basis_matches_brute_force() {
    for d in [2, 3] {
        let basis = enumerate_basis(d, caps(d)).unwrap();
        let found: BTreeSet<CanonicalGraph> = basis.graphs().cloned().collect();
        assert_eq!(found.len(), basis.graph_count(), "duplicates at d = {d}");
        let brute = brute_basis(d);
        assert_eq!(found, brute, "d = {d}");
        let ours: BTreeSet<BTreeSet<CanonicalGraph>> =
            basis.classes.iter().map(|c| c.graphs.iter().cloned().collect()).collect();
        let all: Vec<_> = brute.into_iter().collect();
        assert_eq!(ours, brute_classes(&all, d), "d = {d}");
    }
}

#[test]
fn basis_examples() {
    let b2 = enumerate_basis(2, caps(2)).unwrap();
    let e1 = canonicalize(&e1());
    let class = &b2.classes[b2.class_of(&e1).unwrap()];
    assert!(class.graphs.contains(&canonicalize(&edges(1))));
    assert!(class.fully_labeled_edges.is_empty());

    let b3 = enumerate_basis(3, caps(3)).unwrap();
    let i = b3.class_of(&h21()).unwrap();
    assert_eq!(b3.class_of(&h12()), Some(i));
    let j = b3.class_of(&e13e()).unwrap();
    assert_ne!(i, j);
    assert_eq!(b3.classes[j].fully_labeled_edges, [(1, 3)].into_iter().collect());
    for class in &b3.classes {
        for h in &class.graphs {
            assert_eq!(&h.fully_labeled_edges(), &class.fully_labeled_edges);
        }
    }
}

#[test]
fn basis_caps_are_checked() {
    assert_eq!(enumerate_basis(0, caps(1)).unwrap_err(), BasisError::ZeroDegree);
    let huge = BasisCaps { max_vertices: 40, max_labels: 4 };
    assert!(matches!(enumerate_basis(2, huge), Err(BasisError::CapTooLarge { .. })));
}

#[test]
fn basis_is_sound_and_classes_are_transitive() {
    for d in [1, 2, 3] {
        let basis = enumerate_basis(d, caps(d)).unwrap();
        for class in &basis.classes {
            for h in &class.graphs {
                assert_eq!(glue(h, h).without_labels().degree(), d);
            }
            for a in &class.graphs {
                for b in &class.graphs {
                    assert_eq!(glue(a, b).without_labels().degree(), d);
                    for c in class.graphs.iter().take(4) {
                        if cross_degree(a, b) == d && cross_degree(b, c) == d {
                            assert_eq!(cross_degree(a, c), d);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rank_one_gram_of_e1_minus_e_is_feasible() {
    let basis = enumerate_basis(2, caps(2)).unwrap();
    let problem = build_sdp(&p2_minus_e2(), &basis).unwrap();
    let (e1, e) = (canonicalize(&e1()), canonicalize(&edges(1)));
    let block = problem.blocks.iter().position(|b| b.graphs.contains(&e1)).unwrap();
    let i = problem.blocks[block].graphs.iter().position(|h| *h == e1).unwrap();
    let j = problem.blocks[block].graphs.iter().position(|h| *h == e).unwrap();
    let gram = |b: usize, r: usize, c: usize| {
        if b != block {
            return Rational::zero();
        }
        let sign = |x: usize| if x == i { 1 } else if x == j { -1 } else { 0 };
        q(sign(r) * sign(c), 1)
    };
    assert_eq!(problem.evaluate(gram), problem.rhs());
}

#[test]
fn zero_target_is_met_by_zero_grams() {
    let basis = enumerate_basis(2, caps(2)).unwrap();
    let problem = build_sdp(&GraphCombination::zero(), &basis).unwrap();
    assert!(problem.evaluate(|_, _, _| Rational::zero()).iter().all(Zero::is_zero));
    assert!(problem.rhs().iter().all(Zero::is_zero));
}

#[test]
fn build_rejects_wrong_degrees() {
    let basis = enumerate_basis(2, caps(2)).unwrap();
    assert!(matches!(build_sdp(&(comb(&path(2)) - comb(&edges(3))), &basis), Err(SdpError::NotHomogeneous)));
    assert!(matches!(build_sdp(&blakley_roy(q(1, 1), 3), &basis), Err(SdpError::DegreeMismatch { .. })));
}

#[test]
fn p2_pipeline_recovers_e1_minus_e() {
    let basis = enumerate_basis(2, caps(2)).unwrap();
    let problem = build_sdp(&p2_minus_e2(), &basis).unwrap();
    let num = solve_embedded(&problem, &SolverOptions::default());
    assert_eq!(num.status, SolveStatus::Feasible);
    assert!(num.residual < 1e-8);
    let cert = round_and_verify(&problem, &num, &RoundingOptions::default()).unwrap();
    cert.verify(&p2_minus_e2()).unwrap();
    let squares = cert.to_squares().unwrap();
    assert_eq!(expand_weighted_square_sum(&squares), p2_minus_e2());
    let pruned = cert.pruned();
    pruned.verify(&p2_minus_e2()).unwrap();
    assert_eq!(pruned.support(), cert.support());
    assert!(pruned.blocks.iter().all(|b| !b.gram.is_zero()));
    assert!(pruned.blocks.iter().map(|b| b.graphs.len()).sum::<usize>() <= 2 * pruned.blocks.len().max(1) + 3);
}

#[test]
fn gram_near_e1_minus_e_rounds_to_it() {
    let basis = enumerate_basis(2, caps(2)).unwrap();
    let problem = build_sdp(&p2_minus_e2(), &basis).unwrap();
    let mut num = solve_embedded(&problem, &SolverOptions::default());
    let (e1, e) = (canonicalize(&e1()), canonicalize(&edges(1)));
    for (b, block) in problem.blocks.iter().enumerate() {
        let pos = |h: &CanonicalGraph| block.graphs.iter().position(|x| x == h);
        let (i, j) = (pos(&e1), pos(&e));
        let sign = |x: usize| if Some(x) == i { 1.0 } else if Some(x) == j { -1.0 } else { 0.0 };
        let noise = |r: usize, c: usize| 1e-9 * (((r * 7 + c * 3) % 5) as f64 - 2.0);
        num.blocks[b] = match &num.blocks[b] {
            NumericBlock::Dense { n, .. } => NumericBlock::Dense {
                n: *n,
                values: (0..n * n).map(|k| sign(k / n) * sign(k % n) + noise(k / n, k % n).min(noise(k % n, k / n))).collect(),
            },
            NumericBlock::Diagonal(d) => NumericBlock::Diagonal(vec![0.0; d.len()]),
        };
    }
    let cert = round_and_verify(&problem, &num, &RoundingOptions::default()).unwrap();
    let squares = cert.to_squares().unwrap();
    assert_eq!(squares.len(), 1);
    let (w, a) = &squares[0];
    let scale = a.coefficient(&e1);
    assert_eq!(a.scale(&scale.recip()), comb(&e1) - comb(&e));
    assert_eq!(w * &scale * &scale, q(1, 1));
}

#[test]
fn f3_pipeline_gives_an_exact_block_certificate() {
    let report = sos_search(&f3(), 3, &SearchOptions::default()).unwrap();
    let SearchOutcome::Certificate(cert) = &report.outcome else { panic!("{:?}", report.outcome) };
    cert.verify(&f3()).unwrap();

    let hand = SosCertificate {
        blocks: vec![
            CertificateBlock {
                graphs: vec![canonicalize(&h21()), canonicalize(&h12())],
                gram: Gram::Dense(RationalMatrix::from_integers(&[&[1, -1], &[-1, 1]]).unwrap()),
            },
            CertificateBlock { graphs: vec![canonicalize(&e13e())], gram: Gram::Diagonal(vec![Rational::one()]) },
        ],
    };
    hand.verify(&f3()).unwrap();
    assert_eq!(
        f3(),
        expand_square_sum(&[comb(&h21()) - comb(&h12()), comb(&e13e())])
    );
}

#[test]
fn p3_minus_e3_has_no_certificate() {
    let f = blakley_roy(q(1, 1), 3);
    let report = sos_search(&f, 3, &SearchOptions::default()).unwrap();
    let SearchOutcome::NoCertificate { residual, dual } = &report.outcome else { panic!("{:?}", report.outcome) };
    assert!(*residual > 1e-6);
    let dual = dual.as_ref().expect("dual witness");
    let basis = enumerate_basis(3, caps(3)).unwrap();
    let problem = build_sdp(&f, &basis).unwrap();
    assert!(dual.verify(&problem, &f).unwrap().is_negative());
}

#[test]
fn corrupted_gram_names_the_broken_constraint() {
    let basis = enumerate_basis(2, caps(2)).unwrap();
    let problem = build_sdp(&p2_minus_e2(), &basis).unwrap();
    let mut num = solve_embedded(&problem, &SolverOptions::default());
    let block = num.blocks.iter().position(|b| matches!(b, NumericBlock::Dense { .. })).unwrap();
    let NumericBlock::Dense { values, .. } = &mut num.blocks[block] else { unreachable!() };
    values[0] += 1.0;
    let err = round_and_verify(&problem, &num, &RoundingOptions::default()).unwrap_err();
    let RoundingFailure::Rejected { error: CertificateError::Mismatch { graph, .. }, .. } = err else { panic!("{err}") };
    assert!(problem.constraints.iter().any(|c| c.graph == graph));
}

#[test]
fn indefinite_gram_is_rejected() {
    let cert = SosCertificate {
        blocks: vec![CertificateBlock {
            graphs: vec![canonicalize(&e1()), canonicalize(&edges(1))],
            gram: Gram::Dense(RationalMatrix::from_integers(&[&[1, 1], &[1, -1]]).unwrap()),
        }],
    };
    let f = cert.expand();
    assert!(matches!(cert.verify(&f), Err(CertificateError::NotPsd { .. })));
}

#[test]
fn cone_examples() {
    let result = binomial_cone_membership(&p2_minus_e2(), 2, caps(2)).unwrap();
    let ConeOutcome::Member(dec) = &result.outcome else { panic!() };
    assert!(dec.verify(&p2_minus_e2()));
    assert!(dec.terms.iter().all(|(w, _)| w.is_one()));

    let f = blakley_roy(q(1, 1), 3);
    let result = binomial_cone_membership(&f, 3, caps(3)).unwrap();
    let ConeOutcome::NotMember(z) = &result.outcome else { panic!() };
    assert!(z.verify(&result.generators, &f));

    let zero = comb(&path(2)) - comb(&path(2));
    let result = binomial_cone_membership(&zero, 2, caps(2)).unwrap();
    let ConeOutcome::Member(dec) = &result.outcome else { panic!() };
    assert!(dec.terms.is_empty());
}

fn psd_gram(size: usize, factors: &[Vec<i64>]) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(size);
    for v in factors {
        for i in 0..size {
            for j in 0..size {
                let x = m.get(i, j) + q(v[i] * v[j], 1);
                m.set(i, j, x);
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Random Gram forms over one class: the expansion re-verifies, has a
    /// positive coefficient on some [[H^2]], and the search finds a
    /// certificate again.
    #[test]
    fn random_sums_of_squares_are_recovered(
        class_pick in any::<prop::sample::Index>(),
        factors in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 5), 1..=2),
    ) {
        let basis = enumerate_basis(2, caps(2)).unwrap();
        let dense: Vec<_> = basis.classes.iter().filter(|c| c.graphs.len() > 1).collect();
        let class = dense[class_pick.index(dense.len())];
        let n = class.graphs.len();
        let factors: Vec<Vec<i64>> = factors.into_iter().map(|v| v.into_iter().take(n).collect()).collect();
        let cert = SosCertificate {
            blocks: vec![CertificateBlock { graphs: class.graphs.clone(), gram: Gram::Dense(psd_gram(n, &factors)) }],
        };
        let f = cert.expand();
        cert.verify(&f).unwrap();
        if f.is_zero() {
            return Ok(());
        }
        let square_terms: BTreeSet<CanonicalGraph> =
            class.graphs.iter().map(|h| canonicalize(&glue(h, h).without_labels())).collect();
        prop_assert!(f.terms().any(|(h, c)| c.is_positive() && square_terms.contains(h)));
        let report = sos_search(&f, 2, &SearchOptions::default()).unwrap();
        let SearchOutcome::Certificate(found) = &report.outcome else {
            return Err(TestCaseError::fail(format!("{:?}", report.outcome)));
        };
        prop_assert!(found.verify(&f).is_ok());
    }
}
