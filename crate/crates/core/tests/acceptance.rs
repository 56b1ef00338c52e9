//! Acceptance suite: one line per criterion, `PASS` or `FAIL`.
//!
//! Runs as a plain binary so the report is printed even when every check
//! passes; the process fails if any criterion does.

mod common;

use common::*;
use gluon_core::algebra::{expand_square_sum, glue, Rational};
use gluon_core::certify::{check_multiplier_obstruction, check_not_sos, Verdict};
use gluon_core::density::{combination_density, density, hom_count, LabelAssignment};
use gluon_core::graph::{automorphisms, canonicalize, is_isomorphic, marked_key, Graph, Label, DEFAULT_SEARCH_CAP};
use gluon_core::soscert::{
    binomial_cone_membership, build_sdp, enumerate_basis, round_and_verify, solve_embedded, sos_search, BasisCaps,
    CertificateBlock, ConeOutcome, Gram, RationalMatrix, RoundingOptions, SearchOptions, SearchOutcome, SolveStatus,
    SolverOptions, SosCertificate,
};
use gluon_core::squares::{involution_census, is_trivial_square, square_roots, TrivialSquareOutcome};
use num_bigint::BigUint;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

const CAP: usize = DEFAULT_SEARCH_CAP;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e1() -> gluon_core::PartiallyLabeledGraph {
    g(2, &[(0, 1)], &[(1, 0)])
}

fn c1_square_of_binomial() -> Outcome {
    let f = expand_square_sum(&[comb(&e1()) - comb(&edges(1))]);
    ensure!(f == comb(&path(2)) - comb(&edges(2)), "got {f:?}");
    ensure!(f.len() == 2, "expected two terms");
    Ok(())
}

fn c2_three_term_square() -> Outcome {
    let h21 = g(3, &[(0, 1), (1, 2)], &[(1, 0), (2, 1)]);
    let h12 = g(3, &[(0, 1), (0, 2)], &[(1, 0), (2, 1)]);
    let e13e = g(4, &[(0, 1), (2, 3)], &[(1, 0), (3, 1)]);
    let f = expand_square_sum(&[comb(&h21) - comb(&h12) - comb(&e13e)]);
    let s3 = star(3);
    let two = q(2, 1);
    let expected = comb(&s3).scale(&two) + comb(&edges(3)) - comb(&path(3)).scale(&two)
        + comb(&glue(&s3, &edges(1))).scale(&two)
        - comb(&glue(&path(3), &edges(1))).scale(&two);
    ensure!(f == expected, "expansion {f:?}");
    let f3 = comb(&s3).scale(&two) + comb(&edges(3)) - comb(&path(3)).scale(&two);
    ensure!(f.min_degree_component().map_err(|e| e.to_string())? == f3, "degree-3 part differs");
    let cert = SosCertificate {
        blocks: vec![
            CertificateBlock {
                graphs: vec![canonicalize(&h21), canonicalize(&h12)],
                gram: Gram::Dense(RationalMatrix::from_integers(&[&[1, -1], &[-1, 1]]).unwrap()),
            },
            CertificateBlock { graphs: vec![canonicalize(&e13e)], gram: Gram::Diagonal(vec![Rational::one()]) },
        ],
    };
    cert.verify(&f3).map_err(|e| e.to_string())
}

fn c3_path_parity() -> Outcome {
    for k in [3, 5, 7] {
        let out = is_trivial_square(&path(k), CAP).map_err(|e| e.to_string())?;
        ensure!(out.is_trivial(), "P{k} should be a trivial square");
    }
    for k in [2, 4, 6] {
        let TrivialSquareOutcome::NonTrivial(w) = is_trivial_square(&path(k), CAP).map_err(|e| e.to_string())? else {
            return Err(format!("P{k} should have a non-trivial root"));
        };
        let half: Vec<_> = (0..k / 2).map(|i| (i, i + 1)).collect();
        let root = g(k / 2 + 1, &half, &[(1, 0)]);
        ensure!(is_isomorphic(&w.root, &root), "P{k} root is {:?}", w.root);
    }
    Ok(())
}

fn c4_smallest_open_sidorenko_case() -> Outcome {
    let h = k55_minus_c10();
    let auts = automorphisms(&h, CAP).map_err(|e| e.to_string())?;
    ensure!(auts.len() == 20, "{} automorphisms", auts.len());
    let census = involution_census(&h, CAP).map_err(|e| e.to_string())?;
    ensure!(census.total() == 11, "{} involutions", census.total());
    let by_fixed = census.by_fixed_count();
    ensure!(by_fixed.get(&0) == Some(&6) && by_fixed.get(&2) == Some(&5), "fixed-point profile {by_fixed:?}");
    ensure!(
        census.involutions.iter().filter(|r| r.fixed_count == 2).all(|r| !r.splits_without_cross_edges),
        "a two-fixed-point involution splits"
    );
    ensure!(is_trivial_square(&h, CAP).map_err(|e| e.to_string())?.is_trivial(), "not a trivial square");
    let f = comb(&h) - comb(&edges(15));
    ensure!(check_not_sos(&f, CAP).map_err(|e| e.to_string())?.is_not_sos(), "check_not_sos inconclusive");
    let Verdict::NotSos(w) = check_multiplier_obstruction(&f, CAP).map_err(|e| e.to_string())? else {
        return Err("multiplier obstruction inconclusive".into());
    };
    ensure!(w.multiplier_obstruction, "obstruction flag not set");
    Ok(())
}

fn c5_blakley_roy_sweep() -> Outcome {
    for k in [3, 5, 7] {
        for lambda in [q(-2, 1), q(-1, 1), q(1, 3), q(1, 1), q(5, 1)] {
            let v = check_not_sos(&blakley_roy(lambda.clone(), k), CAP).map_err(|e| e.to_string())?;
            ensure!(v.is_not_sos(), "k = {k}, lambda = {lambda}: {v:?}");
        }
    }
    Ok(())
}

fn c6_binomial_cone() -> Outcome {
    let p2 = comb(&path(2)) - comb(&edges(2));
    let r = binomial_cone_membership(&p2, 2, BasisCaps::for_degree(2)).map_err(|e| e.to_string())?;
    let ConeOutcome::Member(dec) = &r.outcome else { return Err("P2 - e^2 not in the cone".into()) };
    ensure!(dec.verify(&p2), "decomposition does not re-expand");
    let p3 = blakley_roy(q(1, 1), 3);
    let r = binomial_cone_membership(&p3, 3, BasisCaps::for_degree(3)).map_err(|e| e.to_string())?;
    let ConeOutcome::NotMember(z) = &r.outcome else { return Err("P3 - e^3 in the cone".into()) };
    ensure!(z.verify(&r.generators, &p3), "Farkas certificate fails");
    Ok(())
}

fn c7_sdp_pipeline() -> Outcome {
    let p2 = comb(&path(2)) - comb(&edges(2));
    let basis = enumerate_basis(2, BasisCaps::for_degree(2)).map_err(|e| e.to_string())?;
    let problem = build_sdp(&p2, &basis).map_err(|e| e.to_string())?;
    let num = solve_embedded(&problem, &SolverOptions::default());
    ensure!(num.status == SolveStatus::Feasible && num.residual < 1e-8, "residual {}", num.residual);
    let cert = round_and_verify(&problem, &num, &RoundingOptions::default()).map_err(|e| e.to_string())?;
    ensure!(cert.expand() == p2, "certificate expands wrongly");
    cert.verify(&p2).map_err(|e| e.to_string())?;

    let f = blakley_roy(q(1, 1), 3).min_degree_component().map_err(|e| e.to_string())?;
    let report = sos_search(&f, 3, &SearchOptions::default()).map_err(|e| e.to_string())?;
    ensure!(matches!(report.outcome, SearchOutcome::NoCertificate { .. }), "P3 - e^3: {:?}", report.outcome);
    ensure!(check_not_sos(&f, CAP).map_err(|e| e.to_string())?.is_not_sos(), "certifier disagrees");
    Ok(())
}

fn c8_density_oracle() -> Outcome {
    let mut hs = Vec::new();
    for h in unlabeled_catalog(4) {
        hs.extend(labelings(&h, 2));
    }
    let targets: Vec<Graph> = (1..=5).flat_map(graph_classes).collect();
    let mut pairs = 0;
    for h in &hs {
        let labels: Vec<Label> = h.label_set().into_iter().collect();
        for t in &targets {
            for phi in gluon_core::density::all_assignments(&labels, t.vertex_count()) {
                let fast = hom_count(h, t, &phi).map_err(|e| e.to_string())?;
                let slow = naive_hom_count(h, t, &phi);
                ensure!(fast == BigUint::from(slow), "{h:?} into {t:?} under {phi:?}: {fast} vs {slow}");
            }
            pairs += 1;
        }
    }
    ensure!(pairs >= 500, "only {pairs} pairs");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let a = random_labeled(&mut rng, 4, &[1, 2]);
        let b = random_labeled(&mut rng, 4, &[1, 2]);
        let n = rng.gen_range(1..=5);
        let t = random_graph(&mut rng, n, 0.5);
        let phi: LabelAssignment = [1, 2].into_iter().map(|l| (l, rng.gen_range(0..n))).collect();
        let lhs = density(&glue(&a, &b), &t, &phi).map_err(|e| e.to_string())?;
        let rhs = density(&a, &t, &phi).map_err(|e| e.to_string())? * density(&b, &t, &phi).map_err(|e| e.to_string())?;
        ensure!(lhs == rhs, "multiplicativity fails for {a:?}, {b:?}");
    }
    Ok(())
}

fn c9_square_root_oracle() -> Outcome {
    let brute = brute_square_roots(6);
    let catalog = unlabeled_catalog(6);
    for f in &catalog {
        let roots = square_roots(f, CAP).map_err(|e| e.to_string())?;
        let found: BTreeSet<Vec<u8>> = roots
            .witnesses
            .iter()
            .map(|w| marked_key(&w.root))
            .chain([marked_key(&roots.fully_labeled)])
            .collect();
        let expected = brute.get(canonicalize(f).key()).cloned().unwrap_or_default();
        ensure!(found == expected, "{f:?}: {} roots found, {} by brute force", found.len(), expected.len());
    }
    ensure!(catalog.len() > 100, "catalog has only {} graphs", catalog.len());
    Ok(())
}

fn c10_squares_are_nonnegative() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..300 {
        let a = random_combination(&mut rng, 3, 4, &[1, 2]);
        let n = rng.gen_range(1..=6);
        let p = rng.gen_range(0.2..0.8);
        let t = random_graph(&mut rng, n, p);
        let f = expand_square_sum(std::slice::from_ref(&a));
        let value = combination_density(&f, &t, &LabelAssignment::new()).map_err(|e| e.to_string())?;
        ensure!(!value.is_negative(), "t([[a^2]]) = {value} for a = {a:?}");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 square of e1 - e", c1_square_of_binomial, Duration::from_secs(1)),
        ("2 three-term square and its two-class certificate", c2_three_term_square, Duration::from_secs(1)),
        ("3 path parity", c3_path_parity, Duration::from_secs(5)),
        ("4 K55 minus C10", c4_smallest_open_sidorenko_case, Duration::from_secs(120)),
        ("5 lambda P_k - e^k sweep", c5_blakley_roy_sweep, Duration::from_secs(10)),
        ("6 binomial cone", c6_binomial_cone, Duration::from_secs(60)),
        ("7 SDP pipeline", c7_sdp_pipeline, Duration::from_secs(120)),
        ("8 density oracle", c8_density_oracle, Duration::from_secs(120)),
        ("9 square-root oracle", c9_square_root_oracle, Duration::from_secs(600)),
        ("10 nonnegativity of squares", c10_squares_are_nonnegative, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= limit {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("PASS  criterion {name} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
