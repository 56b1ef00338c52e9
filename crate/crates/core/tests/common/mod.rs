//! Shared fixtures and brute-force oracles for the integration tests.

#![allow(dead_code)]

use gluon_core::algebra::{glue, GraphCombination, Rational};
use gluon_core::graph::{canonicalize, marked_key, Graph, Label, PartiallyLabeledGraph as G};
use proptest::prelude::*;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

pub fn g(n: usize, edges: &[(usize, usize)], labels: &[(Label, usize)]) -> G {
    G::new(n, edges, labels).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn comb(g: &G) -> GraphCombination {
    GraphCombination::graph(g)
}

pub fn path(k: usize) -> G {
    G::path(k).unwrap()
}

pub fn edges(k: usize) -> G {
    G::edge_power(k).unwrap()
}

pub fn star(k: usize) -> G {
    let e: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    g(k + 1, &e, &[])
}

pub fn cycle(n: usize) -> G {
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    g(n, &e, &[])
}

/// K_{5,5} minus a Hamiltonian cycle: `i ~ 5 + j` unless `j = i` or `j = i + 1 (mod 5)`.
pub fn k55_minus_c10() -> G {
    let mut e = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            if j != i && j != (i + 1) % 5 {
                e.push((i, 5 + j));
            }
        }
    }
    g(10, &e, &[])
}

/// `lambda P_k - e^k`.
pub fn blakley_roy(lambda: Rational, k: usize) -> GraphCombination {
    GraphCombination::term(lambda, &path(k)) - comb(&edges(k))
}

/// Every map `V(h) -> V(g)` that respects `phi`, checked edge by edge.
pub fn naive_hom_count(h: &G, target: &Graph, phi: &BTreeMap<Label, usize>) -> u64 {
    let n = h.vertex_count();
    let m = target.vertex_count();
    let total = (m as u64).pow(n as u32);
    let mut count = 0;
    let mut map = vec![0usize; n];
    for mut code in 0..total {
        for slot in map.iter_mut() {
            *slot = (code % m as u64) as usize;
            code /= m as u64;
        }
        let labels_ok = (0..n).all(|v| h.label_of(v).is_none_or(|l| phi[&l] == map[v]));
        if labels_ok && h.edges().all(|(u, v)| target.has_edge(map[u], map[v])) {
            count += 1;
        }
    }
    count
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut p = p.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out
}

/// Label-preserving isomorphism by trying every bijection.
pub fn brute_isomorphic(a: &G, b: &G) -> bool {
    if a.vertex_count() != b.vertex_count() || a.degree() != b.degree() {
        return false;
    }
    permutations(a.vertex_count()).iter().any(|p| {
        (0..a.vertex_count()).all(|v| a.label_of(v) == b.label_of(p[v]))
            && a.edges().all(|(u, v)| b.graph().has_edge(p[u], p[v]))
    })
}

/// Number of adjacency-preserving, label-fixing bijections.
pub fn brute_automorphism_count(a: &G) -> usize {
    permutations(a.vertex_count())
        .iter()
        .filter(|p| {
            (0..a.vertex_count()).all(|v| a.label_of(v) == a.label_of(p[v]))
                && a.edges().all(|(u, v)| a.graph().has_edge(p[u], p[v]))
        })
        .count()
}

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Every graph on exactly `n` vertices, one per edge subset.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = all_pairs(n);
    (0u64..1 << pairs.len()).map(move |mask| {
        let e: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        Graph::new(n, &e).unwrap()
    })
}

/// One graph per isomorphism class on exactly `n` vertices.
pub fn graph_classes(n: usize) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    all_graphs(n)
        .filter(|t| {
            let e: Vec<_> = t.edges().collect();
            seen.insert(canonicalize(&G::unlabeled(n, &e).unwrap()).key().to_vec())
        })
        .collect()
}

/// Unlabeled graphs without isolated vertices on at most `n` vertices, one
/// per isomorphism class, the empty graph excluded.
pub fn unlabeled_catalog(n: usize) -> Vec<G> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for k in 2..=n {
        for t in all_graphs(k) {
            if (0..k).any(|v| t.degree(v) == 0) {
                continue;
            }
            let e: Vec<_> = t.edges().collect();
            let h = G::unlabeled(k, &e).unwrap();
            if seen.insert(canonicalize(&h).key().to_vec()) {
                out.push(h);
            }
        }
    }
    out
}

/// Every way of putting labels `1..=k` on `k` distinct vertices of `h`,
/// for `k` up to `max_labels`, deduplicated up to isomorphism.
pub fn labelings(h: &G, max_labels: usize) -> Vec<G> {
    let n = h.vertex_count();
    let e: Vec<_> = h.edges().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let chosen: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        if chosen.len() > max_labels {
            continue;
        }
        for p in permutations(chosen.len()) {
            let labels: Vec<(Label, usize)> = p.iter().enumerate().map(|(i, &j)| (i as Label + 1, chosen[j])).collect();
            let lg = g(n, &e, &labels);
            if seen.insert(canonicalize(&lg).key().to_vec()) {
                out.push(lg);
            }
        }
    }
    out
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let e: Vec<_> = all_pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, &e).unwrap()
}

/// A random graph on at most `max_n` vertices whose labels come from `labels`.
pub fn random_labeled<R: Rng>(rng: &mut R, max_n: usize, labels: &[Label]) -> G {
    loop {
        let n = rng.gen_range(1..=max_n);
        let e: Vec<_> = all_pairs(n).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        let mut lab = Vec::new();
        for v in 0..n {
            if rng.gen_bool(0.4) {
                let l = labels[rng.gen_range(0..labels.len())];
                if !lab.iter().any(|&(x, _)| x == l) {
                    lab.push((l, v));
                }
            }
        }
        let h = g(n, &e, &lab);
        if h.vertex_count() > 0 {
            return h;
        }
    }
}

pub fn random_combination<R: Rng>(rng: &mut R, terms: usize, max_n: usize, labels: &[Label]) -> GraphCombination {
    let mut a = GraphCombination::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let c = q(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        a = a + GraphCombination::term(c, &random_labeled(rng, max_n, labels));
    }
    a
}

/// Every partially labeled `h` without isolated vertices (up to isomorphism
/// and renaming of labels) whose unlabeled square is a graph on at most
/// `max_n` vertices, grouped by that square.
pub fn brute_square_roots(max_n: usize) -> BTreeMap<Vec<u8>, BTreeSet<Vec<u8>>> {
    let mut roots: BTreeMap<Vec<u8>, BTreeSet<Vec<u8>>> = BTreeMap::new();
    // [[h^2]] has 2m - k vertices when h has m vertices, k of them labeled.
    for m in 1..=max_n {
        for k in 0..=m {
            if 2 * m - k > max_n {
                continue;
            }
            for t in all_graphs(m) {
                if (0..m).any(|v| t.degree(v) == 0) {
                    continue;
                }
                let e: Vec<_> = t.edges().collect();
                let labels: Vec<(Label, usize)> = (0..k).map(|v| (v as Label + 1, v)).collect();
                let h = g(m, &e, &labels);
                let square = glue(&h, &h).without_labels();
                roots.entry(canonicalize(&square).key().to_vec()).or_default().insert(marked_key(&h));
            }
        }
    }
    roots
}

/// Strategy for small partially labeled graphs with labels drawn from `labels`.
pub fn arb_graph(max_n: usize, labels: Vec<Label>) -> impl Strategy<Value = G> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let pairs = all_pairs(n);
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), pairs.len()),
                proptest::collection::vec(label_choice(&labels), n),
            )
        })
        .prop_map(|(n, mask, lab)| {
            let e: Vec<_> = all_pairs(n).into_iter().zip(mask).filter(|(_, b)| *b).map(|(p, _)| p).collect();
            let mut used = BTreeSet::new();
            let lab: Vec<(Label, usize)> =
                lab.into_iter().enumerate().filter_map(|(v, l)| l.filter(|l| used.insert(*l)).map(|l| (l, v))).collect();
            g(n, &e, &lab)
        })
}

fn label_choice(labels: &[Label]) -> BoxedStrategy<Option<Label>> {
    if labels.is_empty() {
        Just(None).boxed()
    } else {
        proptest::option::of(proptest::sample::select(labels.to_vec())).boxed()
    }
}

/// Strategy for combinations of up to `terms` graphs with small rational coefficients.
pub fn arb_combination(terms: usize, max_n: usize, labels: Vec<Label>) -> impl Strategy<Value = GraphCombination> {
    proptest::collection::vec((arb_graph(max_n, labels), -3i64..=3, 1i64..=3), 1..=terms).prop_map(|ts| {
        ts.into_iter().fold(GraphCombination::zero(), |a, (h, n, d)| a + GraphCombination::term(q(n, d), &h))
    })
}

pub fn arb_target(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let e: Vec<_> = all_pairs(n).into_iter().zip(mask).filter(|(_, b)| *b).map(|(p, _)| p).collect();
            Graph::new(n, &e).unwrap()
        })
    })
}
