//! Square roots of unlabeled graphs.
//!
//! An unlabeled graph `F` equals `[[H^2]]` with `H` not fully labeled exactly
//! when `F` has an involutive automorphism whose moved vertices split into
//! two sides, one from each swapped pair, with no edge across. The root is
//! the quotient by the involution with every fixed vertex labeled.
//!
//! Disconnected graphs are handled by the same search with an empty fixed
//! set allowed (this covers `F = H ⊔ H` for unlabeled `H`); every candidate
//! root is checked by expanding its square.

use crate::algebra::{expand_square_sum, GraphCombination};
use crate::graph::{
    automorphisms, canonicalize, CanonicalGraph, Graph, GraphError, Label, PartiallyLabeledGraph,
    VertexPermutation,
};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SquareError {
    #[error("square roots are only searched for unlabeled graphs")]
    LabeledInput,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("quotient by involution {0:?} does not square back to the input")]
    RootMismatch(VertexPermutation),
}

/// A non-trivial square root, with the involution that produced it.
///
/// Vertex indices refer to the canonical form of the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareWitness {
    pub involution: VertexPermutation,
    pub fixed_set: Vec<usize>,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub root: PartiallyLabeledGraph,
}

#[derive(Debug, Clone)]
pub struct SquareRoots {
    /// Canonical form of the input; witness indices refer to it.
    pub graph: CanonicalGraph,
    /// One witness per non-identity involution admitting a valid split.
    pub witnesses: Vec<SquareWitness>,
    /// The fully labeled copy, which is always a root.
    pub fully_labeled: PartiallyLabeledGraph,
}

/// Per-involution record of the three conditions of the characterization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionRecord {
    pub involution: VertexPermutation,
    pub fixed_count: usize,
    /// Fixes a non-empty proper subset of the vertices.
    pub fixes_proper_subset: bool,
    /// Moved vertices split into two sides with no edge between them.
    pub splits_without_cross_edges: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionCensus {
    pub graph: CanonicalGraph,
    pub automorphism_count: usize,
    /// Non-identity involutions only.
    pub involutions: Vec<InvolutionRecord>,
}

impl InvolutionCensus {
    pub fn total(&self) -> usize {
        self.involutions.len()
    }

    /// Number of involutions by size of the fixed set.
    pub fn by_fixed_count(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for r in &self.involutions {
            *out.entry(r.fixed_count).or_insert(0) += 1;
        }
        out
    }

    pub fn splittable(&self) -> usize {
        self.involutions.iter().filter(|r| r.splits_without_cross_edges).count()
    }

    /// Involutions meeting all three conditions.
    pub fn satisfying_all(&self) -> usize {
        self.involutions
            .iter()
            .filter(|r| r.fixes_proper_subset && r.splits_without_cross_edges)
            .count()
    }
}

#[derive(Debug, Clone)]
pub enum TrivialSquareOutcome {
    Trivial,
    NonTrivial(SquareWitness),
}

impl TrivialSquareOutcome {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Self::Trivial)
    }
}

pub fn square_roots(f: &PartiallyLabeledGraph, cap: usize) -> Result<SquareRoots, SquareError> {
    let graph = canonical_unlabeled(f)?;
    let target = GraphCombination::graph(&graph);
    let mut witnesses = Vec::new();
    for phi in automorphisms(&graph, cap)? {
        if phi.is_identity() || !phi.is_involution() {
            continue;
        }
        let Some((side_a, side_b)) = split(graph.graph().graph(), &phi) else {
            continue;
        };
        let fixed_set = phi.fixed_points();
        let root = quotient(&graph, &phi, &fixed_set, &side_a);
        if expand_square_sum(&[GraphCombination::graph(&root)]) != target {
            return Err(SquareError::RootMismatch(phi));
        }
        witnesses.push(SquareWitness { involution: phi, fixed_set, side_a, side_b, root });
    }
    let fully_labeled = graph.fully_labeled_copy();
    Ok(SquareRoots { graph, witnesses, fully_labeled })
}

/// True when the only roots are fully labeled copies; otherwise returns a witness.
pub fn is_trivial_square(
    f: &PartiallyLabeledGraph,
    cap: usize,
) -> Result<TrivialSquareOutcome, SquareError> {
    let roots = square_roots(f, cap)?;
    Ok(match roots.witnesses.into_iter().next() {
        Some(w) => TrivialSquareOutcome::NonTrivial(w),
        None => TrivialSquareOutcome::Trivial,
    })
}

pub fn involution_census(
    f: &PartiallyLabeledGraph,
    cap: usize,
) -> Result<InvolutionCensus, SquareError> {
    let graph = canonical_unlabeled(f)?;
    let auts = automorphisms(&graph, cap)?;
    let n = graph.vertex_count();
    let involutions = auts
        .iter()
        .filter(|p| !p.is_identity() && p.is_involution())
        .map(|p| {
            let fixed_count = p.fixed_points().len();
            InvolutionRecord {
                involution: p.clone(),
                fixed_count,
                fixes_proper_subset: fixed_count > 0 && fixed_count < n,
                splits_without_cross_edges: split(graph.graph().graph(), p).is_some(),
            }
        })
        .collect();
    Ok(InvolutionCensus { graph, automorphism_count: auts.len(), involutions })
}

fn canonical_unlabeled(f: &PartiallyLabeledGraph) -> Result<CanonicalGraph, SquareError> {
    if !f.is_unlabeled() {
        return Err(SquareError::LabeledInput);
    }
    Ok(canonicalize(f))
}

/// Two-colors the swapped pairs so that every edge between moved vertices
/// stays on one side. Union-find with parity: `x_p` says whether the smaller
/// vertex of pair `p` sits on side A.
fn split(g: &Graph, phi: &VertexPermutation) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.vertex_count();
    let mut pair_of = alloc::vec![usize::MAX; n];
    let mut reps = Vec::new();
    for v in 0..n {
        let w = phi.apply(v);
        if w > v {
            pair_of[v] = reps.len();
            pair_of[w] = reps.len();
            reps.push(v);
        }
    }
    let mut uf = ParityUnionFind::new(reps.len());
    for (u, w) in g.edges() {
        let (pu, pw) = (pair_of[u], pair_of[w]);
        if pu == usize::MAX || pw == usize::MAX {
            continue;
        }
        if pu == pw {
            return None;
        }
        let parity = (u != reps[pu]) ^ (w != reps[pw]);
        if !uf.union(pu, pw, parity) {
            return None;
        }
    }
    let (mut side_a, mut side_b) = (Vec::new(), Vec::new());
    for (p, &r) in reps.iter().enumerate() {
        let partner = phi.apply(r);
        if uf.parity_to_root(p) {
            side_a.push(partner);
            side_b.push(r);
        } else {
            side_a.push(r);
            side_b.push(partner);
        }
    }
    side_a.sort_unstable();
    side_b.sort_unstable();
    Some((side_a, side_b))
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), parity: alloc::vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, up) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= up;
        (root, self.parity[x])
    }

    fn parity_to_root(&mut self, x: usize) -> bool {
        self.find(x).1
    }

    /// Records `x_a xor x_b = parity`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, parity: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == parity;
        }
        self.parent[ra] = rb;
        self.parity[ra] = pa ^ pb ^ parity;
        true
    }
}

/// Identifies `v` with `phi(v)`, keeping one copy of each doubled edge, and
/// labels the fixed vertices `1..=m` in vertex order.
fn quotient(
    g: &PartiallyLabeledGraph,
    phi: &VertexPermutation,
    fixed: &[usize],
    side_a: &[usize],
) -> PartiallyLabeledGraph {
    let mut index = alloc::vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    for &v in fixed.iter().chain(side_a) {
        index[v] = next;
        next += 1;
    }
    for v in 0..g.vertex_count() {
        if index[v] == usize::MAX {
            index[v] = index[phi.apply(v)];
        }
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| (index[u].min(index[v]), index[u].max(index[v])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let labels: Vec<(Label, usize)> = (0..fixed.len()).map(|i| (i as Label + 1, i)).collect();
    PartiallyLabeledGraph::new(next, &edges, &labels)
        .expect("quotient by an involution with a valid split is a simple graph")
}
