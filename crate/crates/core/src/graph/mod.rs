//! Small simple graphs with injective partial labelings.
//!
//! Two graph types live here. [`Graph`] is a plain simple graph that may
//! carry isolated vertices; it is what densities are evaluated on.
//! [`PartiallyLabeledGraph`] is the atom of the gluing algebra: a simple
//! graph plus labels, normalized at construction so that no unlabeled
//! isolated vertex survives.

mod canon;
mod perm;

pub use canon::{canonicalize, is_isomorphic, marked_key, CanonicalGraph};
pub use perm::{automorphisms, VertexPermutation};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

/// Label values are positive integers.
pub type Label = u32;

/// Hard limit on vertex count, imposed by the bitset adjacency rows.
pub const MAX_VERTICES: usize = 64;

/// Default cap for the backtracking searches (automorphisms, square roots).
pub const DEFAULT_SEARCH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("label {0} is not a positive integer")]
    ZeroLabel(Label),
    #[error("label {0} used twice")]
    DuplicateLabel(Label),
    #[error("vertex {0} carries two labels")]
    DoublyLabeledVertex(usize),
    #[error("{vertex_count} vertices exceeds the hard limit of {MAX_VERTICES}")]
    TooManyVertices { vertex_count: usize },
    #[error("graph with {vertex_count} vertices is too large for the search cap of {cap}")]
    TooLarge { vertex_count: usize, cap: usize },
}

/// A simple undirected graph; isolated vertices are kept.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and bad endpoints.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(vertex_count)?;
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn empty(vertex_count: usize) -> Result<Self, GraphError> {
        if vertex_count > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { vertex_count });
        }
        Ok(Self { adj: alloc::vec![0; vertex_count] })
    }

    pub(crate) fn from_rows(adj: Vec<u64>) -> Self {
        Self { adj }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Adds `u`-`v`; adding an existing edge is a no-op.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.adj.len()).flat_map(move |u| {
            (u + 1..self.adj.len()).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v))
        })
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..n {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adj[v] & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            seen |= comp;
            out.push(bits(comp).collect());
        }
        out
    }

    /// Induced subgraph on `keep` (in the given order).
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph { adj: alloc::vec![0; keep.len()] };
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Image of the graph under `perm`, where `perm[v]` is the new index of `v`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph { adj: alloc::vec![0; self.adj.len()] };
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.vertex_count())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Iterates over set bits of a mask, lowest first.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// A simple graph with an injective partial labeling by positive integers.
///
/// Unlabeled isolated vertices are dropped at construction; labeled isolated
/// vertices are kept (they appear when padding label sets).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartiallyLabeledGraph {
    graph: Graph,
    labels: Vec<Option<Label>>,
}

impl PartiallyLabeledGraph {
    /// Builds a partially labeled graph from an edge list and `(label, vertex)` pairs.
    pub fn new(
        vertex_count: usize,
        edges: &[(usize, usize)],
        labels: &[(Label, usize)],
    ) -> Result<Self, GraphError> {
        let graph = Graph::new(vertex_count, edges)?;
        let mut per_vertex = alloc::vec![None; vertex_count];
        let mut used = BTreeSet::new();
        for &(label, v) in labels {
            if label == 0 {
                return Err(GraphError::ZeroLabel(label));
            }
            if v >= vertex_count {
                return Err(GraphError::VertexOutOfRange { vertex: v, vertex_count });
            }
            if !used.insert(label) {
                return Err(GraphError::DuplicateLabel(label));
            }
            if per_vertex[v].is_some() {
                return Err(GraphError::DoublyLabeledVertex(v));
            }
            per_vertex[v] = Some(label);
        }
        Ok(Self::from_parts(graph, per_vertex))
    }

    /// An unlabeled graph.
    pub fn unlabeled(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(vertex_count, edges, &[])
    }

    /// The empty graph, the multiplicative identity of the algebra.
    pub fn empty() -> Self {
        Self { graph: Graph { adj: Vec::new() }, labels: Vec::new() }
    }

    /// Assembles from validated parts, dropping unlabeled isolated vertices.
    pub(crate) fn from_parts(graph: Graph, labels: Vec<Option<Label>>) -> Self {
        debug_assert_eq!(graph.vertex_count(), labels.len());
        let keep: Vec<usize> = (0..graph.vertex_count())
            .filter(|&v| labels[v].is_some() || graph.degree(v) > 0)
            .collect();
        if keep.len() == graph.vertex_count() {
            return Self { graph, labels };
        }
        let labels = keep.iter().map(|&v| labels[v]).collect();
        Self { graph: graph.induced(&keep), labels }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Number of edges.
    pub fn degree(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph.edges()
    }

    pub fn label_of(&self, v: usize) -> Option<Label> {
        self.labels[v]
    }

    pub fn vertex_labels(&self) -> &[Option<Label>] {
        &self.labels
    }

    pub fn vertex_of_label(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == Some(label))
    }

    /// `(label, vertex)` pairs sorted by label.
    pub fn labeling(&self) -> Vec<(Label, usize)> {
        let mut out: Vec<_> =
            self.labels.iter().enumerate().filter_map(|(v, l)| l.map(|l| (l, v))).collect();
        out.sort_unstable();
        out
    }

    pub fn label_set(&self) -> BTreeSet<Label> {
        self.labels.iter().flatten().copied().collect()
    }

    pub fn labeled_vertex_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    pub fn unlabeled_vertex_count(&self) -> usize {
        self.vertex_count() - self.labeled_vertex_count()
    }

    pub fn is_unlabeled(&self) -> bool {
        self.labels.iter().all(Option::is_none)
    }

    pub fn is_fully_labeled(&self) -> bool {
        self.labels.iter().all(Option::is_some)
    }

    /// Edges with both endpoints labeled, as sorted label pairs.
    pub fn fully_labeled_edges(&self) -> BTreeSet<(Label, Label)> {
        self.edges()
            .filter_map(|(u, v)| match (self.labels[u], self.labels[v]) {
                (Some(a), Some(b)) => Some((a.min(b), a.max(b))),
                _ => None,
            })
            .collect()
    }

    pub fn fully_labeled_edge_count(&self) -> usize {
        self.edges().filter(|&(u, v)| self.labels[u].is_some() && self.labels[v].is_some()).count()
    }

    /// The same graph with all labels erased (isolated vertices then vanish).
    pub fn without_labels(&self) -> Self {
        Self::from_parts(self.graph.clone(), alloc::vec![None; self.vertex_count()])
    }

    /// A copy with every vertex labeled; unlabeled vertices get fresh labels
    /// above the current maximum, in vertex order.
    pub fn fully_labeled_copy(&self) -> Self {
        let mut next = self.labels.iter().flatten().copied().max().unwrap_or(0);
        let labels = self
            .labels
            .iter()
            .map(|l| {
                l.or_else(|| {
                    next += 1;
                    Some(next)
                })
            })
            .collect();
        Self { graph: self.graph.clone(), labels }
    }

    /// Renames labels through `map`; labels missing from `map` are kept.
    pub fn relabeled(&self, map: &BTreeMap<Label, Label>) -> Self {
        let labels = self.labels.iter().map(|l| l.map(|l| *map.get(&l).unwrap_or(&l))).collect();
        Self { graph: self.graph.clone(), labels }
    }

    /// Removes every isolated vertex, labeled or not.
    pub fn without_isolated(&self) -> Self {
        let keep: Vec<usize> =
            (0..self.vertex_count()).filter(|&v| self.graph.degree(v) > 0).collect();
        let labels = keep.iter().map(|&v| self.labels[v]).collect();
        Self { graph: self.graph.induced(&keep), labels }
    }

    /// Adds one labeled isolated vertex per label in `extra`.
    pub(crate) fn with_isolated_labels(&self, extra: &[Label]) -> Self {
        let n = self.vertex_count();
        let mut adj = self.graph.adj.clone();
        adj.resize(n + extra.len(), 0);
        let mut labels = self.labels.clone();
        labels.extend(extra.iter().map(|&l| Some(l)));
        Self { graph: Graph { adj }, labels }
    }

    /// Image under `perm` (`perm[v]` is the new index of `v`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut labels = alloc::vec![None; self.vertex_count()];
        for (v, &l) in self.labels.iter().enumerate() {
            labels[perm[v]] = l;
        }
        Self { graph: self.graph.permuted(perm), labels }
    }

    /// Disjoint union of unlabeled copies of single edges: `e^k`.
    pub fn edge_power(k: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..k).map(|i| (2 * i, 2 * i + 1)).collect();
        Self::unlabeled(2 * k, &edges)
    }

    /// The path with `k` edges.
    pub fn path(k: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Self::unlabeled(k + 1, &edges)
    }
}

impl fmt::Debug for PartiallyLabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLG(n={}, labels=", self.vertex_count())?;
        f.debug_list().entries(self.labeling()).finish()?;
        write!(f, ", edges=")?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(Graph::new(2, &[(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(Graph::new(2, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::new(2, &[(0, 2)]), Err(GraphError::VertexOutOfRange { .. })));
        assert_eq!(
            PartiallyLabeledGraph::new(2, &[(0, 1)], &[(1, 0), (1, 1)]),
            Err(GraphError::DuplicateLabel(1))
        );
        assert_eq!(
            PartiallyLabeledGraph::new(2, &[(0, 1)], &[(1, 0), (2, 0)]),
            Err(GraphError::DoublyLabeledVertex(0))
        );
        assert_eq!(
            PartiallyLabeledGraph::new(2, &[(0, 1)], &[(0, 0)]),
            Err(GraphError::ZeroLabel(0))
        );
        assert!(matches!(Graph::empty(65), Err(GraphError::TooManyVertices { .. })));
    }

    #[test]
    fn drops_only_unlabeled_isolated_vertices() {
        let g = PartiallyLabeledGraph::new(5, &[(1, 3)], &[(2, 4)]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.degree(), 1);
        assert_eq!(g.label_set().into_iter().collect::<Vec<_>>(), [2]);
        assert_eq!(g.without_isolated().vertex_count(), 2);
    }

    #[test]
    fn fully_labeled_edges_use_label_values() {
        let g = PartiallyLabeledGraph::new(3, &[(0, 1), (1, 2)], &[(5, 1), (3, 0)]).unwrap();
        assert_eq!(g.fully_labeled_edges().into_iter().collect::<Vec<_>>(), [(3, 5)]);
        assert_eq!(g.fully_labeled_edge_count(), 1);
    }

    #[test]
    fn components_split_disjoint_parts() {
        let g = Graph::new(5, &[(0, 3), (1, 2)]).unwrap();
        assert_eq!(g.components(), [alloc::vec![0, 3], alloc::vec![1, 2], alloc::vec![4]]);
    }
}
