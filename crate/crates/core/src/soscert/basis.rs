//! Candidate square roots at a fixed homogeneous degree.
//!
//! A graph `H` with `m` edges, `l` of them fully labeled, satisfies
//! `deg([[H^2]]) = 2m - l`. Two such graphs of the same square degree `d`
//! glue to degree `d` exactly when their fully labeled edge sets coincide, so
//! the candidates split into classes keyed by that edge set, and a
//! homogeneous sum of squares of degree `d` only ever pairs graphs of the
//! same class.

use crate::algebra::cross_degree;
use crate::graph::{canonicalize, CanonicalGraph, Graph, Label, PartiallyLabeledGraph};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// Largest `max_vertices` or `max_labels` accepted.
pub const MAX_BASIS_CAP: usize = 16;
/// Largest number of basis graphs produced before giving up.
pub const MAX_BASIS_SIZE: usize = 250_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisCaps {
    pub max_vertices: usize,
    pub max_labels: usize,
}

impl BasisCaps {
    /// `2d` vertices and `2d` labels; nothing is lost at degree `d`, since a
    /// root without isolated vertices has at most `2 deg(H) <= 2d` vertices.
    pub fn for_degree(d: usize) -> Self {
        Self { max_vertices: 2 * d, max_labels: 2 * d }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasisError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("{name} = {value} exceeds the limit {limit}")]
    CapTooLarge { name: &'static str, value: usize, limit: usize },
    #[error("basis exceeds {limit} graphs")]
    TooLarge { limit: usize },
}

/// Graphs sharing one fully labeled edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisClass {
    pub fully_labeled_edges: BTreeSet<(Label, Label)>,
    pub graphs: Vec<CanonicalGraph>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousBasis {
    pub degree: usize,
    pub caps: BasisCaps,
    pub classes: Vec<BasisClass>,
}

impl HomogeneousBasis {
    pub fn graph_count(&self) -> usize {
        self.classes.iter().map(|c| c.graphs.len()).sum()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &CanonicalGraph> {
        self.classes.iter().flat_map(|c| &c.graphs)
    }

    /// Index of the class containing `g`, if any.
    pub fn class_of(&self, g: &PartiallyLabeledGraph) -> Option<usize> {
        let key = canonicalize(g);
        let edges = key.fully_labeled_edges();
        let i = self.classes.binary_search_by(|c| c.fully_labeled_edges.cmp(&edges)).ok()?;
        self.classes[i].graphs.binary_search(&key).is_ok().then_some(i)
    }
}

/// Every graph without isolated vertices, with at most `caps.max_vertices`
/// vertices and labels drawn from `1..=caps.max_labels`, whose square has
/// degree `d`; grouped into classes and sorted.
pub fn enumerate_basis(d: usize, caps: BasisCaps) -> Result<HomogeneousBasis, BasisError> {
    if d == 0 {
        return Err(BasisError::ZeroDegree);
    }
    for (name, value) in [("max_vertices", caps.max_vertices), ("max_labels", caps.max_labels)] {
        if value > MAX_BASIS_CAP {
            return Err(BasisError::CapTooLarge { name, value, limit: MAX_BASIS_CAP });
        }
    }
    let mut classes: BTreeMap<BTreeSet<(Label, Label)>, BTreeSet<CanonicalGraph>> = BTreeMap::new();
    let mut total = 0;
    let shapes = shapes_up_to(d, caps.max_vertices);
    // deg(H) = m needs l = 2m - d fully labeled edges with 0 <= l <= m.
    for m in d.div_ceil(2)..=d {
        let l = 2 * m - d;
        for shape in &shapes[m] {
            for h in labelings(shape, l, caps.max_labels) {
                let h = canonicalize(&h);
                let class = classes.entry(h.fully_labeled_edges()).or_default();
                if class.insert(h) {
                    total += 1;
                    if total > MAX_BASIS_SIZE {
                        return Err(BasisError::TooLarge { limit: MAX_BASIS_SIZE });
                    }
                }
            }
        }
    }
    let classes = classes
        .into_iter()
        .map(|(fully_labeled_edges, graphs)| BasisClass {
            fully_labeled_edges,
            graphs: graphs.into_iter().collect(),
        })
        .collect();
    Ok(HomogeneousBasis { degree: d, caps, classes })
}

/// Whether `g` and `h` may appear together in one square of degree `d`.
pub fn compatible(g: &PartiallyLabeledGraph, h: &PartiallyLabeledGraph, d: usize) -> bool {
    cross_degree(g, h) == d
}

/// Unlabeled graphs without isolated vertices, indexed by edge count
/// `0..=max_edges`, up to isomorphism.
fn shapes_up_to(max_edges: usize, max_vertices: usize) -> Vec<Vec<Graph>> {
    let mut levels: Vec<Vec<Graph>> = Vec::with_capacity(max_edges + 1);
    levels.push(alloc::vec![Graph::empty(0).expect("empty graph")]);
    for m in 1..=max_edges {
        let mut next: BTreeMap<Vec<u8>, Graph> = BTreeMap::new();
        for g in &levels[m - 1] {
            let n = g.vertex_count();
            let old = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let candidates = old
                .filter(|&(u, v)| !g.has_edge(u, v))
                .chain((0..n).map(|u| (u, n)))
                .chain(core::iter::once((n, n + 1)));
            for (u, v) in candidates {
                let grown = n.max(v + 1);
                if grown > max_vertices {
                    continue;
                }
                let mut edges: Vec<(usize, usize)> = g.edges().collect();
                edges.push((u, v));
                let h = PartiallyLabeledGraph::unlabeled(grown, &edges).expect("valid growth");
                let c = canonicalize(&h);
                next.entry(c.key().to_vec()).or_insert_with(|| c.graph().graph().clone());
            }
        }
        levels.push(next.into_values().collect());
    }
    levels
}

/// Every injective labeling of `shape` by values in `1..=max_labels` that
/// makes exactly `l` edges fully labeled.
fn labelings(shape: &Graph, l: usize, max_labels: usize) -> Vec<PartiallyLabeledGraph> {
    let n = shape.vertex_count();
    let edges: Vec<(usize, usize)> = shape.edges().collect();
    let mut out = Vec::new();
    for subset in 0u64..1 << n {
        let k = subset.count_ones() as usize;
        if k > max_labels {
            continue;
        }
        let inner = edges.iter().filter(|&&(u, v)| subset >> u & 1 == 1 && subset >> v & 1 == 1).count();
        if inner != l {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
        let mut chosen = Vec::with_capacity(k);
        assign(&members, max_labels, &mut chosen, &mut |labels| {
            let pairs: Vec<(Label, usize)> = labels.iter().zip(&members).map(|(&l, &v)| (l, v)).collect();
            out.push(PartiallyLabeledGraph::new(n, &edges, &pairs).expect("valid labeling"));
        });
    }
    out
}

fn assign(members: &[usize], max_labels: usize, chosen: &mut Vec<Label>, emit: &mut dyn FnMut(&[Label])) {
    if chosen.len() == members.len() {
        emit(chosen);
        return;
    }
    for label in 1..=max_labels as Label {
        if chosen.contains(&label) {
            continue;
        }
        chosen.push(label);
        assign(members, max_labels, chosen, emit);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_by_edge_count() {
        let shapes = shapes_up_to(4, 8);
        let counts: Vec<usize> = shapes.iter().map(Vec::len).collect();
        // 1, e; e^2, P2; e^3, P2 e, P3, S3, K3; 11 graphs with four edges.
        assert_eq!(counts, [1, 1, 2, 5, 11]);
        let tight = shapes_up_to(3, 4);
        assert_eq!(tight[3].len(), 3);
    }

    #[test]
    fn degree_two_basis() {
        let b = enumerate_basis(2, BasisCaps::for_degree(2)).unwrap();
        let e1 = PartiallyLabeledGraph::new(2, &[(0, 1)], &[(1, 0)]).unwrap();
        let class = b.class_of(&e1).expect("e1 is a basis graph");
        assert!(b.classes[class].fully_labeled_edges.is_empty());
        // e and e_c for c in 1..=4.
        assert_eq!(b.classes[class].graphs.len(), 5);
        // Fully labeled 2-edge graphs on labels 1..=4: 12 paths, 3 matchings.
        assert_eq!(b.graph_count(), 5 + 15);
    }

    #[test]
    fn degree_three_basis_shape() {
        let b = enumerate_basis(3, BasisCaps::for_degree(3)).unwrap();
        let sizes: Vec<usize> = b.classes.iter().map(|c| c.graphs.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), 455);
        assert_eq!(sizes.iter().filter(|&&s| s == 7).count(), 15);
        assert_eq!(sizes.len(), 470);
    }

    #[test]
    fn caps_are_enforced() {
        assert_eq!(enumerate_basis(0, BasisCaps::for_degree(1)), Err(BasisError::ZeroDegree));
        assert!(matches!(
            enumerate_basis(3, BasisCaps { max_vertices: 17, max_labels: 6 }),
            Err(BasisError::CapTooLarge { name: "max_vertices", .. })
        ));
    }
}
