//! Canonical forms by individualization and refinement.
//!
//! Components are canonized independently and then sorted, so disjoint
//! unions such as `e^15` never enter the backtracking search as a whole.
//! Inside a component the search refines an ordered partition to an
//! equitable one, individualizes a vertex of the first smallest
//! non-singleton cell and keeps the lexicographically least adjacency
//! encoding among the leaves. Twin vertices of a target cell are branched
//! on only once, since swapping them is an automorphism fixing the partition.

use super::{Graph, PartiallyLabeledGraph};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::hash::{Hash, Hasher};

/// A partially labeled graph in canonical vertex order, plus its byte key.
///
/// Equality, ordering and hashing go through the key only, so two values are
/// equal exactly when the underlying graphs are isomorphic via a
/// label-preserving bijection.
#[derive(Clone)]
pub struct CanonicalGraph {
    graph: PartiallyLabeledGraph,
    key: Vec<u8>,
}

impl CanonicalGraph {
    pub fn graph(&self) -> &PartiallyLabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> PartiallyLabeledGraph {
        self.graph
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }
}

impl core::ops::Deref for CanonicalGraph {
    type Target = PartiallyLabeledGraph;

    fn deref(&self) -> &PartiallyLabeledGraph {
        &self.graph
    }
}

impl PartialEq for CanonicalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CanonicalGraph {}

impl PartialOrd for CanonicalGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl Hash for CanonicalGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl core::fmt::Debug for CanonicalGraph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        self.graph.fmt(f)
    }
}

pub fn canonicalize(g: &PartiallyLabeledGraph) -> CanonicalGraph {
    let colors = label_colors(g);
    let order = canonical_order(g.graph(), &colors);
    let graph = g.permuted(&inverse(&order));
    let key = encode(&graph, |l| l.unwrap_or(0));
    CanonicalGraph { graph, key }
}

pub fn is_isomorphic(g: &PartiallyLabeledGraph, h: &PartiallyLabeledGraph) -> bool {
    g.vertex_count() == h.vertex_count()
        && g.degree() == h.degree()
        && canonicalize(g).key == canonicalize(h).key
}

/// Canonical key of `g` with label values forgotten but labeled vertices
/// still marked: equal keys mean isomorphic up to renaming labels.
pub fn marked_key(g: &PartiallyLabeledGraph) -> Vec<u8> {
    let colors: Vec<u64> = g.vertex_labels().iter().map(|l| u64::from(l.is_none())).collect();
    let order = canonical_order(g.graph(), &colors);
    encode(&g.permuted(&inverse(&order)), |l| u32::from(l.is_some()))
}

fn label_colors(g: &PartiallyLabeledGraph) -> Vec<u64> {
    g.vertex_labels().iter().map(|l| l.map_or(u64::MAX, u64::from)).collect()
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut perm = alloc::vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    perm
}

fn encode(g: &PartiallyLabeledGraph, label: impl Fn(Option<u32>) -> u32) -> Vec<u8> {
    let n = g.vertex_count();
    let mut key = Vec::with_capacity(1 + 4 * n + n * n / 16 + 1);
    key.push(n as u8);
    for &l in g.vertex_labels() {
        key.extend_from_slice(&label(l).to_be_bytes());
    }
    let mut acc = 0u8;
    let mut fill = 0;
    for u in 0..n {
        for v in u + 1..n {
            acc = acc << 1 | u8::from(g.graph().has_edge(u, v));
            fill += 1;
            if fill == 8 {
                key.push(acc);
                acc = 0;
                fill = 0;
            }
        }
    }
    if fill > 0 {
        key.push(acc << (8 - fill));
    }
    key
}

/// Canonical vertex order (position -> vertex) respecting `colors`: vertices
/// of smaller color come first and equal colors are interchangeable.
pub(crate) fn canonical_order(g: &Graph, colors: &[u64]) -> Vec<usize> {
    let mut parts: Vec<(Vec<u8>, Vec<usize>)> = g
        .components()
        .into_iter()
        .map(|comp| {
            let sub = g.induced(&comp);
            let sub_colors: Vec<u64> = comp.iter().map(|&v| colors[v]).collect();
            let mut search = Search { g: &sub, colors: &sub_colors, best: None };
            search.run();
            let (bits, local) = search.best.expect("search visits at least one leaf");
            let mut enc = Vec::with_capacity(1 + 8 * comp.len() + bits.len());
            enc.push(comp.len() as u8);
            for &v in &local {
                enc.extend_from_slice(&sub_colors[v].to_be_bytes());
            }
            enc.extend_from_slice(&bits);
            (enc, local.into_iter().map(|v| comp[v]).collect())
        })
        .collect();
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    parts.into_iter().flat_map(|(_, order)| order).collect()
}

struct Search<'a> {
    g: &'a Graph,
    colors: &'a [u64],
    best: Option<(Vec<u8>, Vec<usize>)>,
}

type Partition = Vec<Vec<usize>>;

impl Search<'_> {
    fn run(&mut self) {
        let n = self.g.vertex_count();
        let mut verts: Vec<usize> = (0..n).collect();
        verts.sort_by_key(|&v| (self.colors[v], self.g.degree(v)));
        let mut cells: Partition = Vec::new();
        for v in verts {
            match cells.last_mut() {
                Some(cell)
                    if self.colors[cell[0]] == self.colors[v]
                        && self.g.degree(cell[0]) == self.g.degree(v) =>
                {
                    cell.push(v)
                }
                _ => cells.push(alloc::vec![v]),
            }
        }
        self.descend(cells);
    }

    fn descend(&mut self, cells: Partition) {
        let cells = self.refine(cells);
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(idx) = target else {
            self.leaf(cells.iter().map(|c| c[0]).collect());
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[idx] {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..idx]);
            next.push(alloc::vec![v]);
            next.push(cells[idx].iter().copied().filter(|&u| u != v).collect());
            next.extend_from_slice(&cells[idx + 1..]);
            self.descend(next);
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        self.g.neighbors(u) & !(1 << v) == self.g.neighbors(v) & !(1 << u)
    }

    /// Splits cells by neighbor counts into every cell until stable.
    fn refine(&self, mut cells: Partition) -> Partition {
        let n = self.g.vertex_count();
        loop {
            let mut masks = Vec::with_capacity(cells.len());
            for cell in &cells {
                masks.push(cell.iter().fold(0u64, |m, &v| m | 1 << v));
            }
            let mut next: Partition = Vec::with_capacity(n);
            let mut split = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u8>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let nb = self.g.neighbors(v);
                        (masks.iter().map(|m| (nb & m).count_ones() as u8).collect(), v)
                    })
                    .collect();
                keyed.sort();
                let before = next.len();
                let mut prev: Option<&Vec<u8>> = None;
                for (sig, v) in &keyed {
                    match next.last_mut() {
                        Some(last) if prev == Some(sig) => last.push(*v),
                        _ => next.push(alloc::vec![*v]),
                    }
                    prev = Some(sig);
                }
                split |= next.len() - before > 1;
            }
            cells = next;
            if !split {
                return cells;
            }
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let n = order.len();
        let mut bits = Vec::with_capacity(n * n / 2);
        for i in 0..n {
            for j in i + 1..n {
                bits.push(u8::from(self.g.has_edge(order[i], order[j])));
            }
        }
        let better = match &self.best {
            None => true,
            Some((b, _)) => bits < *b,
        };
        if better {
            self.best = Some((bits, order));
        }
    }
}
