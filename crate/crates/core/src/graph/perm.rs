use super::{bits, GraphError, PartiallyLabeledGraph};
use alloc::vec::Vec;

/// A bijection on the vertex indices of a fixed graph; `images[v]` is the image of `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPermutation {
    images: Vec<usize>,
}

impl VertexPermutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// Returns `None` unless `images` is a permutation of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = alloc::vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || core::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Self { images })
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `self` after `first`: `v -> self(first(v))`.
    pub fn after(&self, first: &Self) -> Self {
        Self { images: first.images.iter().map(|&v| self.images[v]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = alloc::vec![0; self.images.len()];
        for (v, &w) in self.images.iter().enumerate() {
            images[w] = v;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &w)| v == w)
    }

    /// Order at most two, identity included.
    pub fn is_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &w)| self.images[w] == v)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.images.len()).filter(|&v| self.images[v] == v).collect()
    }

    pub fn is_automorphism_of(&self, g: &PartiallyLabeledGraph) -> bool {
        self.images.len() == g.vertex_count()
            && g.edges().all(|(u, v)| g.graph().has_edge(self.images[u], self.images[v]))
            && (0..g.vertex_count()).all(|v| g.label_of(v) == g.label_of(self.images[v]))
    }
}

/// All label-fixing automorphisms of `g`, sorted, identity first.
///
/// Fails with [`GraphError::TooLarge`] when `g` has more than `cap` vertices.
pub fn automorphisms(
    g: &PartiallyLabeledGraph,
    cap: usize,
) -> Result<Vec<VertexPermutation>, GraphError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(GraphError::TooLarge { vertex_count: n, cap });
    }
    // BFS order from a maximum-degree vertex of each component, so every
    // later vertex of a component has an already mapped neighbor.
    let graph = g.graph();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    let mut comps = graph.components();
    comps.sort_by_key(|c| core::cmp::Reverse(c.len()));
    for comp in comps {
        let start = *comp.iter().max_by_key(|&&v| (graph.degree(v), core::cmp::Reverse(v))).unwrap();
        let mut queue = alloc::collections::VecDeque::from([start]);
        placed |= 1 << start;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in bits(graph.neighbors(v) & !placed) {
                placed |= 1 << w;
                queue.push_back(w);
            }
        }
    }
    let mut state = AutSearch {
        g,
        order,
        images: alloc::vec![usize::MAX; n],
        used: 0,
        found: Vec::new(),
    };
    state.extend(0);
    let mut found = state.found;
    found.sort();
    Ok(found)
}

struct AutSearch<'a> {
    g: &'a PartiallyLabeledGraph,
    order: Vec<usize>,
    images: Vec<usize>,
    used: u64,
    found: Vec<VertexPermutation>,
}

impl AutSearch<'_> {
    fn extend(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.found.push(VertexPermutation { images: self.images.clone() });
            return;
        }
        let graph = self.g.graph();
        let v = self.order[depth];
        let candidates: Vec<usize> = match self.g.label_of(v) {
            Some(_) => alloc::vec![v],
            None => (0..graph.vertex_count()).collect(),
        };
        for w in candidates {
            if self.used >> w & 1 == 1
                || self.g.label_of(w) != self.g.label_of(v)
                || graph.degree(w) != graph.degree(v)
            {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| graph.has_edge(u, v) == graph.has_edge(self.images[u], w));
            if !consistent {
                continue;
            }
            self.images[v] = w;
            self.used |= 1 << w;
            self.extend(depth + 1);
            self.used &= !(1 << w);
            self.images[v] = usize::MAX;
        }
    }
}
