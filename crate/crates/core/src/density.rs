//! Exact homomorphism counts and densities, optionally conditioned on where
//! the labeled vertices go.
//!
//! `t(H; G, phi)` is the probability that a uniformly random map
//! `V(H) -> V(G)` that sends each labeled vertex according to `phi` is a
//! homomorphism. Counting is done per connected component of `H` by
//! backtracking over candidate images restricted to common neighborhoods.

use crate::algebra::{GraphCombination, Rational};
use crate::graph::{bits, Graph, Label, PartiallyLabeledGraph};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};

/// Images of labels in a target graph; need not be injective.
pub type LabelAssignment = BTreeMap<Label, usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("label {0} has no image in the assignment")]
    MissingLabel(Label),
    #[error("label {label} is sent to vertex {vertex}, outside a target on {vertex_count} vertices")]
    ImageOutOfRange { label: Label, vertex: usize, vertex_count: usize },
    #[error("densities are undefined on a target with no vertices")]
    EmptyTarget,
}

/// Number of homomorphisms `h -> g` that extend `phi` on labeled vertices.
///
/// Labels of `phi` that `h` does not carry are ignored.
pub fn hom_count(
    h: &PartiallyLabeledGraph,
    g: &Graph,
    phi: &LabelAssignment,
) -> Result<BigUint, DensityError> {
    let fixed = resolve(h, g, phi)?;
    let graph = h.graph();
    let mut total = BigUint::one();
    for comp in graph.components() {
        let count = component_count(graph, g, &comp, &fixed);
        if count.is_zero() {
            return Ok(count);
        }
        total *= count;
    }
    Ok(total)
}

/// `t(h; g, phi)`.
pub fn density(
    h: &PartiallyLabeledGraph,
    g: &Graph,
    phi: &LabelAssignment,
) -> Result<Rational, DensityError> {
    if g.vertex_count() == 0 {
        return Err(DensityError::EmptyTarget);
    }
    let homs = hom_count(h, g, phi)?;
    let maps = BigUint::from(g.vertex_count()).pow(h.unlabeled_vertex_count());
    Ok(Rational::new(BigInt::from(homs), BigInt::from(maps)))
}

/// `t(h; g)` for an unlabeled `h`.
pub fn unlabeled_density(h: &PartiallyLabeledGraph, g: &Graph) -> Result<Rational, DensityError> {
    density(&h.without_labels(), g, &LabelAssignment::new())
}

/// `t(a; g, phi) = sum_i alpha_i t(H_i; g, phi restricted to L_{H_i})`.
pub fn combination_density(
    a: &GraphCombination,
    g: &Graph,
    phi: &LabelAssignment,
) -> Result<Rational, DensityError> {
    if g.vertex_count() == 0 {
        return Err(DensityError::EmptyTarget);
    }
    let mut total = Rational::zero();
    for (h, c) in a.terms() {
        total += density(h, g, phi)? * c;
    }
    Ok(total)
}

/// Checks `t([[h]]; g) = n^{-|L_h|} * sum over phi: L_h -> V(g) of t(h; g, phi)`.
pub fn unlabeled_average_identity_check(
    h: &PartiallyLabeledGraph,
    g: &Graph,
) -> Result<bool, DensityError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(DensityError::EmptyTarget);
    }
    let lhs = unlabeled_density(h, g)?;
    let labels: Vec<Label> = h.label_set().into_iter().collect();
    let mut sum = Rational::zero();
    for phi in all_assignments(&labels, n) {
        sum += density(h, g, &phi)?;
    }
    let count = BigUint::from(n).pow(labels.len());
    Ok(lhs == sum / Rational::from_integer(BigInt::from(count)))
}

/// Every map from `labels` to `0..n`, in lexicographic order.
pub fn all_assignments(labels: &[Label], n: usize) -> impl Iterator<Item = LabelAssignment> + '_ {
    let total = n.checked_pow(labels.len() as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut phi = LabelAssignment::new();
        for &l in labels.iter().rev() {
            phi.insert(l, code % n);
            code /= n;
        }
        phi
    })
}

fn resolve(
    h: &PartiallyLabeledGraph,
    g: &Graph,
    phi: &LabelAssignment,
) -> Result<Vec<Option<usize>>, DensityError> {
    h.vertex_labels()
        .iter()
        .map(|l| match l {
            None => Ok(None),
            Some(l) => {
                let &vertex = phi.get(l).ok_or(DensityError::MissingLabel(*l))?;
                if vertex >= g.vertex_count() {
                    return Err(DensityError::ImageOutOfRange {
                        label: *l,
                        vertex,
                        vertex_count: g.vertex_count(),
                    });
                }
                Ok(Some(vertex))
            }
        })
        .collect()
}

fn component_count(h: &Graph, g: &Graph, comp: &[usize], fixed: &[Option<usize>]) -> BigUint {
    // Fixed vertices must already respect their mutual edges.
    for (i, &u) in comp.iter().enumerate() {
        for &v in &comp[i + 1..] {
            if let (Some(a), Some(b)) = (fixed[u], fixed[v]) {
                if h.has_edge(u, v) && !g.has_edge(a, b) {
                    return BigUint::zero();
                }
            }
        }
    }
    // Free vertices in BFS order from the fixed ones (or the first vertex).
    let in_comp = comp.iter().fold(0u64, |m, &v| m | 1 << v);
    let mut placed = comp.iter().filter(|&&v| fixed[v].is_some()).fold(0u64, |m, &v| m | 1 << v);
    let mut order = Vec::new();
    let mut queue: alloc::collections::VecDeque<usize> = bits(placed).collect();
    if queue.is_empty() {
        queue.push_back(comp[0]);
        placed |= 1 << comp[0];
        order.push(comp[0]);
    }
    while let Some(v) = queue.pop_front() {
        for w in bits(h.neighbors(v) & in_comp & !placed) {
            placed |= 1 << w;
            order.push(w);
            queue.push_back(w);
        }
    }
    if order.is_empty() {
        return BigUint::one();
    }
    let mut images = alloc::vec![usize::MAX; h.vertex_count()];
    for &v in comp {
        if let Some(a) = fixed[v] {
            images[v] = a;
        }
    }
    let all = if g.vertex_count() == 64 { u64::MAX } else { (1u64 << g.vertex_count()) - 1 };
    let mut counter = Counter { h, g, order: &order, images, all };
    // n^k fits in u128 whenever k * log2(n) < 127.
    let bits_needed = order.len() as u32 * (64 - (g.vertex_count() as u64).leading_zeros());
    if bits_needed < 127 {
        BigUint::from(counter.count_small(0))
    } else {
        counter.count_big(0)
    }
}

struct Counter<'a> {
    h: &'a Graph,
    g: &'a Graph,
    order: &'a [usize],
    images: Vec<usize>,
    all: u64,
}

impl Counter<'_> {
    fn candidates(&self, v: usize) -> u64 {
        let mut mask = self.all;
        for u in bits(self.h.neighbors(v)) {
            let img = self.images[u];
            if img != usize::MAX {
                mask &= self.g.neighbors(img);
            }
        }
        mask
    }

    fn count_small(&mut self, depth: usize) -> u128 {
        let v = self.order[depth];
        let mask = self.candidates(v);
        if depth + 1 == self.order.len() {
            return u128::from(mask.count_ones());
        }
        let mut total = 0u128;
        for w in bits(mask) {
            self.images[v] = w;
            total += self.count_small(depth + 1);
        }
        self.images[v] = usize::MAX;
        total
    }

    fn count_big(&mut self, depth: usize) -> BigUint {
        let v = self.order[depth];
        let mask = self.candidates(v);
        if depth + 1 == self.order.len() {
            return BigUint::from(mask.count_ones());
        }
        let mut total = BigUint::zero();
        for w in bits(mask) {
            self.images[v] = w;
            total += self.count_big(depth + 1);
        }
        self.images[v] = usize::MAX;
        total
    }
}
