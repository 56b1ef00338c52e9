//! Graph combinations and the gluing product.

use crate::graph::{canonicalize, CanonicalGraph, Graph, Label, PartiallyLabeledGraph};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operation needs a nonzero combination")]
    ZeroCombination,
    #[error("label {label} does not fit into the padded label set 1..={k}")]
    LabelOutsidePadding { label: Label, k: Label },
}

/// Number of edges, and how many of them have both endpoints labeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degree: usize,
    pub fully_labeled_edge_count: usize,
}

pub fn degree_profile(h: &PartiallyLabeledGraph) -> DegreeProfile {
    DegreeProfile { degree: h.degree(), fully_labeled_edge_count: h.fully_labeled_edge_count() }
}

/// Glues two graphs along equal labels, keeping one copy of doubled edges.
///
/// Panics if the result would exceed [`crate::graph::MAX_VERTICES`] vertices.
pub fn glue(h1: &PartiallyLabeledGraph, h2: &PartiallyLabeledGraph) -> PartiallyLabeledGraph {
    let n1 = h1.vertex_count();
    let mut labels: Vec<Option<Label>> = h1.vertex_labels().to_vec();
    let mut place = Vec::with_capacity(h2.vertex_count());
    for &l in h2.vertex_labels() {
        let existing = l.and_then(|l| h1.vertex_of_label(l));
        place.push(existing.unwrap_or_else(|| {
            labels.push(l);
            labels.len() - 1
        }));
    }
    assert!(
        labels.len() <= crate::graph::MAX_VERTICES,
        "glued graph exceeds {} vertices",
        crate::graph::MAX_VERTICES
    );
    let mut rows: Vec<u64> = (0..n1).map(|v| h1.graph().neighbors(v)).collect();
    rows.resize(labels.len(), 0);
    let mut g = Graph::from_rows(rows);
    for (u, v) in h2.edges() {
        g.add_edge(place[u], place[v]);
    }
    PartiallyLabeledGraph::from_parts(g, labels)
}

/// `deg(h1 h2) = deg(h1) + deg(h2) - c`, where `c` counts fully labeled
/// edges common to both.
pub fn cross_degree(h1: &PartiallyLabeledGraph, h2: &PartiallyLabeledGraph) -> usize {
    let common = h1.fully_labeled_edges().intersection(&h2.fully_labeled_edges()).count();
    h1.degree() + h2.degree() - common
}

/// A finite formal rational combination of canonical partially labeled graphs.
///
/// The empty graph is the identity `1`. Zero coefficients are never stored,
/// and terms iterate in canonical key order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GraphCombination {
    terms: BTreeMap<CanonicalGraph, Rational>,
}

impl GraphCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::graph(&PartiallyLabeledGraph::empty())
    }

    pub fn graph(g: &PartiallyLabeledGraph) -> Self {
        Self::term(Rational::one(), g)
    }

    pub fn term(coefficient: Rational, g: &PartiallyLabeledGraph) -> Self {
        let mut out = Self::zero();
        out.add_term(canonicalize(g), coefficient);
        out
    }

    pub fn from_terms<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, &'a PartiallyLabeledGraph)>,
    {
        let mut out = Self::zero();
        for (c, g) in terms {
            out.add_term(canonicalize(g), c);
        }
        out
    }

    /// Adds `coefficient * g`, dropping the term if it cancels.
    pub fn add_term(&mut self, g: CanonicalGraph, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(c) => {
                *c += coefficient;
                if c.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, coefficient);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &PartiallyLabeledGraph) -> Rational {
        self.terms.get(&canonicalize(g)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_of(&self, g: &CanonicalGraph) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect() }
    }

    /// Bilinear extension of [`glue`].
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(canonicalize(&glue(g, h)), a * b);
            }
        }
        out
    }

    pub fn square(&self) -> Self {
        self.product(self)
    }

    /// Erases all labels of every constituent.
    pub fn unlabel(&self) -> Self {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            out.add_term(canonicalize(&g.without_labels()), c.clone());
        }
        out
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|g| g.degree()).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|g| g.degree()).max()
    }

    /// All terms of one degree (the zero combination counts as homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        self.min_degree() == self.max_degree()
    }

    pub fn is_unlabeled(&self) -> bool {
        self.terms.keys().all(|g| g.is_unlabeled())
    }

    /// Union of the label sets of all constituents.
    pub fn label_set(&self) -> BTreeSet<Label> {
        self.terms.keys().flat_map(|g| g.label_set()).collect()
    }

    /// The terms of minimum degree.
    pub fn min_degree_component(&self) -> Result<Self, AlgebraError> {
        let d = self.min_degree().ok_or(AlgebraError::ZeroCombination)?;
        Ok(self.degree_component(d))
    }

    pub fn degree_component(&self, d: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| g.degree() == d)
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        }
    }

    /// Attaches labeled isolated vertices so every constituent carries
    /// exactly the labels `1..=k`.
    pub fn pad_labels(&self, k: Label) -> Result<Self, AlgebraError> {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            let present = g.label_set();
            if let Some(&label) = present.iter().find(|&&l| l > k) {
                return Err(AlgebraError::LabelOutsidePadding { label, k });
            }
            let missing: Vec<Label> = (1..=k).filter(|l| !present.contains(l)).collect();
            out.add_term(canonicalize(&g.with_isolated_labels(&missing)), c.clone());
        }
        Ok(out)
    }

    /// Removes every isolated vertex, labeled or not.
    pub fn strip_isolated(&self) -> Self {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            out.add_term(canonicalize(&g.without_isolated()), c.clone());
        }
        out
    }

    /// Smallest positive integer making every coefficient integral.
    pub fn common_denominator(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()))
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.terms.values().any(Signed::is_negative)
    }
}

impl core::fmt::Debug for GraphCombination {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.terms.iter().map(|(g, c)| (c.to_string(), g))).finish()
    }
}

/// `sum_i [[a_i^2]]`.
pub fn expand_square_sum(squares: &[GraphCombination]) -> GraphCombination {
    squares.iter().fold(GraphCombination::zero(), |acc, a| acc + a.square().unlabel())
}

/// `sum_k w_k [[a_k^2]]` for nonnegative weights `w_k`.
pub fn expand_weighted_square_sum(squares: &[(Rational, GraphCombination)]) -> GraphCombination {
    squares.iter().fold(GraphCombination::zero(), |acc, (w, a)| acc + a.square().unlabel().scale(w))
}

impl Add for &GraphCombination {
    type Output = GraphCombination;

    fn add(self, rhs: Self) -> GraphCombination {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }
}

impl Add for GraphCombination {
    type Output = GraphCombination;

    fn add(mut self, rhs: Self) -> GraphCombination {
        for (g, c) in rhs.terms {
            self.add_term(g, c);
        }
        self
    }
}

impl Neg for &GraphCombination {
    type Output = GraphCombination;

    fn neg(self) -> GraphCombination {
        GraphCombination { terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect() }
    }
}

impl Neg for GraphCombination {
    type Output = GraphCombination;

    fn neg(self) -> GraphCombination {
        -&self
    }
}

impl Sub for &GraphCombination {
    type Output = GraphCombination;

    fn sub(self, rhs: Self) -> GraphCombination {
        self + &(-rhs)
    }
}

impl Sub for GraphCombination {
    type Output = GraphCombination;

    fn sub(self, rhs: Self) -> GraphCombination {
        self + (-rhs)
    }
}

impl Mul for &GraphCombination {
    type Output = GraphCombination;

    fn mul(self, rhs: Self) -> GraphCombination {
        self.product(rhs)
    }
}

impl Mul for GraphCombination {
    type Output = GraphCombination;

    fn mul(self, rhs: Self) -> GraphCombination {
        self.product(&rhs)
    }
}
