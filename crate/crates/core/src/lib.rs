//! The gluing algebra of partially labeled graphs.
//!
//! Graph combinations are exact rational linear combinations of partially
//! labeled graphs; their product glues vertices carrying the same label.
//! On top of that algebra this crate provides
//!
//! - exact homomorphism counts and (label-conditioned) densities,
//! - detection of trivial squares through involutive automorphisms,
//! - a certifier proving that a combination is *not* a sum of squares,
//! - a search for sum-of-squares certificates at a fixed homogeneous degree,
//!   backed by an exact rational simplex for binomial squares and an
//!   interior-point SDP routine whose output is rounded and verified exactly.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod certify;
pub mod density;
pub mod graph;
pub mod soscert;
pub mod squares;

pub use algebra::{GraphCombination, Rational};
pub use graph::{
    CanonicalGraph, Graph, GraphError, Label, PartiallyLabeledGraph, VertexPermutation,
};
