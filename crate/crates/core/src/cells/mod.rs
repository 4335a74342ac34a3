//! Finite cell complexes standing in for manifolds, with products by the interval
//! and the circle. Rational cellular cochains play the role of differential forms,
//! and the coboundary plays the role of the de Rham differential.

mod complex;
mod products;

pub use complex::{Cell, CellComplex, CellularMap, Cochain, Subcomplex};
pub use products::{CircleProduct, Prism, CIRCLE_EDGES, CIRCLE_EDGE_SIGNS};
