//! Exact cochain-complex calculus over Z and Q.

mod complex;
pub mod cone;
mod homology;
mod tensor;

pub use complex::{ChainMap, Complex, Ring};
pub use cone::{cone, cone_long_exact, exact_at, fiber, Cone};
pub use homology::{DivisibleGroup, FgAbGroup};
pub use tensor::kron;

pub(crate) use complex::neg_one_pow;
pub(crate) use tensor::paste;
