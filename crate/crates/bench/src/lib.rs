//! Seeded inputs shared by the benchmarks.

use dcoh_core::cells::CellComplex;
use dcoh_core::data;
use dcoh_core::linalg::ZMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A bundled complex by name. Panics on unknown names.
pub fn complex(name: &str) -> CellComplex {
    data::complex(name).unwrap_or_else(|e| panic!("bundled complex {name}: {e}"))
}

/// A `rows × cols` integer matrix with entries in `[-bound, bound]`.
pub fn random_integer_matrix(rows: usize, cols: usize, bound: i64, seed: u64) -> ZMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ZMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}
