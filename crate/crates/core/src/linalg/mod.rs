//! Exact linear algebra over Z and Q.

pub mod matrix;
pub mod mixed;
pub mod rational;
pub mod snf;

pub use matrix::{q, qi, QMatrix, QVector, ZMatrix, ZVector};
pub use mixed::{mixed_solve, MixedSolution, MixedSystem};
pub use rational::{kernel_basis_q, rank_q, solve_q, Echelon, RationalSolver};
pub use snf::{solve_z, Smith};
