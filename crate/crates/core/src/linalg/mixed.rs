//! Mixed integral/rational linear systems `A_int z + A_rat y = b`, with `z` integral
//! and `y` rational.
//!
//! The rational unknowns are eliminated by projecting onto the left annihilator
//! of `A_rat`; what remains is an integer system solved through its Smith form.
//! Every returned solution has been substituted back and checked exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{q_to_z, z_to_q, zvec_to_q, QMatrix, QVector, ZMatrix, ZVector};
use super::rational::{left_annihilator, RationalSolver};
use super::snf::Smith;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedSolution {
    pub integral: ZVector,
    pub rational: QVector,
}

/// A prepared mixed system; reuse it for many right-hand sides.
#[derive(Clone, Debug)]
pub struct MixedSystem {
    a_int: QMatrix,
    a_rat: QMatrix,
    projector: QMatrix,
    reduced: Smith,
    rational: RationalSolver,
}

impl MixedSystem {
    pub fn new(a_int: &ZMatrix, a_rat: &QMatrix) -> Result<Self> {
        if a_int.rows() != a_rat.rows() {
            return Err(Error::Dimension(format!(
                "mixed system blocks have {} and {} rows",
                a_int.rows(),
                a_rat.rows()
            )));
        }
        let a_int_q = z_to_q(a_int);
        let mut projector = left_annihilator(a_rat);
        let projected = projector.mul_mat(&a_int_q);
        // scale each projector row so the projected integer block has integral entries
        for i in 0..projector.rows() {
            let mut l = BigInt::one();
            for j in 0..projected.cols() {
                l = l.lcm(projected.get(i, j).denom());
            }
            let s = BigRational::from_integer(l);
            for j in 0..projector.cols() {
                let v = projector.get(i, j) * &s;
                projector.set(i, j, v);
            }
        }
        let projected = projector.mul_mat(&a_int_q);
        let reduced = Smith::new(&q_to_z(&projected).expect("projected block scaled to integers"));
        Ok(MixedSystem { a_int: a_int_q, a_rat: a_rat.clone(), projector, reduced, rational: RationalSolver::new(a_rat) })
    }

    pub fn rows(&self) -> usize {
        self.a_int.rows()
    }

    pub fn solve(&self, b: &[BigRational]) -> Result<Option<MixedSolution>> {
        if b.len() != self.rows() {
            return Err(Error::Dimension(format!("right-hand side has length {}, expected {}", b.len(), self.rows())));
        }
        let r = self.projector.mul_vec(b);
        // integer system reduced * z = r; r may be fractional, then there is no solution
        let rr = self.reduced.left.mul_vec_q(&r);
        let rank = self.reduced.rank();
        let mut w = vec![BigInt::zero(); self.a_int.cols()];
        for (i, d) in self.reduced.diagonal.iter().enumerate() {
            let v = &rr[i] / BigRational::from_integer(d.clone());
            if !v.is_integer() {
                return Ok(None);
            }
            w[i] = v.to_integer();
        }
        if rr[rank..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        let z = self.reduced.right.mul_vec(&w);
        let rest: QVector = {
            let az = self.a_int.mul_vec(&zvec_to_q(&z));
            b.iter().zip(az).map(|(x, y)| x - y).collect()
        };
        let Some(y) = self.rational.solve(&rest) else {
            return Err(Error::Internal("mixed solve: projected system solvable but rational part is not".into()));
        };
        let check: QVector = {
            let az = self.a_int.mul_vec(&zvec_to_q(&z));
            let ay = self.a_rat.mul_vec(&y);
            az.into_iter().zip(ay).map(|(p, q)| p + q).collect()
        };
        if check.as_slice() != b {
            return Err(Error::Internal("mixed solve: substitution residual is nonzero".into()));
        }
        Ok(Some(MixedSolution { integral: z, rational: y }))
    }
}

trait MulVecQ {
    fn mul_vec_q(&self, v: &[BigRational]) -> QVector;
}

impl MulVecQ for ZMatrix {
    fn mul_vec_q(&self, v: &[BigRational]) -> QVector {
        assert_eq!(self.cols(), v.len());
        (0..self.rows())
            .map(|i| {
                let mut acc = BigRational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += x * BigRational::from_integer(a.clone());
                    }
                }
                acc
            })
            .collect()
    }
}

/// One-shot mixed solve. `Ok(None)` means the system has no solution.
pub fn mixed_solve(a_int: &ZMatrix, a_rat: &QMatrix, b: &[BigRational]) -> Result<Option<MixedSolution>> {
    MixedSystem::new(a_int, a_rat)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{q, qi};

    #[test]
    fn integer_and_rational_two_x() {
        let two = ZMatrix::from_rows(vec![vec![BigInt::from(2)]], 1);
        let none_q = QMatrix::zeros(1, 0);
        let sol = mixed_solve(&two, &none_q, &[qi(4)]).unwrap().unwrap();
        assert_eq!(sol.integral, vec![BigInt::from(2)]);
        assert!(mixed_solve(&two, &none_q, &[qi(3)]).unwrap().is_none());

        let none_z = ZMatrix::zeros(1, 0);
        let two_q = QMatrix::from_rows(vec![vec![qi(2)]], 1);
        let sol = mixed_solve(&none_z, &two_q, &[qi(3)]).unwrap().unwrap();
        assert_eq!(sol.rational, vec![q(3, 2)]);
    }

    #[test]
    fn genuinely_mixed() {
        // z + y = 1/2, z - y = 1/2  -> y = 0, z = 1/2: not integral
        let a_int = ZMatrix::from_rows(vec![vec![BigInt::from(1)], vec![BigInt::from(1)]], 1);
        let a_rat = QMatrix::from_rows(vec![vec![qi(1)], vec![qi(-1)]], 1);
        assert!(mixed_solve(&a_int, &a_rat, &[q(1, 2), q(1, 2)]).unwrap().is_none());
        // z + y = 3/2, z - y = 1/2 -> z = 1, y = 1/2
        let s = mixed_solve(&a_int, &a_rat, &[q(3, 2), q(1, 2)]).unwrap().unwrap();
        assert_eq!(s.integral, vec![BigInt::from(1)]);
        assert_eq!(s.rational, vec![q(1, 2)]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a_int = ZMatrix::zeros(2, 1);
        let a_rat = QMatrix::zeros(3, 1);
        assert!(MixedSystem::new(&a_int, &a_rat).is_err());
        let sys = MixedSystem::new(&a_int, &QMatrix::zeros(2, 1)).unwrap();
        assert!(sys.solve(&[qi(1)]).is_err());
    }
}
