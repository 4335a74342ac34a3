//! Tensor products of complexes of free modules.

use std::collections::BTreeMap;

use super::complex::{neg_one_pow, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    QMatrix::from_fn(ar * br, ac * bc, |i, j| a.get(i / br, j / bc) * b.get(i % br, j % bc))
}

/// Components `(i, j)` with `i + j = n`, in increasing `i`, together with their offsets.
fn layout(a: &Complex, b: &Complex, n: i64) -> Vec<(i64, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for i in a.lo()..=a.hi() {
        let size = a.rank(i) * b.rank(n - i);
        out.push((i, offset, size));
        offset += size;
    }
    out
}

impl Complex {
    /// `(A ⊗ B)^n = ⊕_{i+j=n} A^i ⊗ B^j` with `d(a ⊗ b) = da ⊗ b + (-1)^i a ⊗ db`.
    pub fn tensor(&self, other: &Complex) -> Result<Complex> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch("tensor product of complexes over different rings".into()));
        }
        let lo = self.lo() + other.lo();
        let hi = self.hi() + other.hi();
        let rank = |n: i64| layout(self, other, n).iter().map(|t| t.2).sum::<usize>();
        let diff = |n: i64| {
            let src = layout(self, other, n);
            let tgt = layout(self, other, n + 1);
            let mut m = QMatrix::zeros(rank(n + 1), rank(n));
            for &(i, so, _) in &src {
                let j = n - i;
                // da ⊗ b lands in (i+1, j)
                if let Some(&(_, to, _)) = tgt.iter().find(|t| t.0 == i + 1) {
                    paste(&mut m, to, so, &kron(&self.differential(i), &QMatrix::identity(other.rank(j))));
                }
                // (-1)^i a ⊗ db lands in (i, j+1)
                if let Some(&(_, to, _)) = tgt.iter().find(|t| t.0 == i) {
                    let block = kron(&QMatrix::identity(self.rank(i)), &other.differential(j)).scale(&neg_one_pow(i));
                    paste(&mut m, to, so, &block);
                }
            }
            m
        };
        Complex::new(self.ring(), lo, (lo..=hi).map(rank).collect(), (lo..hi).map(diff).collect())
    }
}

pub(crate) fn paste(m: &mut QMatrix, row: usize, col: usize, block: &QMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = block.get(i, j);
            if *v != num_rational::BigRational::default() {
                let cur = m.get(row + i, col + j) + v;
                m.set(row + i, col + j, cur);
            }
        }
    }
}

impl ChainMap {
    /// `f ⊗ id_B : A ⊗ B -> A' ⊗ B`.
    pub fn tensor_identity(&self, b: &Complex) -> Result<ChainMap> {
        let src = self.source().tensor(b)?;
        let tgt = self.target().tensor(b)?;
        let lo = src.lo().min(tgt.lo());
        let hi = src.hi().max(tgt.hi());
        let a_lo = self.source().lo().min(self.target().lo());
        let a_hi = self.source().hi().max(self.target().hi());
        let mut maps = BTreeMap::new();
        for n in lo..=hi {
            let mut m = QMatrix::zeros(tgt.rank(n), src.rank(n));
            let s_layout: BTreeMap<i64, (usize, usize)> =
                layout(self.source(), b, n).into_iter().map(|(i, o, s)| (i, (o, s))).collect();
            let t_layout: BTreeMap<i64, (usize, usize)> =
                layout(self.target(), b, n).into_iter().map(|(i, o, s)| (i, (o, s))).collect();
            for i in a_lo..=a_hi {
                if let (Some(&(s_off, _)), Some(&(t_off, _))) = (s_layout.get(&i), t_layout.get(&i)) {
                    paste(&mut m, t_off, s_off, &kron(&self.component(i), &QMatrix::identity(b.rank(n - i))));
                }
            }
            maps.insert(n, m);
        }
        ChainMap::new(src, tgt, maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Ring;
    use crate::linalg::qi;

    #[test]
    fn tensor_with_unit_is_identity() {
        let d = QMatrix::from_rows(vec![vec![qi(-1), qi(1)]], 2);
        let c = Complex::two_term(Ring::Z, 0, d).unwrap();
        let t = c.tensor(&Complex::atom(Ring::Z, 0)).unwrap();
        assert!(t.same_as(&c));
    }

    #[test]
    fn kunneth_for_two_term_complexes() {
        // Z --2--> Z tensored with itself: H^1 = Z/2, H^2 = Z/2 (Tor term)
        let c = Complex::two_term(Ring::Z, 0, QMatrix::from_rows(vec![vec![qi(2)]], 1)).unwrap();
        let t = c.tensor(&c).unwrap();
        assert!(t.homology(0).is_zero());
        assert_eq!(t.homology(1).to_string(), "Z/2");
        assert_eq!(t.homology(2).to_string(), "Z/2");
    }

    #[test]
    fn tensoring_maps() {
        let c = Complex::two_term(Ring::Z, 0, QMatrix::from_rows(vec![vec![qi(2)]], 1)).unwrap();
        let f = ChainMap::identity(&c).tensor_identity(&c).unwrap();
        assert_eq!(f.component(1), QMatrix::identity(2));
    }
}
