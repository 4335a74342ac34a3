//! Cohomology of complexes: Smith normal form over Z, rank counting over Q, and
//! divisible coefficients Q/Z through the universal coefficient splitting.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::complex::{Complex, Ring};
use crate::linalg::{rank_q, Smith};

/// A finitely generated abelian group in canonical form `R^rank ⊕ ⊕ Z/t_i`, with
/// `t_i > 1` and `t_i | t_{i+1}`. Over Q only the rank is meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbGroup {
    pub ring: Ring,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn zero(ring: Ring) -> Self {
        FgAbGroup { ring, rank: 0, torsion: vec![] }
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        FgAbGroup { ring, rank, torsion: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn z_mod(t: i64) -> Self {
        FgAbGroup { ring: Ring::Z, rank: 0, torsion: vec![BigInt::from(t)] }
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push(self.ring.to_string()),
            r => parts.push(format!("{}^{}", self.ring, r)),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        f.write_str(&parts.join("+"))
    }
}

/// `(Q/Z)^divisible_rank ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisibleGroup {
    pub divisible_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl DivisibleGroup {
    pub fn is_zero(&self) -> bool {
        self.divisible_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for DivisibleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.divisible_rank {
            0 => {}
            1 => parts.push("Q/Z".to_string()),
            r => parts.push(format!("(Q/Z)^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        f.write_str(&parts.join("+"))
    }
}

impl Complex {
    /// `H^n = ker d^n / im d^{n-1}`; the zero group outside the window.
    pub fn homology(&self, n: i64) -> FgAbGroup {
        if n < self.lo() || n > self.hi() {
            return FgAbGroup::zero(self.ring());
        }
        let dim = self.rank(n);
        match self.ring() {
            Ring::Q => {
                let r_out = rank_q(&self.differential(n));
                let r_in = rank_q(&self.differential(n - 1));
                FgAbGroup::free(Ring::Q, dim - r_out - r_in)
            }
            Ring::Z => {
                let out = Smith::new(&self.differential_z(n));
                let inc = Smith::new(&self.differential_z(n - 1));
                FgAbGroup { ring: Ring::Z, rank: dim - out.rank() - inc.rank(), torsion: inc.torsion() }
            }
        }
    }

    /// Cohomology in every degree of the window.
    pub fn all_homology(&self) -> Vec<(i64, FgAbGroup)> {
        (self.lo()..=self.hi()).map(|n| (n, self.homology(n))).collect()
    }

    /// `H^n(C ⊗ Q/Z) ≅ H^n(C) ⊗ Q/Z ⊕ Tor(H^{n+1}(C), Q/Z)` for a complex of free Z-modules.
    pub fn homology_qz(&self, n: i64) -> DivisibleGroup {
        assert_eq!(self.ring(), Ring::Z, "Q/Z coefficients need an integral complex");
        DivisibleGroup { divisible_rank: self.homology(n).rank, torsion: self.homology(n + 1).torsion }
    }

    pub fn is_acyclic(&self) -> bool {
        (self.lo()..=self.hi()).all(|n| self.homology(n).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qi, QMatrix};

    fn circle() -> Complex {
        let d = QMatrix::from_rows(
            vec![vec![qi(-1), qi(1), qi(0)], vec![qi(0), qi(-1), qi(1)], vec![qi(-1), qi(0), qi(1)]],
            3,
        );
        Complex::new(Ring::Z, 0, vec![3, 3], vec![d]).unwrap()
    }

    #[test]
    fn circle_cohomology() {
        let c = circle();
        assert_eq!(c.homology(0).to_string(), "Z");
        assert_eq!(c.homology(1).to_string(), "Z");
        assert!(c.homology(5).is_zero());
    }

    #[test]
    fn shift_moves_cohomology() {
        let c = circle();
        for k in -2..=2 {
            let s = c.shift(k);
            for n in -4..=4 {
                assert_eq!(s.homology(n), c.homology(n + k), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn stupid_truncations_of_circle() {
        let c = circle();
        // sigma>=1 keeps only the edges, with no incoming differential
        let t = c.truncate_above(1);
        assert!(t.homology(0).is_zero());
        assert_eq!(t.homology(1), FgAbGroup::free(Ring::Z, 3));
        // sigma<=0 keeps only the vertices, with no outgoing differential
        let b = c.truncate_below(0);
        assert_eq!(b.homology(0), FgAbGroup::free(Ring::Z, 3));
        assert!(b.homology(1).is_zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(FgAbGroup::zero(Ring::Z).to_string(), "0");
        assert_eq!(FgAbGroup::z_mod(2).to_string(), "Z/2");
        assert_eq!(FgAbGroup { ring: Ring::Z, rank: 2, torsion: vec![BigInt::from(2)] }.to_string(), "Z^2+Z/2");
        assert_eq!(DivisibleGroup { divisible_rank: 1, torsion: vec![] }.to_string(), "Q/Z");
    }
}
