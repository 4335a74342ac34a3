use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{q_to_z, QMatrix, ZMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Z => "Z",
            Ring::Q => "Q",
        })
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Ring::Z),
            "Q" | "q" => Ok(Ring::Q),
            other => Err(Error::Parse(format!("unknown ring `{other}` (expected Z or Q)"))),
        }
    }
}

/// A bounded cochain complex of finite free modules, cohomologically graded:
/// `d^n : C^n -> C^{n+1}`. Components outside `[lo, hi]` are zero.
///
/// Entries are stored as rationals for both rings; a `Z` complex is guaranteed to
/// have integral differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    ring: Ring,
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    diffs: Vec<QMatrix>,
}

impl Complex {
    /// `diffs[i]` is `d^{lo+i}`, a `ranks[i+1] x ranks[i]` matrix.
    pub fn new(ring: Ring, lo: i64, ranks: Vec<usize>, diffs: Vec<QMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidComplex("degree window is empty".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::InvalidComplex(format!(
                "{} components need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (ranks[i + 1], ranks[i]) {
                return Err(Error::InvalidComplex(format!(
                    "d^{} has shape {:?}, expected {:?}",
                    lo + i as i64,
                    d.shape(),
                    (ranks[i + 1], ranks[i])
                )));
            }
            if ring == Ring::Z && q_to_z(d).is_none() {
                return Err(Error::InvalidComplex(format!("d^{} has non-integral entries", lo + i as i64)));
            }
        }
        let hi = lo + ranks.len() as i64 - 1;
        let c = Complex { ring, lo, hi, ranks, diffs };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn zero(ring: Ring) -> Self {
        Complex { ring, lo: 0, hi: 0, ranks: vec![0], diffs: vec![] }
    }

    /// The one-object complex `G[k]`: a rank-one module placed in degree `-k`.
    pub fn atom(ring: Ring, k: i64) -> Self {
        Complex { ring, lo: -k, hi: -k, ranks: vec![1], diffs: vec![] }
    }

    /// Complex from an explicit map between two modules: `rank_src` in degree `deg`, target in `deg+1`.
    pub fn two_term(ring: Ring, deg: i64, d: QMatrix) -> Result<Self> {
        let (r1, r0) = d.shape();
        Complex::new(ring, deg, vec![r0, r1], vec![d])
    }

    fn check_square_zero(&self) -> Result<()> {
        for w in self.diffs.windows(2) {
            if !w[1].mul_mat(&w[0]).is_zero() {
                return Err(Error::InvalidComplex("d o d != 0".into()));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi {
            0
        } else {
            self.ranks[(n - self.lo) as usize]
        }
    }

    /// `d^n`, as a `rank(n+1) x rank(n)` matrix (zero outside the window).
    pub fn differential(&self, n: i64) -> QMatrix {
        if n >= self.lo && n < self.hi {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            QMatrix::zeros(self.rank(n + 1), self.rank(n))
        }
    }

    pub fn differential_z(&self, n: i64) -> ZMatrix {
        q_to_z(&self.differential(n)).expect("integral differential")
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// Same complex on a (possibly) larger window.
    pub fn with_window(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi);
        Complex::from_parts(self.ring, lo, hi, |n| self.rank(n), |n| self.differential(n))
    }

    pub(crate) fn from_parts(
        ring: Ring,
        lo: i64,
        hi: i64,
        rank: impl Fn(i64) -> usize,
        diff: impl Fn(i64) -> QMatrix,
    ) -> Self {
        let ranks: Vec<usize> = (lo..=hi).map(&rank).collect();
        let diffs: Vec<QMatrix> = (lo..hi).map(&diff).collect();
        Complex { ring, lo, hi, ranks, diffs }
    }

    /// `C[k]`: `(C[k])^n = C^{n+k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { BigRational::one() } else { -BigRational::one() };
        Complex::from_parts(
            self.ring,
            self.lo - k,
            self.hi - k,
            |n| self.rank(n + k),
            |n| self.differential(n + k).scale(&sign),
        )
    }

    /// Stupid truncation `sigma^{>= m}`: components below `m` replaced by zero.
    pub fn truncate_above(&self, m: i64) -> Self {
        Complex::from_parts(
            self.ring,
            self.lo,
            self.hi,
            |n| if n < m { 0 } else { self.rank(n) },
            |n| if n < m { QMatrix::zeros(if n + 1 < m { 0 } else { self.rank(n + 1) }, 0) } else { self.differential(n) },
        )
    }

    /// Stupid truncation `sigma^{<= m}`: components above `m` replaced by zero.
    pub fn truncate_below(&self, m: i64) -> Self {
        Complex::from_parts(
            self.ring,
            self.lo,
            self.hi,
            |n| if n > m { 0 } else { self.rank(n) },
            |n| if n + 1 > m { QMatrix::zeros(0, if n > m { 0 } else { self.rank(n) }) } else { self.differential(n) },
        )
    }

    /// Degreewise equality of ranks and differentials, ignoring window padding.
    pub fn same_as(&self, other: &Complex) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        self.ring == other.ring
            && (lo..=hi).all(|n| self.rank(n) == other.rank(n))
            && (lo..hi).all(|n| self.differential(n) == other.differential(n))
    }
}

/// A degreewise map of complexes commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    maps: BTreeMap<i64, QMatrix>,
}

impl ChainMap {
    pub fn new(source: Complex, target: Complex, maps: BTreeMap<i64, QMatrix>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch(format!("{} -> {}", source.ring, target.ring)));
        }
        for (&n, m) in &maps {
            if m.shape() != (target.rank(n), source.rank(n)) {
                return Err(Error::Dimension(format!(
                    "chain map component f^{n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.rank(n), source.rank(n))
                )));
            }
            if source.ring == Ring::Z && q_to_z(m).is_none() {
                return Err(Error::RingMismatch(format!("f^{n} has non-integral entries over Z")));
            }
        }
        let f = ChainMap { source, target, maps };
        let lo = f.source.lo.min(f.target.lo) - 1;
        let hi = f.source.hi.max(f.target.hi);
        for n in lo..=hi {
            let lhs = f.component(n + 1).mul_mat(&f.source.differential(n));
            let rhs = f.target.differential(n).mul_mat(&f.component(n));
            if lhs != rhs {
                return Err(Error::InvalidComplex(format!("chain map does not commute with d in degree {n}")));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &Complex) -> Self {
        let maps = (c.lo..=c.hi).map(|n| (n, QMatrix::identity(c.rank(n)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn zero(source: &Complex, target: &Complex) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn component(&self, n: i64) -> QMatrix {
        self.maps.get(&n).cloned().unwrap_or_else(|| QMatrix::zeros(self.target.rank(n), self.source.rank(n)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        if !self.target.same_as(&other.source) {
            return Err(Error::Dimension("chain maps are not composable".into()));
        }
        let lo = self.source.lo.min(other.target.lo);
        let hi = self.source.hi.max(other.target.hi);
        let maps = (lo..=hi).map(|n| (n, other.component(n).mul_mat(&self.component(n)))).collect();
        ChainMap::new(self.source.clone(), other.target.clone(), maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(QMatrix::is_zero)
    }
}

pub(crate) fn neg_one_pow(k: i64) -> BigRational {
    if k.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}
