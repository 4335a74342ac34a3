//! Total complexes of truncated (co)simplicial objects in complexes, Čech double
//! complexes of vertex-star covers, and the homotopification of truncated cochains
//! at a point.

mod cech;
mod point;

use crate::chain::{neg_one_pow, paste, ChainMap, Complex, FgAbGroup, Ring};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

pub use cech::{cech_double, descent_check, star_cover, trivial_cover, Coefficients, DescentReport, DescentRow};
pub use point::{point_simplicial_object, required_point_level, underlying_at_point, PointDegree, PointReport};

/// Levels `A[0..=N]` of a cosimplicial object with cofaces `∂_i : A[q] -> A[q+1]`,
/// `0 <= i <= q+1`, for `q < N`.
///
/// When `complete` is set, all levels above `N` are zero, so the total complex is
/// exact in every degree regardless of `N`.
#[derive(Clone, Debug)]
pub struct CosimplicialComplexTrunc {
    levels: Vec<Complex>,
    cofaces: Vec<Vec<ChainMap>>,
    complete: bool,
}

impl CosimplicialComplexTrunc {
    pub fn new(levels: Vec<Complex>, cofaces: Vec<Vec<ChainMap>>, complete: bool) -> Result<Self> {
        check_levels(&levels, &cofaces, 1)?;
        // ∂_j ∂_i = ∂_i ∂_{j-1} for i < j, as maps A[q] -> A[q+2]
        for q in 0..cofaces.len().saturating_sub(1) {
            for j in 0..=q + 2 {
                for i in 0..j {
                    let lhs = cofaces[q][i].then(&cofaces[q + 1][j])?;
                    let rhs = cofaces[q][j - 1].then(&cofaces[q + 1][i])?;
                    if !maps_equal(&lhs, &rhs) {
                        return Err(Error::InvalidComplex(format!("cosimplicial identity fails for i={i}, j={j} at level {q}")));
                    }
                }
            }
        }
        Ok(CosimplicialComplexTrunc { levels, cofaces, complete })
    }

    /// The constant object on `c`: every coface is the identity.
    pub fn constant(c: &Complex, n: usize) -> Self {
        let levels = vec![c.clone(); n + 1];
        let cofaces = (0..n).map(|q| vec![ChainMap::identity(c); q + 2]).collect();
        CosimplicialComplexTrunc { levels, cofaces, complete: false }
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn truncation_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, q: usize) -> &Complex {
        &self.levels[q]
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn ring(&self) -> Ring {
        self.levels[0].ring()
    }
}

/// Levels `A[0..=N]` of a simplicial object with faces `∂_i : A[q+1] -> A[q]`,
/// `0 <= i <= q+1`, for `q < N`.
#[derive(Clone, Debug)]
pub struct SimplicialComplexOfComplexes {
    levels: Vec<Complex>,
    faces: Vec<Vec<ChainMap>>,
}

impl SimplicialComplexOfComplexes {
    pub fn new(levels: Vec<Complex>, faces: Vec<Vec<ChainMap>>) -> Result<Self> {
        check_levels(&levels, &faces, -1)?;
        // ∂_i ∂_j = ∂_{j-1} ∂_i for i < j, as maps A[q+2] -> A[q]
        for q in 0..faces.len().saturating_sub(1) {
            for j in 0..=q + 2 {
                for i in 0..j {
                    let lhs = faces[q + 1][j].then(&faces[q][i])?;
                    let rhs = faces[q + 1][i].then(&faces[q][j - 1])?;
                    if !maps_equal(&lhs, &rhs) {
                        return Err(Error::InvalidComplex(format!("simplicial identity fails for i={i}, j={j} at level {q}")));
                    }
                }
            }
        }
        Ok(SimplicialComplexOfComplexes { levels, faces })
    }

    pub fn constant(c: &Complex, n: usize) -> Self {
        let levels = vec![c.clone(); n + 1];
        let faces = (0..n).map(|q| vec![ChainMap::identity(c); q + 2]).collect();
        SimplicialComplexOfComplexes { levels, faces }
    }

    pub fn truncation_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, q: usize) -> &Complex {
        &self.levels[q]
    }

    /// The same object cut down to levels `0..=n`.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.truncation_level());
        SimplicialComplexOfComplexes { levels: self.levels[..=n].to_vec(), faces: self.faces[..n].to_vec() }
    }
}

fn check_levels(levels: &[Complex], maps: &[Vec<ChainMap>], dir: i64) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::InvalidComplex("no levels".into()));
    }
    if maps.len() + 1 != levels.len() {
        return Err(Error::InvalidComplex(format!("{} levels need {} sets of structure maps", levels.len(), levels.len() - 1)));
    }
    let ring = levels[0].ring();
    for (q, ms) in maps.iter().enumerate() {
        if ms.len() != q + 2 {
            return Err(Error::InvalidComplex(format!("level {q} needs {} structure maps, got {}", q + 2, ms.len())));
        }
        let (src, tgt) = if dir > 0 { (&levels[q], &levels[q + 1]) } else { (&levels[q + 1], &levels[q]) };
        for m in ms {
            if !m.source().same_as(src) || !m.target().same_as(tgt) || m.source().ring() != ring {
                return Err(Error::InvalidComplex(format!("structure map at level {q} has the wrong source or target")));
            }
        }
    }
    Ok(())
}

fn maps_equal(a: &ChainMap, b: &ChainMap) -> bool {
    let lo = a.source().lo().min(a.target().lo());
    let hi = a.source().hi().max(a.target().hi());
    (lo..=hi).all(|n| a.component(n) == b.component(n))
}

/// A total complex built on `[lo-1, hi+1]` whose cohomology is reliable on `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct TotComplex {
    pub complex: Complex,
    pub lo: i64,
    pub hi: i64,
}

impl TotComplex {
    /// Cohomology in a degree of the reliable window.
    pub fn homology(&self, n: i64) -> Result<FgAbGroup> {
        if n < self.lo || n > self.hi {
            return Err(Error::Precondition(format!("degree {n} is outside the window [{}, {}]", self.lo, self.hi)));
        }
        Ok(self.complex.homology(n))
    }

    pub fn all_homology(&self) -> Vec<(i64, FgAbGroup)> {
        (self.lo..=self.hi).map(|n| (n, self.complex.homology(n))).collect()
    }
}

/// Level count needed for a window, `hi - lo + 2`.
pub fn required_level(lo: i64, hi: i64) -> usize {
    (hi - lo + 2).max(0) as usize
}

/// `tot^n = ∏_{p+q=n} A^p([q])`, `d x = (-1)^q d_A x + Σ_{i=0}^{q+1} (-1)^i ∂_i x`.
pub fn tot_cosimplicial(a: &CosimplicialComplexTrunc, lo: i64, hi: i64) -> Result<TotComplex> {
    let n = a.truncation_level();
    let required = required_level(lo, hi);
    if !a.complete && n < required {
        return Err(Error::InsufficientLevel { given: n, required });
    }
    let deltas: Vec<Vec<QMatrix>> = a.cofaces.iter().map(|faces| alternating(faces, &a.levels)).collect();
    build(&a.levels, 1, &deltas, lo, hi)
}

/// `tot^n = ⊕_{p-q=n} A^p([q])`, `d x = (-1)^q d_A x + Σ_{i=0}^{q} (-1)^i ∂_i x`.
pub fn tot_simplicial(a: &SimplicialComplexOfComplexes, lo: i64, hi: i64) -> Result<TotComplex> {
    let n = a.truncation_level();
    let required = required_level(lo, hi);
    if n < required {
        return Err(Error::InsufficientLevel { given: n, required });
    }
    tot_simplicial_unchecked(a, lo, hi)
}

pub(crate) fn tot_simplicial_unchecked(a: &SimplicialComplexOfComplexes, lo: i64, hi: i64) -> Result<TotComplex> {
    // deltas[q] is the map out of level q+1
    let deltas: Vec<Vec<QMatrix>> = a.faces.iter().map(|faces| alternating(faces, &a.levels)).collect();
    build(&a.levels, -1, &deltas, lo, hi)
}

/// Alternating sum of structure maps, one matrix per degree of the global window.
fn alternating(maps: &[ChainMap], levels: &[Complex]) -> Vec<QMatrix> {
    let (glo, ghi) = global_window(levels);
    (glo..=ghi)
        .map(|p| {
            let mut acc = maps[0].component(p);
            for (i, m) in maps.iter().enumerate().skip(1) {
                let c = m.component(p).scale(&neg_one_pow(i as i64));
                acc = &acc + &c;
            }
            acc
        })
        .collect()
}

fn global_window(levels: &[Complex]) -> (i64, i64) {
    let lo = levels.iter().map(Complex::lo).min().unwrap_or(0);
    let hi = levels.iter().map(Complex::hi).max().unwrap_or(0);
    (lo, hi)
}

/// Shared assembly. `dir = +1`: total degree `p + q`, horizontal maps raise `q`;
/// `dir = -1`: total degree `p - q`, horizontal maps lower `q`. `deltas[k][p - glo]`
/// is the alternating sum out of level `k` (cosimplicial) or level `k + 1` (simplicial).
fn build(levels: &[Complex], dir: i64, deltas: &[Vec<QMatrix>], lo: i64, hi: i64) -> Result<TotComplex> {
    if lo > hi {
        return Err(Error::Precondition(format!("empty window [{lo}, {hi}]")));
    }
    let ring = levels[0].ring();
    let (glo, _) = global_window(levels);
    let top = levels.len() as i64 - 1;
    let p_of = |n: i64, q: i64| n - dir * q;
    // offsets of the level-q block inside tot^n
    let offsets = |n: i64| -> Vec<usize> {
        let mut out = Vec::with_capacity(levels.len() + 1);
        let mut acc = 0;
        for (q, l) in levels.iter().enumerate() {
            out.push(acc);
            acc += l.rank(p_of(n, q as i64));
        }
        out.push(acc);
        out
    };
    let (blo, bhi) = (lo - 1, hi + 1);
    let ranks: Vec<usize> = (blo..=bhi).map(|n| *offsets(n).last().unwrap()).collect();
    let mut diffs = Vec::new();
    for n in blo..bhi {
        let src = offsets(n);
        let tgt = offsets(n + 1);
        let mut m = QMatrix::zeros(*tgt.last().unwrap(), *src.last().unwrap());
        for (q, level) in levels.iter().enumerate() {
            let qi = q as i64;
            let p = p_of(n, qi);
            if level.rank(p) == 0 {
                continue;
            }
            // vertical part, into level q, degree p+1
            let vertical = level.differential(p).scale(&neg_one_pow(qi));
            paste(&mut m, tgt[q], src[q], &vertical);
            // horizontal part, into level q+dir, same p
            let target_q = qi + dir;
            if (0..=top).contains(&target_q) {
                let k = if dir > 0 { q } else { q - 1 };
                let block = &deltas[k][(p - glo) as usize];
                paste(&mut m, tgt[target_q as usize], src[q], block);
            }
        }
        diffs.push(m);
    }
    let complex = Complex::new(ring, blo, ranks, diffs)?;
    Ok(TotComplex { complex, lo, hi })
}

/// Cone check of an augmentation: whether `f` induces isomorphisms on `[lo, hi]`.
pub fn is_quasi_isomorphism_on(f: &ChainMap, lo: i64, hi: i64) -> Result<bool> {
    let c = crate::chain::cone(f)?;
    // H^n(cone) = 0 for n in [lo-1, hi] gives H^n(f) iso for n in [lo, hi]
    Ok((lo - 1..=hi).all(|n| c.complex.homology(n).is_zero()))
}
