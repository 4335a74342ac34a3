//! Čech double complexes of closed vertex-star covers and the descent comparison.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use super::{is_quasi_isomorphism_on, tot_cosimplicial, CosimplicialComplexTrunc};
use crate::cells::{CellComplex, Subcomplex};
use crate::chain::{paste, ChainMap, Complex, FgAbGroup, Ring};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

/// Coefficients for cochains: a ring, or a complex `C` (cochains become `C^*(U) ⊗ C`).
#[derive(Clone, Debug)]
pub enum Coefficients {
    Ring(Ring),
    Complex(Complex),
}

impl Coefficients {
    fn ring(&self) -> Ring {
        match self {
            Coefficients::Ring(r) => *r,
            Coefficients::Complex(c) => c.ring(),
        }
    }
}

/// Cochains of a closed subcomplex, in degrees `0..=top`.
fn sub_cochains(k: &CellComplex, u: &Subcomplex, ring: Ring, top: i64) -> Complex {
    let ranks = (0..=top).map(|d| u.count(d)).collect();
    let diffs = (0..top)
        .map(|d| {
            let rows = u.cells.get(d as usize + 1).cloned().unwrap_or_default();
            let cols = u.cells.get(d as usize).cloned().unwrap_or_default();
            k.coboundary(d).select_rows(&rows).select_cols(&cols)
        })
        .collect();
    Complex::new(ring, 0, ranks, diffs).expect("cochains of a closed subcomplex form a complex")
}

/// Restriction from `big` to `small ⊆ big`, as per-degree selection matrices.
fn restriction(big: &Subcomplex, small: &Subcomplex, top: i64) -> BTreeMap<i64, QMatrix> {
    (0..=top)
        .map(|d| {
            let b = big.cells.get(d as usize).map_or(&[][..], Vec::as_slice);
            let s = small.cells.get(d as usize).map_or(&[][..], Vec::as_slice);
            let pos: BTreeMap<usize, usize> = b.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut m = QMatrix::zeros(s.len(), b.len());
            for (r, c) in s.iter().enumerate() {
                m.set(r, pos[c], num_rational::BigRational::from_integer(1.into()));
            }
            (d, m)
        })
        .collect()
}

fn whole(k: &CellComplex) -> Subcomplex {
    Subcomplex { cells: (0..=k.dim()).map(|d| (0..k.count(d as i64)).collect()).collect() }
}

/// Closed vertex stars of every vertex of a simplicial complex.
pub fn star_cover(k: &CellComplex) -> Vec<Subcomplex> {
    (0..k.count(0)).map(|v| k.closed_star(k.vertex_id(v).unwrap_or(v))).collect()
}

/// The one-element cover `{K}`.
pub fn trivial_cover(k: &CellComplex) -> Vec<Subcomplex> {
    vec![whole(k)]
}

fn validate_cover(k: &CellComplex, cover: &[Subcomplex]) -> Result<()> {
    if cover.is_empty() {
        return Err(Error::InvalidCover("the cover is empty".into()));
    }
    for (i, u) in cover.iter().enumerate() {
        for (d, cells) in u.cells.iter().enumerate() {
            for &c in cells {
                if c >= k.count(d as i64) {
                    return Err(Error::InvalidCover(format!("element {i} names a missing cell")));
                }
                if d > 0 && k.cell(d, c).boundary.iter().any(|(f, _)| u.cells[d - 1].binary_search(f).is_err()) {
                    return Err(Error::InvalidCover(format!("element {i} is not a closed subcomplex")));
                }
            }
        }
    }
    for d in 0..=k.dim() {
        for c in 0..k.count(d as i64) {
            if !cover.iter().any(|u| u.cells.get(d).is_some_and(|s| s.binary_search(&c).is_ok())) {
                return Err(Error::InvalidCover(format!("cell {c} of dimension {d} is not covered")));
            }
        }
    }
    Ok(())
}

/// The cosimplicial object `q ↦ ∏_{i_0<…<i_q} C^*(U_{i_0…i_q}; coeff)` with cofaces
/// given by restriction. Only strictly increasing tuples occur, so the object has
/// `|cover|` levels and is complete.
pub fn cech_double(k: &CellComplex, cover: &[Subcomplex], coeff: &Coefficients) -> Result<CosimplicialComplexTrunc> {
    validate_cover(k, cover)?;
    let ring = coeff.ring();
    let top = k.dim() as i64;
    let r = cover.len();
    let tuples: Vec<Vec<Vec<usize>>> = (1..=r).map(|s| (0..r).combinations(s).collect()).collect();
    let inter = |t: &[usize]| t[1..].iter().fold(cover[t[0]].clone(), |acc, &i| acc.intersect(&cover[i]));
    let subs: Vec<Vec<Subcomplex>> = tuples.iter().map(|ts| ts.iter().map(|t| inter(t)).collect()).collect();
    let blocks: Vec<Vec<Complex>> = subs.iter().map(|us| us.iter().map(|u| sub_cochains(k, u, ring, top)).collect()).collect();
    let levels: Vec<Complex> = blocks.iter().map(|bs| direct_sum(bs, ring, top)).collect();

    let mut cofaces = Vec::new();
    for q in 0..r - 1 {
        let index: BTreeMap<&Vec<usize>, usize> = tuples[q].iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut level_maps = Vec::new();
        for j in 0..=q + 1 {
            let mut maps = BTreeMap::new();
            for d in 0..=top {
                let row_off = offsets(&blocks[q + 1], d);
                let col_off = offsets(&blocks[q], d);
                let mut m = QMatrix::zeros(levels[q + 1].rank(d), levels[q].rank(d));
                for (ti, t) in tuples[q + 1].iter().enumerate() {
                    let mut face = t.clone();
                    face.remove(j);
                    let si = index[&face];
                    let res = restriction(&subs[q][si], &subs[q + 1][ti], top);
                    paste(&mut m, row_off[ti], col_off[si], &res[&d]);
                }
                maps.insert(d, m);
            }
            level_maps.push(ChainMap::new(levels[q].clone(), levels[q + 1].clone(), maps)?);
        }
        cofaces.push(level_maps);
    }

    match coeff {
        Coefficients::Ring(_) => CosimplicialComplexTrunc::new(levels, cofaces, true),
        Coefficients::Complex(c) => {
            let levels = levels.iter().map(|l| l.tensor(c)).collect::<Result<Vec<_>>>()?;
            let cofaces = cofaces
                .iter()
                .map(|ms| ms.iter().map(|m| m.tensor_identity(c)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            CosimplicialComplexTrunc::new(levels, cofaces, true)
        }
    }
}

fn offsets(blocks: &[Complex], d: i64) -> Vec<usize> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for b in blocks {
        out.push(acc);
        acc += b.rank(d);
    }
    out
}

fn direct_sum(blocks: &[Complex], ring: Ring, top: i64) -> Complex {
    let ranks = (0..=top).map(|d| blocks.iter().map(|b| b.rank(d)).sum()).collect();
    let diffs = (0..top)
        .map(|d| {
            let mut m = QMatrix::zeros(blocks.iter().map(|b| b.rank(d + 1)).sum(), blocks.iter().map(|b| b.rank(d)).sum());
            let (ro, co) = (offsets(blocks, d + 1), offsets(blocks, d));
            for (i, b) in blocks.iter().enumerate() {
                paste(&mut m, ro[i], co[i], &b.differential(d));
            }
            m
        })
        .collect();
    Complex::new(ring, 0, ranks, diffs).expect("direct sum of complexes")
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentRow {
    pub degree: i64,
    pub direct: String,
    pub tot: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub rows: Vec<DescentRow>,
    /// Whether the restriction map from `K` into the Čech total complex induces
    /// isomorphisms on the window (its cone is acyclic there).
    pub canonical_map_is_iso: bool,
    pub all_match: bool,
}

/// Compares `H^n(K; coeff)` with the cohomology of the Čech total complex.
pub fn descent_check(k: &CellComplex, cover: &[Subcomplex], coeff: &Coefficients, lo: i64, hi: i64) -> Result<DescentReport> {
    let cech = cech_double(k, cover, coeff)?;
    let ring = coeff.ring();
    let top = k.dim() as i64;
    let base = sub_cochains(k, &whole(k), ring, top);
    let direct = match coeff {
        Coefficients::Ring(_) => base,
        Coefficients::Complex(c) => base.tensor(c)?,
    };
    // the Čech object is complete, so build tot over its whole support
    let glo = (0..cech.level_count()).map(|q| cech.level(q).lo()).min().unwrap_or(0);
    let ghi = (0..cech.level_count()).map(|q| cech.level(q).hi()).max().unwrap_or(0) + cech.truncation_level() as i64;
    let tot = tot_cosimplicial(&cech, glo.min(lo), ghi.max(hi))?;
    let rows: Vec<DescentRow> = (lo..=hi)
        .map(|n| {
            let a: FgAbGroup = direct.homology(n);
            let b = tot.complex.homology(n);
            DescentRow { degree: n, direct: a.to_string(), tot: b.to_string(), matches: a == b }
        })
        .collect();
    // augmentation: x ↦ (x|U_i)_i in the q = 0 block
    let aug = augmentation(k, cover, coeff)?;
    let mut maps = BTreeMap::new();
    for n in direct.lo()..=direct.hi() {
        // the level-0 block comes first in tot^n
        let mut m = QMatrix::zeros(tot.complex.rank(n), direct.rank(n));
        paste(&mut m, 0, 0, &aug.component(n));
        maps.insert(n, m);
    }
    let f = ChainMap::new(direct.clone(), tot.complex.clone(), maps)?;
    let canonical_map_is_iso = is_quasi_isomorphism_on(&f, lo, hi)?;
    let all_match = rows.iter().all(|r| r.matches) && canonical_map_is_iso;
    Ok(DescentReport { rows, canonical_map_is_iso, all_match })
}

/// `x ↦ (x|U_i)_i`, from the cochains of `K` into the level-0 complex of the Čech object.
fn augmentation(k: &CellComplex, cover: &[Subcomplex], coeff: &Coefficients) -> Result<ChainMap> {
    let ring = coeff.ring();
    let top = k.dim() as i64;
    let all = whole(k);
    let base = sub_cochains(k, &all, ring, top);
    let blocks: Vec<Complex> = cover.iter().map(|u| sub_cochains(k, u, ring, top)).collect();
    let level0 = direct_sum(&blocks, ring, top);
    let mut maps = BTreeMap::new();
    for d in 0..=top {
        let mut m = QMatrix::zeros(level0.rank(d), base.rank(d));
        let off = offsets(&blocks, d);
        for (i, u) in cover.iter().enumerate() {
            paste(&mut m, off[i], 0, &restriction(&all, u, top)[&d]);
        }
        maps.insert(d, m);
    }
    let f = ChainMap::new(base, level0, maps)?;
    match coeff {
        Coefficients::Ring(_) => Ok(f),
        Coefficients::Complex(c) => f.tensor_identity(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;

    #[test]
    fn circle_star_cover() {
        let k = data::complex("circle3").unwrap();
        let cover = star_cover(&k);
        let cech = cech_double(&k, &cover, &Coefficients::Ring(Ring::Z)).unwrap();
        assert!(cech.is_complete());
        let r = descent_check(&k, &cover, &Coefficients::Ring(Ring::Z), 0, 1).unwrap();
        assert!(r.all_match, "{r:?}");
        assert_eq!(r.rows[0].tot, "Z");
        assert_eq!(r.rows[1].tot, "Z");
    }

    #[test]
    fn one_element_cover() {
        let k = data::complex("octahedron").unwrap();
        let r = descent_check(&k, &trivial_cover(&k), &Coefficients::Ring(Ring::Z), 0, 2).unwrap();
        assert!(r.all_match);
    }

    #[test]
    fn two_interval_cover_of_circle() {
        // U = star(0) = {0,1,2 with edges 01, 02}; V = the edge 12 with its vertices
        let k = data::complex("circle3").unwrap();
        let u = k.closed_star(0);
        let e12 = k.simplex(&[1, 2]).unwrap();
        let v = k.closure(&[(1, e12)]);
        let r = descent_check(&k, &[u, v], &Coefficients::Ring(Ring::Z), 0, 1).unwrap();
        assert!(r.all_match);
        assert_eq!((r.rows[0].tot.as_str(), r.rows[1].tot.as_str()), ("Z", "Z"));
    }

    #[test]
    fn empty_and_non_covering_covers_are_rejected() {
        let k = data::complex("circle3").unwrap();
        assert!(cech_double(&k, &[], &Coefficients::Ring(Ring::Z)).is_err());
        let just_a_vertex = k.closure(&[(0, 0)]);
        assert!(cech_double(&k, &[just_a_vertex], &Coefficients::Ring(Ring::Z)).is_err());
    }

    #[test]
    fn complex_coefficients() {
        // coefficients Z --2--> Z: cohomology of the circle with this coefficient complex
        let k = data::complex("circle3").unwrap();
        let c = Complex::two_term(Ring::Z, 0, QMatrix::from_rows(vec![vec![crate::linalg::qi(2)]], 1)).unwrap();
        let r = descent_check(&k, &star_cover(&k), &Coefficients::Complex(c), 0, 2).unwrap();
        assert!(r.all_match, "{r:?}");
        assert_eq!(r.rows[1].direct, "Z/2");
    }
}
