//! Homotopification of truncated cochains at a point: the total complex of the
//! simplicial object `q ↦ σ^{≥m} C^*(Δ^q; Q)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{tot_simplicial_unchecked, SimplicialComplexOfComplexes};
use crate::cells::CellComplex;
use crate::chain::{ChainMap, FgAbGroup, Ring};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

fn standard_simplex(q: usize) -> CellComplex {
    CellComplex::from_facets(&[(0..=q).collect()]).expect("standard simplex")
}

/// Levels `0..=n` of `q ↦ σ^{≥m} C^*(Δ^q; Q)`, with faces given by restriction along
/// the coface inclusions `Δ^q -> Δ^{q+1}` that skip a vertex.
pub fn point_simplicial_object(m: i64, n: usize) -> Result<SimplicialComplexOfComplexes> {
    let simplices: Vec<CellComplex> = (0..=n).map(standard_simplex).collect();
    let levels: Vec<_> = simplices.iter().map(|s| s.cochain_complex(Ring::Q).truncate_above(m)).collect();
    let mut faces = Vec::with_capacity(n);
    for q in 0..n {
        let (small, big) = (&simplices[q], &simplices[q + 1]);
        let mut level_faces = Vec::with_capacity(q + 2);
        for i in 0..=q + 1 {
            let mut maps = BTreeMap::new();
            for p in m.max(0)..=q as i64 {
                let mut mat = QMatrix::zeros(small.count(p), big.count(p));
                for (row, cell) in small.cells(p as usize).iter().enumerate() {
                    let image: Vec<usize> = cell.vertices.as_ref().expect("simplex").iter().map(|&v| if v < i { v } else { v + 1 }).collect();
                    let col = big.simplex(&image).expect("face of the standard simplex");
                    mat.set(row, col, BigRational::one());
                }
                maps.insert(p, mat);
            }
            level_faces.push(ChainMap::new(levels[q + 1].clone(), levels[q].clone(), maps)?);
        }
        faces.push(level_faces);
    }
    SimplicialComplexOfComplexes::new(levels, faces)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointDegree {
    pub degree: i64,
    pub group: FgAbGroup,
    /// Unchanged between truncation levels `N - 1` and `N`.
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub m: i64,
    pub level: usize,
    pub degrees: Vec<PointDegree>,
}

/// Level needed by [`underlying_at_point`] for a window: `2 (hi - lo) + 2`.
pub fn required_point_level(lo: i64, hi: i64) -> usize {
    (2 * (hi - lo) + 2).max(0) as usize
}

/// Cohomology of the level-`n` total complex in `[lo, hi]`, with stability flags
/// obtained by comparing against level `n - 1`.
pub fn underlying_at_point(m: i64, n: usize, lo: i64, hi: i64) -> Result<PointReport> {
    if m < 1 {
        return Err(Error::Precondition(format!("truncation degree must be at least 1, got {m}")));
    }
    let required = required_point_level(lo, hi);
    if n < required {
        return Err(Error::InsufficientLevel { given: n, required });
    }
    let object = point_simplicial_object(m, n)?;
    let top = tot_simplicial_unchecked(&object, lo, hi)?;
    let below = tot_simplicial_unchecked(&object.truncated(n - 1), lo, hi)?;
    let degrees = (lo..=hi)
        .map(|d| {
            let group = top.complex.homology(d);
            let stable = group == below.complex.homology(d);
            PointDegree { degree: d, group, stable }
        })
        .collect();
    Ok(PointReport { m, level: n, degrees })
}
