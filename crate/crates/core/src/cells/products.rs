//! Products with the interval and with a three-vertex circle, and fiber
//! integration along them.
//!
//! Sign conventions, fixed so that the two Stokes identities hold verbatim:
//! - prism: `∂(I×σ) = {1}×σ - {0}×σ - I×∂σ`, `∂({i}×σ) = {i}×∂σ`;
//! - circle product: `∂(v×σ) = v×∂σ`, `∂(e×τ) = ∂e×τ - e×∂τ`, with circle edges
//!   `e0 = [v0 v1]`, `e1 = [v1 v2]`, `e2 = [v0 v2]` and fundamental cycle `e0 + e1 - e2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::complex::{Cell, CellComplex, CellularMap, Cochain};
use crate::error::{Error, Result};
use crate::linalg::ZMatrix;

/// `Δ¹ × K` with its two end inclusions and the projection.
///
/// Cells of dimension `d` are ordered as `{0}×K_d`, then `{1}×K_d`, then `I×K_{d-1}`.
#[derive(Clone, Debug)]
pub struct Prism {
    pub complex: CellComplex,
    pub end0: CellularMap,
    pub end1: CellularMap,
    pub proj: CellularMap,
    base: CellComplex,
    base_counts: Vec<usize>,
}

impl Prism {
    /// The complex `K` of `Δ¹ × K`.
    pub fn base_complex(&self) -> &CellComplex {
        &self.base
    }

    pub fn new(k: &CellComplex) -> Result<Self> {
        let top = k.dim() + 1;
        let n = |d: i64| k.count(d);
        let mut cells = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let di = d as i64;
            let mut layer = Vec::new();
            for end in 0..2 {
                for c in k.cells(d) {
                    let boundary = c.boundary.iter().map(|&(j, s)| (end * n(di - 1) + j, s)).collect();
                    layer.push(Cell { boundary, label: format!("{end}×{}", c.label), vertices: None });
                }
            }
            if d >= 1 {
                for (t, c) in k.cells(d - 1).iter().enumerate() {
                    let mut boundary = vec![(n(di - 1) + t, 1), (t, -1)];
                    boundary.extend(c.boundary.iter().map(|&(j, s)| (2 * n(di - 1) + j, -s)));
                    layer.push(Cell { boundary, label: format!("I×{}", c.label), vertices: None });
                }
            }
            cells.push(layer);
        }
        while cells.len() > 1 && cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        let complex = CellComplex::from_cells(cells)?;
        let end = |which: usize| -> Result<CellularMap> {
            let maps = (0..=k.dim())
                .map(|d| {
                    let mut m = ZMatrix::zeros(complex.count(d as i64), n(d as i64));
                    for i in 0..n(d as i64) {
                        m.set(which * n(d as i64) + i, i, BigInt::one());
                    }
                    m
                })
                .collect();
            CellularMap::new(k, &complex, maps)
        };
        let end0 = end(0)?;
        let end1 = end(1)?;
        let proj_maps = (0..=complex.dim())
            .map(|d| {
                let nd = n(d as i64);
                let mut m = ZMatrix::zeros(nd, complex.count(d as i64));
                for i in 0..nd {
                    m.set(i, i, BigInt::one());
                    m.set(i, nd + i, BigInt::one());
                }
                m
            })
            .collect();
        let proj = CellularMap::new(&complex, k, proj_maps)?;
        Ok(Prism { complex, end0, end1, proj, base: k.clone(), base_counts: (0..=k.dim()).map(|d| n(d as i64)).collect() })
    }

    fn base(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.base_counts.get(d as usize).copied().unwrap_or(0)
        }
    }

    /// Position of `I×σ` among the prism cells of dimension `d + 1`, for `σ` the
    /// `t`-th `d`-cell of the base.
    pub fn vertical_cell(&self, d: i64, t: usize) -> usize {
        2 * self.base(d + 1) + t
    }

    /// `(π_! z)(σ) = z(I×σ)`, lowering the degree by one.
    pub fn fiber_integrate(&self, z: &Cochain) -> Result<Cochain> {
        self.complex.check(z)?;
        if z.degree < 1 {
            return Err(Error::Precondition("fiber integration over the interval needs a cochain of degree at least 1".into()));
        }
        let d = z.degree - 1;
        let values = (0..self.base(d)).map(|t| z.values[self.vertical_cell(d, t)].clone()).collect();
        Ok(Cochain { degree: d, values })
    }

    /// Whether `z` vanishes on every vertical cell `I×σ`.
    pub fn is_horizontal(&self, z: &Cochain) -> bool {
        let d = z.degree - 1;
        (0..self.base(d)).all(|t| z.values[self.vertical_cell(d, t)] == BigRational::default())
    }
}

/// `S¹ × K` for the three-vertex circle, with base section `σ ↦ v0×σ` and projection.
///
/// Cells of dimension `d`: `v_j×K_d` for `j = 0, 1, 2`, then `e_j×K_{d-1}` for `j = 0, 1, 2`.
#[derive(Clone, Debug)]
pub struct CircleProduct {
    pub complex: CellComplex,
    pub section: CellularMap,
    pub proj: CellularMap,
    base: CellComplex,
    base_counts: Vec<usize>,
}

/// Orientation signs of the circle edges in the fundamental cycle.
pub const CIRCLE_EDGE_SIGNS: [i64; 3] = [1, 1, -1];
/// Endpoints `(tail, head)` of the circle edges.
pub const CIRCLE_EDGES: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

impl CircleProduct {
    pub fn new(k: &CellComplex) -> Result<Self> {
        let top = k.dim() + 1;
        let n = |d: i64| k.count(d);
        let mut cells = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let di = d as i64;
            let mut layer = Vec::new();
            for v in 0..3 {
                for c in k.cells(d) {
                    let boundary = c.boundary.iter().map(|&(j, s)| (v * n(di - 1) + j, s)).collect();
                    layer.push(Cell { boundary, label: format!("v{v}×{}", c.label), vertices: None });
                }
            }
            if d >= 1 {
                for (e, &(tail, head)) in CIRCLE_EDGES.iter().enumerate() {
                    for (t, c) in k.cells(d - 1).iter().enumerate() {
                        let mut boundary = vec![(head * n(di - 1) + t, 1), (tail * n(di - 1) + t, -1)];
                        boundary.extend(c.boundary.iter().map(|&(j, s)| (3 * n(di - 1) + e * n(di - 2) + j, -s)));
                        layer.push(Cell { boundary, label: format!("e{e}×{}", c.label), vertices: None });
                    }
                }
            }
            cells.push(layer);
        }
        while cells.len() > 1 && cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        let complex = CellComplex::from_cells(cells)?;
        let section_maps = (0..=k.dim())
            .map(|d| {
                let mut m = ZMatrix::zeros(complex.count(d as i64), n(d as i64));
                for i in 0..n(d as i64) {
                    m.set(i, i, BigInt::one());
                }
                m
            })
            .collect();
        let section = CellularMap::new(k, &complex, section_maps)?;
        let proj_maps = (0..=complex.dim())
            .map(|d| {
                let nd = n(d as i64);
                let mut m = ZMatrix::zeros(nd, complex.count(d as i64));
                for v in 0..3 {
                    for i in 0..nd {
                        m.set(i, v * nd + i, BigInt::one());
                    }
                }
                m
            })
            .collect();
        let proj = CellularMap::new(&complex, k, proj_maps)?;
        Ok(CircleProduct { complex, section, proj, base: k.clone(), base_counts: (0..=k.dim()).map(|d| n(d as i64)).collect() })
    }

    fn base(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.base_counts.get(d as usize).copied().unwrap_or(0)
        }
    }

    /// The complex `K` of `S¹ × K`.
    pub fn base_complex(&self) -> &CellComplex {
        &self.base
    }

    /// Position of `e_j×τ` among the cells of dimension `d + 1`, for `τ` the `t`-th
    /// `d`-cell of the base.
    pub fn edge_cell(&self, j: usize, d: i64, t: usize) -> usize {
        3 * self.base(d + 1) + j * self.base(d) + t
    }

    /// Position of `v_j×σ` among the cells of dimension `d`.
    pub fn vertex_cell(&self, j: usize, d: i64, t: usize) -> usize {
        j * self.base(d) + t
    }

    /// `(π_! z)(τ) = Σ_j ε_j z(e_j×τ)`, lowering the degree by one.
    pub fn fiber_integrate(&self, z: &Cochain) -> Result<Cochain> {
        self.complex.check(z)?;
        if z.degree < 1 {
            return Err(Error::Precondition("fiber integration over the circle needs a cochain of degree at least 1".into()));
        }
        let d = z.degree - 1;
        let values = (0..self.base(d))
            .map(|t| {
                CIRCLE_EDGE_SIGNS
                    .iter()
                    .enumerate()
                    .map(|(j, &s)| &z.values[self.edge_cell(j, d, t)] * BigRational::from_integer(BigInt::from(s)))
                    .sum()
            })
            .collect();
        Ok(Cochain { degree: d, values })
    }

    /// Cross product of a circle cochain `u` (degree 0 on `v0,v1,v2` or degree 1 on
    /// `e0,e1,e2`) with a cochain `y` on the base.
    pub fn cross(&self, u: &Cochain, y: &Cochain) -> Result<Cochain> {
        if u.values.len() != 3 || !(0..=1).contains(&u.degree) {
            return Err(Error::InvalidCochain("circle cochains have degree 0 or 1 and three values".into()));
        }
        if y.values.len() != self.base(y.degree) {
            return Err(Error::InvalidCochain("base cochain does not fit the base complex".into()));
        }
        let degree = u.degree + y.degree;
        let mut z = Cochain::zero(&self.complex, degree);
        for j in 0..3 {
            for (t, yv) in y.values.iter().enumerate() {
                let pos = if u.degree == 0 { self.vertex_cell(j, y.degree, t) } else { self.edge_cell(j, y.degree, t) };
                z.values[pos] = &u.values[j] * yv;
            }
        }
        Ok(z)
    }

    /// The circle 1-cocycle dual to `e0`; it pairs to one with the fundamental cycle.
    pub fn fundamental_circle_cocycle() -> Cochain {
        Cochain::from_ints(1, &[1, 0, 0])
    }
}
