//! Finite regular cell complexes with integer incidences, their cochains, and
//! cellular maps.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chain::{Complex, Ring};
use crate::error::{Error, Result};
use crate::linalg::matrix::{qvec_add, qvec_is_zero, qvec_neg, qvec_scale, qvec_sub, qvec_to_z, qvec_zero, QMatrix, QVector, ZMatrix};

/// One cell. `boundary` lists `(index among the (dim-1)-cells, incidence)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub boundary: Vec<(usize, i64)>,
    pub label: String,
    /// Sorted vertex list when the cell is a simplex of a simplicial complex.
    pub vertices: Option<Vec<usize>>,
}

/// A finite cell complex. Cells are indexed per dimension; `cells[d][i]` is the
/// `i`-th cell of dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Vec<Cell>>,
    simplex_index: Vec<HashMap<Vec<usize>, usize>>,
}

impl CellComplex {
    /// Builds a complex from cells listed per dimension and checks `∂∂ = 0`.
    pub fn from_cells(cells: Vec<Vec<Cell>>) -> Result<Self> {
        for (d, layer) in cells.iter().enumerate() {
            for (i, c) in layer.iter().enumerate() {
                if d == 0 && !c.boundary.is_empty() {
                    return Err(Error::InvalidComplex(format!("vertex {i} has a nonempty boundary")));
                }
                if let Some(&(j, _)) = c.boundary.iter().find(|(j, _)| d == 0 || *j >= cells[d - 1].len()) {
                    return Err(Error::InvalidComplex(format!("cell {i} of dimension {d} references missing face {j}")));
                }
            }
        }
        let simplex_index = cells
            .iter()
            .map(|layer| {
                layer.iter().enumerate().filter_map(|(i, c)| c.vertices.clone().map(|v| (v, i))).collect()
            })
            .collect();
        let k = CellComplex { cells, simplex_index };
        for d in 2..k.cells.len() {
            if !k.boundary_matrix(d - 1).mul_mat(&k.boundary_matrix(d)).is_zero() {
                return Err(Error::InvalidComplex(format!("boundary of boundary is nonzero in dimension {d}")));
            }
        }
        Ok(k)
    }

    /// All faces of the given facets, oriented by increasing vertex order:
    /// `∂[v_0..v_k] = Σ (-1)^i [v_0..v̂_i..v_k]`. Duplicate facets collapse.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::InvalidComplex("no facets given".into()));
        }
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != f.len() || s.is_empty() {
                return Err(Error::InvalidComplex(format!("facet {f:?} repeats a vertex or is empty")));
            }
            add_faces(&s, &mut by_dim);
        }
        let lists: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<&Vec<usize>, usize>> =
            lists.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let mut cells = Vec::with_capacity(lists.len());
        for (d, list) in lists.iter().enumerate() {
            let layer = list
                .iter()
                .map(|s| {
                    let boundary = if d == 0 {
                        vec![]
                    } else {
                        (0..s.len())
                            .map(|i| {
                                let mut face = s.clone();
                                face.remove(i);
                                (index[d - 1][&face], if i % 2 == 0 { 1 } else { -1 })
                            })
                            .collect()
                    };
                    Cell { boundary, label: format!("{s:?}"), vertices: Some(s.clone()) }
                })
                .collect();
            cells.push(layer);
        }
        Self::from_cells(cells)
    }

    /// Top dimension; `0` for a complex of points (and for the empty complex).
    pub fn dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    /// Number of cells of dimension `d`; zero for negative or too large `d`.
    pub fn count(&self, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        self.cells.get(d as usize).map_or(0, Vec::len)
    }

    pub fn cell(&self, d: usize, i: usize) -> &Cell {
        &self.cells[d][i]
    }

    pub fn cells(&self, d: usize) -> &[Cell] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    /// Index of the simplex with the given (unsorted) vertex set.
    pub fn simplex(&self, vertices: &[usize]) -> Option<usize> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        let d = v.len().checked_sub(1)?;
        self.simplex_index.get(d)?.get(&v).copied()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.vertices.is_some())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// `∂_d : C_d -> C_{d-1}` as a `count(d-1) x count(d)` integer matrix.
    pub fn boundary_matrix(&self, d: usize) -> ZMatrix {
        let rows = if d == 0 { 0 } else { self.count(d as i64 - 1) };
        let mut m = ZMatrix::zeros(rows, self.count(d as i64));
        for (j, c) in self.cells(d).iter().enumerate() {
            for &(i, inc) in &c.boundary {
                let v = m.get(i, j) + BigInt::from(inc);
                m.set(i, j, v);
            }
        }
        m
    }

    /// `δ^d : C^d -> C^{d+1}`, the transpose of `∂_{d+1}`, over Q. Defined for all `d`.
    pub fn coboundary(&self, d: i64) -> QMatrix {
        let (rows, cols) = (self.count(d + 1), self.count(d));
        let mut m = QMatrix::zeros(rows, cols);
        if d + 1 >= 1 {
            for (i, c) in self.cells((d + 1) as usize).iter().enumerate() {
                for &(j, inc) in &c.boundary {
                    let v = m.get(i, j) + BigRational::from_integer(BigInt::from(inc));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// The cellular cochain complex in degrees `0..=dim`.
    pub fn cochain_complex(&self, ring: Ring) -> Complex {
        let top = self.dim() as i64;
        Complex::new(ring, 0, (0..=top).map(|d| self.count(d)).collect(), (0..top).map(|d| self.coboundary(d)).collect())
            .expect("cellular cochains form a complex")
    }

    pub fn delta(&self, z: &Cochain) -> Cochain {
        self.check(z).expect("cochain does not fit the complex");
        Cochain { degree: z.degree + 1, values: self.coboundary(z.degree).mul_vec(&z.values) }
    }

    /// `∂` applied to a chain of dimension `d`.
    pub fn boundary_of(&self, d: usize, chain: &[BigInt]) -> Vec<BigInt> {
        self.boundary_matrix(d).mul_vec(chain)
    }

    pub fn check(&self, z: &Cochain) -> Result<()> {
        if z.values.len() != self.count(z.degree) {
            return Err(Error::InvalidCochain(format!(
                "degree-{} cochain has {} values, the complex has {} cells",
                z.degree,
                z.values.len(),
                self.count(z.degree)
            )));
        }
        Ok(())
    }

    /// Closed subcomplex generated by the given cells (and all their faces).
    pub fn closure(&self, generators: &[(usize, usize)]) -> Subcomplex {
        let mut keep: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cells.len()];
        let mut stack = generators.to_vec();
        while let Some((d, i)) = stack.pop() {
            if keep[d].insert(i) && d > 0 {
                stack.extend(self.cells[d][i].boundary.iter().map(|&(j, _)| (d - 1, j)));
            }
        }
        Subcomplex { cells: keep.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    /// Closed star of a vertex of a simplicial complex: every simplex containing the
    /// vertex, together with all faces.
    pub fn closed_star(&self, v: usize) -> Subcomplex {
        let gens: Vec<(usize, usize)> = self
            .cells
            .iter()
            .enumerate()
            .flat_map(|(d, l)| {
                l.iter().enumerate().filter(move |(_, c)| c.vertices.as_ref().is_some_and(|s| s.contains(&v))).map(move |(i, _)| (d, i))
            })
            .collect();
        self.closure(&gens)
    }

    /// Vertex id (the label number) of vertex index `i` in a simplicial complex.
    pub fn vertex_id(&self, i: usize) -> Option<usize> {
        self.cells.first()?.get(i)?.vertices.as_ref().map(|v| v[0])
    }

    /// The complex spanned by a subcomplex, with the inclusion as a cellular map.
    pub fn restrict_to(&self, sub: &Subcomplex) -> Result<(CellComplex, CellularMap)> {
        let mut position: Vec<HashMap<usize, usize>> = Vec::new();
        let mut cells = Vec::new();
        for (d, idx) in sub.cells.iter().enumerate() {
            position.push(idx.iter().enumerate().map(|(p, &i)| (i, p)).collect());
            let mut layer = Vec::with_capacity(idx.len());
            for &i in idx {
                let c = &self.cells[d][i];
                let boundary = c
                    .boundary
                    .iter()
                    .map(|&(j, inc)| {
                        position[d - 1]
                            .get(&j)
                            .map(|&p| (p, inc))
                            .ok_or_else(|| Error::InvalidComplex(format!("subcomplex is not closed at cell {i} of dimension {d}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                layer.push(Cell { boundary, label: c.label.clone(), vertices: c.vertices.clone() });
            }
            cells.push(layer);
        }
        while cells.last().is_some_and(Vec::is_empty) && cells.len() > 1 {
            cells.pop();
        }
        let small = CellComplex::from_cells(cells)?;
        let maps = sub
            .cells
            .iter()
            .enumerate()
            .map(|(d, idx)| {
                let mut m = ZMatrix::zeros(self.count(d as i64), idx.len());
                for (p, &i) in idx.iter().enumerate() {
                    m.set(i, p, BigInt::one());
                }
                m
            })
            .collect();
        let inc = CellularMap::new(&small, self, maps)?;
        Ok((small, inc))
    }
}

fn add_faces(s: &[usize], by_dim: &mut Vec<BTreeSet<Vec<usize>>>) {
    let d = s.len() - 1;
    while by_dim.len() <= d {
        by_dim.push(BTreeSet::new());
    }
    if !by_dim[d].insert(s.to_vec()) || d == 0 {
        return;
    }
    for i in 0..s.len() {
        let mut face = s.to_vec();
        face.remove(i);
        add_faces(&face, by_dim);
    }
}

/// A closed set of cells, given per dimension by sorted cell indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    pub cells: Vec<Vec<usize>>,
}

impl Subcomplex {
    pub fn intersect(&self, other: &Subcomplex) -> Subcomplex {
        let n = self.cells.len().min(other.cells.len());
        let cells = (0..n)
            .map(|d| {
                let b: BTreeSet<_> = other.cells[d].iter().collect();
                self.cells[d].iter().copied().filter(|i| b.contains(i)).collect()
            })
            .collect();
        Subcomplex { cells }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn count(&self, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        self.cells.get(d as usize).map_or(0, Vec::len)
    }

    /// Restriction of a cochain on the ambient complex.
    pub fn restrict(&self, z: &Cochain) -> Cochain {
        let idx: &[usize] = if z.degree < 0 { &[] } else { self.cells.get(z.degree as usize).map_or(&[], Vec::as_slice) };
        Cochain { degree: z.degree, values: idx.iter().map(|&i| z.values[i].clone()).collect() }
    }
}

/// A cochain: one coefficient per cell of its degree. Integral cochains are
/// rational cochains whose entries happen to be integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: i64,
    pub values: QVector,
}

impl Cochain {
    pub fn zero(k: &CellComplex, degree: i64) -> Self {
        Cochain { degree, values: qvec_zero(k.count(degree)) }
    }

    pub fn new(degree: i64, values: QVector) -> Self {
        Cochain { degree, values }
    }

    pub fn from_ints(degree: i64, values: &[i64]) -> Self {
        Cochain { degree, values: values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect() }
    }

    /// Indicator of a single cell.
    pub fn indicator(k: &CellComplex, degree: i64, i: usize) -> Self {
        let mut z = Self::zero(k, degree);
        z.values[i] = BigRational::one();
        z
    }

    pub fn is_zero(&self) -> bool {
        qvec_is_zero(&self.values)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(BigRational::is_integer)
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        qvec_to_z(&self.values)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "adding cochains of different degrees");
        Cochain { degree: self.degree, values: qvec_add(&self.values, &other.values) }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "subtracting cochains of different degrees");
        Cochain { degree: self.degree, values: qvec_sub(&self.values, &other.values) }
    }

    pub fn neg(&self) -> Cochain {
        Cochain { degree: self.degree, values: qvec_neg(&self.values) }
    }

    pub fn scale(&self, s: &BigRational) -> Cochain {
        Cochain { degree: self.degree, values: qvec_scale(&self.values, s) }
    }

    /// Pairing with an integral chain of the same dimension.
    pub fn pair(&self, chain: &[BigInt]) -> BigRational {
        assert_eq!(chain.len(), self.values.len(), "chain and cochain sizes differ");
        self.values.iter().zip(chain).map(|(v, c)| v * BigRational::from_integer(c.clone())).sum()
    }
}

/// A cellular map given on chains: `maps[d]` is a `count_target(d) x count_source(d)`
/// integer matrix, required to commute with boundaries.
#[derive(Clone, Debug)]
pub struct CellularMap {
    maps: Vec<ZMatrix>,
    source_counts: Vec<usize>,
    target_counts: Vec<usize>,
}

impl CellularMap {
    pub fn new(source: &CellComplex, target: &CellComplex, maps: Vec<ZMatrix>) -> Result<Self> {
        let top = source.cells.len();
        if maps.len() != top {
            return Err(Error::Dimension(format!("cellular map needs {top} components, got {}", maps.len())));
        }
        for (d, m) in maps.iter().enumerate() {
            if m.shape() != (target.count(d as i64), source.count(d as i64)) {
                return Err(Error::Dimension(format!("cellular map component {d} has shape {:?}", m.shape())));
            }
            if d >= 1 {
                let lhs = target.boundary_matrix(d).mul_mat(m);
                let rhs = maps[d - 1].mul_mat(&source.boundary_matrix(d));
                if lhs != rhs {
                    return Err(Error::InvalidComplex(format!("map does not commute with the boundary in dimension {d}")));
                }
            }
        }
        Ok(CellularMap {
            maps,
            source_counts: (0..top).map(|d| source.count(d as i64)).collect(),
            target_counts: (0..=target.dim()).map(|d| target.count(d as i64)).collect(),
        })
    }

    pub fn component(&self, d: usize) -> &ZMatrix {
        &self.maps[d]
    }

    /// `(f^*z)(σ) = z(f(σ))`.
    pub fn pullback(&self, z: &Cochain) -> Result<Cochain> {
        let d = z.degree;
        if d < 0 || d as usize >= self.maps.len() {
            // the source has no cells in this degree
            return Ok(Cochain { degree: d, values: vec![] });
        }
        let m = &self.maps[d as usize];
        if z.values.len() != m.rows() {
            return Err(Error::Dimension(format!(
                "pullback of a degree-{d} cochain with {} values along a map into {} cells",
                z.values.len(),
                self.target_counts.get(d as usize).copied().unwrap_or(0)
            )));
        }
        let values = (0..m.cols())
            .map(|j| {
                let mut acc = BigRational::zero();
                for i in 0..m.rows() {
                    let e = m.get(i, j);
                    if !e.is_zero() {
                        acc += &z.values[i] * BigRational::from_integer(e.clone());
                    }
                }
                acc
            })
            .collect();
        Ok(Cochain { degree: d, values })
    }

    pub fn source_count(&self, d: usize) -> usize {
        self.source_counts.get(d).copied().unwrap_or(0)
    }

    /// Sparse description, for reports.
    pub fn support(&self, d: usize) -> BTreeMap<usize, Vec<(usize, BigInt)>> {
        let m = &self.maps[d];
        let mut out = BTreeMap::new();
        for j in 0..m.cols() {
            let col: Vec<(usize, BigInt)> = (0..m.rows()).filter(|&i| !m.get(i, j).is_zero()).map(|i| (i, m.get(i, j).clone())).collect();
            out.insert(j, col);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    #[test]
    fn triangle_boundary() {
        let k = CellComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!((k.count(0), k.count(1)), (3, 3));
        assert_eq!(k.euler_characteristic(), 0);
        assert_eq!(k.cochain_complex(Ring::Z).homology(1).to_string(), "Z");
    }

    #[test]
    fn duplicate_facets_collapse() {
        let k = CellComplex::from_facets(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(k.count(1), 1);
        assert!(CellComplex::from_facets(&[vec![0, 0]]).is_err());
        assert!(CellComplex::from_facets(&[]).is_err());
    }

    #[test]
    fn boundary_signs_alternate() {
        let k = CellComplex::from_facets(&[vec![0, 1, 2]]).unwrap();
        let tri = k.simplex(&[0, 1, 2]).unwrap();
        let mut signs: Vec<(Vec<usize>, i64)> =
            k.cell(2, tri).boundary.iter().map(|&(j, s)| (k.cell(1, j).vertices.clone().unwrap(), s)).collect();
        signs.sort();
        assert_eq!(signs, vec![(vec![0, 1], 1), (vec![0, 2], -1), (vec![1, 2], 1)]);
    }

    #[test]
    fn bad_boundary_is_rejected() {
        let v = || Cell { boundary: vec![], label: "v".into(), vertices: None };
        let e = |a, b| Cell { boundary: vec![(a, -1), (b, 1)], label: "e".into(), vertices: None };
        let face = Cell { boundary: vec![(0, 1), (1, 1)], label: "f".into(), vertices: None };
        let r = CellComplex::from_cells(vec![vec![v(), v()], vec![e(0, 1), e(0, 1)], vec![face]]);
        assert!(r.is_err());
    }

    #[test]
    fn star_and_restriction() {
        let k = CellComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let star = k.closed_star(0);
        assert_eq!(star.count(0), 3);
        assert_eq!(star.count(1), 2);
        let (s, inc) = k.restrict_to(&star).unwrap();
        assert_eq!(s.euler_characteristic(), 1);
        let z = Cochain::new(1, vec![qi(1), qi(2), qi(3)]);
        let r = inc.pullback(&z).unwrap();
        assert_eq!(r, star.restrict(&z));
        assert_eq!(inc.pullback(&k.delta(&Cochain::from_ints(0, &[1, 5, 7]))).unwrap(), s.delta(&star.restrict(&Cochain::from_ints(0, &[1, 5, 7]))));
    }
}
