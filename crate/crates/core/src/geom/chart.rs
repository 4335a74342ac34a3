//! Discretization of rank-one connections on a triangulated surface chart, and
//! the comparison between endpoint classes of a path and its transgression.
//!
//! Edge phases are `a(e) = Re(κ ∫_e A)` and plaquette fluxes `f(σ) = Re(κ ∫_σ F)`
//! with `κ = i/2π`, so that `n = f − δa` is integral for a genuine bundle.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use super::chern::{unit_rule, Transgression};
use super::connection::{BoundMatrix, SmoothConnection};
use crate::cells::{CellComplex, Cochain};
use crate::diffcoh::{DiffModel, DifferentialCochain, IntegralCohomology};
use crate::error::{Error, Result};
use crate::linalg::matrix::zvec_to_q;

/// Denominator bound for the rounding of floating-point phases into exact data.
pub const PHASE_DENOMINATOR: i64 = 1_000_000;
const CONVERGENCE: f64 = 1e-9;
const INTEGRALITY: f64 = 1e-6;

type Point = [f64; 2];

/// A surface complex whose triangles are given planar positions. Each triangle
/// lists the positions of its vertices in increasing vertex order; positions of
/// a shared vertex may differ between triangles by a period of the chart.
#[derive(Clone, Debug)]
pub struct SurfaceChart {
    k: CellComplex,
    triangles: Vec<[Point; 3]>,
    edges: Vec<[Point; 2]>,
}

impl SurfaceChart {
    pub fn new(k: &CellComplex, triangles: Vec<[Point; 3]>) -> Result<Self> {
        if k.dim() != 2 || !k.is_simplicial() {
            return Err(Error::Precondition("a chart needs a simplicial surface".into()));
        }
        if triangles.len() != k.count(2) {
            return Err(Error::Dimension(format!("{} triangle positions for {} triangles", triangles.len(), k.count(2))));
        }
        let mut edges: Vec<Option<[Point; 2]>> = vec![None; k.count(1)];
        for (t, cell) in k.cells(2).iter().enumerate() {
            let v = cell.vertices.as_ref().expect("simplicial");
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let e = k.simplex(&[v[i], v[j]]).expect("edge of a triangle");
                edges[e].get_or_insert([triangles[t][i], triangles[t][j]]);
            }
        }
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(e, p)| p.ok_or_else(|| Error::Precondition(format!("edge {e} lies in no triangle"))))
            .collect::<Result<_>>()?;
        Ok(SurfaceChart { k: k.clone(), triangles, edges })
    }

    /// The seven-vertex torus on `R²/Z²` with vertex `j` at `j·(1, 3)/7`.
    pub fn csaszar(k: &CellComplex) -> Result<Self> {
        let base = |j: usize| -> Point { [(j % 7) as f64 / 7.0, ((3 * j) % 7) as f64 / 7.0] };
        // offsets from vertex i to i+1, i+2, i+3 inside one triangle
        let offset = |s: usize| -> Point {
            match s {
                1 => [1.0 / 7.0, 3.0 / 7.0],
                2 => [2.0 / 7.0, -1.0 / 7.0],
                _ => [3.0 / 7.0, 2.0 / 7.0],
            }
        };
        let mut triangles = Vec::new();
        for cell in k.cells(2) {
            let v = cell.vertices.as_ref().ok_or_else(|| Error::Precondition("not simplicial".into()))?;
            let found = (0..7).flat_map(|i| [[0, 1, 3], [0, 2, 3]].map(|shape| (i, shape))).find(|(i, shape)| {
                let mut s: Vec<usize> = shape.iter().map(|d| (i + d) % 7).collect();
                s.sort_unstable();
                s == *v
            });
            let (i, shape) = found.ok_or_else(|| Error::Precondition(format!("triangle {v:?} is not in the seven-vertex torus")))?;
            let p0 = base(i);
            let mut pts = [[0.0; 2]; 3];
            for d in shape {
                let vertex = (i + d) % 7;
                let slot = v.iter().position(|&x| x == vertex).expect("vertex of the triangle");
                pts[slot] = if d == 0 { p0 } else { [p0[0] + offset(d)[0], p0[1] + offset(d)[1]] };
            }
            triangles.push(pts);
        }
        SurfaceChart::new(k, triangles)
    }

    /// `{complex, triangles: [[[x, y], [x, y], [x, y]], ...]}`.
    pub fn from_json(v: &Value, resolve: impl Fn(&str) -> Result<CellComplex>) -> Result<Self> {
        let name = v.get("complex").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing string field `complex`".into()))?;
        let k = resolve(name)?;
        let tris: Vec<[Point; 3]> = serde_json::from_value(v.get("triangles").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("`triangles`: {e}")))?;
        SurfaceChart::new(&k, tris)
    }

    pub fn complex(&self) -> &CellComplex {
        &self.k
    }

    pub fn triangle(&self, t: usize) -> [Point; 3] {
        self.triangles[t]
    }

    pub fn edge(&self, e: usize) -> [Point; 2] {
        self.edges[e]
    }

    /// Signed area of triangle `t` in increasing vertex order.
    pub fn signed_area(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.triangles[t];
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]))
    }

    /// Edge integrals of a 1-form and plaquette integrals of a 2-form `g dx∧dy`,
    /// by Gauss–Legendre rules with `nodes` points per direction.
    pub fn integrate(
        &self,
        one_form: &dyn Fn(Point) -> Result<[Complex64; 2]>,
        two_form: &dyn Fn(Point) -> Result<Complex64>,
        nodes: usize,
    ) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let rule = unit_rule(nodes)?;
        let mut edge_vals = Vec::with_capacity(self.edges.len());
        for [p, q] in &self.edges {
            let d = [q[0] - p[0], q[1] - p[1]];
            let mut acc = Complex64::new(0.0, 0.0);
            for &(t, w) in &rule {
                let a = one_form([p[0] + t * d[0], p[1] + t * d[1]])?;
                acc += (a[0] * d[0] + a[1] * d[1]) * w;
            }
            edge_vals.push(acc);
        }
        let mut face_vals = Vec::with_capacity(self.triangles.len());
        for (t, [p0, p1, p2]) in self.triangles.iter().enumerate() {
            let det = 2.0 * self.signed_area(t);
            let (e1, e2) = ([p1[0] - p0[0], p1[1] - p0[1]], [p2[0] - p0[0], p2[1] - p0[1]]);
            let mut acc = Complex64::new(0.0, 0.0);
            // collapsed square: (s, r) ↦ (ξ, η) = (s, (1 − s) r), Jacobian 1 − s
            for &(s, ws) in &rule {
                for &(r, wr) in &rule {
                    let (xi, eta) = (s, (1.0 - s) * r);
                    let x = [p0[0] + xi * e1[0] + eta * e2[0], p0[1] + xi * e1[1] + eta * e2[1]];
                    acc += two_form(x)? * (ws * wr * (1.0 - s));
                }
            }
            face_vals.push(acc * det);
        }
        Ok((edge_vals, face_vals))
    }
}

/// `Re(κ z)` with `κ = i/2π`; fails when `z` has a real part (not `u(1)`-valued).
fn normalize(z: Complex64) -> Result<f64> {
    if z.re.abs() > 1e-9 * (1.0 + z.im.abs()) {
        return Err(Error::Precondition(format!("the connection is not u(1)-valued (real part {:e})", z.re)));
    }
    Ok(-z.im / (2.0 * std::f64::consts::PI))
}

/// Floating-point lattice data: phases `a`, integral fluxes `n`.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub a: Vec<f64>,
    pub n: Vec<BigInt>,
    /// Largest distance of a raw flux `f − δa` from its integer.
    pub integrality_defect: f64,
}

fn integral_fluxes(k: &CellComplex, a: &[f64], f: &[f64]) -> Result<(Vec<BigInt>, f64)> {
    let mut defect: f64 = 0.0;
    let mut n = Vec::with_capacity(f.len());
    for (t, cell) in k.cells(2).iter().enumerate() {
        let da: f64 = cell.boundary.iter().map(|&(e, inc)| inc as f64 * a[e]).sum();
        let raw = f[t] - da;
        defect = defect.max((raw - raw.round()).abs());
        n.push(BigInt::from(raw.round() as i64));
    }
    if defect > INTEGRALITY {
        return Err(Error::Evaluation(format!("plaquette fluxes are not integral (defect {defect:e})")));
    }
    Ok((n, defect))
}

/// Runs `compute` with `nodes` and `2 nodes` and fails unless the results agree.
fn converged<T>(nodes: usize, compute: impl Fn(usize) -> Result<(Vec<f64>, T)>) -> Result<(Vec<f64>, T)> {
    let coarse = compute(nodes)?;
    let fine = compute(2 * nodes)?;
    let change = coarse.0.iter().zip(&fine.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if change > CONVERGENCE {
        return Err(Error::NoConvergence(format!("doubling {nodes} quadrature nodes changed values by {change:e}")));
    }
    Ok(fine)
}

struct PathFields {
    path: SmoothConnection,
    a: [BoundMatrix; 2],
    f: BoundMatrix,
}

impl PathFields {
    fn new(path: &SmoothConnection) -> Result<Self> {
        if path.rank != 1 || path.dim() != 3 {
            return Err(Error::Precondition("a rank-one path over (u, x, y) is required".into()));
        }
        let f = path.curvature();
        let fxy = f.component(&[1, 2]).expect("curvature component").bind(&path.coords)?;
        Ok(PathFields {
            path: path.clone(),
            a: [path.components[1].bind(&path.coords)?, path.components[2].bind(&path.coords)?],
            f: fxy,
        })
    }

    fn point(&self, u: f64, x: Point) -> Result<Vec<f64>> {
        let mut p = vec![u, x[0], x[1]];
        self.path.normalize_point(&mut p).map_err(|i| Error::Precondition(format!("chart point {x:?} leaves the domain in `{}`", self.path.coords[i])))?;
        Ok(p)
    }

    fn discretize(&self, chart: &SurfaceChart, u: f64, nodes: usize) -> Result<Discretization> {
        let one = |x: Point| -> Result<[Complex64; 2]> {
            let p = self.point(u, x)?;
            Ok([self.a[0].eval(&p)?[(0, 0)], self.a[1].eval(&p)?[(0, 0)]])
        };
        let two = |x: Point| -> Result<Complex64> { Ok(self.f.eval(&self.point(u, x)?)?[(0, 0)]) };
        let (a, f) = converged(nodes, |q| {
            let (e, t) = chart.integrate(&one, &two, q)?;
            let a: Vec<f64> = e.into_iter().map(normalize).collect::<Result<_>>()?;
            let f: Vec<f64> = t.into_iter().map(normalize).collect::<Result<_>>()?;
            let mut joined = a.clone();
            joined.extend(&f);
            Ok((joined, (a, f)))
        })?
        .1;
        let (n, integrality_defect) = integral_fluxes(chart.complex(), &a, &f)?;
        Ok(Discretization { a, n, integrality_defect })
    }
}

/// Edge phases of the transgressed 1-form `∫₀¹ F̃_{u·} du`.
fn discretize_transgression(chart: &SurfaceChart, path: &SmoothConnection, nodes: usize) -> Result<Vec<f64>> {
    let tr = Transgression::new(path)?;
    let fields = PathFields::new(path)?;
    let (tr, fields) = (&tr, &fields);
    let one = |q: usize| {
        move |x: Point| -> Result<[Complex64; 2]> {
            let p = fields.point(0.0, x)?;
            let v = tr.one_form_at(&p[1..], q)?;
            Ok([v[0], v[1]])
        }
    };
    let zero = |_: Point| -> Result<Complex64> { Ok(Complex64::new(0.0, 0.0)) };
    Ok(converged(nodes, |q| {
        let (e, _) = chart.integrate(&one(q), &zero, q)?;
        let v: Vec<f64> = e.into_iter().map(normalize).collect::<Result<_>>()?;
        Ok((v, ()))
    })?
    .0)
}

/// Nearest rational with denominator [`PHASE_DENOMINATOR`].
pub fn round_phase(x: f64) -> BigRational {
    BigRational::new(BigInt::from((x * PHASE_DENOMINATOR as f64).round() as i64), BigInt::from(PHASE_DENOMINATOR))
}

#[derive(Clone, Debug, Serialize)]
pub struct EndpointComparison {
    /// Largest `|a₁ − a₀ − τ|` over edges before rounding.
    pub max_phase_deviation: f64,
    pub equal: bool,
    pub witness: Option<Value>,
}

/// Verifies `class(L₁) − class(L₀) = a(τ)` for floating-point lattice data; the
/// phase difference is rounded to denominator [`PHASE_DENOMINATOR`] before the
/// exact comparison. Fails with `TopologyChange` when `[n₀] ≠ [n₁]`.
pub fn compare_endpoints(k: &CellComplex, l0: (&[BigInt], &[f64]), l1: (&[BigInt], &[f64]), tau: &[f64]) -> Result<EndpointComparison> {
    let (n0, a0) = l0;
    let (n1, a1) = l1;
    let n0c = Cochain::new(2, zvec_to_q(n0));
    let n1c = Cochain::new(2, zvec_to_q(n1));
    let h2 = IntegralCohomology::new(k, 2);
    if !h2.same_class(&n1c, &n0c)? {
        return Err(Error::TopologyChange(format!("[n] goes from {} to {}", h2.coords(&n0c)?, h2.coords(&n1c)?)));
    }
    let dev: Vec<f64> = a1.iter().zip(a0).zip(tau).map(|((x, y), t)| x - y - t).collect();
    let max_phase_deviation = dev.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let h = Cochain::new(1, dev.iter().map(|&d| round_phase(d)).collect());
    let c = n1c.sub(&n0c);
    let omega = k.delta(&h).add(&c);
    let model = DiffModel::new(k, 2)?;
    let diff = DifferentialCochain::new(2, c, h, omega)?;
    let witness = model.equal_classes(&diff, &model.zero(2))?;
    Ok(EndpointComparison { max_phase_deviation, equal: witness.is_some(), witness: witness.map(|w| w.to_json()) })
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleMapReport {
    pub nodes: usize,
    pub flux_start: Vec<String>,
    pub flux_end: Vec<String>,
    pub integrality_defect: f64,
    pub comparison: EndpointComparison,
}

/// Discretizes both ends of a rank-one path over `(u, x, y)` on the chart and
/// checks that their classes differ by `a` of the discretized transgression.
pub fn cycle_map_homotopy_check(path: &SmoothConnection, chart: &SurfaceChart, nodes: usize) -> Result<CycleMapReport> {
    let fields = PathFields::new(path)?;
    let d0 = fields.discretize(chart, 0.0, nodes)?;
    let d1 = fields.discretize(chart, 1.0, nodes)?;
    let tau = discretize_transgression(chart, path, nodes)?;
    let comparison = compare_endpoints(chart.complex(), (&d0.n, &d0.a), (&d1.n, &d1.a), &tau)?;
    Ok(CycleMapReport {
        nodes,
        flux_start: d0.n.iter().map(ToString::to_string).collect(),
        flux_end: d1.n.iter().map(ToString::to_string).collect(),
        integrality_defect: d0.integrality_defect.max(d1.integrality_defect),
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::geom::lattice::{fundamental_cycle, LatticeLineBundle};
    use num_traits::ToPrimitive;

    fn torus_chart() -> SurfaceChart {
        SurfaceChart::csaszar(&data::complex("csaszar_torus").unwrap()).unwrap()
    }

    #[test]
    fn csaszar_chart_tiles_the_torus() {
        let chart = torus_chart();
        let k = chart.complex();
        let z = fundamental_cycle(k).unwrap();
        let total: f64 = z.iter().enumerate().map(|(t, c)| c.to_f64().unwrap() * chart.signed_area(t)).sum();
        assert!((total.abs() - 1.0).abs() < 1e-12);
        for t in 0..k.count(2) {
            assert!((chart.signed_area(t).abs() - 1.0 / 14.0).abs() < 1e-12);
        }
        // every triangle sees each of its edges as a period translate of the chosen lift
        for (t, cell) in k.cells(2).iter().enumerate() {
            let v = cell.vertices.as_ref().unwrap();
            let p = chart.triangle(t);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let [q0, q1] = chart.edge(k.simplex(&[v[i], v[j]]).unwrap());
                for (a, b) in [(p[i], q0), (p[j], q1)] {
                    for c in 0..2 {
                        let shift = a[c] - b[c];
                        assert!((shift - shift.round()).abs() < 1e-12);
                    }
                }
                let d = [p[j][0] - p[i][0] - (q1[0] - q0[0]), p[j][1] - p[i][1] - (q1[1] - q0[1])];
                assert!(d[0].abs() < 1e-12 && d[1].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn torus_path_difference_is_the_transgression() {
        let path = SmoothConnection::from_json(&data::geometry("torus_path").unwrap()).unwrap();
        let r = cycle_map_homotopy_check(&path, &torus_chart(), 16).unwrap();
        assert!(r.comparison.equal, "{r:?}");
        assert!(r.comparison.max_phase_deviation < 1e-9);
        assert!(r.flux_end.iter().all(|n| n == "0"));
    }

    #[test]
    fn constant_path_gives_zero_on_both_sides() {
        let mut v = data::geometry("torus_path").unwrap();
        v["A"]["x"] = serde_json::json!([[["0", "-2*pi*(1/3 + cos(2*pi*y)/5)"]]]);
        v["A"]["y"] = serde_json::json!([[["0", "0"]]]);
        let path = SmoothConnection::from_json(&v).unwrap();
        let r = cycle_map_homotopy_check(&path, &torus_chart(), 16).unwrap();
        assert!(r.comparison.equal);
        assert!(r.comparison.max_phase_deviation < 1e-12);
    }

    #[test]
    fn changing_the_underlying_class_is_rejected() {
        let k = data::complex("octahedron").unwrap();
        let l1 = LatticeLineBundle::monopole(&k, 1).unwrap();
        let n1 = l1.n.to_integers().unwrap();
        let n0 = vec![BigInt::from(0); k.count(2)];
        let zero = vec![0.0; k.count(1)];
        let r = compare_endpoints(&k, (&n0, &zero), (&n1, &zero), &zero);
        assert!(matches!(r, Err(Error::TopologyChange(_))));
    }

    #[test]
    fn mismatched_transgression_is_detected() {
        let k = data::complex("csaszar_torus").unwrap();
        let n = vec![BigInt::from(0); k.count(2)];
        let zero = vec![0.0; k.count(1)];
        let mut a1 = zero.clone();
        a1[0] = 0.25;
        let r = compare_endpoints(&k, (&n, &zero), (&n, &a1), &zero).unwrap();
        assert!(!r.equal);
    }

    #[test]
    fn real_connections_are_rejected() {
        let mut v = data::geometry("torus_path").unwrap();
        v["A"]["y"] = serde_json::json!([[["u", "0"]]]);
        let path = SmoothConnection::from_json(&v).unwrap();
        assert!(matches!(cycle_map_homotopy_check(&path, &torus_chart(), 8), Err(Error::Precondition(_))));
    }
}
