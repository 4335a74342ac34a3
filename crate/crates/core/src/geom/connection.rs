//! Connections on a trivial vector bundle over a coordinate box, given by
//! matrices of complex-valued expressions, and their curvature.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::expr::{parse_expr, simplify, Bound, Expr};
use crate::error::{Error, Result};

/// A complex-valued expression stored as real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct CExpr {
    pub re: Expr,
    pub im: Expr,
}

impl CExpr {
    pub fn zero() -> Self {
        CExpr { re: Expr::zero(), im: Expr::zero() }
    }

    pub fn real(re: Expr) -> Self {
        CExpr { re, im: Expr::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &CExpr) -> CExpr {
        CExpr { re: Expr::add(self.re.clone(), o.re.clone()), im: Expr::add(self.im.clone(), o.im.clone()) }
    }

    pub fn sub(&self, o: &CExpr) -> CExpr {
        CExpr { re: Expr::sub(self.re.clone(), o.re.clone()), im: Expr::sub(self.im.clone(), o.im.clone()) }
    }

    pub fn neg(&self) -> CExpr {
        CExpr { re: Expr::neg(self.re.clone()), im: Expr::neg(self.im.clone()) }
    }

    pub fn mul(&self, o: &CExpr) -> CExpr {
        let re = Expr::sub(Expr::mul(self.re.clone(), o.re.clone()), Expr::mul(self.im.clone(), o.im.clone()));
        let im = Expr::add(Expr::mul(self.re.clone(), o.im.clone()), Expr::mul(self.im.clone(), o.re.clone()));
        CExpr { re, im }
    }

    /// Multiplication by a real expression.
    pub fn scale(&self, s: &Expr) -> CExpr {
        CExpr { re: Expr::mul(s.clone(), self.re.clone()), im: Expr::mul(s.clone(), self.im.clone()) }
    }

    pub fn derivative(&self, var: &str) -> CExpr {
        CExpr { re: self.re.derivative(var), im: self.im.derivative(var) }
    }

    pub fn bind(&self, names: &[String]) -> Result<BoundC> {
        Ok(BoundC { re: self.re.bind(names)?, im: self.im.bind(names)? })
    }

    pub fn to_json(&self) -> Value {
        json!([self.re.to_string(), self.im.to_string()])
    }

    pub fn from_json(v: &Value) -> Result<CExpr> {
        let parts = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse(format!("expected [re, im], found {v}")))?;
        Ok(CExpr { re: expr_from_json(&parts[0])?, im: expr_from_json(&parts[1])? })
    }
}

/// Reads an expression written as a string or a JSON number.
pub fn expr_from_json(v: &Value) -> Result<Expr> {
    match v {
        Value::String(s) => parse_expr(s).map(|e| simplify(&e)),
        Value::Number(n) => parse_expr(&n.to_string())
            .map_err(|_| Error::Parse(format!("numbers in expressions must be plain decimals, found {n}"))),
        other => Err(Error::Parse(format!("expected an expression, found {other}"))),
    }
}

#[derive(Clone, Debug)]
pub struct BoundC {
    re: Bound,
    im: Bound,
}

impl BoundC {
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        Ok(Complex64::new(self.re.eval(x)?, self.im.eval(x)?))
    }
}

/// A square matrix of complex expressions, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprMatrix {
    pub rank: usize,
    pub entries: Vec<CExpr>,
}

impl ExprMatrix {
    pub fn zero(rank: usize) -> Self {
        ExprMatrix { rank, entries: vec![CExpr::zero(); rank * rank] }
    }

    pub fn get(&self, i: usize, j: usize) -> &CExpr {
        &self.entries[i * self.rank + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CExpr::is_zero)
    }

    fn zip(&self, o: &ExprMatrix, f: impl Fn(&CExpr, &CExpr) -> CExpr) -> ExprMatrix {
        ExprMatrix { rank: self.rank, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &ExprMatrix) -> ExprMatrix {
        self.zip(o, CExpr::add)
    }

    pub fn sub(&self, o: &ExprMatrix) -> ExprMatrix {
        self.zip(o, CExpr::sub)
    }

    pub fn neg(&self) -> ExprMatrix {
        ExprMatrix { rank: self.rank, entries: self.entries.iter().map(CExpr::neg).collect() }
    }

    pub fn scale(&self, s: &Expr) -> ExprMatrix {
        ExprMatrix { rank: self.rank, entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }

    pub fn mul(&self, o: &ExprMatrix) -> ExprMatrix {
        let r = self.rank;
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                entries.push((0..r).fold(CExpr::zero(), |acc, l| acc.add(&self.get(i, l).mul(o.get(l, j)))));
            }
        }
        ExprMatrix { rank: r, entries }
    }

    pub fn trace(&self) -> CExpr {
        (0..self.rank).fold(CExpr::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn derivative(&self, var: &str) -> ExprMatrix {
        ExprMatrix { rank: self.rank, entries: self.entries.iter().map(|e| e.derivative(var)).collect() }
    }

    pub fn bind(&self, names: &[String]) -> Result<BoundMatrix> {
        Ok(BoundMatrix { rank: self.rank, entries: self.entries.iter().map(|e| e.bind(names)).collect::<Result<_>>()? })
    }

    pub fn to_json(&self) -> Value {
        Value::Array((0..self.rank).map(|i| Value::Array((0..self.rank).map(|j| self.get(i, j).to_json()).collect())).collect())
    }

    pub fn from_json(v: &Value, rank: usize) -> Result<ExprMatrix> {
        let rows = v.as_array().filter(|r| r.len() == rank).ok_or_else(|| Error::Parse(format!("expected {rank} matrix rows")))?;
        let mut entries = Vec::with_capacity(rank * rank);
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == rank).ok_or_else(|| Error::Parse(format!("expected {rank} entries per row")))?;
            for e in row {
                entries.push(CExpr::from_json(e)?);
            }
        }
        Ok(ExprMatrix { rank, entries })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &ExprMatrix) -> ExprMatrix {
        let r = self.rank + o.rank;
        let mut out = ExprMatrix::zero(r);
        for i in 0..r {
            for j in 0..r {
                let e = if i < self.rank && j < self.rank {
                    self.get(i, j).clone()
                } else if i >= self.rank && j >= self.rank {
                    o.get(i - self.rank, j - self.rank).clone()
                } else {
                    continue;
                };
                out.entries[i * r + j] = e;
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct BoundMatrix {
    rank: usize,
    entries: Vec<BoundC>,
}

impl BoundMatrix {
    pub fn eval(&self, x: &[f64]) -> Result<DMatrix<Complex64>> {
        let mut m = DMatrix::zeros(self.rank, self.rank);
        for i in 0..self.rank {
            for j in 0..self.rank {
                m[(i, j)] = self.entries[i * self.rank + j].eval(x)?;
            }
        }
        Ok(m)
    }
}

/// A matrix-valued differential form: one matrix per increasing index set.
#[derive(Clone, Debug)]
pub struct MatrixForm {
    pub coords: Vec<String>,
    pub degree: usize,
    pub components: BTreeMap<Vec<usize>, ExprMatrix>,
}

impl MatrixForm {
    pub fn is_zero(&self) -> bool {
        self.components.values().all(ExprMatrix::is_zero)
    }

    pub fn component(&self, index: &[usize]) -> Option<&ExprMatrix> {
        self.components.get(index)
    }

    /// `(α ∧ β)_K = Σ ± α_I β_J` over disjoint `I ∪ J = K`.
    pub fn wedge(&self, o: &MatrixForm) -> MatrixForm {
        let mut components: BTreeMap<Vec<usize>, ExprMatrix> = BTreeMap::new();
        for (i, a) in &self.components {
            for (j, b) in &o.components {
                let Some((k, sign)) = merge_indices(i, j) else { continue };
                let mut p = a.mul(b);
                if sign < 0 {
                    p = p.neg();
                }
                let rank = p.rank;
                let slot = components.entry(k).or_insert_with(|| ExprMatrix::zero(rank));
                *slot = slot.add(&p);
            }
        }
        MatrixForm { coords: self.coords.clone(), degree: self.degree + o.degree, components }
    }

    pub fn bind(&self) -> Result<BTreeMap<Vec<usize>, BoundMatrix>> {
        self.components.iter().map(|(k, m)| Ok((k.clone(), m.bind(&self.coords)?))).collect()
    }
}

/// Sorted union of two disjoint increasing index lists with the sign of the
/// shuffle; `None` when they overlap.
pub(crate) fn merge_indices(i: &[usize], j: &[usize]) -> Option<(Vec<usize>, i32)> {
    if i.iter().any(|x| j.contains(x)) {
        return None;
    }
    let inversions: usize = i.iter().map(|a| j.iter().filter(|b| *b < a).count()).sum();
    let mut k: Vec<usize> = i.iter().chain(j).copied().collect();
    k.sort_unstable();
    Some((k, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

/// `A = Σ A_μ dx^μ` on a coordinate box. Coordinates with a period are
/// identified modulo that period; evaluation wraps them into the box.
#[derive(Clone, Debug)]
pub struct SmoothConnection {
    pub rank: usize,
    pub coords: Vec<String>,
    pub domain: Vec<(f64, f64)>,
    pub periods: Vec<Option<f64>>,
    pub components: Vec<ExprMatrix>,
}

impl SmoothConnection {
    pub fn new(rank: usize, coords: Vec<String>, domain: Vec<(f64, f64)>, components: Vec<ExprMatrix>) -> Result<Self> {
        let periods = vec![None; coords.len()];
        let c = SmoothConnection { rank, coords, domain, periods, components };
        c.validate()?;
        Ok(c)
    }

    pub fn with_periods(mut self, periods: Vec<Option<f64>>) -> Result<Self> {
        self.periods = periods;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let n = self.coords.len();
        if self.rank == 0 {
            return Err(Error::Parse("connection rank must be positive".into()));
        }
        if self.domain.len() != n || self.components.len() != n || self.periods.len() != n {
            return Err(Error::Dimension("one domain interval and one matrix per coordinate are required".into()));
        }
        if let Some(m) = self.components.iter().find(|m| m.rank != self.rank || m.entries.len() != self.rank * self.rank) {
            return Err(Error::Dimension(format!("component of rank {} in a rank {} connection", m.rank, self.rank)));
        }
        for (name, &(lo, hi)) in self.coords.iter().zip(&self.domain) {
            if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                return Err(Error::Parse(format!("empty domain interval for `{name}`")));
            }
        }
        for m in &self.components {
            m.bind(&self.coords)?;
        }
        if self.periods.iter().flatten().any(|p| p.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::Parse("periods must be positive".into()));
        }
        Ok(())
    }

    /// The trivial connection `d` of the given rank.
    pub fn trivial(rank: usize, coords: &[&str], domain: Vec<(f64, f64)>) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let components = vec![ExprMatrix::zero(rank); coords.len()];
        SmoothConnection::new(rank, coords, domain, components)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    /// Wraps periodic coordinates into the box and checks the others;
    /// returns the index of the first coordinate outside the box.
    pub fn normalize_point(&self, x: &mut [f64]) -> std::result::Result<(), usize> {
        const SLACK: f64 = 1e-12;
        for (i, v) in x.iter_mut().enumerate() {
            let (lo, hi) = self.domain[i];
            if let Some(p) = self.periods[i] {
                if *v < lo - SLACK || *v > hi + SLACK {
                    *v = lo + (*v - lo).rem_euclid(p);
                }
            } else if *v < lo - SLACK * (hi - lo).max(1.0) || *v > hi + SLACK * (hi - lo).max(1.0) {
                return Err(i);
            }
        }
        Ok(())
    }

    pub fn one_form(&self) -> MatrixForm {
        let components = self.components.iter().enumerate().map(|(mu, m)| (vec![mu], m.clone())).collect();
        MatrixForm { coords: self.coords.clone(), degree: 1, components }
    }

    /// `F = dA + A ∧ A`, with `F_{μν} = ∂_μ A_ν − ∂_ν A_μ + [A_μ, A_ν]` for `μ < ν`.
    pub fn curvature(&self) -> MatrixForm {
        let mut components = BTreeMap::new();
        for mu in 0..self.dim() {
            for nu in mu + 1..self.dim() {
                let (a_mu, a_nu) = (&self.components[mu], &self.components[nu]);
                let d = a_nu.derivative(&self.coords[mu]).sub(&a_mu.derivative(&self.coords[nu]));
                let comm = a_mu.mul(a_nu).sub(&a_nu.mul(a_mu));
                components.insert(vec![mu, nu], d.add(&comm));
            }
        }
        MatrixForm { coords: self.coords.clone(), degree: 2, components }
    }

    /// Block-diagonal connection on the direct sum of the two bundles.
    pub fn direct_sum(&self, o: &SmoothConnection) -> Result<SmoothConnection> {
        if self.coords != o.coords {
            return Err(Error::Dimension("direct sum of connections over different coordinates".into()));
        }
        let components = self.components.iter().zip(&o.components).map(|(a, b)| a.direct_sum(b)).collect();
        SmoothConnection::new(self.rank + o.rank, self.coords.clone(), self.domain.clone(), components)?.with_periods(self.periods.clone())
    }

    /// Uniform samples in the box, seeded.
    pub fn sample_points(&self, count: usize, seed: u64, margin: f64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| self.domain.iter().map(|&(lo, hi)| rng.gen_range(lo + margin..hi - margin)).collect())
            .collect()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("a connection must be a JSON object".into()))?;
        let rank = obj.get("rank").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing integer field `rank`".into()))? as usize;
        let coords: Vec<String> = obj
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `coords`".into()))?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(|| Error::Parse("coordinate names must be strings".into())))
            .collect::<Result<_>>()?;
        let domain_v = obj.get("domain").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing array field `domain`".into()))?;
        if domain_v.len() != coords.len() {
            return Err(Error::Parse("`domain` needs one interval per coordinate".into()));
        }
        let domain = domain_v
            .iter()
            .map(|iv| {
                let iv = iv.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("domain intervals are [lo, hi] pairs".into()))?;
                Ok((constant_from_json(&iv[0])?, constant_from_json(&iv[1])?))
            })
            .collect::<Result<Vec<_>>>()?;
        let a = obj.get("A").and_then(Value::as_object).ok_or_else(|| Error::Parse("missing object field `A`".into()))?;
        if let Some(k) = a.keys().find(|k| !coords.contains(k)) {
            return Err(Error::UnknownIdentifier(k.clone()));
        }
        let components = coords
            .iter()
            .map(|c| a.get(c).map_or(Ok(ExprMatrix::zero(rank)), |m| ExprMatrix::from_json(m, rank)))
            .collect::<Result<Vec<_>>>()?;
        let mut periods = vec![None; coords.len()];
        if let Some(p) = obj.get("periods") {
            let p = p.as_object().ok_or_else(|| Error::Parse("`periods` maps coordinate names to periods".into()))?;
            for (name, val) in p {
                let i = coords.iter().position(|c| c == name).ok_or_else(|| Error::UnknownIdentifier(name.clone()))?;
                periods[i] = Some(constant_from_json(val)?);
            }
        }
        SmoothConnection::new(rank, coords, domain, components)?.with_periods(periods)
    }

    pub fn to_json(&self) -> Value {
        let a: Map<String, Value> = self.coords.iter().zip(&self.components).map(|(c, m)| (c.clone(), m.to_json())).collect();
        let mut out = json!({
            "rank": self.rank,
            "coords": self.coords,
            "domain": self.domain.iter().map(|(lo, hi)| json!([lo, hi])).collect::<Vec<_>>(),
            "A": a,
        });
        let periods: Map<String, Value> =
            self.coords.iter().zip(&self.periods).filter_map(|(c, p)| p.map(|p| (c.clone(), json!(p)))).collect();
        if !periods.is_empty() {
            out["periods"] = Value::Object(periods);
        }
        out
    }
}

/// A constant: a JSON number or a closed expression such as `"-2"` or `"2*pi"`.
pub fn constant_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::String(s) => parse_expr(s)?.eval(&[], &[]),
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureValidation {
    pub points: usize,
    pub max_relative_error: f64,
    pub passed: bool,
}

/// Compares the symbolic curvature with central finite differences of `A` at
/// seeded random points. The error is relative to `max(1, |F|)`.
pub fn validate_curvature(conn: &SmoothConnection, points: usize, seed: u64) -> Result<CurvatureValidation> {
    const H: f64 = 1e-5;
    const TOLERANCE: f64 = 1e-6;
    let f = conn.curvature().bind()?;
    let a: Vec<BoundMatrix> = conn.components.iter().map(|m| m.bind(&conn.coords)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (probe, x) in conn.sample_points(points, seed, 2.0 * H).into_iter().enumerate() {
        let at = |e: Result<DMatrix<Complex64>>| e.map_err(|err| Error::Evaluation(format!("probe {probe} at {x:?}: {err}")));
        let shifted = |mu: usize, s: f64| {
            let mut y = x.clone();
            y[mu] += s;
            y
        };
        let a_x: Vec<DMatrix<Complex64>> = a.iter().map(|m| at(m.eval(&x))).collect::<Result<_>>()?;
        for (index, fs) in &f {
            let (mu, nu) = (index[0], index[1]);
            let d_mu_a_nu = (at(a[nu].eval(&shifted(mu, H)))? - at(a[nu].eval(&shifted(mu, -H)))?) / Complex64::from(2.0 * H);
            let d_nu_a_mu = (at(a[mu].eval(&shifted(nu, H)))? - at(a[mu].eval(&shifted(nu, -H)))?) / Complex64::from(2.0 * H);
            let fd = d_mu_a_nu - d_nu_a_mu + &a_x[mu] * &a_x[nu] - &a_x[nu] * &a_x[mu];
            let sym = at(fs.eval(&x))?;
            let err = (&sym - &fd).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let scale = sym.iter().map(|z| z.norm()).fold(1.0, f64::max);
            worst = worst.max(err / scale);
        }
    }
    Ok(CurvatureValidation { points, max_relative_error: worst, passed: worst < TOLERANCE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_curvature() -> SmoothConnection {
        SmoothConnection::from_json(&serde_json::from_str(crate::data::raw_geometry("constant_curvature").unwrap()).unwrap()).unwrap()
    }

    fn matrix(rows: &[[&str; 2]]) -> ExprMatrix {
        ExprMatrix {
            rank: 2,
            entries: rows.iter().flatten().map(|s| CExpr::real(simplify(&parse_expr(s).unwrap()))).collect(),
        }
    }

    #[test]
    fn constant_curvature_is_j() {
        let f = constant_curvature().curvature();
        assert_eq!(f.component(&[0, 1]).unwrap(), &matrix(&[["0", "-1"], ["1", "0"]]));
        assert!(validate_curvature(&constant_curvature(), 20, 0).unwrap().passed);
    }

    #[test]
    fn path_curvature() {
        let v = serde_json::from_str(crate::data::raw_geometry("constant_curvature_path").unwrap()).unwrap();
        let path = SmoothConnection::from_json(&v).unwrap();
        let f = path.curvature();
        let x = [0.3, 0.7, -1.1];
        let eval = |idx: &[usize]| f.component(idx).unwrap().bind(&path.coords).unwrap().eval(&x).unwrap();
        // J (u ds∧dt + s du∧dt) in coordinates (u, s, t)
        assert!(eval(&[0, 1]).iter().all(|z| z.norm() == 0.0));
        assert!((eval(&[0, 2])[(1, 0)] - Complex64::new(0.7, 0.0)).norm() < 1e-15);
        assert!((eval(&[1, 2])[(0, 1)] - Complex64::new(-0.3, 0.0)).norm() < 1e-15);
        assert!(validate_curvature(&path, 20, 1).unwrap().passed);
    }

    #[test]
    fn trivial_connection_is_flat() {
        let c = SmoothConnection::trivial(3, &["x", "y"], vec![(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(c.curvature().is_zero());
    }

    #[test]
    fn nonabelian_commutator_enters() {
        // A = X dx + Y dy with constant non-commuting X, Y
        let x = matrix(&[["0", "1"], ["0", "0"]]);
        let y = matrix(&[["0", "0"], ["1", "0"]]);
        let c = SmoothConnection::new(2, vec!["x".into(), "y".into()], vec![(0.0, 1.0); 2], vec![x, y]).unwrap();
        assert_eq!(c.curvature().component(&[0, 1]).unwrap(), &matrix(&[["1", "0"], ["0", "-1"]]));
        assert!(validate_curvature(&c, 20, 2).unwrap().passed);
    }

    #[test]
    fn division_by_zero_names_the_probe() {
        let a = ExprMatrix { rank: 1, entries: vec![CExpr::real(parse_expr("1/(x - x)").unwrap())] };
        let c = SmoothConnection::new(1, vec!["x".into(), "y".into()], vec![(0.0, 1.0); 2], vec![a, ExprMatrix::zero(1)]).unwrap();
        match validate_curvature(&c, 20, 0) {
            Err(Error::Evaluation(msg)) => assert!(msg.starts_with("probe 0")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_round_trip_and_periods() {
        let c = constant_curvature();
        let again = SmoothConnection::from_json(&c.to_json()).unwrap();
        assert_eq!(again.components, c.components);
        let v = serde_json::from_str(crate::data::raw_geometry("circle_rotation").unwrap()).unwrap();
        let s = SmoothConnection::from_json(&v).unwrap();
        let mut x = [1.25];
        s.normalize_point(&mut x).unwrap();
        assert!((x[0] - 0.25).abs() < 1e-15);
        let mut y = [5.0, 0.0];
        assert_eq!(c.normalize_point(&mut y), Err(0));
    }

    #[test]
    fn merge_signs() {
        assert_eq!(merge_indices(&[0], &[1]), Some((vec![0, 1], 1)));
        assert_eq!(merge_indices(&[1], &[0]), Some((vec![0, 1], -1)));
        assert_eq!(merge_indices(&[0, 2], &[1, 3]), Some((vec![0, 1, 2, 3], -1)));
        assert_eq!(merge_indices(&[0], &[0]), None);
    }
}
