//! Chern character forms `Tr exp(bF)` with a formal variable `b` of degree −2,
//! their closedness check, and transgression along a path of connections.

use std::collections::BTreeMap;

use gauss_quad::legendre::GaussLegendre;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use super::connection::{merge_indices, BoundC, CExpr, MatrixForm, SmoothConnection};
use super::expr::{simplify, Expr};
use crate::error::{Error, Result};

/// One term `b^power · Σ_I f_I dx^I` of a b-graded form.
#[derive(Clone, Debug)]
pub struct BTerm {
    pub power: usize,
    pub degree: usize,
    pub components: BTreeMap<Vec<usize>, CExpr>,
}

impl BTerm {
    pub fn is_zero(&self) -> bool {
        self.components.values().all(CExpr::is_zero)
    }
}

/// A form with coefficients in polynomials of `b`, kept symbolically. `b` is
/// formal and never evaluated.
#[derive(Clone, Debug)]
pub struct BGradedForm {
    pub coords: Vec<String>,
    pub terms: Vec<BTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledComponent {
    pub power: usize,
    pub index: Vec<String>,
    pub value: [f64; 2],
}

impl BGradedForm {
    /// True when every term carrying a positive power of `b` vanishes identically.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().filter(|t| t.power > 0).all(BTerm::is_zero)
    }

    /// The `b^0` coefficient when it is a constant function.
    pub fn constant_term(&self) -> Option<Complex64> {
        let t = self.terms.iter().find(|t| t.power == 0)?;
        let c = t.components.get(&Vec::new())?;
        let names: [String; 0] = [];
        let b = c.bind(&names).ok()?;
        b.eval(&[]).ok()
    }

    /// Numeric values of all components at a point.
    pub fn eval_at(&self, x: &[f64]) -> Result<Vec<SampledComponent>> {
        let mut out = Vec::new();
        for t in &self.terms {
            for (idx, c) in &t.components {
                let v = c.bind(&self.coords)?.eval(x)?;
                out.push(SampledComponent { power: t.power, index: idx.iter().map(|&i| self.coords[i].clone()).collect(), value: [v.re, v.im] });
            }
        }
        Ok(out)
    }

    /// Human-readable expansion, listing only nonzero components.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for t in &self.terms {
            for (idx, c) in &t.components {
                if c.is_zero() {
                    continue;
                }
                let coeff = if c.im.is_zero() { c.re.to_string() } else { format!("({}) + i({})", c.re, c.im) };
                let b = match t.power {
                    0 => String::new(),
                    1 => "b*".into(),
                    k => format!("b^{k}*"),
                };
                let dx: Vec<String> = idx.iter().map(|&i| format!("d{}", self.coords[i])).collect();
                let dx = if dx.is_empty() { String::new() } else { format!(" {}", dx.join("∧")) };
                parts.push(format!("{b}({coeff}){dx}"));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

fn simplify_c(c: &CExpr) -> CExpr {
    CExpr { re: simplify(&c.re), im: simplify(&c.im) }
}

/// `ch = Tr exp(bF) = Σ_k b^k Tr(F^k)/k!` up to the top degree allowed by the dimension.
pub fn chern_character_form(conn: &SmoothConnection) -> BGradedForm {
    let f = conn.curvature();
    let mut terms = vec![BTerm {
        power: 0,
        degree: 0,
        components: BTreeMap::from([(Vec::new(), CExpr::real(Expr::int(conn.rank as i64)))]),
    }];
    let mut power: Option<MatrixForm> = None;
    for k in 1..=conn.dim() / 2 {
        let next = match &power {
            None => f.clone(),
            Some(p) => p.wedge(&f),
        };
        let inv = Expr::Const(BigRational::new(BigInt::from(1), factorial(k)));
        let components = next.components.iter().map(|(idx, m)| (idx.clone(), simplify_c(&m.trace().scale(&inv)))).collect();
        terms.push(BTerm { power: k, degree: 2 * k, components });
        power = Some(next);
    }
    BGradedForm { coords: conn.coords.clone(), terms }
}

/// Exterior derivative of one term: `d(f dx^I) = Σ_j ∂_j f dx^j ∧ dx^I`.
fn exterior_derivative(coords: &[String], t: &BTerm) -> BTreeMap<Vec<usize>, CExpr> {
    let mut out: BTreeMap<Vec<usize>, CExpr> = BTreeMap::new();
    for (idx, c) in &t.components {
        for (j, name) in coords.iter().enumerate() {
            let Some((k, sign)) = merge_indices(&[j], idx) else { continue };
            let mut d = c.derivative(name);
            if sign < 0 {
                d = d.neg();
            }
            let slot = out.entry(k).or_insert_with(CExpr::zero);
            *slot = slot.add(&d);
        }
    }
    out.into_iter().map(|(k, c)| (k, simplify_c(&c))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessReport {
    /// Powers of `b` whose exterior derivative simplifies to zero symbolically.
    pub symbolically_closed: Vec<usize>,
    pub sample_points: usize,
    /// Largest `|d ch|` component over the samples.
    pub residual: f64,
    pub closed: bool,
}

/// Checks `d ch = 0`: symbolically where the simplifier decides it, and by
/// evaluating the symbolic derivative at seeded sample points otherwise.
pub fn closedness_check(conn: &SmoothConnection, form: &BGradedForm, points: usize, seed: u64) -> Result<ClosednessReport> {
    const TOLERANCE: f64 = 1e-9;
    let mut symbolic = Vec::new();
    let mut pending = Vec::new();
    for t in &form.terms {
        let d = exterior_derivative(&form.coords, t);
        if d.values().all(CExpr::is_zero) {
            symbolic.push(t.power);
        } else {
            pending.extend(d.into_values().filter(|c| !c.is_zero()));
        }
    }
    let bound: Vec<BoundC> = pending.iter().map(|c| c.bind(&form.coords)).collect::<Result<_>>()?;
    let mut residual: f64 = 0.0;
    if !bound.is_empty() {
        for x in conn.sample_points(points, seed, 0.0) {
            for b in &bound {
                residual = residual.max(b.eval(&x)?.norm());
            }
        }
    }
    Ok(ClosednessReport { symbolically_closed: symbolic, sample_points: points, residual, closed: residual < TOLERANCE })
}

/// Gauss–Legendre rule on `[0, 1]` as `(node, weight)` pairs.
pub fn unit_rule(nodes: usize) -> Result<Vec<(f64, f64)>> {
    let rule = GaussLegendre::new(nodes.max(2)).map_err(|e| Error::NoConvergence(e.to_string()))?;
    Ok(rule.as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect())
}

/// The fiber integral over `u ∈ [0, 1]` of the `du`-components of `ch` of a path
/// of connections over `(u, base...)`. The result is a b-graded form on the base,
/// meaningful modulo exact forms; its coefficients are integrals evaluated by quadrature.
#[derive(Clone, Debug)]
pub struct Transgression {
    pub base_coords: Vec<String>,
    /// `(power of b, base index set, integrand in (u, base))`.
    integrands: Vec<(usize, Vec<usize>, BoundC)>,
    pub base_domain: Vec<(f64, f64)>,
}

impl Transgression {
    pub fn new(path: &SmoothConnection) -> Result<Self> {
        if path.dim() == 0 || path.domain[0].0 > 0.0 || path.domain[0].1 < 1.0 {
            return Err(Error::Precondition("the first coordinate of a path must range over [0, 1]".into()));
        }
        let ch = chern_character_form(path);
        let mut integrands = Vec::new();
        for t in &ch.terms {
            for (idx, c) in &t.components {
                if idx.first() == Some(&0) && !c.is_zero() {
                    let base: Vec<usize> = idx[1..].iter().map(|i| i - 1).collect();
                    integrands.push((t.power, base, c.bind(&path.coords)?));
                }
            }
        }
        Ok(Transgression { base_coords: path.coords[1..].to_vec(), integrands, base_domain: path.domain[1..].to_vec() })
    }

    /// True when no `du`-component survives symbolic simplification.
    pub fn is_identically_zero(&self) -> bool {
        self.integrands.is_empty()
    }

    /// Components `(power, base index set, value)` at a base point.
    pub fn eval(&self, x: &[f64], nodes: usize) -> Result<Vec<(usize, Vec<usize>, Complex64)>> {
        let rule = unit_rule(nodes)?;
        let mut point = vec![0.0; x.len() + 1];
        point[1..].copy_from_slice(x);
        self.integrands
            .iter()
            .map(|(power, idx, f)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(u, w) in &rule {
                    point[0] = u;
                    acc += f.eval(&point)? * w;
                }
                Ok((*power, idx.clone(), acc))
            })
            .collect()
    }

    /// The one-form part (`b^1`), as values per base coordinate.
    pub fn one_form_at(&self, x: &[f64], nodes: usize) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.base_coords.len()];
        for (power, idx, v) in self.eval(x, nodes)? {
            if power == 1 {
                out[idx[0]] += v;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransgressionReport {
    pub base_coords: Vec<String>,
    pub steps: usize,
    pub sample_points: usize,
    /// Sup-norm of the sampled components.
    pub sup_norm: f64,
    /// Sup-norm change when the number of quadrature nodes is doubled.
    pub change_on_doubling: f64,
    pub converged: bool,
    /// The transgression is defined only up to exact forms.
    pub modulo_exact: bool,
    pub samples: Vec<(Vec<f64>, Vec<SampledComponent>)>,
}

/// Transgression of the Chern character along `path`, sampled at seeded base points.
pub fn transgress_ch(path: &SmoothConnection, steps: usize, points: usize, seed: u64) -> Result<TransgressionReport> {
    const TOLERANCE: f64 = 1e-9;
    let tr = Transgression::new(path)?;
    let pts = sample_box(&tr.base_domain, points, seed);
    let mut sup: f64 = 0.0;
    let mut change: f64 = 0.0;
    let mut samples = Vec::new();
    for x in pts {
        let coarse = tr.eval(&x, steps)?;
        let fine = tr.eval(&x, 2 * steps)?;
        let mut comps = Vec::new();
        for ((power, idx, a), (_, _, b)) in coarse.iter().zip(&fine) {
            sup = sup.max(a.norm());
            change = change.max((a - b).norm());
            comps.push(SampledComponent { power: *power, index: idx.iter().map(|&i| tr.base_coords[i].clone()).collect(), value: [a.re, a.im] });
        }
        samples.push((x, comps));
    }
    Ok(TransgressionReport {
        base_coords: tr.base_coords.clone(),
        steps,
        sample_points: points,
        sup_norm: sup,
        change_on_doubling: change,
        converged: change < TOLERANCE,
        modulo_exact: true,
        samples,
    })
}

pub(crate) fn sample_box(domain: &[(f64, f64)], count: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| domain.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect()).collect()
}
