//! Lattice U(1) bundles with connection on a surface, as differential cocycles
//! of degree 2, and their differential characters.
//!
//! All quantities are in normalized units where integral periods are integers:
//! `n` is the integral plaquette flux, `a` the link phase divided by `2π`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cells::{CellComplex, Cochain};
use crate::diffcoh::cohomology::{random_cochain, random_integral_cochain};
use crate::diffcoh::{ClassCoords, DiffModel, DifferentialCochain};
use crate::error::{Error, Result};
use crate::io::{rational_to_string, rationals_from_json, rationals_to_json};
use crate::linalg::matrix::zvec_to_q;
use crate::linalg::rational::solve_q;
use crate::linalg::snf::Smith;
use crate::linalg::QMatrix;

/// The truncation parameter of line bundles with connection.
pub const LINE_BUNDLE_M: i64 = 2;

#[derive(Clone, Debug)]
pub struct LatticeLineBundle {
    k: CellComplex,
    /// Integral 2-cochain of plaquette fluxes.
    pub n: Cochain,
    /// Rational 1-cochain of link phases.
    pub a: Cochain,
}

/// `q mod 1`, in `[0, 1)`.
pub fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl LatticeLineBundle {
    pub fn new(k: &CellComplex, n: Cochain, a: Cochain) -> Result<Self> {
        if k.dim() != 2 {
            return Err(Error::Precondition(format!("lattice bundles live on surfaces, got dimension {}", k.dim())));
        }
        if n.degree != 2 || a.degree != 1 {
            return Err(Error::InvalidCochain("n must have degree 2 and a degree 1".into()));
        }
        k.check(&n)?;
        k.check(&a)?;
        if !n.is_integral() {
            return Err(Error::InvalidCochain("the flux cochain n must be integral".into()));
        }
        if !k.delta(&n).is_zero() {
            return Err(Error::NotACocycle("δn ≠ 0".into()));
        }
        Ok(LatticeLineBundle { k: k.clone(), n, a })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.k
    }

    /// Random integral fluxes in `[-2, 2]` and random rational phases.
    pub fn random(k: &CellComplex, rng: &mut impl Rng) -> Result<Self> {
        let n = random_integral_cochain(k, 2, rng, 2);
        let a = random_cochain(k, 1, rng);
        LatticeLineBundle::new(k, n, a)
    }

    /// The monopole of charge `d`: flux `d` through the first plaquette, `a = 0`.
    pub fn monopole(k: &CellComplex, d: i64) -> Result<Self> {
        let n = Cochain::indicator(k, 2, 0).scale(&BigRational::from_integer(d.into()));
        LatticeLineBundle::new(k, n, Cochain::zero(k, 1))
    }

    /// `ω = δa + n`.
    pub fn curvature(&self) -> Cochain {
        self.k.delta(&self.a).add(&self.n)
    }

    /// The differential cocycle `(n, a, δa + n)` of degree 2 with `m = 2`.
    pub fn class(&self) -> DifferentialCochain {
        DifferentialCochain::new(LINE_BUNDLE_M, self.n.clone(), self.a.clone(), self.curvature()).expect("lattice data gives a valid cochain")
    }

    /// `a ↦ a + δλ + μ`, `n ↦ n − δμ` for rational `λ` (degree 0) and integral `μ` (degree 1).
    pub fn gauge(&self, lambda: &Cochain, mu: &Cochain) -> Result<Self> {
        if lambda.degree != 0 || mu.degree != 1 || !mu.is_integral() {
            return Err(Error::InvalidCochain("gauge parameters are a rational 0-cochain and an integral 1-cochain".into()));
        }
        self.k.check(lambda)?;
        self.k.check(mu)?;
        let a = self.a.add(&self.k.delta(lambda)).add(mu);
        let n = self.n.sub(&self.k.delta(mu));
        LatticeLineBundle::new(&self.k, n, a)
    }

    /// The explicit cochain `w = (−μ, −λ, 0)` with `class(gauge(λ, μ)) − class = d̂w`.
    pub fn gauge_witness(&self, lambda: &Cochain, mu: &Cochain) -> Result<DifferentialCochain> {
        DifferentialCochain::new(LINE_BUNDLE_M, mu.neg(), lambda.neg(), Cochain::zero(&self.k, 1))
    }

    /// `χ(z) = a(z) mod 1` for an integral 1-cycle `z`.
    pub fn differential_character(&self, z: &[BigInt]) -> Result<BigRational> {
        if z.len() != self.k.count(1) {
            return Err(Error::InvalidCochain(format!("a 1-chain needs {} coefficients", self.k.count(1))));
        }
        if self.k.boundary_of(1, z).iter().any(|c| !c.is_zero()) {
            return Err(Error::Precondition("the chain is not a cycle".into()));
        }
        Ok(frac(&self.a.pair(z)))
    }

    /// Checks `χ(∂w) ≡ ⟨ω, w⟩ mod 1` for an integral 2-chain `w`.
    pub fn cs_property_check(&self, w: &[BigInt]) -> Result<CsCheck> {
        if w.len() != self.k.count(2) {
            return Err(Error::InvalidCochain(format!("a 2-chain needs {} coefficients", self.k.count(2))));
        }
        let boundary = self.k.boundary_of(2, w);
        let character = self.differential_character(&boundary)?;
        let curvature = frac(&self.curvature().pair(w));
        Ok(CsCheck { holds: character == curvature, character, curvature })
    }

    pub fn from_json(v: &Value, resolve: impl Fn(&str) -> Result<CellComplex>) -> Result<Self> {
        let name = v.get("complex").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing string field `complex`".into()))?;
        let k = resolve(name)?;
        let n = rationals_from_json(v.get("n").ok_or_else(|| Error::Parse("missing field `n`".into()))?)?;
        let a = rationals_from_json(v.get("a").ok_or_else(|| Error::Parse("missing field `a`".into()))?)?;
        LatticeLineBundle::new(&k, Cochain::new(2, n), Cochain::new(1, a))
    }

    pub fn to_json(&self, complex: &str) -> Value {
        json!({ "complex": complex, "n": rationals_to_json(&self.n.values), "a": rationals_to_json(&self.a.values) })
    }

    /// Underlying class and the total curvature over the fundamental cycle, if any.
    pub fn summary(&self) -> Result<LatticeSummary> {
        let model = DiffModel::new(&self.k, LINE_BUNDLE_M)?;
        let class = self.class();
        let underlying = model.underlying(&class)?;
        let total_curvature = fundamental_cycle(&self.k).map(|z| self.curvature().pair(&z));
        Ok(LatticeSummary { class: class.to_json(), underlying, total_curvature: total_curvature.map(|q| rational_to_string(&q)) })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CsCheck {
    #[serde(serialize_with = "serialize_rational")]
    pub character: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub curvature: BigRational,
    pub holds: bool,
}

fn serialize_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(q))
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub class: Value,
    pub underlying: ClassCoords,
    pub total_curvature: Option<String>,
}

/// The integral 2-cycle generating `H_2` of a closed oriented surface, signed so
/// that the first plaquette has coefficient `+1`. `None` when `H_2` is not `Z`.
pub fn fundamental_cycle(k: &CellComplex) -> Option<Vec<BigInt>> {
    let basis = Smith::new(&k.boundary_matrix(2)).kernel_basis();
    let [z] = basis.as_slice() else { return None };
    let lead = z.iter().find(|c| !c.is_zero())?;
    let sign = if lead.is_negative() { -BigInt::one() } else { BigInt::one() };
    let g = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Some(z.iter().map(|c| c / &g * &sign).collect())
}

/// The 1-chain traversing the closed vertex path `v_0, v_1, …, v_0`.
pub fn vertex_path_chain(k: &CellComplex, vertices: &[usize]) -> Result<Vec<BigInt>> {
    let mut z = vec![BigInt::zero(); k.count(1)];
    for w in vertices.windows(2) {
        let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
        let e = k.simplex(&[a, b]).ok_or_else(|| Error::Precondition(format!("no edge between {} and {}", w[0], w[1])))?;
        z[e] += if w[0] < w[1] { 1 } else { -1 };
    }
    Ok(z)
}

/// A closed 1-cochain with prescribed values on the given 1-cycles, if one exists.
pub fn cocycle_with_periods(k: &CellComplex, cycles: &[Vec<BigInt>], values: &[BigRational]) -> Result<Option<Cochain>> {
    if cycles.len() != values.len() {
        return Err(Error::Dimension("one value per cycle is required".into()));
    }
    let d = k.coboundary(1);
    let periods = QMatrix::from_rows(cycles.iter().map(|z| zvec_to_q(z)).collect(), k.count(1));
    let a = d.vstack(&periods);
    let mut rhs = vec![BigRational::zero(); d.rows()];
    rhs.extend(values.iter().cloned());
    Ok(solve_q(&a, &rhs).map(|v| Cochain::new(1, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::linalg::{q, qi};
    use rand::SeedableRng;

    #[test]
    fn zero_bundle_is_zero_class() {
        let k = data::complex("octahedron").unwrap();
        let l = LatticeLineBundle::new(&k, Cochain::zero(&k, 2), Cochain::zero(&k, 1)).unwrap();
        let model = DiffModel::new(&k, 2).unwrap();
        assert!(model.equal_classes(&l.class(), &model.zero(2)).unwrap().is_some());
    }

    #[test]
    fn monopoles_on_the_octahedron() {
        let k = data::complex("octahedron").unwrap();
        let model = DiffModel::new(&k, 2).unwrap();
        let generator = model.underlying(&LatticeLineBundle::monopole(&k, 1).unwrap().class()).unwrap();
        assert_eq!(generator.free.len(), 1);
        assert_eq!(generator.free[0].abs(), BigInt::one());
        for d in -2..=2 {
            let l = LatticeLineBundle::monopole(&k, d).unwrap();
            let s = l.summary().unwrap();
            assert_eq!(s.underlying.free, vec![&generator.free[0] * d]);
            assert_eq!(s.total_curvature, Some(d.to_string()));
        }
    }

    #[test]
    fn gauge_transformations_preserve_the_class() {
        let k = data::complex("csaszar_torus").unwrap();
        let model = DiffModel::new(&k, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let l = LatticeLineBundle::random(&k, &mut rng).unwrap();
            let lambda = random_cochain(&k, 0, &mut rng);
            let mu = random_integral_cochain(&k, 1, &mut rng, 2);
            let g = l.gauge(&lambda, &mu).unwrap();
            assert!(model.equal_classes(&g.class(), &l.class()).unwrap().is_some());
            let w = l.gauge_witness(&lambda, &mu).unwrap();
            assert_eq!(model.dhat(&w).unwrap(), g.class().sub(&l.class()));
        }
    }

    #[test]
    fn flat_wilson_lines_on_the_torus() {
        let k = data::complex("csaszar_torus").unwrap();
        let meridian = vertex_path_chain(&k, &[0, 1, 4, 0]).unwrap();
        let longitude = vertex_path_chain(&k, &[0, 3, 2, 1, 0]).unwrap();
        let phi = cocycle_with_periods(&k, &[meridian.clone(), longitude.clone()], &[qi(1), qi(0)]).unwrap().unwrap();
        let theta = q(2, 7);
        let l = LatticeLineBundle::new(&k, Cochain::zero(&k, 2), phi.scale(&theta)).unwrap();
        assert!(l.curvature().is_zero());
        assert_eq!(l.differential_character(&meridian).unwrap(), theta);
        assert_eq!(l.differential_character(&longitude).unwrap(), qi(0));
        let two_meridians: Vec<BigInt> = meridian.iter().map(|c| c * 2).collect();
        assert_eq!(l.differential_character(&two_meridians).unwrap(), q(4, 7));
    }

    #[test]
    fn wilson_cycles_are_independent() {
        // no closed cochain can separate dependent cycles, so both period problems must be solvable
        let k = data::complex("csaszar_torus").unwrap();
        let m = vertex_path_chain(&k, &[0, 1, 4, 0]).unwrap();
        let l = vertex_path_chain(&k, &[0, 3, 2, 1, 0]).unwrap();
        assert!(cocycle_with_periods(&k, &[m.clone(), l.clone()], &[qi(0), qi(1)]).unwrap().is_some());
        assert!(cocycle_with_periods(&k, &[m, l], &[qi(1), qi(0)]).unwrap().is_some());
    }

    #[test]
    fn characters_reject_non_cycles() {
        let k = data::complex("octahedron").unwrap();
        let l = LatticeLineBundle::monopole(&k, 1).unwrap();
        let mut z = vec![BigInt::zero(); k.count(1)];
        z[0] = BigInt::one();
        assert!(matches!(l.differential_character(&z), Err(Error::Precondition(_))));
    }

    #[test]
    fn cheeger_simons_property() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for name in ["octahedron", "csaszar_torus", "rp2_6"] {
            let k = data::complex(name).unwrap();
            for _ in 0..10 {
                let l = LatticeLineBundle::random(&k, &mut rng).unwrap();
                let w: Vec<BigInt> = (0..k.count(2)).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
                assert!(l.cs_property_check(&w).unwrap().holds);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let k = data::complex("octahedron").unwrap();
        let l = LatticeLineBundle::monopole(&k, -2).unwrap();
        let again = LatticeLineBundle::from_json(&l.to_json("octahedron"), data::complex).unwrap();
        assert_eq!(again.n, l.n);
        assert_eq!(again.a, l.a);
    }

    #[test]
    fn fundamental_cycles() {
        assert!(fundamental_cycle(&data::complex("octahedron").unwrap()).is_some());
        assert!(fundamental_cycle(&data::complex("csaszar_torus").unwrap()).is_some());
        assert!(fundamental_cycle(&data::complex("rp2_6").unwrap()).is_none());
    }
}
