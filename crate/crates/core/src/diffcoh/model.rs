//! The differential cochain complex of a cell complex and its cohomology operations.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;

use super::cochain::DifferentialCochain;
use rand::Rng;

use super::cohomology::{integral_coboundary, random_cochain, random_integral_cochain, ClassCoords, IntegralCohomology};
use crate::cells::{CellComplex, Cochain};
use crate::error::{Error, Result};
use crate::linalg::matrix::{qvec_is_zero, zvec_to_q};
use crate::linalg::{MixedSystem, QMatrix, RationalSolver, ZMatrix};

/// Differential cochains on `k` truncated at degree `m`:
/// `Ĉ^n = C^n(Z) ⊕ C^{n-1}(Q) ⊕ σ^{≥m} C^n(Q)` with
/// `d̂(c, h, ω) = (δc, ω - c - δh, δω)`.
///
/// Linear systems are prepared once per degree and shared between calls.
#[derive(Debug)]
pub struct DiffModel {
    k: CellComplex,
    m: i64,
    equality: Mutex<BTreeMap<i64, Arc<MixedSystem>>>,
    integral: Mutex<BTreeMap<i64, Arc<IntegralCohomology>>>,
    exact: Mutex<BTreeMap<i64, Arc<RationalSolver>>>,
}

impl Clone for DiffModel {
    fn clone(&self) -> Self {
        DiffModel::new(&self.k, self.m).expect("already validated")
    }
}

fn cached<T>(map: &Mutex<BTreeMap<i64, Arc<T>>>, key: i64, make: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
    if let Some(v) = map.lock().expect("cache lock").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    map.lock().expect("cache lock").insert(key, v.clone());
    Ok(v)
}

impl DiffModel {
    pub fn new(k: &CellComplex, m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Precondition(format!("truncation degree must be at least 1, got {m}")));
        }
        Ok(DiffModel { k: k.clone(), m, equality: Mutex::default(), integral: Mutex::default(), exact: Mutex::default() })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.k
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn zero(&self, n: i64) -> DifferentialCochain {
        DifferentialCochain::zero(&self.k, self.m, n)
    }

    fn validate(&self, x: &DifferentialCochain) -> Result<()> {
        if x.m != self.m {
            return Err(Error::InvalidCochain(format!("cochain is truncated at {}, the model at {}", x.m, self.m)));
        }
        x.check(&self.k)
    }

    pub fn delta(&self, z: &Cochain) -> Cochain {
        self.k.delta(z)
    }

    /// Builds `(c, h, ω)` after validating sizes and the truncation.
    pub fn cochain(&self, c: Cochain, h: Cochain, omega: Cochain) -> Result<DifferentialCochain> {
        let x = DifferentialCochain::new(self.m, c, h, omega)?;
        self.validate(&x)?;
        Ok(x)
    }

    pub fn dhat(&self, x: &DifferentialCochain) -> Result<DifferentialCochain> {
        self.validate(x)?;
        let omega = if x.n + 1 >= self.m { self.delta(&x.omega) } else { Cochain::zero(&self.k, x.n + 1) };
        Ok(DifferentialCochain {
            m: self.m,
            n: x.n + 1,
            c: self.delta(&x.c),
            h: x.omega.sub(&x.c).sub(&self.delta(&x.h)),
            omega,
        })
    }

    pub fn is_cocycle(&self, x: &DifferentialCochain) -> Result<bool> {
        let d = self.dhat(x)?;
        Ok(d.c.is_zero() && d.h.is_zero() && d.omega.is_zero())
    }

    fn require_cocycle(&self, x: &DifferentialCochain) -> Result<()> {
        if self.is_cocycle(x)? {
            Ok(())
        } else {
            Err(Error::NotACocycle("the differential cochain is not closed".into()))
        }
    }

    /// Curvature `R(c, h, ω) = ω`.
    pub fn curvature(&self, x: &DifferentialCochain) -> Result<Cochain> {
        self.require_cocycle(x)?;
        Ok(x.omega.clone())
    }

    pub fn integral_cohomology(&self, n: i64) -> Result<Arc<IntegralCohomology>> {
        cached(&self.integral, n, || Ok(IntegralCohomology::new(&self.k, n)))
    }

    /// Coordinates of the underlying integral class `I(c, h, ω) = [c]`.
    pub fn underlying(&self, x: &DifferentialCochain) -> Result<ClassCoords> {
        self.require_cocycle(x)?;
        self.integral_cohomology(x.n)?.coords(&x.c)
    }

    /// `a(α) = (0, α, δα)` for a rational cochain `α` of degree `m - 1` or more.
    pub fn forms_to_classes(&self, alpha: &Cochain) -> Result<DifferentialCochain> {
        self.k.check(alpha)?;
        let n = alpha.degree + 1;
        if n < self.m {
            return Err(Error::Precondition(format!("a(α) needs deg α >= {}, got {}", self.m - 1, alpha.degree)));
        }
        Ok(DifferentialCochain { m: self.m, n, c: Cochain::zero(&self.k, n), h: alpha.clone(), omega: self.delta(alpha) })
    }

    /// `j(θ) = (-δθ, θ, 0)` for a rational lift `θ` of a `Q/Z` cocycle of degree below `m`.
    pub fn flat_inclusion(&self, theta: &Cochain) -> Result<DifferentialCochain> {
        self.k.check(theta)?;
        let n = theta.degree + 1;
        let c = self.delta(theta).neg();
        if !c.is_integral() {
            return Err(Error::NotACocycle("θ does not reduce to a Q/Z cocycle".into()));
        }
        Ok(DifferentialCochain { m: self.m, n, c, h: theta.clone(), omega: Cochain::zero(&self.k, n) })
    }

    /// Bockstein `β'(θ) = [-δθ]` as a representing integral cocycle.
    pub fn bockstein(&self, theta: &Cochain) -> Result<Cochain> {
        Ok(self.flat_inclusion(theta)?.c)
    }

    /// For a flat cocycle (`ω = 0`), the class `[h mod Z]`, returned as the rational lift `h`.
    /// `None` when the curvature does not vanish.
    pub fn flat_part(&self, x: &DifferentialCochain) -> Result<Option<Cochain>> {
        self.require_cocycle(x)?;
        Ok(if x.omega.is_zero() { Some(x.h.clone()) } else { None })
    }

    fn equality_system(&self, n: i64) -> Result<Arc<MixedSystem>> {
        cached(&self.equality, n, || {
            let k = &self.k;
            let (cn, a, b) = (k.count(n), k.count(n - 1), k.count(n - 2));
            let with_form = n > self.m;
            let d1 = integral_coboundary(k, n - 1);
            let mut a_int = ZMatrix::zeros(2 * cn + a, a);
            for i in 0..cn {
                for j in 0..a {
                    a_int.set(i, j, d1.get(i, j).clone());
                }
            }
            for j in 0..a {
                a_int.set(cn + j, j, (-1).into());
            }
            let rat_cols = b + if with_form { a } else { 0 };
            let mut a_rat = QMatrix::zeros(2 * cn + a, rat_cols);
            let d2 = k.coboundary(n - 2);
            for i in 0..a {
                for j in 0..b {
                    a_rat.set(cn + i, j, -d2.get(i, j).clone());
                }
            }
            if with_form {
                let d1q = k.coboundary(n - 1);
                for j in 0..a {
                    a_rat.set(cn + j, b + j, BigRational::from_integer(1.into()));
                    for i in 0..cn {
                        a_rat.set(cn + a + i, b + j, d1q.get(i, j).clone());
                    }
                }
            }
            MixedSystem::new(&a_int, &a_rat)
        })
    }

    /// A degree `n - 1` cochain `w` with `x - y = d̂w`, or `None` when the two cocycles
    /// define different classes. The returned witness has been checked exactly.
    pub fn equal_classes(&self, x: &DifferentialCochain, y: &DifferentialCochain) -> Result<Option<DifferentialCochain>> {
        self.require_cocycle(x)?;
        self.require_cocycle(y)?;
        if x.n != y.n {
            return Err(Error::InvalidCochain(format!("comparing classes of degrees {} and {}", x.n, y.n)));
        }
        let n = x.n;
        let diff = x.sub(y);
        let mut rhs = diff.c.values.clone();
        rhs.extend(diff.h.values.iter().cloned());
        rhs.extend(diff.omega.values.iter().cloned());
        let Some(sol) = self.equality_system(n)?.solve(&rhs)? else {
            return Ok(None);
        };
        let (a, b) = (self.k.count(n - 1), self.k.count(n - 2));
        let omega = if n > self.m { Cochain::new(n - 1, sol.rational[b..b + a].to_vec()) } else { Cochain::zero(&self.k, n - 1) };
        let w = DifferentialCochain {
            m: self.m,
            n: n - 1,
            c: Cochain::new(n - 1, zvec_to_q(&sol.integral)),
            h: Cochain::new(n - 2, sol.rational[..b].to_vec()),
            omega,
        };
        if self.dhat(&w)? != diff {
            return Err(Error::Internal("equality witness failed verification".into()));
        }
        Ok(Some(w))
    }

    /// A random cocycle `(u, h, u + δh)` of degree `m` with `u` an integral cocycle.
    pub fn sample_cocycle(&self, rng: &mut impl Rng) -> Result<DifferentialCochain> {
        let u = self.integral_cohomology(self.m)?.sample(rng, 2);
        let h = random_cochain(&self.k, self.m - 1, rng);
        let omega = u.add(&self.delta(&h));
        self.cochain(u, h, omega)
    }

    /// `d̂` of a random cochain of degree `m - 1`.
    pub fn sample_exact(&self, rng: &mut impl Rng) -> Result<DifferentialCochain> {
        let n = self.m - 1;
        let w = self.cochain(random_integral_cochain(&self.k, n, rng, 2), random_cochain(&self.k, n - 1, rng), Cochain::zero(&self.k, n))?;
        self.dhat(&w)
    }

    /// A rational `β` with `δβ = z`, or `None` when `z` is not exact.
    pub fn primitive(&self, z: &Cochain) -> Result<Option<Cochain>> {
        self.k.check(z)?;
        let d = z.degree - 1;
        let solver = cached(&self.exact, d, || Ok(RationalSolver::new(&self.k.coboundary(d))))?;
        Ok(solver.solve(&z.values).map(|v| Cochain::new(d, v)))
    }

    /// Whether `z` is closed.
    pub fn is_closed(&self, z: &Cochain) -> bool {
        qvec_is_zero(&self.delta(z).values)
    }

    /// The cocycle `(u, α, u + δα)` realising a compatible pair of an integral cocycle
    /// `u` and a closed form `z` cohomologous to it over Q.
    pub fn realize(&self, u: &Cochain, z: &Cochain) -> Result<Option<DifferentialCochain>> {
        if u.degree != z.degree || u.degree < self.m {
            return Err(Error::Precondition("realisation needs an integral cocycle and a form of the same degree >= m".into()));
        }
        let Some(alpha) = self.primitive(&z.sub(u))? else {
            return Ok(None);
        };
        let x = self.cochain(u.clone(), alpha, z.clone())?;
        self.require_cocycle(&x)?;
        Ok(Some(x))
    }
}
