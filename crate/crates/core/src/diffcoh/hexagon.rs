//! The differential cohomology hexagon and a randomized check of its
//! commutativity and exactness.
//!
//! ```text
//!   H^{m-1}(Q) ──incl──> C^{m-1}/im δ ──δ──> Z^m ──[·]──> H^m(Q)
//!        │                     \a          R/          ↑
//!        │                      ──>  Ĥ^m  ──          rationalize
//!        │                     /j          I\          │
//!   H^{m-1}(Q) ──red──> H^{m-1}(Q/Z) ──β'──> H^m(Z) ───┘
//! ```
//!
//! Maps: `a(α) = (0, α, δα)`, `j(θ) = (-δθ, θ, 0)`, `R = ω`, `I = [c]` and the
//! Bockstein `β'(θ) = [-δθ]` with the sign forced by `I ∘ j = β'`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cochain::DifferentialCochain;
use super::cohomology::{
    integral_coboundary, random_cochain, random_integral_cochain, FlatCohomology, IntegralCohomology, RationalCohomology,
};
use super::model::DiffModel;
use super::report::{expect, Check, CheckKind, Runner};
use crate::cells::{CellComplex, Cochain};
use crate::error::{Error, Result};
use crate::linalg::matrix::zvec_to_q;
use crate::linalg::{rank_q, Smith};

/// Explicit presentations of the seven nodes, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct HexagonNodes {
    /// `H^{m-1}(K; Q)`, as a dimension.
    pub rational_below: usize,
    /// `C^{m-1}(K; Q) / im δ`, as a dimension.
    pub forms_mod_exact: usize,
    /// Closed rational `m`-cochains, as a dimension.
    pub closed_forms: usize,
    /// `H^m(K; Q)`, as a dimension.
    pub rational_top: usize,
    /// `H^{m-1}(K; Q/Z)`.
    pub flat: String,
    /// `H^m(K; Z)`.
    pub integral: String,
    /// `Ĥ^m(K)`, an extension of `H^m(K; Z)` by `C^{m-1}/(closed forms with integral periods)`.
    pub differential: String,
}

/// The hexagon for a cell complex and truncation degree `m`, with its maps.
#[derive(Debug)]
pub struct HexagonDiagram {
    pub model: DiffModel,
    pub integral: IntegralCohomology,
    pub rational_below: RationalCohomology,
    pub rational_top: RationalCohomology,
    pub flat: FlatCohomology,
    flat_top: FlatCohomology,
}

impl HexagonDiagram {
    pub fn new(k: &CellComplex, m: i64) -> Result<Self> {
        Ok(HexagonDiagram {
            model: DiffModel::new(k, m)?,
            integral: IntegralCohomology::new(k, m),
            rational_below: RationalCohomology::new(k, m - 1),
            rational_top: RationalCohomology::new(k, m),
            flat: FlatCohomology::new(k, m - 1)?,
            flat_top: FlatCohomology::new(k, m)?,
        })
    }

    pub fn m(&self) -> i64 {
        self.model.m()
    }

    fn k(&self) -> &CellComplex {
        self.model.complex()
    }

    pub fn nodes(&self) -> HexagonNodes {
        let k = self.k();
        let m = self.m();
        let exact_below = rank_q(&k.coboundary(m - 2));
        let closed = k.count(m) - rank_q(&k.coboundary(m));
        HexagonNodes {
            rational_below: self.rational_below.dim(),
            forms_mod_exact: k.count(m - 1) - exact_below,
            closed_forms: closed,
            rational_top: self.rational_top.dim(),
            flat: self.flat.group().to_string(),
            integral: self.integral.group().to_string(),
            differential: format!(
                "extension of {} by a {}-dimensional rational space modulo a rank-{} lattice",
                self.integral.group(),
                k.count(m - 1) - exact_below,
                self.rational_below.dim()
            ),
        }
    }

    /// `a(α) = (0, α, δα)`.
    pub fn a(&self, alpha: &Cochain) -> Result<DifferentialCochain> {
        self.model.forms_to_classes(alpha)
    }

    /// `j(θ) = (-δθ, θ, 0)`.
    pub fn j(&self, theta: &Cochain) -> Result<DifferentialCochain> {
        self.model.flat_inclusion(theta)
    }

    /// Bockstein `β'(θ) = [-δθ]`, as a representing cocycle.
    pub fn bockstein(&self, theta: &Cochain) -> Result<Cochain> {
        self.model.bockstein(theta)
    }

    /// Periods of the image of an integral or rational cocycle in `H^m(K; Q)`.
    pub fn rationalize(&self, z: &Cochain) -> Result<Vec<BigRational>> {
        self.rational_top.periods(z)
    }

    /// Whether the Bockstein restricts to an isomorphism from the torsion of
    /// `H^{m-1}(K; Q/Z)` onto the torsion of `H^m(K; Z)`. `None` when the groups are
    /// too large to enumerate.
    pub fn bockstein_torsion_isomorphism(&self) -> Result<Option<bool>> {
        let lifts = self.flat.torsion_lifts();
        let images = lifts
            .iter()
            .map(|(theta, _)| Ok(self.integral.coords(&self.bockstein(theta)?)?.torsion))
            .collect::<Result<Vec<_>>>()?;
        let orders: Vec<BigInt> = lifts.iter().map(|(_, d)| d.clone()).collect();
        let size = orders.iter().fold(BigInt::one(), |a, b| a * b);
        let target = self.integral.group().torsion.iter().fold(BigInt::one(), |a, b| a * b);
        if size != target {
            return Ok(Some(false));
        }
        if size > BigInt::from(4096) {
            return Ok(None);
        }
        let moduli = self.integral.coords(&Cochain::zero(self.k(), self.m()))?.moduli;
        // injective on a finite group of the same order as the target
        let mut digits = vec![BigInt::zero(); orders.len()];
        loop {
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < orders[i] {
                    break;
                }
                digits[i] = BigInt::zero();
                i += 1;
            }
            if i == digits.len() {
                return Ok(Some(true));
            }
            let image: Vec<BigInt> = (0..moduli.len())
                .map(|t| digits.iter().zip(&images).fold(BigInt::zero(), |acc, (a, img)| acc + a * &img[t]).mod_floor(&moduli[t]))
                .collect();
            if image.iter().all(Zero::is_zero) {
                return Ok(Some(false));
            }
        }
    }

    pub fn sample_class(&self, rng: &mut ChaCha8Rng) -> Result<DifferentialCochain> {
        self.model.sample_cocycle(rng)
    }

    pub fn sample_exact(&self, rng: &mut ChaCha8Rng) -> Result<DifferentialCochain> {
        self.model.sample_exact(rng)
    }

    fn sample_rational_cocycle(&self, rng: &mut ChaCha8Rng) -> Cochain {
        let k = self.k();
        let mut z = Cochain::zero(k, self.m() - 1);
        for b in self.rational_below.cocycle_basis() {
            z = z.add(&b.scale(&super::cohomology::random_rational(rng)));
        }
        z
    }

    fn integral_primitive(&self, z: &Cochain) -> Option<Cochain> {
        let d = integral_coboundary(self.k(), self.m() - 1);
        Smith::new(&d).solve(&z.to_integers()?).map(|v| Cochain::new(self.m() - 1, zvec_to_q(&v)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HexagonReport {
    pub m: i64,
    pub seed: u64,
    pub samples: usize,
    pub nodes: HexagonNodes,
    pub bockstein_torsion_isomorphism: Option<bool>,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Checks every composite, square and exactness statement of the hexagon on
/// `samples` random elements per check. Exactness is checked constructively: each
/// kernel sample gets an explicit preimage, which is then verified.
pub fn hexagon_exactness(k: &CellComplex, m: i64, samples: usize, seed: u64) -> Result<HexagonReport> {
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is needed".into()));
    }
    let hex = HexagonDiagram::new(k, m)?;
    let model = &hex.model;
    let zero = model.zero(m);
    let mut r = Runner::new(seed, samples);
    let exponent = BigRational::from_integer(hex.flat.torsion_exponent());

    r.run("top row: δ ∘ inclusion = 0", CheckKind::Composite, |rng| {
        let alpha = hex.sample_rational_cocycle(rng);
        Ok(expect(model.is_closed(&alpha), || "a cocycle has nonzero coboundary".into()))
    });
    r.run("top row: [·] ∘ δ = 0", CheckKind::Composite, |rng| {
        let alpha = random_cochain(k, m - 1, rng);
        Ok(expect(hex.rational_top.is_zero_class(&model.delta(&alpha))?, || "δα has a nonzero class".into()))
    });
    r.run("bottom row: β' ∘ reduction = 0", CheckKind::Composite, |rng| {
        let alpha = hex.sample_rational_cocycle(rng);
        let b = hex.bockstein(&alpha)?;
        Ok(expect(hex.integral.coords(&b)?.is_zero(), || "β' of a reduced rational class is nonzero".into()))
    });
    r.run("bottom row: rationalization ∘ β' = 0", CheckKind::Composite, |rng| {
        let theta = hex.flat.sample(k, rng, true);
        Ok(expect(hex.rational_top.is_zero_class(&hex.bockstein(&theta)?)?, || "β'(θ) is not torsion".into()))
    });
    r.run("diagonal: I ∘ a = 0", CheckKind::Composite, |rng| {
        let x = hex.a(&random_cochain(k, m - 1, rng))?;
        Ok(expect(model.underlying(&x)?.is_zero(), || "I(a(α)) is nonzero".into()))
    });
    r.run("diagonal: R ∘ j = 0", CheckKind::Composite, |rng| {
        let x = hex.j(&hex.flat.sample(k, rng, true))?;
        Ok(expect(model.curvature(&x)?.is_zero(), || "R(j(θ)) is nonzero".into()))
    });
    r.run("square: R ∘ a = δ", CheckKind::Square, |rng| {
        let alpha = random_cochain(k, m - 1, rng);
        Ok(expect(model.curvature(&hex.a(&alpha)?)? == model.delta(&alpha), || "R(a(α)) differs from δα".into()))
    });
    r.run("square: I ∘ j = β'", CheckKind::Square, |rng| {
        let theta = hex.flat.sample(k, rng, true);
        let lhs = &model.underlying(&hex.j(&theta)?)?;
        Ok(expect(*lhs == hex.integral.coords(&hex.bockstein(&theta)?)?, || "I(j(θ)) differs from β'(θ)".into()))
    });
    r.run("square: a ∘ inclusion = j ∘ reduction", CheckKind::Square, |rng| {
        let alpha = hex.sample_rational_cocycle(rng);
        let same = model.equal_classes(&hex.a(&alpha)?, &hex.j(&alpha)?)?.is_some();
        Ok(expect(same, || "a(α) and j(α mod Z) differ".into()))
    });
    r.run("square: [R] = rationalization ∘ I", CheckKind::Square, |rng| {
        let x = hex.sample_class(rng)?.add(&hex.sample_exact(rng)?);
        Ok(expect(hex.rationalize(&model.curvature(&x)?)? == hex.rationalize(&x.c)?, || "periods of ω and c differ".into()))
    });
    r.run("top row exact at C^{m-1}/im δ", CheckKind::Exactness, |rng| {
        // kernel of δ: closed cochains; the preimage is the class of the cocycle itself
        let exact_part = if m >= 2 { model.delta(&random_cochain(k, m - 2, rng)) } else { Cochain::zero(k, m - 1) };
        let alpha = hex.sample_rational_cocycle(rng).add(&exact_part);
        Ok(expect(model.is_closed(&alpha) && hex.rational_below.is_cocycle(&alpha), || "kernel element is not a cocycle".into()))
    });
    r.run("top row exact at closed m-cochains", CheckKind::Exactness, |rng| {
        let z = model.delta(&random_cochain(k, m - 1, rng));
        let found = model.primitive(&z)?.is_some_and(|b| model.delta(&b) == z);
        Ok(expect(found, || "rationally trivial closed cochain has no primitive".into()))
    });
    r.run("bottom row exact at H^{m-1}(Q/Z)", CheckKind::Exactness, |rng| {
        let theta = if rng.gen_bool(0.5) {
            hex.flat.sample(k, rng, true).scale(&exponent)
        } else {
            hex.sample_rational_cocycle(rng).add(&random_integral_cochain(k, m - 1, rng, 2))
        };
        let b = hex.bockstein(&theta)?;
        if !hex.integral.coords(&b)?.is_zero() {
            return Ok(Err("kernel sample has nonzero Bockstein".into()));
        }
        let Some(u) = hex.integral_primitive(&b) else {
            return Ok(Err("no integral primitive for β'(θ)".into()));
        };
        // δu = -δθ, so θ + u is a rational cocycle reducing to θ
        let alpha = theta.add(&u);
        Ok(expect(model.is_closed(&alpha) && hex.flat.same_class(&alpha, &theta)?, || "preimage does not reduce to θ".into()))
    });
    r.run("bottom row exact at H^m(Z)", CheckKind::Exactness, |rng| {
        let gens = hex.integral.generators();
        let torsion = &gens[hex.integral.group().rank..];
        let mut t = model.delta(&random_integral_cochain(k, m - 1, rng, 2));
        for g in torsion {
            t = t.add(&g.scale(&BigRational::from_integer(rng.gen_range(-3..=3).into())));
        }
        let Some(r) = model.primitive(&t)? else {
            return Ok(Err("torsion class is not rationally trivial".into()));
        };
        let theta = r.neg();
        Ok(expect(hex.flat.is_cocycle(&theta) && hex.integral.same_class(&hex.bockstein(&theta)?, &t)?, || "β'(-r) differs from t".into()))
    });
    r.run("a-diagonal exact at Ĥ^m", CheckKind::Exactness, |rng| {
        let x = hex.a(&random_cochain(k, m - 1, rng))?.add(&hex.sample_exact(rng)?);
        if !model.underlying(&x)?.is_zero() {
            return Ok(Err("kernel sample has nonzero underlying class".into()));
        }
        let Some(b) = hex.integral_primitive(&x.c) else {
            return Ok(Err("c has no integral primitive".into()));
        };
        let pre = hex.a(&x.h.add(&b))?;
        Ok(expect(model.equal_classes(&x, &pre)?.is_some(), || "x differs from a(h + b)".into()))
    });
    r.run("j-diagonal exact at Ĥ^m", CheckKind::Exactness, |rng| {
        let x = hex.j(&hex.flat.sample(k, rng, true))?.add(&hex.sample_exact(rng)?);
        let Some(theta) = model.flat_part(&x)? else {
            return Ok(Err("kernel sample has curvature".into()));
        };
        Ok(expect(model.equal_classes(&x, &hex.j(&theta)?)?.is_some(), || "x differs from j(flat part)".into()))
    });
    r.run("kernel of a is the integral cocycles", CheckKind::Exactness, |rng| {
        let alpha = match rng.gen_range(0..3) {
            0 => random_cochain(k, m - 1, rng),
            1 => hex.sample_rational_cocycle(rng),
            _ => {
                let ints = IntegralCohomology::new(k, m - 1).sample(rng, 3);
                let exact = if m >= 2 { model.delta(&random_cochain(k, m - 2, rng)) } else { Cochain::zero(k, m - 1) };
                ints.add(&exact)
            }
        };
        let trivial = model.equal_classes(&hex.a(&alpha)?, &zero)?.is_some();
        let expected = model.is_closed(&alpha) && hex.flat.same_class(&alpha, &Cochain::zero(k, m - 1))?;
        Ok(expect(trivial == expected, || format!("a(α) trivial: {trivial}, expected {expected}")))
    });
    r.run("j is injective", CheckKind::Exactness, |rng| {
        let noise = rng.gen_bool(0.5);
        let theta = hex.flat.sample(k, rng, noise);
        let trivial = model.equal_classes(&hex.j(&theta)?, &zero)?.is_some();
        let expected = hex.flat.same_class(&theta, &Cochain::zero(k, m - 1))?;
        Ok(expect(trivial == expected, || format!("j(θ) trivial: {trivial}, θ trivial: {expected}")))
    });
    r.run("I is surjective", CheckKind::Exactness, |rng| {
        let u = hex.integral.sample(rng, 3);
        let x = model.cochain(u.clone(), Cochain::zero(k, m - 1), u.clone())?;
        Ok(expect(model.underlying(&x)? == hex.integral.coords(&u)?, || "I((u, 0, u)) differs from [u]".into()))
    });
    r.run("R has image the closed forms with integral periods", CheckKind::Exactness, |rng| {
        let x = hex.sample_class(rng)?;
        let omega = model.curvature(&x)?;
        if !hex.flat_top.same_class(&omega, &Cochain::zero(k, m))? {
            return Ok(Err("R(x) is not an integral class".into()));
        }
        let u = hex.integral.sample(rng, 3);
        let z = u.add(&model.delta(&random_cochain(k, m - 1, rng)));
        let hit = model.realize(&u, &z)?.is_some_and(|y| model.curvature(&y).is_ok_and(|w| w == z));
        Ok(expect(hit, || "closed form with integral periods has no preimage".into()))
    });

    let iso = hex.bockstein_torsion_isomorphism()?;
    r.samples = 1;
    r.run("Bockstein maps torsion isomorphically", CheckKind::Structure, |_| {
        Ok(expect(iso != Some(false), || "β' is not an isomorphism on torsion".into()))
    });
    let all_pass = r.all_pass();
    Ok(HexagonReport { m, seed, samples, nodes: hex.nodes(), bockstein_torsion_isomorphism: iso, checks: r.checks, all_pass })
}
