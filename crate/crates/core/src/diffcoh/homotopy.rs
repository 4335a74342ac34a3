//! Homotopy invariance along the prism, integration over the circle, and the
//! classification of differential classes by curvature and underlying class.

use num_rational::BigRational;
use serde::Serialize;

use super::cochain::DifferentialCochain;
use super::cohomology::{random_cochain, random_rational, IntegralCohomology, RationalCohomology};
use super::model::DiffModel;
use super::report::{expect, Check, CheckKind, Runner};
use crate::cells::{CellComplex, CircleProduct, Cochain, Prism};
use crate::error::{Error, Result};
use crate::io::rationals_to_json;

/// Fiber integration that sends degree-0 cochains to the empty cochain of degree -1.
fn integrate_prism(prism: &Prism, z: &Cochain) -> Result<Cochain> {
    if z.degree == 0 {
        return Ok(Cochain::new(-1, vec![]));
    }
    prism.fiber_integrate(z)
}

fn integrate_circle(circle: &CircleProduct, z: &Cochain) -> Result<Cochain> {
    if z.degree == 0 {
        return Ok(Cochain::new(-1, vec![]));
    }
    circle.fiber_integrate(z)
}

/// `end₁*x - end₀*x - a(π_! ω)` on the base, for a cocycle `x` on the prism.
pub fn homotopy_difference(prism: &Prism, base: &DiffModel, x: &DifferentialCochain) -> Result<DifferentialCochain> {
    let top = DiffModel::new(&prism.complex, x.m)?;
    if !top.is_cocycle(x)? {
        return Err(Error::NotACocycle("the prism cochain is not closed".into()));
    }
    let ends = x.pullback(&prism.end1)?.sub(&x.pullback(&prism.end0)?);
    Ok(ends.sub(&base.forms_to_classes(&prism.fiber_integrate(&x.omega)?)?))
}

/// Checks that `end₁*x - end₀*x - a(π_! ω)` is `d̂`-exact on the base and returns the
/// verified witness, or `None` when the formula fails.
pub fn homotopy_formula_check(prism: &Prism, base: &DiffModel, x: &DifferentialCochain) -> Result<Option<DifferentialCochain>> {
    let diff = homotopy_difference(prism, base, x)?;
    base.equal_classes(&diff, &base.zero(diff.n))
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledReport {
    pub m: i64,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Runs the homotopy formula on random prism cocycles, the strict identity on
/// pullbacks from the base, and the cochain-level identity for horizontal `h`.
pub fn homotopy_formula_report(k: &CellComplex, m: i64, samples: usize, seed: u64) -> Result<SampledReport> {
    let prism = Prism::new(k)?;
    let base = DiffModel::new(k, m)?;
    let top = DiffModel::new(&prism.complex, m)?;
    let mut r = Runner::new(seed, samples);
    r.run("homotopy formula holds with a verified witness", CheckKind::Exactness, |rng| {
        let x = top.sample_cocycle(rng)?.add(&top.sample_exact(rng)?);
        Ok(expect(homotopy_formula_check(&prism, &base, &x)?.is_some(), || "difference is not exact".into()))
    });
    r.run("witness (π_!c, -π_!h, 0) reproduces the difference", CheckKind::Exactness, |rng| {
        let x = top.sample_cocycle(rng)?.add(&top.sample_exact(rng)?);
        let w = base.cochain(prism.fiber_integrate(&x.c)?, integrate_prism(&prism, &x.h)?.neg(), Cochain::zero(k, m - 1))?;
        Ok(expect(base.dhat(&w)? == homotopy_difference(&prism, &base, &x)?, || "explicit witness fails".into()))
    });
    r.run("strict identity on pullbacks from the base", CheckKind::Structure, |rng| {
        let y = base.sample_cocycle(rng)?;
        let x = DifferentialCochain {
            m,
            n: y.n,
            c: prism.proj.pullback(&y.c)?,
            h: prism.proj.pullback(&y.h)?,
            omega: prism.proj.pullback(&y.omega)?,
        };
        let diff = homotopy_difference(&prism, &base, &x)?;
        Ok(expect(diff == base.zero(y.n), || "difference is not exactly zero".into()))
    });
    r.run("horizontal h gives an exact cochain identity", CheckKind::Structure, |rng| {
        let mut h = random_cochain(&prism.complex, m - 1, rng);
        if m >= 2 {
            for t in 0..k.count(m - 2) {
                h.values[prism.vertical_cell(m - 2, t)] = BigRational::default();
            }
        }
        let omega = prism.complex.delta(&h);
        let x = top.cochain(Cochain::zero(&prism.complex, m), h, omega)?;
        let diff = homotopy_difference(&prism, &base, &x)?;
        Ok(expect(diff == base.zero(m), || "difference is not exactly zero".into()))
    });
    let all_pass = r.all_pass();
    Ok(SampledReport { m, seed, samples, checks: r.checks, all_pass })
}

/// `x - proj*(section*x)`, which vanishes on the base section.
pub fn reduce(circle: &CircleProduct, x: &DifferentialCochain) -> Result<DifferentialCochain> {
    let back = |z: &Cochain| -> Result<Cochain> { circle.proj.pullback(&circle.section.pullback(z)?) };
    Ok(x.sub(&DifferentialCochain { m: x.m, n: x.n, c: back(&x.c)?, h: back(&x.h)?, omega: back(&x.omega)? }))
}

/// Integration over the circle fiber: `(c, h, ω) ↦ (π_!c, -π_!h, π_!ω)`, a cocycle of
/// degree `n - 1` for the truncation `m - 1`.
pub fn s1_integrate(circle: &CircleProduct, x: &DifferentialCochain) -> Result<DifferentialCochain> {
    if x.m < 2 {
        return Err(Error::Precondition(format!("integration over the circle needs m >= 2, got {}", x.m)));
    }
    let top = DiffModel::new(&circle.complex, x.m)?;
    if !top.is_cocycle(x)? {
        return Err(Error::NotACocycle("the cochain on the circle product is not closed".into()));
    }
    for z in [&x.c, &x.h, &x.omega] {
        if !circle.section.pullback(z)?.is_zero() {
            return Err(Error::Precondition(
                "the cochain must vanish on the base section (reduce it first); only reduced classes integrate".into(),
            ));
        }
    }
    let model = DiffModel::new(circle.base_complex(), x.m - 1)?;
    let y = model.cochain(circle.fiber_integrate(&x.c)?, integrate_circle(circle, &x.h)?.neg(), circle.fiber_integrate(&x.omega)?)?;
    if !model.is_cocycle(&y)? {
        return Err(Error::Internal("fiber integral of a cocycle is not closed".into()));
    }
    Ok(y)
}

/// Random checks of circle integration for classes of degree `m` on `S¹ × K`.
pub fn s1_integrate_report(k: &CellComplex, m: i64, samples: usize, seed: u64) -> Result<SampledReport> {
    if m < 2 {
        return Err(Error::Precondition(format!("integration over the circle needs m >= 2, got {m}")));
    }
    let circle = CircleProduct::new(k)?;
    let top = DiffModel::new(&circle.complex, m)?;
    let base = DiffModel::new(k, m)?;
    let below = DiffModel::new(k, m - 1)?;
    let mut r = Runner::new(seed, samples);
    r.run("integral of a reduced cocycle is a cocycle", CheckKind::Structure, |rng| {
        let x = reduce(&circle, &top.sample_cocycle(rng)?.add(&top.sample_exact(rng)?))?;
        let y = s1_integrate(&circle, &x)?;
        Ok(expect(below.is_cocycle(&y)?, || "result is not closed".into()))
    });
    r.run("curvature commutes with integration", CheckKind::Square, |rng| {
        let x = reduce(&circle, &top.sample_cocycle(rng)?)?;
        let y = s1_integrate(&circle, &x)?;
        Ok(expect(below.curvature(&y)? == circle.fiber_integrate(&top.curvature(&x)?)?, || "R ∘ ∫ differs from π_! ∘ R".into()))
    });
    r.run("reduced pullbacks integrate to zero", CheckKind::Structure, |rng| {
        let y = base.sample_cocycle(rng)?;
        let x = DifferentialCochain {
            m,
            n: y.n,
            c: circle.proj.pullback(&y.c)?,
            h: circle.proj.pullback(&y.h)?,
            omega: circle.proj.pullback(&y.omega)?,
        };
        let z = s1_integrate(&circle, &reduce(&circle, &x)?)?;
        Ok(expect(z == below.zero(m - 1), || "integral is nonzero".into()))
    });
    let ints = IntegralCohomology::new(k, m - 1);
    r.run("cross product with the circle class integrates to the base class", CheckKind::Structure, |rng| {
        let z = ints.sample(rng, 3);
        let c = circle.cross(&CircleProduct::fundamental_circle_cocycle(), &z)?;
        let x = top.cochain(c.clone(), Cochain::zero(&circle.complex, m - 1), c)?;
        let y = s1_integrate(&circle, &x)?;
        Ok(expect(below.underlying(&y)? == ints.coords(&z)?, || "I(∫x) differs from [z]".into()))
    });
    let all_pass = r.all_pass();
    Ok(SampledReport { m, seed, samples, checks: r.checks, all_pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub m: i64,
    pub seed: u64,
    pub samples: usize,
    /// Periods of the generators of `H^m(K; Z)` (free, then torsion) on a cycle basis
    /// of `H_m(K; Q)`: the matrix of `H^m(K; Z) -> H^m(K; Q)`.
    pub characteristic_map: Vec<serde_json::Value>,
    /// Dimension of `H^{m-1}(K; Q)`, whose image under `a` is the kernel of `(I, R)`.
    pub kernel_rank: usize,
    /// Classes `a(g_i / 2)` for integral generators `g_i`, verified nonzero, pairwise
    /// distinct and in the kernel of `(I, R)`.
    pub kernel_witnesses: Vec<serde_json::Value>,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Verifies that `(I, R)` maps classes onto compatible pairs and that its kernel is
/// `a(H^{m-1}(K; Q))`, with a constructed preimage for every sample.
pub fn pullback_classification_check(k: &CellComplex, m: i64, samples: usize, seed: u64) -> Result<ClassificationReport> {
    let model = DiffModel::new(k, m)?;
    let ints = IntegralCohomology::new(k, m);
    let rat = RationalCohomology::new(k, m);
    let below = IntegralCohomology::new(k, m - 1);
    let rat_below = RationalCohomology::new(k, m - 1);
    let zero = model.zero(m);
    let mut r = Runner::new(seed, samples);
    r.run("compatible pairs have a preimage", CheckKind::Exactness, |rng| {
        let u = ints.sample(rng, 3).add(&model.delta(&super::cohomology::random_integral_cochain(k, m - 1, rng, 2)));
        let z = u.add(&model.delta(&random_cochain(k, m - 1, rng)));
        let Some(x) = model.realize(&u, &z)? else {
            return Ok(Err("no preimage".into()));
        };
        Ok(expect(model.curvature(&x)? == z && model.underlying(&x)? == ints.coords(&u)?, || "preimage maps elsewhere".into()))
    });
    if rat.dim() > 0 {
        r.run("incompatible pairs have none", CheckKind::Exactness, |rng| {
            let u = ints.sample(rng, 3);
            // shift the periods by a nonzero amount
            let basis = rat.cocycle_basis();
            let bump = basis.iter().find(|b| !rat.is_zero_class(b).unwrap_or(true)).cloned();
            let Some(bump) = bump else {
                return Ok(Err("no cocycle with nonzero class".into()));
            };
            let z = u.add(&bump.scale(&BigRational::new(1.into(), 2.into())));
            Ok(expect(model.realize(&u, &z)?.is_none(), || "incompatible pair was realised".into()))
        });
    }
    r.run("kernel of (I, R) lies in the image of a", CheckKind::Exactness, |rng| {
        let mut alpha = Cochain::zero(k, m - 1);
        for b in rat_below.cocycle_basis() {
            alpha = alpha.add(&b.scale(&random_rational(rng)));
        }
        let x = model.forms_to_classes(&alpha)?.add(&model.sample_exact(rng)?);
        if !model.underlying(&x)?.is_zero() || !model.curvature(&x)?.is_zero() {
            return Ok(Err("sample is not in the kernel".into()));
        }
        let dz = super::cohomology::integral_coboundary(k, m - 1);
        let Some(b) = crate::linalg::Smith::new(&dz).solve(&x.c.to_integers().expect("integral")) else {
            return Ok(Err("c has no integral primitive".into()));
        };
        let pre = x.h.add(&Cochain::new(m - 1, crate::linalg::matrix::zvec_to_q(&b)));
        let ok = rat_below.is_cocycle(&pre) && model.equal_classes(&x, &model.forms_to_classes(&pre)?)?.is_some();
        Ok(expect(ok, || "x differs from a(h + b) or h + b is not closed".into()))
    });
    r.run("image of closed forms under a lies in the kernel", CheckKind::Exactness, |rng| {
        let mut alpha = Cochain::zero(k, m - 1);
        for b in rat_below.cocycle_basis() {
            alpha = alpha.add(&b.scale(&random_rational(rng)));
        }
        let x = model.forms_to_classes(&alpha)?;
        Ok(expect(model.underlying(&x)?.is_zero() && model.curvature(&x)?.is_zero(), || "a(α) leaves the kernel".into()))
    });
    r.run("equality of classes is symmetric and transitive", CheckKind::Structure, |rng| {
        let x = model.sample_cocycle(rng)?;
        let y = x.add(&model.sample_exact(rng)?);
        let z = y.add(&model.sample_exact(rng)?);
        let (Some(w1), Some(w2)) = (model.equal_classes(&x, &y)?, model.equal_classes(&y, &z)?) else {
            return Ok(Err("equal classes reported different".into()));
        };
        let sym = model.dhat(&w1.neg())? == y.sub(&x);
        let trans = model.dhat(&w1.add(&w2))? == x.sub(&z);
        Ok(expect(sym && trans && model.equal_classes(&x, &x)?.is_some(), || "composed witnesses fail".into()))
    });

    let gens = below.generators();
    let free = &gens[..below.group().rank];
    let half = BigRational::new(1.into(), 2.into());
    let witnesses: Vec<DifferentialCochain> = free.iter().map(|g| model.forms_to_classes(&g.scale(&half))).collect::<Result<_>>()?;
    r.samples = 1;
    r.run("kernel witnesses are nonzero and distinct", CheckKind::Structure, |_| {
        for (i, x) in witnesses.iter().enumerate() {
            if model.equal_classes(x, &zero)?.is_some() {
                return Ok(Err(format!("witness {i} is trivial")));
            }
            if !model.underlying(x)?.is_zero() || !model.curvature(x)?.is_zero() {
                return Ok(Err(format!("witness {i} is not in the kernel")));
            }
            for (j, y) in witnesses.iter().enumerate().skip(i + 1) {
                if model.equal_classes(x, y)?.is_some() {
                    return Ok(Err(format!("witnesses {i} and {j} coincide")));
                }
            }
        }
        Ok(Ok(()))
    });
    let characteristic_map = ints.generators().iter().map(|g| rat.periods(g).map(|p| rationals_to_json(&p))).collect::<Result<_>>()?;
    let all_pass = r.all_pass();
    Ok(ClassificationReport {
        m,
        seed,
        samples,
        characteristic_map,
        kernel_rank: rat_below.dim(),
        kernel_witnesses: witnesses.iter().map(DifferentialCochain::to_json).collect(),
        checks: r.checks,
        all_pass,
    })
}
