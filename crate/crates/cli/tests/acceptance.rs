//! Acceptance run: one PASS/FAIL line per criterion, with every tolerance and
//! time budget pinned below. Exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use anyhow::{ensure, Context, Result};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use dcoh_core::cells::{CellComplex, CellularMap, CircleProduct, Cochain, Prism};
use dcoh_core::chain::{cone, cone_long_exact, ChainMap, Complex, Ring};
use dcoh_core::data;
use dcoh_core::diffcoh::cohomology::{random_cochain, random_integral_cochain};
use dcoh_core::diffcoh::{homotopy_formula_report, DiffModel, FlatCohomology, HexagonDiagram, IntegralCohomology};
use dcoh_core::geom::lattice::fundamental_cycle;
use dcoh_core::geom::{chern_character_form, holonomy_report, transgress_ch, LatticeLineBundle, Loop, SmoothConnection, DEFAULT_STEPS};
use dcoh_core::linalg::{matrix::z_to_q, qi, QMatrix};
use dcoh_core::tot::{cech_double, descent_check, star_cover, tot_cosimplicial, underlying_at_point, Coefficients};

const SEED: u64 = 0;
const SAMPLES: usize = 100;

const HEXAGON_BUDGET: Duration = Duration::from_secs(10);
const POINT_BUDGET: Duration = Duration::from_secs(60);
const NUMERICS_BUDGET: Duration = Duration::from_secs(30);
const STRUCTURE_BUDGET: Duration = Duration::from_secs(60);

const TRANSGRESSION_TOL: f64 = 1e-9;
const AREA_TRACE_TOL: f64 = 1e-6;
const ROTATION_TRACE_TOL: f64 = 1e-8;
const POINT_LEVEL: usize = 8;
const POINT_WINDOW: (i64, i64) = (-1, 2);
const DESCENT_WINDOW: (i64, i64) = (0, 2);

fn complex(name: &str) -> Result<CellComplex> {
    Ok(data::complex(name)?)
}

/// 1. The CLI hexagon command, run as a subprocess, on the four bundled pairs.
fn hexagon() -> Result<String> {
    let mut notes = Vec::new();
    for (name, m) in [("circle3", 1), ("octahedron", 2), ("csaszar_torus", 2), ("rp2_6", 2)] {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_dcoh"))
            .args(["--format", "json", "hexagon", name, "--m", &m.to_string(), "--samples", &SAMPLES.to_string(), "--seed", &SEED.to_string()])
            .output()
            .context("running dcoh hexagon")?;
        let elapsed = start.elapsed();
        let report: Value = serde_json::from_slice(&out.stdout).with_context(|| format!("{name}: report is not JSON"))?;
        ensure!(out.status.success(), "{name} m={m}: exit status {}", out.status);
        ensure!(report["all_pass"] == Value::Bool(true), "{name} m={m}: some check failed");
        ensure!(elapsed < HEXAGON_BUDGET, "{name} m={m}: {elapsed:.1?} exceeds {HEXAGON_BUDGET:?}");
        let checks = report["checks"].as_array().map_or(0, Vec::len);
        notes.push(format!("{name}/m={m} {checks} checks {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

/// 2. Homotopy formula on prisms, and `π_! ∘ proj^* = 0`.
fn homotopy() -> Result<String> {
    let mut runs = 0;
    for name in ["circle3", "octahedron"] {
        let k = complex(name)?;
        for m in 1..=2 {
            let r = homotopy_formula_report(&k, m, SAMPLES, SEED)?;
            for c in &r.checks {
                ensure!(c.ok(), "{name} m={m}: {} failed {:?}", c.name, c.failures);
            }
            runs += 1;
        }
        let prism = Prism::new(&k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for d in 1..=k.dim() as i64 {
            for _ in 0..SAMPLES {
                let z = random_cochain(&k, d, &mut rng);
                ensure!(prism.fiber_integrate(&prism.proj.pullback(&z)?)?.is_zero(), "{name}: fiber integral of a pullback is nonzero");
            }
        }
    }
    Ok(format!("{runs} runs of {SAMPLES} samples, fiber integral of pullbacks vanishes"))
}

/// 3. Underlying complex at the point for small truncations.
fn point() -> Result<String> {
    let start = Instant::now();
    for m in 1..=3 {
        let r = underlying_at_point(m, POINT_LEVEL, POINT_WINDOW.0, POINT_WINDOW.1)?;
        for d in &r.degrees {
            let expected = if d.degree == 0 { "Q" } else { "0" };
            ensure!(d.group.to_string() == expected, "m={m}: H{} = {}", d.degree, d.group);
            ensure!(d.stable, "m={m}: H{} not stable", d.degree);
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < POINT_BUDGET, "{elapsed:.1?} exceeds {POINT_BUDGET:?}");
    Ok(format!("m=1..3 at level {POINT_LEVEL}, H0=Q else 0, stable ({:.1}s)", elapsed.as_secs_f64()))
}

/// 4. Descent for star covers.
fn descent() -> Result<String> {
    for name in data::COMPLEXES {
        let k = complex(name)?;
        let cover = star_cover(&k);
        for ring in [Ring::Z, Ring::Q] {
            let r = descent_check(&k, &cover, &Coefficients::Ring(ring), DESCENT_WINDOW.0, DESCENT_WINDOW.1)?;
            ensure!(r.all_match && r.canonical_map_is_iso, "{name} {ring:?}: {:?}", r.rows);
        }
    }
    Ok(format!("{} complexes over Z and Q", data::COMPLEXES.len()))
}

fn connection(name: &str) -> Result<SmoothConnection> {
    Ok(SmoothConnection::from_json(&data::geometry(name)?)?)
}

fn trace(conn: &SmoothConnection, curve: &str) -> Result<f64> {
    let l = Loop::from_json(&data::geometry(curve)?)?;
    let r = holonomy_report(conn, &l, DEFAULT_STEPS)?;
    ensure!(r.consistent, "{curve}: step halving changed the trace by {:.3e}", r.step_halving_change);
    Ok(r.trace[0])
}

/// 5. Character form, transgression and holonomy numerics.
fn numerics() -> Result<String> {
    let start = Instant::now();
    let conn = connection("constant_curvature")?;
    let ch = chern_character_form(&conn);
    ensure!(ch.is_constant(), "ch is not constant: {}", ch.describe());
    let c = ch.constant_term().context("ch has no constant term")?;
    ensure!(c.re == 2.0 && c.im == 0.0, "ch = {c}");

    let t = transgress_ch(&connection("constant_curvature_path")?, 16, SAMPLES, SEED)?;
    ensure!(t.converged && t.sup_norm < TRANSGRESSION_TOL, "transgression sup-norm {:.3e}", t.sup_norm);

    let mut worst: f64 = 0.0;
    for (rho, curve) in [(0.3, "circle_r03"), (0.5, "circle_r05"), (0.8, "circle_r08")] {
        let err = (trace(&conn, curve)? - 2.0 * (PI * rho * rho).cos()).abs();
        ensure!(err < AREA_TRACE_TOL, "rho={rho}: trace error {err:.3e}");
        worst = worst.max(err);
    }
    let err_rotation = (trace(&connection("circle_rotation")?, "circle_rotation_loop")? - 2.0 * 1f64.cos()).abs();
    ensure!(err_rotation < ROTATION_TRACE_TOL, "rotation trace error {err_rotation:.3e}");

    let elapsed = start.elapsed();
    ensure!(elapsed < NUMERICS_BUDGET, "{elapsed:.1?} exceeds {NUMERICS_BUDGET:?}");
    Ok(format!(
        "ch=2, transgression {:.1e}, circle traces {worst:.1e}, rotation {err_rotation:.1e} ({:.1}s)",
        t.sup_norm,
        elapsed.as_secs_f64()
    ))
}

/// 6. Monopoles on the octahedron.
fn monopoles() -> Result<String> {
    let k = complex("octahedron")?;
    let model = DiffModel::new(&k, 2)?;
    let integral = IntegralCohomology::new(&k, 2);
    ensure!(integral.group().to_string() == "Z", "H2 = {}", integral.group());
    let cycle = fundamental_cycle(&k).context("octahedron has no fundamental cycle")?;
    // generator of H^2(K; Z) oriented to pair to +1 with the fundamental cycle
    let g = integral.generators().into_iter().next().context("no generator")?;
    let g = if g.pair(&cycle) < qi(0) { g.neg() } else { g };
    ensure!(g.pair(&cycle) == qi(1), "generator pairs to {}", g.pair(&cycle));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for d in -2..=2i64 {
        let l = LatticeLineBundle::monopole(&k, d)?;
        let x = l.class();
        let expected = g.scale(&qi(d));
        ensure!(integral.same_class(&x.c, &expected)?, "d={d}: I is not d times the generator");
        ensure!(model.underlying(&x)? == integral.coords(&expected)?, "d={d}: underlying coordinates differ");
        ensure!(l.curvature().pair(&cycle) == qi(d), "d={d}: total curvature {}", l.curvature().pair(&cycle));
        for _ in 0..10 {
            let lambda = random_cochain(&k, 0, &mut rng);
            let mu = random_integral_cochain(&k, 1, &mut rng, 3);
            let gauged = l.gauge(&lambda, &mu)?;
            ensure!(model.equal_classes(&x, &gauged.class())?.is_some(), "d={d}: gauge-equivalent data differ");
            let w = l.gauge_witness(&lambda, &mu)?;
            ensure!(model.dhat(&w)? == gauged.class().sub(&x), "d={d}: explicit gauge witness fails");
        }
    }
    Ok("d=-2..2, I = d·generator, total curvature d, gauge classes equal".into())
}

/// 7. Curvature compatibility of the lattice character on random 2-chains.
fn cheeger_simons() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for name in ["octahedron", "csaszar_torus", "rp2_6"] {
        let k = complex(name)?;
        for i in 0..SAMPLES {
            let l = LatticeLineBundle::random(&k, &mut rng)?;
            let w: Vec<BigInt> = (0..k.count(2)).map(|_| rng.gen_range(-3i64..=3).into()).collect();
            let r = l.cs_property_check(&w)?;
            ensure!(r.holds, "{name} sample {i}: character {} vs curvature {}", r.character, r.curvature);
        }
    }
    Ok(format!("{SAMPLES} pairs on each of 3 surfaces"))
}

/// 8. Torsion on the projective plane.
fn torsion() -> Result<String> {
    let k = complex("rp2_6")?;
    let hex = HexagonDiagram::new(&k, 2)?;
    ensure!(hex.bockstein_torsion_isomorphism()? == Some(true), "Bockstein is not an isomorphism on torsion");
    let flat = FlatCohomology::new(&k, 1)?;
    let integral = IntegralCohomology::new(&k, 2);
    ensure!(integral.group().to_string() == "Z/2", "H2 = {}", integral.group());
    let lifts = flat.torsion_lifts();
    ensure!(lifts.len() == 1 && lifts[0].1 == BigInt::from(2), "torsion of H1(Q/Z) is not Z/2");
    let theta = &lifts[0].0;
    ensure!(!integral.coords(&hex.bockstein(theta)?)?.is_zero(), "Bockstein of the generator vanishes");
    let model = DiffModel::new(&k, 2)?;
    let x = hex.j(theta)?;
    ensure!(model.is_cocycle(&x)?, "flat class is not a cocycle");
    ensure!(model.curvature(&x)?.is_zero(), "flat class has curvature");
    ensure!(!model.underlying(&x)?.is_zero(), "flat class has trivial underlying class");
    Ok("Bockstein Z/2 -> Z/2 nonzero, flat class with nontrivial I".into())
}

fn assert_d_squared(c: &Complex, what: &str) -> Result<()> {
    for n in c.lo()..c.hi() {
        ensure!(c.differential(n + 1).mul_mat(&c.differential(n)).is_zero(), "{what}: d∘d ≠ 0 at degree {n}");
    }
    Ok(())
}

/// The cochain map `f^* : C^*(target) -> C^*(source)` of a cellular map.
fn pullback_map(f: &CellularMap, source: &CellComplex, target: &CellComplex) -> Result<ChainMap> {
    let maps: BTreeMap<i64, QMatrix> = (0..=source.dim()).map(|d| (d as i64, z_to_q(f.component(d)).transpose())).collect();
    Ok(ChainMap::new(target.cochain_complex(Ring::Z), source.cochain_complex(Ring::Z), maps)?)
}

/// `k·id + δh + hδ` on `C^*(K)` for a random degree −1 map `h`.
fn random_self_map(k: &CellComplex, rng: &mut ChaCha8Rng) -> Result<ChainMap> {
    let c = k.cochain_complex(Ring::Z);
    let scale = qi(rng.gen_range(0..=3));
    let (lo, hi) = (c.lo() - 1, c.hi() + 1);
    let h: BTreeMap<i64, QMatrix> =
        (lo..=hi + 1).map(|n| (n, QMatrix::from_fn(c.rank(n - 1), c.rank(n), |_, _| qi(rng.gen_range(-1..=1))))).collect();
    let maps = (lo..=hi)
        .map(|n| {
            let id = QMatrix::identity(c.rank(n)).scale(&scale);
            let dh = c.differential(n - 1).mul_mat(&h[&n]);
            let hd = h[&(n + 1)].mul_mat(&c.differential(n));
            (n, &(&id + &dh) + &hd)
        })
        .collect();
    Ok(ChainMap::new(c.clone(), c, maps)?)
}

/// 9. Structural suites.
fn structure() -> Result<String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cone_maps = 0;
    for name in data::COMPLEXES {
        let k = complex(name)?;
        let prism = Prism::new(&k)?;
        let circle = CircleProduct::new(&k)?;

        // d² = 0 on cochains and on differential cochains
        for (what, cx) in [(name, &k), ("prism", &prism.complex), ("circle product", &circle.complex)] {
            assert_d_squared(&cx.cochain_complex(Ring::Z), what)?;
        }
        for m in 1..=k.dim() as i64 + 1 {
            let model = DiffModel::new(&k, m)?;
            for _ in 0..10 {
                let n = rng.gen_range(0..=k.dim() as i64 + 1);
                let omega = if n < m { Cochain::zero(&k, n) } else { random_cochain(&k, n, &mut rng) };
                let x = model.cochain(random_integral_cochain(&k, n, &mut rng, 3), random_cochain(&k, n - 1, &mut rng), omega)?;
                ensure!(model.dhat(&model.dhat(&x)?)? == model.zero(n + 2), "{name} m={m}: dhat² ≠ 0");
            }
        }

        // cone long exact sequence
        let maps = [
            random_self_map(&k, &mut rng)?,
            pullback_map(&prism.proj, &prism.complex, &k)?,
            pullback_map(&prism.end0, &k, &prism.complex)?,
            pullback_map(&circle.proj, &circle.complex, &k)?,
        ];
        for f in &maps {
            let c = cone(f)?;
            for n in c.complex.lo() - 1..=c.complex.hi() + 1 {
                ensure!(cone_long_exact(f, &c, n)?, "{name}: cone sequence not exact at {n}");
            }
            cone_maps += 1;
        }

        // tot of the Čech nerve
        for ring in [Ring::Z, Ring::Q] {
            let tot = tot_cosimplicial(&cech_double(&k, &star_cover(&k), &Coefficients::Ring(ring))?, DESCENT_WINDOW.0, DESCENT_WINDOW.1)?;
            assert_d_squared(&tot.complex, "Čech total complex")?;
        }

        // Stokes identities
        for i in 0..SAMPLES {
            let d = 1 + (i % (k.dim() + 1)) as i64;
            let z = random_cochain(&prism.complex, d, &mut rng);
            let lhs = prism.fiber_integrate(&prism.complex.delta(&z))?.add(&k.delta(&prism.fiber_integrate(&z)?));
            let rhs = prism.end1.pullback(&z)?.sub(&prism.end0.pullback(&z)?);
            ensure!(lhs == rhs, "{name}: prism Stokes identity fails");
            let z = random_cochain(&circle.complex, d, &mut rng);
            let lhs = circle.fiber_integrate(&circle.complex.delta(&z))?.add(&k.delta(&circle.fiber_integrate(&z)?));
            ensure!(lhs.is_zero(), "{name}: circle Stokes identity fails");
        }

        // pullbacks commute with coboundaries
        for d in 0..=k.dim() as i64 {
            for _ in 0..10 {
                let z = random_cochain(&prism.complex, d, &mut rng);
                for f in [&prism.end0, &prism.end1] {
                    ensure!(f.pullback(&prism.complex.delta(&z))? == k.delta(&f.pullback(&z)?), "{name}: end pullback");
                }
                let w = random_cochain(&circle.complex, d, &mut rng);
                ensure!(circle.section.pullback(&circle.complex.delta(&w))? == k.delta(&circle.section.pullback(&w)?), "{name}: section pullback");
                let y = random_cochain(&k, d, &mut rng);
                ensure!(prism.proj.pullback(&k.delta(&y))? == prism.complex.delta(&prism.proj.pullback(&y)?), "{name}: prism projection");
                ensure!(circle.proj.pullback(&k.delta(&y))? == circle.complex.delta(&circle.proj.pullback(&y)?), "{name}: circle projection");
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < STRUCTURE_BUDGET, "{elapsed:.1?} exceeds {STRUCTURE_BUDGET:?}");
    Ok(format!("d²=0, {cone_maps} cone sequences, tot, Stokes, pullbacks ({:.1}s)", elapsed.as_secs_f64()))
}

type Criterion = fn() -> Result<String>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("hexagon exactness", hexagon),
        ("homotopy formula", homotopy),
        ("homotopification at the point", point),
        ("descent for star covers", descent),
        ("character form, transgression and holonomy", numerics),
        ("monopole classification", monopoles),
        ("curvature compatibility of characters", cheeger_simons),
        ("torsion on the projective plane", torsion),
        ("structural suites", structure),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e:#}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
