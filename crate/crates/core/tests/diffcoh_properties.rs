use dcoh_core::cells::{CellComplex, Cochain, Prism};
use dcoh_core::data;
use dcoh_core::diffcoh::{
    hexagon_exactness, homotopy_formula_report, pullback_classification_check, s1_integrate_report, DiffModel, DifferentialCochain,
    IntegralCohomology,
};
use dcoh_core::linalg::{q, qi};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_all(name: &str, checks: &[dcoh_core::diffcoh::Check]) {
    for c in checks {
        assert!(c.ok(), "{name}: {}: {:?}", c.name, c.failures);
    }
}

#[test]
fn hexagon_holds_on_bundled_complexes() {
    for name in data::COMPLEXES {
        let k = data::complex(name).unwrap();
        for m in 1..=(k.dim() as i64 + 1) {
            let report = hexagon_exactness(&k, m, 20, 7).unwrap();
            assert_all(&format!("{name} m={m}"), &report.checks);
            assert!(report.all_pass);
        }
    }
}

#[test]
fn homotopy_formula_on_prisms() {
    for name in ["circle3", "octahedron"] {
        let k = data::complex(name).unwrap();
        for m in 1..=2 {
            let r = homotopy_formula_report(&k, m, 30, 1).unwrap();
            assert_all(&format!("{name} m={m}"), &r.checks);
        }
    }
}

#[test]
fn circle_integration() {
    for name in ["circle3", "octahedron"] {
        let k = data::complex(name).unwrap();
        let r = s1_integrate_report(&k, 2, 20, 2).unwrap();
        assert_all(name, &r.checks);
    }
}

#[test]
fn classification_kernels() {
    let expected = [("circle3", 1, 1), ("octahedron", 2, 0), ("csaszar_torus", 2, 2), ("rp2_6", 2, 0)];
    for (name, m, kernel) in expected {
        let k = data::complex(name).unwrap();
        let r = pullback_classification_check(&k, m, 10, 3).unwrap();
        assert_all(name, &r.checks);
        assert_eq!(r.kernel_rank, kernel, "{name}");
        assert_eq!(r.kernel_witnesses.len(), kernel, "{name}");
    }
}

#[test]
fn circle_fiber_product_matches_periods() {
    // on the circle a class is determined by an integer k and a 1-form z with period k
    let k = data::complex("circle3").unwrap();
    let r = pullback_classification_check(&k, 1, 5, 0).unwrap();
    assert_eq!(r.characteristic_map.len(), 1);
    let entry = r.characteristic_map[0][0].as_str().unwrap().to_string();
    assert!(entry == "1" || entry == "-1", "{entry}");
}

/// The octahedron with its fundamental 2-cocycle: the indicator of one triangle,
/// signed so that it pairs to one with the fundamental cycle.
fn octahedron_fundamental() -> (CellComplex, Cochain, Vec<BigInt>) {
    let k = data::complex("octahedron").unwrap();
    let smith = dcoh_core::linalg::Smith::new(&k.boundary_matrix(2));
    let cycle = smith.kernel_basis().pop().unwrap();
    let t = cycle.iter().position(|v| v.abs().is_one()).unwrap();
    let mut u = Cochain::indicator(&k, 2, t);
    if cycle[t] < BigInt::from(0) {
        u = u.neg();
    }
    (k, u, cycle)
}

#[test]
fn fundamental_class_of_the_octahedron() {
    let (k, u, cycle) = octahedron_fundamental();
    let model = DiffModel::new(&k, 2).unwrap();
    let x = model.cochain(u.clone(), Cochain::zero(&k, 1), u.clone()).unwrap();
    let ints = IntegralCohomology::new(&k, 2);
    let coords = model.underlying(&x).unwrap();
    assert_eq!(coords.free.len(), 1);
    assert!(coords.free[0].abs().is_one());
    assert_eq!(model.curvature(&x).unwrap().pair(&cycle), qi(1));
    assert_eq!(ints.coords(&ints.generators()[0]).unwrap().free[0], BigInt::one());
}

#[test]
fn exact_forms_give_trivial_classes() {
    let k = data::complex("octahedron").unwrap();
    let model = DiffModel::new(&k, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..20 {
        let beta = dcoh_core::diffcoh::cohomology::random_cochain(&k, 0, &mut rng);
        let x = model.forms_to_classes(&model.delta(&beta)).unwrap();
        assert!(model.equal_classes(&x, &model.zero(2)).unwrap().is_some());
    }
}

#[test]
fn curvature_of_forms_is_the_coboundary() {
    let k = data::complex("csaszar_torus").unwrap();
    let model = DiffModel::new(&k, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let alpha = dcoh_core::diffcoh::cohomology::random_cochain(&k, 1, &mut rng);
        let x = model.forms_to_classes(&alpha).unwrap();
        assert_eq!(model.curvature(&x).unwrap(), model.delta(&alpha));
        assert!(model.underlying(&x).unwrap().is_zero());
    }
}

#[test]
fn circle_flat_constants() {
    let k = data::complex("circle3").unwrap();
    let model = DiffModel::new(&k, 1).unwrap();
    for theta in [q(1, 3), q(5, 2), q(-7, 4)] {
        let h = Cochain::new(0, vec![theta.clone(); 3]);
        let x = model.cochain(Cochain::zero(&k, 1), h.clone(), Cochain::zero(&k, 1)).unwrap();
        assert_eq!(model.flat_part(&x).unwrap(), Some(h));
        // classes with the same fractional part agree
        let shifted = Cochain::new(0, vec![theta + qi(1); 3]);
        let y = model.cochain(Cochain::zero(&k, 1), shifted, Cochain::zero(&k, 1)).unwrap();
        assert!(model.equal_classes(&x, &y).unwrap().is_some());
    }
    let x = model.cochain(Cochain::from_ints(1, &[1, -1, 1]), Cochain::zero(&k, 0), Cochain::from_ints(1, &[1, -1, 1])).unwrap();
    assert_eq!(model.flat_part(&x).unwrap(), None);
}

#[test]
fn prism_pullbacks_integrate_to_zero() {
    let k = data::complex("octahedron").unwrap();
    let prism = Prism::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in 1..=2 {
        let z = dcoh_core::diffcoh::cohomology::random_cochain(&k, d, &mut rng);
        assert!(prism.fiber_integrate(&prism.proj.pullback(&z).unwrap()).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dhat_squares_to_zero(seed in any::<u64>(), m in 1i64..=3, n in 0i64..=3) {
        let k = data::complex("octahedron").unwrap();
        let model = DiffModel::new(&k, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = if n >= m { dcoh_core::diffcoh::cohomology::random_cochain(&k, n, &mut rng) } else { Cochain::zero(&k, n) };
        let x = DifferentialCochain::new(
            m,
            dcoh_core::diffcoh::cohomology::random_integral_cochain(&k, n, &mut rng, 3),
            dcoh_core::diffcoh::cohomology::random_cochain(&k, n - 1, &mut rng),
            omega,
        ).unwrap();
        let dd = model.dhat(&model.dhat(&x).unwrap()).unwrap();
        prop_assert!(dd.c.is_zero() && dd.h.is_zero() && dd.omega.is_zero());
    }

    #[test]
    fn perturbed_classes_are_equal(seed in any::<u64>()) {
        let k = data::complex("rp2_6").unwrap();
        let model = DiffModel::new(&k, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = model.sample_cocycle(&mut rng).unwrap();
        let y = x.add(&model.sample_exact(&mut rng).unwrap());
        let w = model.equal_classes(&x, &y).unwrap().expect("same class");
        prop_assert_eq!(model.dhat(&w).unwrap(), x.sub(&y));
        prop_assert!(model.equal_classes(&x, &x).unwrap().is_some());
    }
}
