use dcoh_core::cells::{CircleProduct, Cochain, Prism};
use dcoh_core::data;
use dcoh_core::diffcoh::cohomology::random_cochain;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn prism_stokes_identity() {
    let k = data::complex("octahedron").unwrap();
    let p = Prism::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..200 {
        let d = 1 + (i % 3) as i64;
        let z = random_cochain(&p.complex, d, &mut rng);
        let lhs = p.fiber_integrate(&p.complex.delta(&z)).unwrap().add(&k.delta(&p.fiber_integrate(&z).unwrap()));
        let rhs = p.end1.pullback(&z).unwrap().sub(&p.end0.pullback(&z).unwrap());
        assert_eq!(lhs, rhs, "sample {i}");
    }
}

#[test]
fn circle_stokes_identity() {
    let k = data::complex("octahedron").unwrap();
    let c = CircleProduct::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let d = 1 + (i % 3) as i64;
        let z = random_cochain(&c.complex, d, &mut rng);
        let lhs = c.fiber_integrate(&c.complex.delta(&z)).unwrap().add(&k.delta(&c.fiber_integrate(&z).unwrap()));
        assert!(lhs.is_zero(), "sample {i}");
    }
}

#[test]
fn pullbacks_commute_with_coboundaries() {
    let k = data::complex("circle3").unwrap();
    let p = Prism::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in 0..=1 {
        for _ in 0..20 {
            let z = random_cochain(&p.complex, d, &mut rng);
            for f in [&p.end0, &p.end1] {
                assert_eq!(f.pullback(&p.complex.delta(&z)).unwrap(), k.delta(&f.pullback(&z).unwrap()));
            }
            let y = random_cochain(&k, d, &mut rng);
            assert_eq!(p.proj.pullback(&k.delta(&y)).unwrap(), p.complex.delta(&p.proj.pullback(&y).unwrap()));
        }
    }
}

#[test]
fn ends_split_the_projection() {
    let k = data::complex("rp2_6").unwrap();
    let p = Prism::new(&k).unwrap();
    let c = CircleProduct::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in 0..=2 {
        let y = random_cochain(&k, d, &mut rng);
        for f in [&p.end0, &p.end1] {
            assert_eq!(f.pullback(&p.proj.pullback(&y).unwrap()).unwrap(), y);
        }
        assert_eq!(c.section.pullback(&c.proj.pullback(&y).unwrap()).unwrap(), y);
        if d >= 1 {
            assert!(p.fiber_integrate(&p.proj.pullback(&y).unwrap()).unwrap().is_zero());
            assert!(c.fiber_integrate(&c.proj.pullback(&y).unwrap()).unwrap().is_zero());
        }
    }
}

#[test]
fn circle_class_integrates_to_the_base_cochain() {
    let k = data::complex("csaszar_torus").unwrap();
    let c = CircleProduct::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u = CircleProduct::fundamental_circle_cocycle();
    for d in 0..=2 {
        let eta = random_cochain(&k, d, &mut rng);
        let z = c.cross(&u, &eta).unwrap();
        assert_eq!(c.fiber_integrate(&z).unwrap(), eta);
        assert!(c.section.pullback(&z).unwrap().is_zero());
    }
    assert!(c.fiber_integrate(&Cochain::zero(&c.complex, 0)).is_err());
}
