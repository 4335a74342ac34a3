use dcoh_core::cells::Subcomplex;
use dcoh_core::chain::{cone, ChainMap, Complex, Ring};
use dcoh_core::data;
use dcoh_core::linalg::{qi, QMatrix};
use dcoh_core::tot::{
    descent_check, star_cover, tot_cosimplicial, tot_simplicial, underlying_at_point, Coefficients, CosimplicialComplexTrunc,
    SimplicialComplexOfComplexes,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_two_term(rng: &mut ChaCha8Rng) -> Complex {
    let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let d = QMatrix::from_fn(b, a, |_, _| qi(rng.gen_range(-3..=3)));
    Complex::two_term(Ring::Z, rng.gen_range(-1..=1), d).unwrap()
}

fn union(a: &Subcomplex, b: &Subcomplex) -> Subcomplex {
    let top = a.cells.len().max(b.cells.len());
    let cells = (0..top)
        .map(|d| {
            let mut v: Vec<usize> = a.cells.get(d).into_iter().chain(b.cells.get(d)).flatten().copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    Subcomplex { cells }
}

#[test]
fn descent_on_bundled_complexes() {
    for name in data::COMPLEXES {
        let k = data::complex(name).unwrap();
        let cover = star_cover(&k);
        for ring in [Ring::Z, Ring::Q] {
            let r = descent_check(&k, &cover, &Coefficients::Ring(ring), 0, 2).unwrap();
            assert!(r.all_match, "{name} {ring:?}: {:?}", r.rows);
            assert!(r.canonical_map_is_iso, "{name} {ring:?}");
        }
    }
}

#[test]
fn descent_for_coarser_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for name in ["circle3", "octahedron", "rp2_6"] {
        let k = data::complex(name).unwrap();
        let stars = star_cover(&k);
        for _ in 0..3 {
            let groups = rng.gen_range(2..=3);
            let mut cover: Vec<Option<Subcomplex>> = vec![None; groups];
            for s in &stars {
                let g = rng.gen_range(0..groups);
                cover[g] = Some(match &cover[g] {
                    None => s.clone(),
                    Some(u) => union(u, s),
                });
            }
            let cover: Vec<Subcomplex> = cover.into_iter().flatten().collect();
            let r = descent_check(&k, &cover, &Coefficients::Ring(Ring::Z), 0, 2).unwrap();
            assert!(r.all_match, "{name}: {:?}", r.rows);
        }
    }
}

#[test]
fn underlying_at_the_point_for_small_truncations() {
    for m in 1..=3 {
        let r = underlying_at_point(m, 8, -1, 2).unwrap();
        for d in &r.degrees {
            let expected = if d.degree == 0 { "Q" } else { "0" };
            assert_eq!(d.group.to_string(), expected, "m={m} degree {}", d.degree);
            assert!(d.stable, "m={m} degree {}", d.degree);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constant_objects_recover_the_complex(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_two_term(&mut rng);
        let (lo, hi) = (-1, 2);
        let cos = CosimplicialComplexTrunc::constant(&c, 5);
        let t = tot_cosimplicial(&cos, lo, hi).unwrap();
        let simp = SimplicialComplexOfComplexes::constant(&c, 5);
        let s = tot_simplicial(&simp, lo, hi).unwrap();
        for n in lo..=hi {
            prop_assert_eq!(t.homology(n).unwrap(), c.homology(n));
            prop_assert_eq!(s.homology(n).unwrap(), c.homology(n));
        }
        for tot in [&t.complex, &s.complex] {
            for n in tot.lo()..tot.hi() {
                prop_assert!(tot.differential(n + 1).mul_mat(&tot.differential(n)).is_zero());
            }
        }
    }

    #[test]
    fn levelwise_acyclic_objects_have_acyclic_tot(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_two_term(&mut rng);
        let acyclic = cone(&ChainMap::identity(&c)).unwrap().complex;
        let cos = CosimplicialComplexTrunc::constant(&acyclic, 6);
        let t = tot_cosimplicial(&cos, -1, 2).unwrap();
        for n in -1..=2 {
            prop_assert!(t.homology(n).unwrap().is_zero());
        }
    }
}
