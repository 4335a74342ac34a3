//! Mapping cones, fibers, and exactness of induced maps in cohomology.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::complex::{ChainMap, Complex, Ring};
use crate::error::{Error, Result};
use crate::linalg::matrix::{q_to_z, zvec_to_q, QMatrix, QVector};
use crate::linalg::{kernel_basis_q, RationalSolver, Smith};

/// `Cone(f) = B ⊕ A[1]` with `d(b, a) = (db - f(a), -da)`, together with the structure
/// maps `B -> Cone(f) -> A[1]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Complex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

pub fn cone(f: &ChainMap) -> Result<Cone> {
    let a = f.source();
    let b = f.target();
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch("cone of a map between different rings".into()));
    }
    let lo = b.lo().min(a.lo() - 1);
    let hi = b.hi().max(a.hi() - 1);
    let rank = |n: i64| b.rank(n) + a.rank(n + 1);
    let minus_one = -BigRational::one();
    let diff = |n: i64| {
        let top_right = f.component(n + 1).scale(&minus_one);
        let bottom_right = a.differential(n + 1).scale(&minus_one);
        QMatrix::block(
            &[b.rank(n + 1), a.rank(n + 2)],
            &[b.rank(n), a.rank(n + 1)],
            &[vec![Some(b.differential(n)), Some(top_right)], vec![None, Some(bottom_right)]],
        )
    };
    let complex = Complex::new(
        a.ring(),
        lo,
        (lo..=hi).map(rank).collect(),
        (lo..hi).map(diff).collect(),
    )?;
    let a_shift = a.shift(1);
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for n in lo..=hi {
        let (bn, an) = (b.rank(n), a.rank(n + 1));
        inc.insert(n, QMatrix::from_fn(bn + an, bn, |i, j| if i == j { BigRational::one() } else { BigRational::default() }));
        proj.insert(n, QMatrix::from_fn(an, bn + an, |i, j| if j == bn + i { BigRational::one() } else { BigRational::default() }));
    }
    let inclusion = ChainMap::new(b.clone(), complex.clone(), inc)?;
    let projection = ChainMap::new(complex.clone(), a_shift, proj)?;
    Ok(Cone { complex, inclusion, projection })
}

/// `Fib(f) = Cone(f)[-1]`.
pub fn fiber(f: &ChainMap) -> Result<Complex> {
    Ok(cone(f)?.complex.shift(-1))
}

/// Checks exactness of `H^n(X) -> H^n(Y) -> H^n(W)` for chain maps `f: X -> Y`, `g: Y -> W`
/// (the composite only has to vanish in cohomology), by comparing the lattices `f(Z^n X) + B^n Y` and
/// `{y ∈ Z^n Y : g(y) ∈ B^n W}` generator by generator.
pub fn exact_at(f: &ChainMap, g: &ChainMap, n: i64) -> Result<bool> {
    let y = f.target();
    let ring = y.ring();
    let (x, w) = (f.source(), g.target());
    let dy = y.differential(n);
    let dy_in = y.differential(n - 1);
    let dw_in = w.differential(n - 1);
    let gn = g.component(n);

    // image lattice generators
    let mut image: Vec<QVector> = kernel(ring, &x.differential(n)).into_iter().map(|z| f.component(n).mul_vec(&z)).collect();
    image.extend((0..dy_in.cols()).map(|j| dy_in.col(j)));

    // kernel lattice generators: (y, t) with dy y = 0 and g y - dw t = 0
    let rows_y = dy.rows();
    let stacked = QMatrix::block(
        &[rows_y, gn.rows()],
        &[y.rank(n), dw_in.cols()],
        &[vec![Some(dy.clone()), None], vec![Some(gn.clone()), Some(dw_in.scale(&-BigRational::one()))]],
    );
    let kern: Vec<QVector> = kernel(ring, &stacked).into_iter().map(|v| v[..y.rank(n)].to_vec()).collect();

    // image ⊆ kernel
    let dw_solver = Solver::new(ring, &dw_in);
    for v in &image {
        if !dy.mul_vec(v).iter().all(|e| *e == BigRational::default()) {
            return Ok(false);
        }
        if !dw_solver.contains(&gn.mul_vec(v)) {
            return Ok(false);
        }
    }
    // kernel ⊆ image
    let gens = QMatrix::from_fn(y.rank(n), image.len(), |i, j| image[j][i].clone());
    let img_solver = Solver::new(ring, &gens);
    Ok(kern.iter().all(|v| img_solver.contains(v)))
}

fn kernel(ring: Ring, m: &QMatrix) -> Vec<QVector> {
    match ring {
        Ring::Q => kernel_basis_q(m),
        Ring::Z => Smith::new(&q_to_z(m).expect("integral matrix")).kernel_basis().iter().map(|v| zvec_to_q(v)).collect(),
    }
}

enum Solver {
    Q(RationalSolver),
    Z(Smith),
}

impl Solver {
    fn new(ring: Ring, m: &QMatrix) -> Self {
        match ring {
            Ring::Q => Solver::Q(RationalSolver::new(m)),
            Ring::Z => Solver::Z(Smith::new(&q_to_z(m).expect("integral matrix"))),
        }
    }

    fn contains(&self, v: &[BigRational]) -> bool {
        match self {
            Solver::Q(s) => s.in_image(v),
            Solver::Z(s) => match v.iter().map(|e| e.is_integer().then(|| e.to_integer())).collect::<Option<Vec<_>>>() {
                Some(b) => s.solve(&b).is_some(),
                None => false,
            },
        }
    }
}

/// Long exact sequence of the cone around degree `n`, at all three spots of
/// `H^n(B) -> H^n(Cone) -> H^{n+1}(A) -> H^{n+1}(B)`.
pub fn cone_long_exact(f: &ChainMap, c: &Cone, n: i64) -> Result<bool> {
    let f_shift = shifted_map(f, 1, BigRational::one())?;
    let inc_shift = shifted_map(&c.inclusion, 1, BigRational::one())?;
    Ok(exact_at(&c.inclusion, &c.projection, n)?
        && exact_at(&c.projection, &f_shift, n)?
        && exact_at(&f_shift, &inc_shift, n)?)
}

/// `s · f[k] : A[k] -> B[k]`.
pub fn shifted_map(f: &ChainMap, k: i64, s: BigRational) -> Result<ChainMap> {
    let src = f.source().shift(k);
    let tgt = f.target().shift(k);
    let lo = src.lo().min(tgt.lo());
    let hi = src.hi().max(tgt.hi());
    let maps = (lo..=hi).map(|n| (n, f.component(n + k).scale(&s))).collect();
    ChainMap::new(src, tgt, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    fn circle() -> Complex {
        let d = QMatrix::from_rows(
            vec![vec![qi(-1), qi(1), qi(0)], vec![qi(0), qi(-1), qi(1)], vec![qi(-1), qi(0), qi(1)]],
            3,
        );
        Complex::new(Ring::Z, 0, vec![3, 3], vec![d]).unwrap()
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = circle();
        let k = cone(&ChainMap::identity(&c)).unwrap();
        assert!(k.complex.is_acyclic());
        assert!(fiber(&ChainMap::identity(&c)).unwrap().is_acyclic());
    }

    #[test]
    fn cone_of_zero_source() {
        let c = circle();
        let z = Complex::zero(Ring::Z);
        let k = cone(&ChainMap::zero(&z, &c)).unwrap();
        assert!(k.complex.same_as(&c));
        // fiber of C -> 0 is C
        let f = fiber(&ChainMap::zero(&c, &z)).unwrap();
        assert!(f.same_as(&c));
    }

    #[test]
    fn cone_of_multiplication_by_two() {
        let zc = Complex::atom(Ring::Z, 0);
        let mut m = BTreeMap::new();
        m.insert(0, QMatrix::from_rows(vec![vec![qi(2)]], 1));
        let f = ChainMap::new(zc.clone(), zc, m).unwrap();
        let k = cone(&f).unwrap();
        assert_eq!(k.complex.homology(0).to_string(), "Z/2");
        assert!(k.complex.homology(-1).is_zero());
        let fib = fiber(&f).unwrap();
        assert!(fib.homology(0).is_zero());
        assert_eq!(fib.homology(1).to_string(), "Z/2");
        for n in -2..=1 {
            assert!(cone_long_exact(&f, &k, n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn exactness_detects_failure() {
        let zc = Complex::atom(Ring::Z, 0);
        let zero = ChainMap::zero(&zc, &zc);
        assert!(!exact_at(&zero, &zero, 0).unwrap());
        let id = ChainMap::identity(&zc);
        assert!(exact_at(&zero, &id, 0).unwrap());
    }
}
