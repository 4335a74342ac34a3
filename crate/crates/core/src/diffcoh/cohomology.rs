//! Explicit cohomology of a cell complex: integral classes with coordinates,
//! rational classes through periods, and `Q/Z` classes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::cells::{CellComplex, Cochain};
use crate::chain::{DivisibleGroup, FgAbGroup, Ring};
use crate::error::{Error, Result};
use crate::linalg::matrix::{q_to_z, z_to_q, zvec_to_q};
use crate::linalg::{kernel_basis_q, rank_q, MixedSystem, QMatrix, Smith, ZMatrix, ZVector};

pub(crate) fn integral_coboundary(k: &CellComplex, d: i64) -> ZMatrix {
    q_to_z(&k.coboundary(d)).expect("cellular coboundaries are integral")
}

/// Coordinates of an integral class: free part, then torsion part reduced modulo
/// the invariant factors in `moduli`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCoords {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
    pub moduli: Vec<BigInt>,
}

impl ClassCoords {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for ClassCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        parts.extend(self.torsion.iter().zip(&self.moduli).map(|(t, m)| format!("{t} mod {m}")));
        write!(f, "({})", parts.join(", "))
    }
}

/// `H^n(K; Z)` presented as `Z^r ⊕ ⊕ Z/d_i`, with a coordinate map on cocycles.
#[derive(Clone, Debug)]
pub struct IntegralCohomology {
    degree: i64,
    delta_next: ZMatrix,
    /// Z-basis of the cocycles, as columns.
    kernel: ZMatrix,
    kernel_solver: Smith,
    /// Smith form of the coboundaries written in the kernel basis.
    relations: Smith,
}

impl IntegralCohomology {
    pub fn new(k: &CellComplex, degree: i64) -> Self {
        let delta_next = integral_coboundary(k, degree);
        let basis = Smith::new(&delta_next).kernel_basis();
        let rows = k.count(degree);
        let kernel = ZMatrix::from_fn(rows, basis.len(), |i, j| basis[j][i].clone());
        let kernel_solver = Smith::new(&kernel);
        let prev = integral_coboundary(k, degree - 1);
        let mut rel = ZMatrix::zeros(basis.len(), prev.cols());
        for j in 0..prev.cols() {
            let x = kernel_solver.solve(&prev.col(j)).expect("coboundaries are cocycles");
            for (i, v) in x.into_iter().enumerate() {
                rel.set(i, j, v);
            }
        }
        IntegralCohomology { degree, delta_next, kernel, kernel_solver, relations: Smith::new(&rel) }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    fn split(&self) -> (Vec<usize>, Vec<usize>) {
        let r = self.relations.rank();
        let torsion = (0..r).filter(|&i| !self.relations.diagonal[i].is_one()).collect();
        let free = (r..self.kernel.cols()).collect();
        (free, torsion)
    }

    pub fn group(&self) -> FgAbGroup {
        let (free, _) = self.split();
        FgAbGroup { ring: Ring::Z, rank: free.len(), torsion: self.relations.torsion() }
    }

    pub fn is_cocycle(&self, z: &Cochain) -> bool {
        z.is_integral() && z.values.len() == self.kernel.rows() && self.delta_next.mul_vec(&z.to_integers().unwrap()).iter().all(Zero::is_zero)
    }

    /// Coordinates of the class of an integral cocycle.
    pub fn coords(&self, z: &Cochain) -> Result<ClassCoords> {
        if z.degree != self.degree || !self.is_cocycle(z) {
            return Err(Error::NotACocycle(format!("expected an integral {}-cocycle", self.degree)));
        }
        let x = self.kernel_solver.solve(&z.to_integers().unwrap()).ok_or_else(|| Error::Internal("cocycle outside the kernel lattice".into()))?;
        let y = self.relations.left.mul_vec(&x);
        let (free, torsion) = self.split();
        let moduli: Vec<BigInt> = torsion.iter().map(|&i| self.relations.diagonal[i].clone()).collect();
        Ok(ClassCoords {
            free: free.iter().map(|&i| y[i].clone()).collect(),
            torsion: torsion.iter().zip(&moduli).map(|(&i, m)| y[i].mod_floor(m)).collect(),
            moduli,
        })
    }

    pub fn same_class(&self, a: &Cochain, b: &Cochain) -> Result<bool> {
        Ok(self.coords(&a.sub(b))?.is_zero())
    }

    /// Cocycles representing the free generators followed by the torsion generators.
    pub fn generators(&self) -> Vec<Cochain> {
        let (free, torsion) = self.split();
        let u = Smith::new(&self.relations.left);
        free.iter()
            .chain(&torsion)
            .map(|&i| {
                let mut e = vec![BigInt::zero(); self.kernel.cols()];
                e[i] = BigInt::one();
                let x = u.solve(&e).expect("unimodular");
                Cochain::new(self.degree, zvec_to_q(&self.kernel.mul_vec(&x)))
            })
            .collect()
    }

    /// A random integral cocycle built from the cocycle basis.
    pub fn sample(&self, rng: &mut impl Rng, bound: i64) -> Cochain {
        let w: ZVector = (0..self.kernel.cols()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
        Cochain::new(self.degree, zvec_to_q(&self.kernel.mul_vec(&w)))
    }
}

/// `H^n(K; Q)` with coordinates given by periods on integral cycles that form a
/// basis of `H_n(K; Q)`.
#[derive(Clone, Debug)]
pub struct RationalCohomology {
    degree: i64,
    cycles: Vec<ZVector>,
    cocycle_basis: Vec<Cochain>,
    delta_next: QMatrix,
}

impl RationalCohomology {
    pub fn new(k: &CellComplex, degree: i64) -> Self {
        let n = k.count(degree);
        let boundaries = if degree + 1 >= 1 { z_to_q(&k.boundary_matrix((degree + 1) as usize)) } else { QMatrix::zeros(n, 0) };
        let this = if degree >= 0 { z_to_q(&k.boundary_matrix(degree as usize)) } else { QMatrix::zeros(0, 0) };
        let mut span = boundaries.clone();
        let mut cycles = Vec::new();
        let mut rank = rank_q(&span);
        for z in if degree >= 0 { kernel_basis_q(&this) } else { vec![] } {
            let trial = span.hstack(&QMatrix::from_fn(n, 1, |i, _| z[i].clone()));
            let r = rank_q(&trial);
            if r > rank {
                span = trial;
                rank = r;
                let l = z.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                let ints: Vec<BigInt> = z.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect();
                let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
                cycles.push(ints.iter().map(|v| v / &g).collect());
            }
        }
        let delta_next = k.coboundary(degree);
        let cocycle_basis = kernel_basis_q(&delta_next).into_iter().map(|v| Cochain::new(degree, v)).collect();
        RationalCohomology { degree, cycles, cocycle_basis, delta_next }
    }

    pub fn dim(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycles(&self) -> &[ZVector] {
        &self.cycles
    }

    pub fn is_cocycle(&self, z: &Cochain) -> bool {
        z.degree == self.degree && self.delta_next.mul_vec(&z.values).iter().all(Zero::is_zero)
    }

    /// Periods of a cocycle; two cocycles are cohomologous exactly when their periods agree.
    pub fn periods(&self, z: &Cochain) -> Result<Vec<BigRational>> {
        if !self.is_cocycle(z) {
            return Err(Error::NotACocycle(format!("expected a rational {}-cocycle", self.degree)));
        }
        Ok(self.cycles.iter().map(|c| z.pair(c)).collect())
    }

    pub fn is_zero_class(&self, z: &Cochain) -> Result<bool> {
        Ok(self.periods(z)?.iter().all(Zero::is_zero))
    }

    /// Rational cocycles spanning the cocycle space (not just cohomology).
    pub fn cocycle_basis(&self) -> &[Cochain] {
        &self.cocycle_basis
    }
}

/// `H^n(K; Q/Z)`, with cochains represented by rational lifts `θ` whose coboundary is integral.
#[derive(Clone, Debug)]
pub struct FlatCohomology {
    degree: i64,
    delta: QMatrix,
    smith: Smith,
    equality: MixedSystem,
    group: DivisibleGroup,
}

impl FlatCohomology {
    pub fn new(k: &CellComplex, degree: i64) -> Result<Self> {
        let delta = k.coboundary(degree);
        let smith = Smith::new(&integral_coboundary(k, degree));
        let n = k.count(degree);
        let equality = MixedSystem::new(&ZMatrix::identity(n), &k.coboundary(degree - 1))?;
        let group = k.cochain_complex(Ring::Z).homology_qz(degree);
        Ok(FlatCohomology { degree, delta, smith, equality, group })
    }

    pub fn group(&self) -> &DivisibleGroup {
        &self.group
    }

    /// Whether `θ` reduces to a `Q/Z` cocycle.
    pub fn is_cocycle(&self, theta: &Cochain) -> bool {
        theta.degree == self.degree && self.delta.mul_vec(&theta.values).iter().all(BigRational::is_integer)
    }

    /// A rational cochain `β` and integral cochain `k` with `a - b = δβ + k`, if the
    /// two lifts define the same class.
    pub fn difference_witness(&self, a: &Cochain, b: &Cochain) -> Result<Option<(ZVector, Vec<BigRational>)>> {
        let diff = a.sub(b);
        Ok(self.equality.solve(&diff.values)?.map(|s| (s.integral, s.rational)))
    }

    pub fn same_class(&self, a: &Cochain, b: &Cochain) -> Result<bool> {
        if !self.is_cocycle(a) || !self.is_cocycle(b) {
            return Err(Error::NotACocycle(format!("expected lifts of Q/Z {}-cocycles", self.degree)));
        }
        Ok(self.difference_witness(a, b)?.is_some())
    }

    /// Lifts `V e_i / d_i` of the torsion classes, in the order of the invariant factors.
    pub fn torsion_lifts(&self) -> Vec<(Cochain, BigInt)> {
        self.smith
            .diagonal
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_one())
            .map(|(i, d)| {
                let col = zvec_to_q(&self.smith.right.col(i));
                let inv = BigRational::new(BigInt::one(), d.clone());
                (Cochain::new(self.degree, col.iter().map(|v| v * &inv).collect()), d.clone())
            })
            .collect()
    }

    /// Exponent of the torsion of `H^{n+1}(K; Z)`, i.e. the largest invariant factor.
    pub fn torsion_exponent(&self) -> BigInt {
        self.smith.diagonal.iter().fold(BigInt::one(), |acc, d| acc.lcm(&d.abs()))
    }

    /// A random lift: torsion coordinates `k_i / d_i`, random rationals on the
    /// cocycle directions, plus integral and coboundary noise when `noise` is set.
    pub fn sample(&self, k: &CellComplex, rng: &mut impl Rng, noise: bool) -> Cochain {
        let n = self.smith.right.rows();
        let rank = self.smith.rank();
        let mut w = vec![BigRational::zero(); n];
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = if i < rank {
                let d = &self.smith.diagonal[i];
                BigRational::new(BigInt::from(rng.gen_range(0..=8)) % d, d.clone())
            } else {
                random_rational(rng)
            };
        }
        let mut theta = Cochain::new(self.degree, z_to_q(&self.smith.right).mul_vec(&w));
        if noise {
            let ints = Cochain::new(self.degree, (0..n).map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-2..=2)))).collect());
            let beta = Cochain::new(self.degree - 1, (0..k.count(self.degree - 1)).map(|_| random_rational(rng)).collect());
            theta = theta.add(&ints).add(&Cochain::new(self.degree, k.coboundary(self.degree - 1).mul_vec(&beta.values)));
        }
        theta
    }
}

/// A small random rational `p/q` with `|p| <= 6` and `1 <= q <= 4`.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6..=6)), BigInt::from(rng.gen_range(1..=4)))
}

pub fn random_cochain(k: &CellComplex, degree: i64, rng: &mut impl Rng) -> Cochain {
    Cochain::new(degree, (0..k.count(degree)).map(|_| random_rational(rng)).collect())
}

pub fn random_integral_cochain(k: &CellComplex, degree: i64, rng: &mut impl Rng, bound: i64) -> Cochain {
    Cochain::new(degree, (0..k.count(degree)).map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn integral_groups_match_homology() {
        for name in data::COMPLEXES {
            let k = data::complex(name).unwrap();
            let c = k.cochain_complex(Ring::Z);
            for n in 0..=2 {
                assert_eq!(IntegralCohomology::new(&k, n).group(), c.homology(n), "{name} H^{n}");
            }
        }
    }

    #[test]
    fn generators_have_unit_coordinates() {
        let k = data::complex("csaszar_torus").unwrap();
        let h = IntegralCohomology::new(&k, 1);
        let gens = h.generators();
        assert_eq!(gens.len(), 2);
        assert_eq!(h.coords(&gens[0]).unwrap().free, vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(h.coords(&gens[1]).unwrap().free, vec![BigInt::zero(), BigInt::one()]);
        let rp2 = data::complex("rp2_6").unwrap();
        let t = IntegralCohomology::new(&rp2, 2);
        let g = &t.generators()[0];
        assert_eq!(t.coords(g).unwrap().torsion, vec![BigInt::one()]);
        assert!(t.coords(&g.scale(&BigRational::from_integer(2.into()))).unwrap().is_zero());
    }

    #[test]
    fn coboundaries_are_zero_classes() {
        let k = data::complex("octahedron").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_integral_cochain(&k, 1, &mut rng, 3);
        let h = IntegralCohomology::new(&k, 2);
        assert!(h.coords(&k.delta(&b)).unwrap().is_zero());
        let r = RationalCohomology::new(&k, 2);
        assert_eq!(r.dim(), 1);
        assert!(r.is_zero_class(&k.delta(&random_cochain(&k, 1, &mut rng))).unwrap());
        assert_eq!(r.periods(&Cochain::indicator(&k, 2, 0)).unwrap()[0].abs(), BigRational::one());
    }

    #[test]
    fn flat_classes() {
        let k = data::complex("rp2_6").unwrap();
        let f = FlatCohomology::new(&k, 1).unwrap();
        assert_eq!(f.group().to_string(), "Z/2");
        let lifts = f.torsion_lifts();
        assert_eq!(lifts.len(), 1);
        let (theta, d) = &lifts[0];
        assert_eq!(*d, BigInt::from(2));
        let zero = Cochain::zero(&k, 1);
        assert!(f.is_cocycle(theta));
        assert!(!f.same_class(theta, &zero).unwrap());
        assert!(f.same_class(&theta.scale(&BigRational::from_integer(2.into())), &zero).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s = f.sample(&k, &mut rng, true);
            assert!(f.is_cocycle(&s));
        }
    }
}
