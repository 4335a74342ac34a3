//! Gaussian elimination over Q.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{QMatrix, QVector};

/// Reduced row echelon form together with the row transformation that produced it:
/// `transform * a == reduced`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: QMatrix,
    pub transform: QMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(a: &QMatrix) -> Self {
        let (rows, cols) = a.shape();
        let mut r = a.clone();
        let mut t = QMatrix::identity(rows);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&i| !r.get(i, col).is_zero()) else {
                continue;
            };
            r.swap_rows(row, p);
            t.swap_rows(row, p);
            let inv = r.get(row, col).recip();
            scale_row(&mut r, row, &inv);
            scale_row(&mut t, row, &inv);
            for i in 0..rows {
                if i != row && !r.get(i, col).is_zero() {
                    let f = r.get(i, col).clone();
                    axpy_row(&mut r, i, row, &f);
                    axpy_row(&mut t, i, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: r, transform: t, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn scale_row(m: &mut QMatrix, i: usize, s: &BigRational) {
    for j in 0..m.cols() {
        let v = m.get(i, j) * s;
        m.set(i, j, v);
    }
}

/// row_i -= f * row_k
fn axpy_row(m: &mut QMatrix, i: usize, k: usize, f: &BigRational) {
    for j in 0..m.cols() {
        let b = m.get(k, j);
        if b.is_zero() {
            continue;
        }
        let v = m.get(i, j) - f * b;
        m.set(i, j, v);
    }
}

pub fn rank_q(a: &QMatrix) -> usize {
    Echelon::new(a).rank()
}

/// Basis of the right kernel `{x : a x = 0}`.
pub fn kernel_basis_q(a: &QMatrix) -> Vec<QVector> {
    let e = Echelon::new(a);
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (r, &p) in e.pivots.iter().enumerate() {
                x[p] = -e.reduced.get(r, f).clone();
            }
            x
        })
        .collect()
}

/// Rows spanning the left annihilator `{y : y a = 0}`.
pub fn left_annihilator(a: &QMatrix) -> QMatrix {
    let basis = kernel_basis_q(&a.transpose());
    QMatrix::from_rows(basis, a.rows())
}

/// Solves `a x = b` over Q for many right-hand sides with a single elimination.
#[derive(Clone, Debug)]
pub struct RationalSolver {
    echelon: Echelon,
    cols: usize,
}

impl RationalSolver {
    pub fn new(a: &QMatrix) -> Self {
        RationalSolver { echelon: Echelon::new(a), cols: a.cols() }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// One solution (free variables set to zero), or `None` when `b` is not in the image.
    pub fn solve(&self, b: &[BigRational]) -> Option<QVector> {
        assert_eq!(b.len(), self.echelon.transform.cols(), "right-hand side has wrong length");
        let c = self.echelon.transform.mul_vec(b);
        let rank = self.rank();
        if c[rank..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (r, &p) in self.echelon.pivots.iter().enumerate() {
            x[p] = c[r].clone();
        }
        Some(x)
    }

    pub fn in_image(&self, b: &[BigRational]) -> bool {
        self.solve(b).is_some()
    }
}

pub fn solve_q(a: &QMatrix, b: &[BigRational]) -> Option<QVector> {
    RationalSolver::new(a).solve(b)
}
