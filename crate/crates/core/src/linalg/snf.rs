//! Smith normal form over Z with unimodular transforms.
//!
//! Pivoting always picks the entry of smallest absolute value in the active
//! block, which keeps intermediate entries small on the incidence matrices
//! this crate works with. Output is deterministic: ties are broken by
//! row-major position.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{ZMatrix, ZVector};

/// `left * a * right == diag(diagonal, 0, ...)` with `left`, `right` unimodular and
/// every diagonal entry positive and dividing the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub left: ZMatrix,
    pub right: ZMatrix,
    pub diagonal: Vec<BigInt>,
    rows: usize,
    cols: usize,
}

impl Smith {
    pub fn new(a: &ZMatrix) -> Self {
        let (rows, cols) = a.shape();
        let mut m = a.clone();
        let mut left = ZMatrix::identity(rows);
        let mut right = ZMatrix::identity(cols);
        let mut diagonal = Vec::new();

        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = smallest_nonzero(&m, t) else { break };
            m.swap_rows(t, pi);
            left.swap_rows(t, pi);
            m.swap_cols(t, pj);
            right.swap_cols(t, pj);

            loop {
                let mut dirty = false;
                // clear column t below the pivot
                for i in t + 1..rows {
                    if m.get(i, t).is_zero() {
                        continue;
                    }
                    let qt = m.get(i, t).div_floor(m.get(t, t));
                    row_axpy(&mut m, i, t, &qt);
                    row_axpy(&mut left, i, t, &qt);
                    if !m.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                // clear row t right of the pivot
                for j in t + 1..cols {
                    if m.get(t, j).is_zero() {
                        continue;
                    }
                    let qt = m.get(t, j).div_floor(m.get(t, t));
                    col_axpy(&mut m, j, t, &qt);
                    col_axpy(&mut right, j, t, &qt);
                    if !m.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder appeared in row/column t: move it to the pivot
                    let (pi, pj) = smallest_in_cross(&m, t);
                    m.swap_rows(t, pi);
                    left.swap_rows(t, pi);
                    m.swap_cols(t, pj);
                    right.swap_cols(t, pj);
                    continue;
                }
                // divisibility: every remaining entry must be a multiple of the pivot
                let p = m.get(t, t).clone();
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m.get(i, j).is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        // row_t += row_i, then reduce again
                        let minus_one = -BigInt::one();
                        row_axpy(&mut m, t, i, &minus_one);
                        row_axpy(&mut left, t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if m.get(t, t).is_negative() {
                negate_row(&mut m, t);
                negate_row(&mut left, t);
            }
            diagonal.push(m.get(t, t).clone());
            t += 1;
        }
        Smith { left, right, diagonal, rows, cols }
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// One integer solution of `a x = b`, or `None`.
    pub fn solve(&self, b: &[BigInt]) -> Option<ZVector> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let s = self.left.mul_vec(b);
        let mut w = vec![BigInt::zero(); self.cols];
        for (i, d) in self.diagonal.iter().enumerate() {
            let (qt, r) = s[i].div_rem(d);
            if !r.is_zero() {
                return None;
            }
            w[i] = qt;
        }
        if s[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        Some(self.right.mul_vec(&w))
    }

    /// Z-basis of the integer kernel of `a`.
    pub fn kernel_basis(&self) -> Vec<ZVector> {
        (self.rank()..self.cols).map(|j| self.right.col(j)).collect()
    }
}

fn smallest_nonzero(m: &ZMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn smallest_in_cross(m: &ZMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let consider = |i: usize, j: usize, best: &mut (usize, usize)| {
        let v = m.get(i, j);
        let b = m.get(best.0, best.1);
        if !v.is_zero() && (b.is_zero() || v.abs() < b.abs()) {
            *best = (i, j);
        }
    };
    for i in t..m.rows() {
        consider(i, t, &mut best);
    }
    for j in t..m.cols() {
        consider(t, j, &mut best);
    }
    best
}

/// row_i -= q * row_k
fn row_axpy(m: &mut ZMatrix, i: usize, k: usize, q: &BigInt) {
    for j in 0..m.cols() {
        let b = m.get(k, j);
        if b.is_zero() {
            continue;
        }
        let v = m.get(i, j) - q * b;
        m.set(i, j, v);
    }
}

/// col_j -= q * col_k
fn col_axpy(m: &mut ZMatrix, j: usize, k: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let b = m.get(i, k);
        if b.is_zero() {
            continue;
        }
        let v = m.get(i, j) - q * b;
        m.set(i, j, v);
    }
}

fn negate_row(m: &mut ZMatrix, i: usize) {
    for j in 0..m.cols() {
        let v = -m.get(i, j).clone();
        m.set(i, j, v);
    }
}

/// Integer solve for a single system.
pub fn solve_z(a: &ZMatrix, b: &[BigInt]) -> Option<ZVector> {
    Smith::new(a).solve(b)
}
