use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `d = u·a·v` with unimodular `u` and `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries `d₁ | d₂ | ⋯ | d_r`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    /// Smallest nonzero |entry| in the trailing block, first in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if self.a[b].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn step(&mut self, t: usize) -> bool {
        loop {
            let Some((pi, pj)) = self.pivot(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            let p = self.a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..self.a.rows() {
                if self.a[(i, t)].is_zero() {
                    continue;
                }
                let q = &self.a[(i, t)] / &p;
                self.add_row(i, t, &-q);
                dirty |= !self.a[(i, t)].is_zero();
            }
            for j in t + 1..self.a.cols() {
                if self.a[(t, j)].is_zero() {
                    continue;
                }
                let q = &self.a[(t, j)] / &p;
                self.add_col(j, t, &-q);
                dirty |= !self.a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility of the block.
            let offender = (t + 1..self.a.rows()).find(|&i| {
                (t + 1..self.a.cols()).any(|j| !self.a[(i, j)].is_multiple_of(&p))
            });
            match offender {
                Some(i) => self.add_row(t, i, &BigInt::from(1)),
                None => {
                    if p.is_negative() {
                        self.a.negate_row(t);
                        self.u.negate_row(t);
                    }
                    return true;
                }
            }
        }
    }
}

/// Smith normal form with transformation matrices.
///
/// Pivoting picks the smallest nonzero absolute value in the remaining
/// block, scanning row-major, so the transforms are reproducible.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut r = Reducer {
        a: a.clone(),
        u: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
    };
    for t in 0..a.rows().min(a.cols()) {
        if !r.step(t) {
            break;
        }
    }
    SnfResult {
        d: r.a,
        u: r.u,
        v: r.v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::determinant;

    fn check(a: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(determinant(&s.u).unwrap().abs() == BigInt::from(1));
        assert!(determinant(&s.v).unwrap().abs() == BigInt::from(1));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn diagonal_twos() {
        let s = check(&IntMatrix::diagonal(&[2, 2]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn non_coprime_diagonal_gets_reordered() {
        let s = check(&IntMatrix::diagonal(&[4, 6]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 6], vec![1, 2, 3]]).unwrap();
        let s = check(&a);
        assert_eq!(s.rank(), 1);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(check(&z).rank(), 0);
        assert_eq!(check(&IntMatrix::zeros(0, 2)).rank(), 0);
    }
}
