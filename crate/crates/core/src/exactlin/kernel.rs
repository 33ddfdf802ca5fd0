use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{smith_normal_form, IntMatrix};

/// Row-style Hermite normal form of the Z-span of `generators`.
///
/// Returns the nonzero rows: echelon shape, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`. The result depends only on the
/// lattice spanned, not on the generating set.
pub fn hermite_rows(generators: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(n) = generators.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..n {
        // Euclid on the rows with a nonzero entry in this column.
        loop {
            let mut active: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if active.len() <= 1 {
                break;
            }
            active.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)));
            let p = active[0];
            for &i in &active[1..] {
                let q = rows[i][col].div_floor(&rows[p][col]);
                let pr = rows[p].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.swap_remove(i);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            for prev in out.iter_mut() {
                let q = prev[col].div_floor(&r[col]);
                if !q.is_zero() {
                    for (x, y) in prev.iter_mut().zip(&r) {
                        *x -= &q * y;
                    }
                }
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}

/// Column basis matrix (n×k) in Hermite form for the span of the given columns.
pub fn hermite_columns(n: usize, columns: &[Vec<BigInt>]) -> IntMatrix {
    let rows = hermite_rows(columns);
    IntMatrix::from_columns(n, &rows).expect("hermite rows keep their length")
}

/// Saturated basis (as columns, in Hermite form) of `{x ∈ Zⁿ : a·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let r = s.rank();
    let n = a.cols();
    let cols: Vec<Vec<BigInt>> = (r..n).map(|j| s.v.column(j)).collect();
    hermite_columns(n, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::bigvec;

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![1, 1]]).unwrap());
        assert_eq!(k.columns(), vec![bigvec(&[1, -1])]);
        let k = kernel_basis(&IntMatrix::identity(3));
        assert_eq!(k.cols(), 0);
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![2, 4]]).unwrap());
        assert_eq!(k.columns(), vec![bigvec(&[2, -1])]);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = vec![bigvec(&[2, 0, 1]), bigvec(&[0, 3, 1])];
        let b = vec![bigvec(&[2, 3, 2]), bigvec(&[-2, 0, -1]), bigvec(&[4, 6, 4])];
        assert_eq!(hermite_rows(&a), hermite_rows(&b));
    }

    #[test]
    fn kernel_of_gram_row() {
        // Vectors of Z³ orthogonal to (1,2,3) under the standard form.
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![1, 2, 3]]).unwrap());
        assert_eq!(k.cols(), 2);
        for c in k.columns() {
            let dot: BigInt = c[0].clone() + &c[1] * 2 + &c[2] * 3;
            assert!(dot.is_zero());
        }
        let snf = smith_normal_form(&k);
        assert!(snf.invariant_factors().iter().all(|d| *d == BigInt::from(1)));
    }
}
