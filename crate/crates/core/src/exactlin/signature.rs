use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{determinant, IntMatrix, LinAlgError};

/// Inertia `(positive, negative)` of a nondegenerate symmetric matrix.
///
/// Symmetric Gaussian reduction over Q: a nonzero diagonal pivot is split off
/// as a 1×1 block; when the whole remaining diagonal vanishes, a nonzero
/// off-diagonal entry is split off as a hyperbolic 2×2 block contributing (1,1).
pub fn signature(gram: &IntMatrix) -> Result<(usize, usize), LinAlgError> {
    if !gram.is_symmetric() {
        return Err(LinAlgError::NonSymmetric);
    }
    if determinant(gram)?.is_zero() {
        return Err(LinAlgError::Degenerate);
    }
    let n = gram.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            gram.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let (mut pos, mut neg) = (0, 0);
    while !a.is_empty() {
        let m = a.len();
        if let Some(p) = (0..m).find(|&i| !a[i][i].is_zero()) {
            let piv = a[p][p].clone();
            if piv.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let col: Vec<BigRational> = (0..m).map(|i| a[i][p].clone()).collect();
            a = (0..m)
                .filter(|&i| i != p)
                .map(|i| {
                    (0..m)
                        .filter(|&j| j != p)
                        .map(|j| &a[i][j] - &col[i] * &col[j] / &piv)
                        .collect()
                })
                .collect();
            continue;
        }
        let (p, q) = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
            .ok_or(LinAlgError::Degenerate)?;
        pos += 1;
        neg += 1;
        // Schur complement of the block [[0,c],[c,0]], whose inverse is [[0,1/c],[1/c,0]].
        let c = a[p][q].clone();
        let cp: Vec<BigRational> = (0..m).map(|i| a[i][p].clone()).collect();
        let cq: Vec<BigRational> = (0..m).map(|i| a[i][q].clone()).collect();
        a = (0..m)
            .filter(|&i| i != p && i != q)
            .map(|i| {
                (0..m)
                    .filter(|&j| j != p && j != q)
                    .map(|j| &a[i][j] - (&cp[i] * &cq[j] + &cq[i] * &cp[j]) / &c)
                    .collect()
            })
            .collect();
    }
    Ok((pos, neg))
}
