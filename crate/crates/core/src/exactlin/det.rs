use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IntMatrix, LinAlgError};

/// Exact determinant by fraction-free Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(if n == 0 { sign } else { sign * &m[n - 1][n - 1] })
}
