//! Arithmetic criteria for associated K3 surfaces and cubic fourfolds.
//!
//! Each decision is computed twice, once from prime factorisation and once
//! by exhausting residues modulo `d`; the public entry points compare them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::classify::{classify_special_sublattice, DiscriminantCase};
use super::{verify, FanoError};
use crate::discgroup::{discriminant_group, forms_isometric, DiscriminantGroup};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn odd_prime_factors(mut n: u64) -> Vec<u64> {
    while n.is_multiple_of(2) && n > 0 {
        n /= 2;
    }
    let mut out = Vec::new();
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Some `n ∈ [0, d)` prime to `d` with `a ≡ c·n² (mod d)`.
fn unit_square_times(a: i128, c: i128, d: u64) -> bool {
    let m = d as i128;
    let a = a.rem_euclid(m);
    (0..d).filter(|n| n.gcd(&d) == 1).any(|n| {
        let n = n as i128;
        (c * (n * n % m)).rem_euclid(m) == a
    })
}

pub fn k3_prime_criterion(d: u64) -> Result<bool, FanoError> {
    let case = DiscriminantCase::of(d)?;
    Ok(case != DiscriminantCase::A && odd_prime_factors(d).iter().all(|p| p % 4 == 1))
}

pub fn k3_congruence_oracle(d: u64) -> Result<bool, FanoError> {
    let di = d as i128;
    Ok(match DiscriminantCase::of(d)? {
        DiscriminantCase::A => false,
        DiscriminantCase::B => unit_square_times(-(di + 8) / 2, 1, d),
        DiscriminantCase::C => unit_square_times(-(di + 2) / 2, 1, d),
    })
}

pub fn has_associated_k3(d: u64) -> Result<bool, FanoError> {
    let a = k3_prime_criterion(d)?;
    let b = k3_congruence_oracle(d)?;
    if a != b {
        return Err(FanoError::MethodDisagreement {
            d,
            detail: format!("K3: prime criterion {a}, congruence oracle {b}"),
        });
    }
    Ok(a)
}

pub fn cubic_prime_criterion(d: u64) -> Result<bool, FanoError> {
    DiscriminantCase::of(d)?;
    let good = |p: &u64| p % 12 == 1 || p % 12 == 11;
    let primes = odd_prime_factors(d);
    let first = matches!(d % 24, 2 | 20) && primes.iter().all(good);
    let second = matches!(d % 72, 12 | 66) && primes.iter().filter(|&&p| p >= 5).all(good);
    Ok(first || second)
}

pub fn cubic_congruence_oracle(d: u64) -> Result<bool, FanoError> {
    DiscriminantCase::of(d)?;
    let di = d as i128;
    let dp = di / 24;
    Ok(match d % 24 {
        2 => unit_square_times(di / 2 + 12, 1, d),
        20 => unit_square_times(di / 2 + 3, 1, d),
        12 => !d.is_multiple_of(9) && unit_square_times(-12 * dp - 7, 16 * dp + 5, d),
        18 => !d.is_multiple_of(9) && unit_square_times(-12 * dp - 13, 16 * dp + 9, d),
        _ => false,
    })
}

pub fn has_associated_cubic(d: u64) -> Result<bool, FanoError> {
    let a = cubic_prime_criterion(d)?;
    let b = cubic_congruence_oracle(d)?;
    if a != b {
        return Err(FanoError::MethodDisagreement {
            d,
            detail: format!("cubic: prime criterion {a}, congruence oracle {b}"),
        });
    }
    Ok(a)
}

/// Closed-form discriminant form of `K^⊥` for the orbit(s) of discriminant `d`.
///
/// Case a is `(Z/2)² × Z/(d/4)` with `q = (1/2, 1/2, −4/d)`. In cases b and c
/// the group is `Z/d` with `b(1,1) = −(d+8)/(2d)` resp. `−(d+2)/(2d)`; the
/// quadratic refinement adds 1, since a lift `y ∈ K^∨` of the generator
/// satisfies `q = y·v′ − y²` with `y·v′` odd.
pub fn nonspecial_form_closed(d: u64) -> Result<DiscriminantGroup, FanoError> {
    let di = d as i64;
    let form = match DiscriminantCase::of(d)? {
        DiscriminantCase::A => {
            let q = vec![ratio(1, 2), ratio(1, 2), ratio(-4, di)];
            let mut b = vec![vec![ratio(0, 1); 3]; 3];
            for i in 0..3 {
                b[i][i] = q[i].clone();
            }
            DiscriminantGroup::from_forms(vec![2, 2, d / 4], b, Some(q))?
        }
        DiscriminantCase::B => DiscriminantGroup::cyclic_even(d, ratio(di - 8, 2 * di))?,
        DiscriminantCase::C => DiscriminantGroup::cyclic_even(d, ratio(di - 2, 2 * di))?,
    };
    Ok(form)
}

/// Discriminant form of `K^⊥`: the closed form, checked against the
/// discriminant group of the complement of every explicit representative.
pub fn nonspecial_discriminant_form(d: u64) -> Result<DiscriminantGroup, FanoError> {
    let closed = nonspecial_form_closed(d)?;
    for k in classify_special_sublattice(d)? {
        let perp = k.embedding.orthogonal_complement().induced_lattice()?;
        let computed = discriminant_group(&perp)?;
        verify(forms_isometric(&closed, &computed)?, || {
            format!("d = {d}: closed-form discriminant form differs from D(K^⊥)")
        })?;
    }
    Ok(closed)
}

/// Form of the opposite of the primitive cohomology of a degree-`d` K3:
/// `Z/d` with `q(1) = 1/d`.
pub fn k3_discriminant_form(d: u64) -> Result<DiscriminantGroup, FanoError> {
    if d == 0 {
        return Err(FanoError::InvalidParameter("degree must be positive".into()));
    }
    Ok(DiscriminantGroup::cyclic_even(d, ratio(1, d as i64))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discgroup::{cyclic_form_conjugate, QmodZ};

    #[test]
    fn factors() {
        assert_eq!(odd_prime_factors(2 * 9 * 5 * 49), vec![3, 5, 7]);
        assert_eq!(odd_prime_factors(64), Vec::<u64>::new());
    }

    #[test]
    fn k3_examples() {
        assert!(has_associated_k3(10).unwrap());
        assert!(!has_associated_k3(8).unwrap());
        assert!(!has_associated_k3(18).unwrap());
        assert_eq!(has_associated_k3(6), Err(FanoError::NotAdmissible(6)));
    }

    #[test]
    fn cubic_examples() {
        assert!(has_associated_cubic(12).unwrap());
        assert!(!has_associated_cubic(10).unwrap());
        assert!(has_associated_cubic(26).unwrap());
    }

    #[test]
    fn closed_forms() {
        let f10 = nonspecial_discriminant_form(10).unwrap();
        assert_eq!(f10.invariant_factors(), &[10]);
        assert_eq!(f10.b(&vec![1], &vec![1]), QmodZ::from_ratio(-18, 20));
        let f12 = nonspecial_discriminant_form(12).unwrap();
        assert_eq!(f12.b(&vec![1], &vec![1]), QmodZ::from_ratio(5, 12));
        let f16 = nonspecial_discriminant_form(16).unwrap();
        assert_eq!(f16.invariant_factors(), &[2, 2, 4]);
        nonspecial_discriminant_form(8).unwrap();
    }

    #[test]
    fn k3_form_conjugacy_matches_criterion() {
        for d in (1..=120).filter(|&d| d % 8 == 2 || d % 8 == 4) {
            let conj = cyclic_form_conjugate(&nonspecial_form_closed(d).unwrap(), &k3_discriminant_form(d).unwrap()).unwrap();
            assert_eq!(conj, has_associated_k3(d).unwrap(), "d = {d}");
        }
    }

    /// Independent check of the cubic criterion by direct `b`-form conjugacy
    /// with the non-special lattice of a special cubic fourfold.
    #[test]
    fn cubic_form_conjugacy_matches_criterion() {
        for d in (1..=600u64).filter(|&d| d % 8 == 2 || d % 8 == 4) {
            let di = d as i64;
            let cubic_b = match d % 6 {
                2 => Some(ratio(2 * di - 1, 3 * di)),
                0 if d % 9 != 0 => Some(ratio(2, 3) - ratio(3, di)),
                _ => None,
            };
            let conj = match cubic_b {
                None => false,
                Some(b) => {
                    let cubic = DiscriminantGroup::from_forms(vec![d], vec![vec![b]], None).unwrap();
                    let ours = nonspecial_form_closed(d).unwrap();
                    let ours_b = DiscriminantGroup::from_forms(vec![d], vec![vec![ours.b(&vec![1], &vec![1]).value().clone()]], None).unwrap();
                    cyclic_form_conjugate(&ours_b, &cubic).unwrap()
                }
            };
            assert_eq!(conj, has_associated_cubic(d).unwrap(), "d = {d}");
        }
        assert!(has_associated_cubic(188).unwrap());
    }
}
