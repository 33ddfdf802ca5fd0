//! Integral lattices as Gram matrices.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, IntMatrix, LinAlgError, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NonSymmetric,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vector is zero")]
    ZeroVector,
    #[error("vectors belong to different lattices")]
    OwnerMismatch,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Gram entry does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Identity of a lattice, derived from its Gram matrix alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeId(u64);

/// A nondegenerate integral lattice, identified by its Gram matrix.
#[derive(Clone)]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
    id: LatticeId,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("label", &self.label)
            .field("gram", &self.gram)
            .finish()
    }
}

/// The named building blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    /// Hyperbolic plane `[[0,1],[1,0]]`.
    U,
    /// `⟨2⟩`.
    A1,
    /// The even unimodular positive definite lattice of rank 8.
    E8,
    /// Rank one lattice `⟨n⟩`.
    Scaled(i64),
    /// `I_{p,q} = diag(+1 × p, −1 × q)`.
    OddUnimodular(usize, usize),
}

/// Cartan matrix of E8 in Bourbaki numbering (edges 1-3, 2-4, 3-4, 4-5, 5-6, 6-7, 7-8).
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];

impl Lattice {
    pub fn new(gram: IntMatrix, label: Option<String>) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NonSymmetric);
        }
        if exactlin::determinant(&gram)?.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        let mut h = DefaultHasher::new();
        gram.hash(&mut h);
        Ok(Lattice {
            id: LatticeId(h.finish()),
            gram,
            label,
        })
    }

    pub fn standard(kind: StandardKind) -> Result<Self, LatticeError> {
        let (gram, label) = match kind {
            StandardKind::U => (IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])?, "U".to_string()),
            StandardKind::A1 => (IntMatrix::diagonal(&[2]), "A1".to_string()),
            StandardKind::E8 => {
                let mut g = IntMatrix::diagonal(&[2; 8]);
                for (a, b) in E8_EDGES {
                    g[(a, b)] = BigInt::from(-1);
                    g[(b, a)] = BigInt::from(-1);
                }
                (g, "E8".to_string())
            }
            StandardKind::Scaled(n) => {
                if n == 0 {
                    return Err(LatticeError::InvalidParameter("scaled(0) is degenerate".into()));
                }
                (IntMatrix::diagonal(&[n]), format!("<{n}>"))
            }
            StandardKind::OddUnimodular(p, q) => {
                if p + q == 0 {
                    return Err(LatticeError::InvalidParameter("I_{0,0} has rank 0".into()));
                }
                let diag: Vec<i64> = std::iter::repeat_n(1, p).chain(std::iter::repeat_n(-1, q)).collect();
                (IntMatrix::diagonal(&diag), format!("I{p}_{q}"))
            }
        };
        Lattice::new(gram, Some(label))
    }

    /// Orthogonal direct sum; the Gram matrix is block diagonal.
    pub fn direct_sum(parts: &[Lattice]) -> Result<Self, LatticeError> {
        if parts.is_empty() {
            return Err(LatticeError::InvalidParameter("empty direct sum".into()));
        }
        if parts.len() == 1 {
            return Ok(parts[0].clone());
        }
        let blocks: Vec<&IntMatrix> = parts.iter().map(|l| &l.gram).collect();
        let label = parts
            .iter()
            .map(|l| l.label.clone().unwrap_or_else(|| "L".into()))
            .collect::<Vec<_>>()
            .join("+");
        Lattice::new(IntMatrix::block_diagonal(&blocks), Some(label))
    }

    /// `L(n)`: the same module with the form multiplied by `n`.
    pub fn rescaled(&self, n: i64) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::InvalidParameter("rescaling by 0".into()));
        }
        let label = self.label.as_ref().map(|l| format!("{l}({n})"));
        Lattice::new(self.gram.scale(&BigInt::from(n)), label)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn id(&self) -> LatticeId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// Signed determinant of the Gram matrix.
    pub fn determinant(&self) -> BigInt {
        exactlin::determinant(&self.gram).expect("Gram matrix is square")
    }

    pub fn signature(&self) -> (usize, usize) {
        exactlin::signature(&self.gram).expect("Gram matrix is symmetric and nondegenerate")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().1 == 0
    }

    /// Coordinates of the dual basis, i.e. the columns of `Gram⁻¹`.
    pub fn dual_basis(&self) -> RatMatrix {
        self.gram.to_rational().inverse().expect("Gram matrix is nondegenerate")
    }

    pub fn vector(&self, coords: Vec<BigInt>) -> Result<LatticeVector, LatticeError> {
        if coords.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(LatticeVector {
            owner: self.id,
            coords,
        })
    }

    pub fn vector_i64(&self, coords: &[i64]) -> Result<LatticeVector, LatticeError> {
        self.vector(exactlin::bigvec(coords))
    }

    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        let mut c = vec![BigInt::zero(); self.rank()];
        c[i] = BigInt::one();
        LatticeVector {
            owner: self.id,
            coords: c,
        }
    }

    fn check_owner(&self, x: &LatticeVector) -> Result<(), LatticeError> {
        if x.owner == self.id {
            Ok(())
        } else {
            Err(LatticeError::OwnerMismatch)
        }
    }

    pub fn inner(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt, LatticeError> {
        self.check_owner(x)?;
        self.check_owner(y)?;
        Ok(self.gram.bilinear(&x.coords, &y.coords))
    }

    pub fn norm(&self, x: &LatticeVector) -> Result<BigInt, LatticeError> {
        self.inner(x, x)
    }

    /// Positive generator of the ideal `w·L ⊂ Z`.
    pub fn divisibility(&self, w: &LatticeVector) -> Result<BigInt, LatticeError> {
        self.check_owner(w)?;
        let g = self
            .gram
            .mul_vec(&w.coords)
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        Ok(g)
    }

    /// `x·y ≡ y² (mod 2)` for all `y`; checking the basis suffices since both
    /// sides are additive modulo 2.
    pub fn is_characteristic(&self, x: &LatticeVector) -> Result<bool, LatticeError> {
        self.check_owner(x)?;
        let gx = self.gram.mul_vec(&x.coords);
        Ok((0..self.rank()).all(|i| (&gx[i] - &self.gram[(i, i)]).is_even()))
    }

    pub fn to_record(&self) -> Result<LatticeRecord, LatticeError> {
        Ok(LatticeRecord {
            label: self.label.clone().unwrap_or_default(),
            gram: self.gram.to_i64_rows().ok_or(LatticeError::Overflow)?,
        })
    }
}

/// A vector given by integer coordinates in the basis of its owning lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVector {
    owner: LatticeId,
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn owner(&self) -> LatticeId {
        self.owner
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn combine(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self, LatticeError> {
        if self.owner != other.owner {
            return Err(LatticeError::OwnerMismatch);
        }
        Ok(LatticeVector {
            owner: self.owner,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector {
            owner: self.owner,
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    /// gcd of the coordinates; 1 iff the vector is primitive.
    pub fn content(&self) -> BigInt {
        self.coords.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }
}

/// JSON form of a lattice: `{"label": str, "gram": [[int]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub label: String,
    pub gram: Vec<Vec<i64>>,
}

impl TryFrom<LatticeRecord> for Lattice {
    type Error = LatticeError;

    fn try_from(r: LatticeRecord) -> Result<Self, LatticeError> {
        let gram = IntMatrix::from_rows(&r.gram)?;
        if !gram.is_square() {
            return Err(LinAlgError::NonSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            }
            .into());
        }
        let label = if r.label.is_empty() { None } else { Some(r.label) };
        Lattice::new(gram, label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::smith_normal_form;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn standard_table() {
        let cases = [
            (StandardKind::U, (1, 1), -1, true),
            (StandardKind::A1, (1, 0), 2, true),
            (StandardKind::E8, (8, 0), 1, true),
            (StandardKind::OddUnimodular(22, 2), (22, 2), 1, false),
            (StandardKind::OddUnimodular(3, 1), (3, 1), -1, false),
            (StandardKind::Scaled(-6), (0, 1), -6, true),
        ];
        for (kind, sig, det, even) in cases {
            let l = Lattice::standard(kind).unwrap();
            assert_eq!(l.signature(), sig, "{kind:?}");
            assert_eq!(l.determinant(), b(det), "{kind:?}");
            assert_eq!(l.is_even(), even, "{kind:?}");
        }
    }

    #[test]
    fn e8_invariant_factors_all_one() {
        let e8 = Lattice::standard(StandardKind::E8).unwrap();
        let s = smith_normal_form(e8.gram());
        assert_eq!(s.invariant_factors(), vec![b(1); 8]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            Lattice::standard(StandardKind::Scaled(0)),
            Err(LatticeError::InvalidParameter(_))
        ));
        assert!(matches!(
            Lattice::standard(StandardKind::OddUnimodular(0, 0)),
            Err(LatticeError::InvalidParameter(_))
        ));
        assert!(Lattice::direct_sum(&[]).is_err());
    }

    #[test]
    fn direct_sums() {
        let a1 = Lattice::standard(StandardKind::A1).unwrap();
        let u = Lattice::standard(StandardKind::U).unwrap();
        let e8 = Lattice::standard(StandardKind::E8).unwrap();
        let two_a1 = Lattice::direct_sum(&[a1.clone(), a1.clone()]).unwrap();
        assert_eq!(two_a1.gram(), &IntMatrix::diagonal(&[2, 2]));
        assert_eq!(two_a1.determinant(), b(4));
        assert_eq!(Lattice::direct_sum(std::slice::from_ref(&u)).unwrap(), u);
        let lam = Lattice::direct_sum(&[e8.clone(), e8, u.clone(), u, a1.clone(), a1]).unwrap();
        assert_eq!(lam.rank(), 22);
        assert_eq!(lam.determinant(), b(4));
        assert_eq!(lam.signature(), (20, 2));
        assert!(lam.is_even());
    }

    #[test]
    fn divisibility_examples() {
        let a1 = Lattice::standard(StandardKind::A1).unwrap();
        let u = Lattice::standard(StandardKind::U).unwrap();
        let l = Lattice::direct_sum(&[u, a1]).unwrap();
        let e = l.basis_vector(2);
        assert_eq!(l.divisibility(&e).unwrap(), b(2));
        assert_eq!(l.divisibility(&l.basis_vector(0)).unwrap(), b(1));
        let w = l.vector_i64(&[1, 5, 0]).unwrap();
        assert_eq!(l.divisibility(&w).unwrap(), b(1));
        assert_eq!(l.norm(&w).unwrap(), b(10));
        assert_eq!(
            l.divisibility(&l.vector_i64(&[0, 0, 0]).unwrap()),
            Err(LatticeError::ZeroVector)
        );
    }

    #[test]
    fn characteristic_examples() {
        let i = Lattice::standard(StandardKind::OddUnimodular(22, 2)).unwrap();
        let mut vp = vec![1i64; 22];
        vp.extend([-3, -3]);
        let vprime = i.vector_i64(&vp).unwrap();
        assert!(i.is_characteristic(&vprime).unwrap());
        let mut uu = vec![0i64; 24];
        uu[0] = 1;
        uu[1] = 1;
        let u = i.vector_i64(&uu).unwrap();
        assert_eq!(i.inner(&u, &vprime).unwrap(), b(2));
        assert_eq!(i.norm(&u).unwrap(), b(2));
        assert_eq!(i.norm(&vprime).unwrap(), b(4));

        let hyp = Lattice::standard(StandardKind::U).unwrap();
        assert!(hyp.is_characteristic(&hyp.vector_i64(&[0, 0]).unwrap()).unwrap());
        let i2 = Lattice::standard(StandardKind::OddUnimodular(2, 0)).unwrap();
        assert!(!i2.is_characteristic(&i2.basis_vector(0)).unwrap());
    }

    #[test]
    fn owner_mismatch() {
        let u = Lattice::standard(StandardKind::U).unwrap();
        let a1 = Lattice::direct_sum(&[
            Lattice::standard(StandardKind::A1).unwrap(),
            Lattice::standard(StandardKind::A1).unwrap(),
        ])
        .unwrap();
        let x = u.basis_vector(0);
        let y = a1.basis_vector(0);
        assert_eq!(u.inner(&x, &y), Err(LatticeError::OwnerMismatch));
        assert_eq!(a1.divisibility(&x), Err(LatticeError::OwnerMismatch));
        assert!(matches!(u.vector_i64(&[1]), Err(LatticeError::DimensionMismatch { .. })));
    }

    #[test]
    fn record_roundtrip() {
        let e8 = Lattice::standard(StandardKind::E8).unwrap();
        let r = e8.to_record().unwrap();
        assert_eq!(r.label, "E8");
        let back = Lattice::try_from(r).unwrap();
        assert_eq!(back, e8);
        let bad = LatticeRecord {
            label: String::new(),
            gram: vec![vec![1, 1], vec![1, 1]],
        };
        assert_eq!(Lattice::try_from(bad), Err(LatticeError::Degenerate));
    }

    #[test]
    fn rescaling() {
        let u = Lattice::standard(StandardKind::U).unwrap().rescaled(-1).unwrap();
        assert_eq!(u.signature(), (1, 1));
        assert_eq!(u.gram()[(0, 1)], b(-1));
    }
}
