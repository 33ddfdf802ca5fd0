//! Sublattices of an ambient lattice, given by integer basis matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{self, hermite_columns, kernel_basis, smith_normal_form, IntMatrix};
use crate::lattice::{Lattice, LatticeError, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SublatticeError {
    #[error("induced Gram matrix is degenerate")]
    Degenerate,
    #[error("basis columns are linearly dependent")]
    DependentColumns,
    #[error("basis has {got} rows, ambient rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A sublattice `S ⊂ L`: the columns of `basis` are ambient coordinates of a
/// basis of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublatticeEmbedding {
    ambient: Lattice,
    basis: IntMatrix,
}

/// Primitive closure together with the index of the original sublattice in it.
#[derive(Debug, Clone)]
pub struct Saturation {
    pub embedding: SublatticeEmbedding,
    pub index: BigInt,
}

impl SublatticeEmbedding {
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self, SublatticeError> {
        if basis.rows() != ambient.rank() {
            return Err(SublatticeError::DimensionMismatch {
                expected: ambient.rank(),
                got: basis.rows(),
            });
        }
        if smith_normal_form(&basis).rank() != basis.cols() {
            return Err(SublatticeError::DependentColumns);
        }
        Ok(SublatticeEmbedding { ambient, basis })
    }

    pub fn from_vectors(ambient: Lattice, vectors: &[LatticeVector]) -> Result<Self, SublatticeError> {
        for v in vectors {
            if v.owner() != ambient.id() {
                return Err(LatticeError::OwnerMismatch.into());
            }
        }
        let cols: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
        let basis = IntMatrix::from_columns(ambient.rank(), &cols).expect("vector lengths checked by owner");
        Self::new(ambient, basis)
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        self.basis
            .columns()
            .into_iter()
            .map(|c| self.ambient.vector(c).expect("column length equals ambient rank"))
            .collect()
    }

    /// `basisᵀ·G·basis`.
    pub fn gram(&self) -> IntMatrix {
        self.basis.congruence(self.ambient.gram()).expect("shapes agree")
    }

    pub fn induced_lattice(&self) -> Result<Lattice, SublatticeError> {
        match Lattice::new(self.gram(), None) {
            Err(LatticeError::Degenerate) => Err(SublatticeError::Degenerate),
            other => Ok(other?),
        }
    }

    /// `Q·S ∩ L`, in Hermite form, with `[sat(S) : S]`.
    pub fn saturation(&self) -> Saturation {
        let k = self.rank();
        let s = smith_normal_form(&self.basis);
        let index = s.invariant_factors().iter().fold(BigInt::one(), |acc, d| acc * d);
        let u_inv = s
            .u
            .to_rational()
            .inverse()
            .and_then(|m| m.to_integer())
            .expect("Smith transform is unimodular");
        let cols: Vec<Vec<BigInt>> = (0..k).map(|j| u_inv.column(j)).collect();
        let basis = hermite_columns(self.ambient.rank(), &cols);
        Saturation {
            embedding: SublatticeEmbedding {
                ambient: self.ambient.clone(),
                basis,
            },
            index,
        }
    }

    pub fn is_primitive(&self) -> bool {
        smith_normal_form(&self.basis)
            .invariant_factors()
            .iter()
            .all(One::is_one)
    }

    /// `{x ∈ L : x·s = 0 for all s ∈ S}`, always saturated, Hermite basis.
    pub fn orthogonal_complement(&self) -> SublatticeEmbedding {
        let pairing = self
            .basis
            .transpose()
            .checked_mul(self.ambient.gram())
            .expect("shapes agree");
        SublatticeEmbedding {
            ambient: self.ambient.clone(),
            basis: kernel_basis(&pairing),
        }
    }

    /// Coordinates of an ambient vector in the sublattice basis, if it lies in `S`.
    pub fn coordinates_of(&self, x: &LatticeVector) -> Result<Option<Vec<BigInt>>, SublatticeError> {
        if x.owner() != self.ambient.id() {
            return Err(LatticeError::OwnerMismatch.into());
        }
        let s = smith_normal_form(&self.basis);
        let y = s.u.mul_vec(x.coords());
        let k = self.rank();
        let mut z = Vec::with_capacity(k);
        for (i, yi) in y.iter().enumerate() {
            if i < k {
                let d = &s.d[(i, i)];
                if !yi.is_multiple_of(d) {
                    return Ok(None);
                }
                z.push(yi / d);
            } else if !yi.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(s.v.mul_vec(&z)))
    }

    pub fn contains(&self, x: &LatticeVector) -> Result<bool, SublatticeError> {
        Ok(self.coordinates_of(x)?.is_some())
    }

    /// Positive generator of the ideal `S·x ⊂ Z`, or 0 when `x ⊥ S`.
    pub fn pairing_ideal(&self, x: &LatticeVector) -> Result<BigInt, SublatticeError> {
        if x.owner() != self.ambient.id() {
            return Err(LatticeError::OwnerMismatch.into());
        }
        let gx = self.ambient.gram().mul_vec(x.coords());
        let pairings = self.basis.transpose().mul_vec(&gx);
        Ok(pairings.iter().fold(BigInt::zero(), |acc, p| acc.gcd(p)))
    }

    /// Same sublattice, image basis under an ambient integer matrix.
    pub fn mapped(&self, g: &IntMatrix) -> Result<SublatticeEmbedding, SublatticeError> {
        let basis = g.checked_mul(&self.basis).map_err(LatticeError::from)?;
        Self::new(self.ambient.clone(), basis)
    }

    /// Determinant of the induced Gram matrix.
    pub fn determinant(&self) -> BigInt {
        exactlin::determinant(&self.gram()).expect("square")
    }
}
