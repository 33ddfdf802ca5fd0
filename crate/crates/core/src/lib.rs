//! Exact lattice theory for special prime Fano fourfolds of degree 10 and
//! index 2.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactlin`]: integer/rational linear algebra (Smith form, Bareiss
//!   determinants, kernels, inertia).
//! * [`lattice`]: integral lattices given by Gram matrices.
//! * [`discgroup`]: discriminant groups and their finite forms, isotropic
//!   subgroups, overlattices, isometry extension.
//! * [`sublattice`]: embedded sublattices, saturation and complements.
//! * [`fano`]: the concrete lattice `I₂₂,₂ ⊃ Λ₂ ⊕ Λ`, the special
//!   sublattices `K`, associated K3/cubic criteria and the example tables.

pub mod discgroup;
pub mod exactlin;
pub mod fano;
pub mod lattice;
pub mod sublattice;

pub use discgroup::{forms_isometric, DiscError, DiscriminantGroup, FiniteSubgroup, QmodTwoZ, QmodZ};
pub use exactlin::{IntMatrix, LinAlgError, RatMatrix, SnfResult};
pub use lattice::{Lattice, LatticeError, LatticeVector, StandardKind};
pub use sublattice::{SublatticeEmbedding, SublatticeError};
