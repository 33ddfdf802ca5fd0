//! The lattice theory of special fourfolds: the model `Λ₂ ⊕ Λ ⊂ I₂₂,₂`,
//! special sublattices `K ⊃ Λ₂` by discriminant, associated K3 surfaces and
//! cubic fourfolds, surface-class formulas and the construction targets.

mod ambient;
mod assoc;
mod classify;
mod surfaces;
mod targets;

use thiserror::Error;

use crate::discgroup::DiscError;
use crate::exactlin::LinAlgError;
use crate::lattice::LatticeError;
use crate::sublattice::SublatticeError;

pub use ambient::{ambient_model, build_ambient_model, AmbientModel};
pub use assoc::{
    cubic_congruence_oracle, cubic_prime_criterion, has_associated_cubic, has_associated_k3,
    k3_congruence_oracle, k3_discriminant_form, k3_prime_criterion, nonspecial_discriminant_form, nonspecial_form_closed,
};
pub use classify::{
    admissible_discriminant, classify_special_sublattice, label_from_gram, orbit_label, DiscriminantCase,
    DivisorKind, DivisorLabel, SpecialSublattice,
};
pub use surfaces::{
    example_family_table, example_surfaces, surface_discriminant, surface_gram, surface_self_intersection, ExampleRow,
    SurfaceClass,
};
pub use targets::{
    hassett_lemma_check, th81_coverage, th81_reach, th81_targets, theorem_divisor_set, ConditionOutcome, Coverage,
    HassettCondition, HassettReport, TargetFamily, TargetRow,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanoError {
    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),
    #[error("discriminant {0} is not congruent to 0, 2 or 4 mod 8")]
    NotAdmissible(u64),
    #[error("methods disagree for d = {d}: {detail}")]
    MethodDisagreement { d: u64, detail: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Gram matrix shape is not supported: {0}")]
    UnsupportedShape(String),
    #[error("the distinguished class does not have square 10")]
    HNotNorm10,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sublattice(#[from] SublatticeError),
    #[error(transparent)]
    Disc(#[from] DiscError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

pub(crate) fn verify(cond: bool, what: impl FnOnce() -> String) -> Result<(), FanoError> {
    if cond {
        Ok(())
    } else {
        Err(FanoError::InternalVerificationFailed(what()))
    }
}
