//! The up and down maps between `C[D]` and `C[⊔ H_i^⊥/H_i]` as explicit
//! matrices, nicely orthogonal sequences with exact preimages, and the
//! constructive surjectivity certificate.

mod certificate;
mod homomorphism;
mod nice;
mod system;
mod theorem;

pub use certificate::{
    certify_element, surjectivity_certificate, surjectivity_certificate_for, verify_certificate, Certificate,
    ElementCertificate, ImpPart, SplitCase,
};
pub use homomorphism::check_homomorphism;
pub use nice::{
    densify, lift_sparse, lifts_to_basis_vector, nice_sequence, preimage_basis_vector, verify_nice, NiceSequence,
    NiceViolation, ZetaEntry,
};
pub use system::{
    build_lift_system, is_up_surjective, kernel_down, rank_up, LiftBlock, LiftSystem, EXACT_RANK_BOUND, RANK_PRIME,
};
pub use theorem::{
    check_group_structure, check_theorem, corollary_for, part_generators, CorollaryCheck, Fired, Hypothesis,
    PartSummary, TheoremCheck,
};
