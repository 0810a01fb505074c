//! Discriminant forms: construction, evaluation, invariants, subgroups and
//! isotropic quotients.

mod descriptor;
mod jordan;
mod module;
mod quotient;
mod subgroup;

pub use descriptor::{DescribedForm, FormDescriptor};
pub use jordan::{EvenKind, JordanComponent, JordanSymbol};
pub(crate) use jordan::is_prime;
pub use module::{Element, FiniteQuadraticModule, ENUMERATION_BOUND};
pub use quotient::{quotient, Quotient, OUTSIDE};
pub use subgroup::{is_isotropic, isotropic_subgroups, orthogonal_complement, Subgroup};
