//! Exact arithmetic for discriminant forms (finite quadratic modules).
//!
//! The crate builds forms from Jordan symbols or even lattices, evaluates their
//! Weil representation exactly over cyclotomic fields, materializes the
//! algebraic up/down lift operators attached to isotropic subgroups, and runs
//! the kernel-inclusion oldform test and the old/new splitting on truncated
//! Fourier-coefficient tables. A constructive pipeline produces explicit
//! preimages under the up map, certifying that every vector-valued form is old
//! when a large enough homogeneous p-part is present.

pub mod arith;
pub mod cli;
pub mod error;
pub mod fqm;
pub mod lifts;
pub mod linalg;
pub mod oldnew;
pub mod padic;
pub mod weil;
pub mod zmat;

pub use arith::{CycNum, QmodZ, Rational, ScaledNum};
pub use error::{Error, Result};
pub use fqm::{Element, FiniteQuadraticModule, JordanComponent, JordanSymbol, Subgroup};
