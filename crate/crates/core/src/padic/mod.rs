//! Finite-precision p-adic linear algebra: reductions, unimodular
//! diagonalization over odd primes, orthogonal splitting and isotropic
//! vector searches.

mod form;
mod matrix;
mod odd;
mod search;
mod split;

pub use form::{
    brute_force_two_isotropic, find_two_isotropic, find_two_isotropic_form, prime_power, verify_two_isotropic,
    weakly_independent, Construction, IsotropicPair, TwoIsotropic, ZqForm, BRUTE_FORCE_BOUND,
};
pub use matrix::{reduce_mod, valuation, PrecisionMatrix};
pub use odd::{diagonalize_unimodular_odd, least_nonresidue, legendre, sqrt_mod};
pub use search::{find_isotropic_primitive_2, quadratic_value_2};
pub use split::{split_primitive_pair, PrimitiveSplit};
pub(crate) use form::{combine, to_element};
pub(crate) use matrix::inv_unit;
