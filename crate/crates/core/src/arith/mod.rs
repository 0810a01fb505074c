//! Exact scalars: rationals, values in Q/Z, cyclotomic numbers and numbers
//! carrying a symbolic power of `|D|^{-1/2}`.

mod cyclotomic;
mod gauss;
mod qmodz;
mod rational;
mod scaled;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycNum};
pub use gauss::{gauss_sum, root_of_unity};
pub use qmodz::QmodZ;
pub use rational::{format_rational, parse_rational, rat, rational_text, rational_text_rows, rational_text_vec, Rational};
pub use scaled::ScaledNum;
