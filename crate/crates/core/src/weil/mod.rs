//! Exact Weil representation of `SL_2(Z)` on `C[D]` for even signature.

mod matrix;
mod rho;
mod ring;
mod sl2;
mod verify;

pub use matrix::ScaledMatrix;
pub use rho::{rho, rho_generator, weil_order, Generator, WeilRep};
pub use ring::CycRing;
pub use sl2::{mat_mul2, random_gamma, sl2_word, sl2_word_left, word_product, Letter, Mat2, Run, Sl2Word, IDENTITY, S_MAT, T_MAT};
pub use verify::{all_passed, verify_gamma_trivial, verify_relations, CheckReport, Status};
