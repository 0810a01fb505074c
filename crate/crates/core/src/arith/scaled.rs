use num_bigint::BigInt;
use num_complex::Complex64;

use super::{root_of_unity, CycNum, QmodZ, Rational};
use crate::error::{Error, Result};

/// `|D|^{-k/2} · value` with `k ∈ {0, 1}`; even powers are folded into `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledNum {
    k: u8,
    value: CycNum,
    base: u64,
}

impl ScaledNum {
    pub fn new(k: u32, value: CycNum, base: u64) -> Self {
        assert!(base >= 1);
        let folds = k / 2;
        let mut value = value;
        if folds > 0 {
            let denom = BigInt::from(base).pow(folds);
            value = value.scale(&Rational::new(1.into(), denom));
        }
        ScaledNum {
            k: (k % 2) as u8,
            value,
            base,
        }
    }

    /// The Weil constant `e(−s/8)/√|D|`.
    pub fn weil_constant(signature: u8, order: u64) -> Self {
        let phase = root_of_unity(-QmodZ::new(signature as i128, 8), 8).unwrap();
        ScaledNum::new(1, phase, order)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn value(&self) -> &CycNum {
        &self.value
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn mul(&self, other: &ScaledNum) -> Result<ScaledNum> {
        if self.base != other.base {
            return Err(Error::validation("scaled numbers with different bases"));
        }
        Ok(ScaledNum::new(
            (self.k + other.k) as u32,
            &self.value * &other.value,
            self.base,
        ))
    }

    pub fn embed_complex(&self) -> Complex64 {
        let s = (self.base as f64).powf(-(self.k as f64) / 2.0);
        self.value.embed_complex() * s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_even_powers() {
        let x = ScaledNum::new(3, CycNum::from_integer(6, 1), 3);
        assert_eq!(x.k(), 1);
        assert_eq!(x.value(), &CycNum::from_integer(2, 1));
    }

    #[test]
    fn weil_constant_squares() {
        let c = ScaledNum::weil_constant(2, 3);
        let c2 = c.mul(&c).unwrap();
        assert_eq!(c2.k(), 0);
        // e(−1/2)/3 = −1/3
        assert_eq!(c2.value(), &CycNum::from_rational(Rational::new((-1).into(), 3.into()), 1));
        assert!((c.embed_complex().norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }
}
