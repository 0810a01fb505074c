use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::Rational;
use crate::error::{Error, Result};

/// An element of Q/Z stored as a reduced fraction `num/den` with `0 <= num < den`.
///
/// Denominators of discriminant-form values are small, so machine integers
/// are used; every operation reduces through `i128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: u64,
    den: u64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let d = den as i128;
        let n = num.rem_euclid(d);
        let g = n.gcd(&d);
        QmodZ {
            num: (n / g) as u64,
            den: (d / g) as u64,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The representative in `[0, 1)`.
    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn from_rational(r: &Rational) -> Result<Self> {
        let den = r
            .denom()
            .to_u64()
            .ok_or_else(|| Error::validation("Q/Z denominator too large"))?;
        let num = r.numer().mod_floor(&BigInt::from(den));
        Ok(QmodZ::new(num.to_i128().unwrap_or(0), den))
    }

    pub fn mul_int(&self, k: i128) -> Self {
        let d = self.den as i128;
        let k = k.rem_euclid(d);
        QmodZ::new((self.num as i128 * k) % d, self.den)
    }

    /// Numerator over a prescribed denominator `m` (which must be a multiple of `den`).
    pub fn numerator_over(&self, m: u64) -> u64 {
        debug_assert_eq!(m % self.den, 0);
        self.num * (m / self.den)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rational(&super::parse_rational(text)?)
    }
}

impl Default for QmodZ {
    fn default() -> Self {
        QmodZ::ZERO
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, o: QmodZ) -> QmodZ {
        let l = self.den.lcm(&o.den);
        let n = self.num as i128 * (l / self.den) as i128 + o.num as i128 * (l / o.den) as i128;
        QmodZ::new(n, l)
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(-(self.num as i128), self.den)
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, o: QmodZ) -> QmodZ {
        self + (-o)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_into_unit_interval() {
        assert_eq!(QmodZ::new(4, 3), QmodZ::new(1, 3));
        assert_eq!(QmodZ::new(-1, 4), QmodZ::new(3, 4));
        assert_eq!(QmodZ::new(6, 4).to_string(), "1/2");
        assert!(QmodZ::new(5, 5).is_zero());
    }

    #[test]
    fn parse_accepts_any_representative() {
        assert_eq!(QmodZ::parse("7/3").unwrap(), QmodZ::new(1, 3));
        assert_eq!(QmodZ::parse("-1/2").unwrap(), QmodZ::new(1, 2));
    }

    proptest! {
        #[test]
        fn group_laws(a in -50i128..50, b in -50i128..50, c in -50i128..50,
                      da in 1u64..24, db in 1u64..24, dc in 1u64..24) {
            let (x, y, z) = (QmodZ::new(a, da), QmodZ::new(b, db), QmodZ::new(c, dc));
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!(x + y, y + x);
            prop_assert!((x - x).is_zero());
            prop_assert_eq!(x.mul_int(3), x + x + x);
        }
    }
}
