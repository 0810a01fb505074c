use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{format_rational, Rational};
use crate::error::{Error, Result};

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// from `Φ_n = Π_{d|n} (x^d − 1)^{μ(n/d)}`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut poly = vec![1i64];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i64; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            let d = d as usize;
            let qlen = poly.len() - d;
            let mut q = vec![0i64; qlen];
            for k in 0..qlen {
                let prev = if k >= d { q[k - d] } else { 0 };
                q[k] = prev - poly[k];
            }
            poly = q;
        }
    }
    poly
}

/// Reduces `Σ coeffs[k] x^k` modulo the monic polynomial `phi`.
fn reduce_mod(mut coeffs: Vec<Rational>, phi: &[i64]) -> Vec<Rational> {
    let deg = phi.len() - 1;
    for k in (deg..coeffs.len()).rev() {
        let c = std::mem::replace(&mut coeffs[k], Rational::zero());
        if c.is_zero() {
            continue;
        }
        for (i, &p) in phi[..deg].iter().enumerate() {
            if p != 0 {
                coeffs[k - deg + i] -= &c * Rational::from_integer(BigInt::from(p));
            }
        }
    }
    coeffs.truncate(deg);
    coeffs.resize(deg, Rational::zero());
    coeffs
}

/// An element of Q(ζ_L) in the power basis `ζ^0, …, ζ^{φ(L)−1}`.
///
/// Equality is equality of field elements: values of different orders are
/// compared after lifting both to the lcm of the orders.
#[derive(Clone, Debug)]
pub struct CycNum {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        CycNum {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn from_rational(r: Rational, order: u64) -> Self {
        let mut z = CycNum::zero(order);
        z.coeffs[0] = r;
        z
    }

    pub fn one(order: u64) -> Self {
        CycNum::from_rational(Rational::one(), order)
    }

    pub fn from_integer(n: i64, order: u64) -> Self {
        CycNum::from_rational(Rational::from_integer(BigInt::from(n)), order)
    }

    /// `Σ_k counts[k] ζ_L^k` for arbitrary integer exponent counts.
    pub fn from_exponent_counts(counts: &[(u64, BigInt)], order: u64) -> Self {
        let mut raw = vec![Rational::zero(); order as usize];
        for (k, c) in counts {
            raw[(*k % order) as usize] += Rational::from_integer(c.clone());
        }
        CycNum {
            order,
            coeffs: reduce_mod(raw, &cyclotomic_polynomial(order)),
        }
    }

    /// `Σ_k coeffs[k] ζ_L^k` for a coefficient vector of any length.
    pub fn from_coeffs(coeffs: Vec<Rational>, order: u64) -> Self {
        let mut raw = coeffs;
        if raw.len() < euler_phi(order) as usize {
            raw.resize(euler_phi(order) as usize, Rational::zero());
        }
        CycNum {
            order,
            coeffs: reduce_mod(raw, &cyclotomic_polynomial(order)),
        }
    }

    /// `ζ_L^k`.
    pub fn zeta_power(k: i64, order: u64) -> Self {
        let k = k.rem_euclid(order as i64) as u64;
        CycNum::from_exponent_counts(&[(k, BigInt::one())], order)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the number lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Embeds into Q(ζ_M) for a multiple `M` of the order via `ζ_L = ζ_M^{M/L}`.
    pub fn lift(&self, new_order: u64) -> Result<Self> {
        if new_order % self.order != 0 {
            return Err(Error::InvalidOrder(format!(
                "{new_order} is not a multiple of {}",
                self.order
            )));
        }
        if new_order == self.order {
            return Ok(self.clone());
        }
        let m = (new_order / self.order) as usize;
        let mut raw = vec![Rational::zero(); new_order as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * m] = c.clone();
        }
        Ok(CycNum {
            order: new_order,
            coeffs: reduce_mod(raw, &cyclotomic_polynomial(new_order)),
        })
    }

    fn common(&self, other: &CycNum) -> (CycNum, CycNum) {
        let l = self.order.lcm(&other.order);
        (self.lift(l).unwrap(), other.lift(l).unwrap())
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let l = self.order as usize;
        let mut raw = vec![Rational::zero(); l];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[(l - k) % l] += c;
        }
        CycNum {
            order: self.order,
            coeffs: reduce_mod(raw, &cyclotomic_polynomial(self.order)),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CycNum::one(self.order);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Floating evaluation at `ζ_L = exp(2πi/L)`; used only for sign decisions.
    pub fn embed_complex(&self) -> Complex64 {
        let l = self.order as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / l;
            z += Complex64::new(angle.cos(), angle.sin()) * v;
        }
        z
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &CycNum) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.common(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycNum {}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, other: &CycNum) -> CycNum {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, other: &CycNum) -> CycNum {
        self + &(-other)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, other: &CycNum) -> CycNum {
        let (a, b) = self.common(other);
        let n = a.coeffs.len();
        let mut raw = vec![Rational::zero(); 2 * n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        CycNum {
            order: a.order,
            coeffs: reduce_mod(raw, &cyclotomic_polynomial(a.order)),
        }
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = if c.abs().is_one() && k > 0 {
                if c.is_negative() { "-".to_string() } else { String::new() }
            } else {
                format_rational(c)
            };
            terms.push(match k {
                0 => coeff,
                1 => format!("{coeff}z{}", self.order),
                _ => format!("{coeff}z{}^{k}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() as u64 - 1, euler_phi(105));
        assert!(p105.contains(&-2));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycNum::zeta_power(1, 4);
        assert_eq!(&i * &i, CycNum::from_integer(-1, 4));
    }

    #[test]
    fn norm_of_one_plus_zeta3() {
        let one = CycNum::one(3);
        let a = &one + &CycNum::zeta_power(1, 3);
        let b = &one + &CycNum::zeta_power(2, 3);
        assert_eq!(&a * &b, one);
    }

    #[test]
    fn lift_matches_direct_power() {
        let i = CycNum::zeta_power(1, 4);
        assert_eq!(i.lift(8).unwrap(), CycNum::zeta_power(2, 8));
        assert_eq!(i, CycNum::zeta_power(2, 8));
        assert!(i.lift(6).is_err());
    }

    #[test]
    fn embedding_of_i_sqrt3() {
        let z = &CycNum::one(3) + &CycNum::zeta_power(1, 3).scale(&Rational::from_integer(2.into()));
        let c = z.embed_complex();
        assert!(c.re.abs() < 1e-9);
        assert!((c.im - 3f64.sqrt()).abs() < 1e-9);
    }

    fn arb_cyc(order: u64) -> impl Strategy<Value = CycNum> {
        let phi = euler_phi(order) as usize;
        proptest::collection::vec(-5i64..5, phi).prop_map(move |v| {
            let counts: Vec<(u64, BigInt)> =
                v.iter().enumerate().map(|(k, &c)| (k as u64, BigInt::from(c))).collect();
            CycNum::from_exponent_counts(&counts, order)
        })
    }

    proptest! {
        #[test]
        fn field_laws((a, b, c) in prop::sample::select(vec![1u64, 3, 4, 5, 8, 12, 15])
            .prop_flat_map(|o| (arb_cyc(o), arb_cyc(o), arb_cyc(o)))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            let ea = a.embed_complex();
            let eb = b.embed_complex();
            let eab = (&a * &b).embed_complex();
            prop_assert!((ea * eb - eab).norm() < 1e-6);
        }

        #[test]
        fn roots_of_unity_multiply(k in -40i64..40, j in -40i64..40,
                                  order in prop::sample::select(vec![2u64, 6, 7, 9, 10, 24])) {
            let z = &CycNum::zeta_power(k, order) * &CycNum::zeta_power(j, order);
            prop_assert_eq!(z, CycNum::zeta_power(k + j, order));
            prop_assert_eq!(CycNum::zeta_power(k, order).pow(order as u32), CycNum::one(order));
            prop_assert_eq!(&CycNum::zeta_power(k, order) * &CycNum::zeta_power(k, order).conj(),
                            CycNum::one(order));
        }
    }
}
