use num_bigint::BigInt;
use num_integer::Integer;

use super::{CycNum, QmodZ};
use crate::error::{Error, Result};
use crate::fqm::FiniteQuadraticModule;

/// `e(x) = ζ_L^{x·L}` for an order `L` divisible by the denominator of `x`.
pub fn root_of_unity(x: QmodZ, order: u64) -> Result<CycNum> {
    if order == 0 || order % x.den() != 0 {
        return Err(Error::InvalidOrder(format!(
            "{order} is not a multiple of the denominator of {x}"
        )));
    }
    Ok(CycNum::zeta_power(x.numerator_over(order) as i64, order))
}

/// `Σ_{γ ∈ D} e(Q(γ))`, returned at the order `lcm den(Q(γ))`.
pub fn gauss_sum(d: &FiniteQuadraticModule) -> CycNum {
    let level = d.level();
    let mut hist = vec![0u64; level as usize];
    d.for_each_element(|_, coords| {
        hist[d.q_numerator(coords) as usize] += 1;
    });
    let mut order = 1u64;
    for (k, &c) in hist.iter().enumerate() {
        if c > 0 {
            order = order.lcm(&QmodZ::new(k as i128, level).den());
        }
    }
    let counts: Vec<(u64, BigInt)> = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (QmodZ::new(k as i128, level).numerator_over(order), BigInt::from(c)))
        .collect();
    CycNum::from_exponent_counts(&counts, order)
}
