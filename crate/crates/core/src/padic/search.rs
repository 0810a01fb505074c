use super::matrix::{add_mod, mul_mod, PrecisionMatrix};
use crate::error::{Error, Result};

/// Refined quadratic value `Σ y_i² G_ii + 2 Σ_{i<j} y_i y_j G_ij mod 2^{e+1}`.
///
/// Off-diagonal entries only matter modulo `2^e`.
pub fn quadratic_value_2(g: &PrecisionMatrix, y: &[u64]) -> u64 {
    let m = g.modulus();
    let n = g.dim();
    let mut acc = 0u64;
    for i in 0..n {
        if y[i] == 0 {
            continue;
        }
        acc = add_mod(acc, mul_mod(mul_mod(y[i], y[i], m), g.get(i, i), m), m);
        for j in i + 1..n {
            let t = mul_mod(mul_mod(y[i], y[j], m), g.get(i, j), m);
            acc = add_mod(acc, mul_mod(2, t, m), m);
        }
    }
    acc
}

/// Search bound on the number of candidate vectors.
const SEARCH_LIMIT: u64 = 1 << 26;

/// The first primitive `y` (colex order over residues mod `2^e`, first
/// coordinate fastest) with `yᵀGy ≡ 0 mod 2^{e+1}`, where `G` is given at
/// precision `2^{e+1}`.
///
/// Residues mod `2^e` suffice: shifting `y` by `2^e z` changes the value by a
/// multiple of `2^{e+1}`.
pub fn find_isotropic_primitive_2(g: &PrecisionMatrix) -> Result<Vec<u64>> {
    if g.p() != 2 {
        return Err(Error::UnsupportedPrime(g.p()));
    }
    if g.f() < 2 {
        return Err(Error::validation("precision must be 2^{e+1} with e ≥ 1"));
    }
    if !g.is_symmetric() {
        return Err(Error::validation("Gram matrix is not symmetric"));
    }
    let n = g.dim();
    let q = 1u64 << (g.f() - 1);
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let mut y = vec![0u64; n];
    let mut seen = 0u64;
    loop {
        // advance to the next vector in colex order
        let mut k = 0;
        while k < n {
            y[k] += 1;
            if y[k] < q {
                break;
            }
            y[k] = 0;
            k += 1;
        }
        if k == n {
            return Err(Error::NotFound(format!("no primitive isotropic vector mod 2^{} in rank {n}", g.f())));
        }
        seen += 1;
        if seen > SEARCH_LIMIT && (seen as u128) < total {
            return Err(Error::Size(format!("isotropic search exceeded {SEARCH_LIMIT} candidates")));
        }
        if y.iter().all(|x| x % 2 == 0) {
            continue;
        }
        if quadratic_value_2(g, &y) == 0 {
            return Ok(y);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic() {
        let g = PrecisionMatrix::new(2, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(find_isotropic_primitive_2(&g).unwrap(), vec![1, 0]);
    }

    #[test]
    fn seven_ones() {
        let g = PrecisionMatrix::identity(2, 2, 7);
        assert_eq!(find_isotropic_primitive_2(&g).unwrap(), vec![1, 1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn anisotropic_rank_three() {
        let g = PrecisionMatrix::identity(2, 2, 3);
        assert!(matches!(find_isotropic_primitive_2(&g), Err(Error::NotFound(_))));
    }
}
