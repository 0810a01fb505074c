use serde::{Deserialize, Serialize};

use super::matrix::{inv_unit, mul_mod, sub_mod, PrecisionMatrix};
use crate::error::{Error, Result};

/// A hyperbolic-type pair `(γ, δ)` split off orthogonally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveSplit {
    pub delta: Vec<u64>,
    /// Basis of `U⊥`, the orthogonal complement of `span(γ, δ)`.
    pub complement: Vec<Vec<u64>>,
    /// Gram matrix of `(γ, δ)`, of the form `[[p^w a, 1], [1, p^s b]]`.
    pub block: [[u64; 2]; 2],
}

/// Splits `U = span(γ, δ)` off a unimodular form for a primitive `γ` of
/// non-unit norm, with `γᵀGδ = 1`.
pub fn split_primitive_pair(g: &PrecisionMatrix, gamma: &[u64]) -> Result<PrimitiveSplit> {
    let (p, m, n) = (g.p(), g.modulus(), g.dim());
    if gamma.len() != n {
        return Err(Error::validation("vector length does not match the form"));
    }
    if n < 2 {
        return Err(Error::Rank(format!("rank {n} < 2")));
    }
    let gamma: Vec<u64> = gamma.iter().map(|x| x % m).collect();
    let i = gamma.iter().position(|x| x % p != 0).ok_or(Error::NotPrimitive)?;
    let a = g.bilinear(&gamma, &gamma);
    if a % p != 0 {
        return Err(Error::UnitNorm);
    }
    let ginv = g.inverse()?;
    let scale = inv_unit(gamma[i], p, m).expect("unit coordinate");
    // G δ' = e_i gives γᵀGδ' = γ_i
    let delta: Vec<u64> = ginv.column(i).iter().map(|&x| mul_mod(x, scale, m)).collect();
    let b = g.bilinear(&delta, &delta);
    debug_assert_eq!(g.bilinear(&gamma, &delta), 1 % m);

    let (r, s) = (0..n)
        .flat_map(|r| (r + 1..n).map(move |s| (r, s)))
        .find(|&(r, s)| {
            let minor = sub_mod(mul_mod(gamma[r], delta[s], m), mul_mod(gamma[s], delta[r], m), m);
            minor % p != 0
        })
        .ok_or_else(|| Error::Invariant("γ and δ are dependent mod p".into()))?;

    // H = [[a, 1], [1, b]], H⁻¹ = (ab − 1)⁻¹ [[b, −1], [−1, a]]
    let det = sub_mod(mul_mod(a, b, m), 1, m);
    let det_inv = inv_unit(det, p, m).expect("ab − 1 is a unit");
    let g_gamma = g.apply(&gamma);
    let g_delta = g.apply(&delta);
    let mut complement = Vec::with_capacity(n - 2);
    for k in (0..n).filter(|&k| k != r && k != s) {
        let (wg, wd) = (g_gamma[k], g_delta[k]);
        let alpha = mul_mod(sub_mod(mul_mod(b, wg, m), wd, m), det_inv, m);
        let beta = mul_mod(sub_mod(mul_mod(a, wd, m), wg, m), det_inv, m);
        let mut u = vec![0u64; n];
        u[k] = 1;
        for t in 0..n {
            let shift = (mul_mod(alpha, gamma[t], m) as u128 + mul_mod(beta, delta[t], m) as u128) % m as u128;
            u[t] = sub_mod(u[t], shift as u64, m);
        }
        complement.push(u);
    }
    Ok(PrimitiveSplit { delta, complement, block: [[a, 1 % m], [1 % m, b]] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(g: &PrecisionMatrix, gamma: &[u64], split: &PrimitiveSplit) {
        let mut basis = vec![gamma.to_vec(), split.delta.clone()];
        basis.extend(split.complement.iter().cloned());
        let n = g.dim();
        let cols: Vec<Vec<u64>> = (0..n).map(|r| basis.iter().map(|v| v[r]).collect()).collect();
        let s = PrecisionMatrix::from_reduced(g.p(), g.f(), cols);
        assert!(s.is_unimodular());
        let h = g.congruent(&s);
        for i in 0..n {
            for j in 0..n {
                if (i < 2) != (j < 2) {
                    assert_eq!(h.get(i, j), 0);
                }
            }
        }
        assert_eq!(h.get(0, 1), 1);
        assert_eq!(h.get(0, 0), split.block[0][0]);
        assert_eq!(h.get(1, 1), split.block[1][1]);
    }

    #[test]
    fn hyperbolic_plane() {
        let g = PrecisionMatrix::new(3, 1, &[vec![0, 1], vec![1, 0]]).unwrap();
        let split = split_primitive_pair(&g, &[1, 0]).unwrap();
        assert_eq!(split.delta, vec![0, 1]);
        assert!(split.complement.is_empty());
    }

    #[test]
    fn norm_three_vector() {
        let g = PrecisionMatrix::identity(3, 2, 4);
        let gamma = [1, 1, 1, 0];
        let split = split_primitive_pair(&g, &gamma).unwrap();
        assert_eq!(split.complement.len(), 2);
        check(&g, &gamma, &split);
    }

    #[test]
    fn errors() {
        let g = PrecisionMatrix::identity(3, 2, 4);
        assert!(matches!(split_primitive_pair(&g, &[3, 0, 0, 0]), Err(Error::NotPrimitive)));
        assert!(matches!(split_primitive_pair(&g, &[1, 0, 0, 0]), Err(Error::UnitNorm)));
    }

    #[test]
    fn two_adic_pairing() {
        // bilinear part of an odd 2-adic block sum, precision 2^2
        let g = PrecisionMatrix::new(2, 2, &[vec![1, 0, 0, 0], vec![0, 3, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
            .unwrap();
        let gamma = [1, 1, 0, 0];
        let split = split_primitive_pair(&g, &gamma).unwrap();
        check(&g, &gamma, &split);
    }
}
