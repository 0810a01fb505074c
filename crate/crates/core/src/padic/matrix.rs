use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical representative of `x` in `[0, p^f)`.
pub fn reduce_mod(x: i128, p: u64, f: u32) -> u64 {
    x.rem_euclid(p.pow(f) as i128) as u64
}

/// `min(ν_p(x), f)` at precision `p^f`; `None` stands for `+∞`, i.e. `x ≡ 0`.
pub fn valuation(x: u64, p: u64, f: u32) -> Option<u32> {
    let mut x = x % p.pow(f);
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    add_mod(a % m, m - b % m, m)
}

pub(crate) fn pow_mod(mut a: u64, mut n: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while n > 0 {
        if n & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        n >>= 1;
    }
    r
}

/// Inverse of `a` modulo `p^f`, if `a` is a unit.
pub(crate) fn inv_unit(a: u64, p: u64, m: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(crate::linalg::inv_mod(a % m, m))
}

/// Dot product modulo `m`.
pub(crate) fn dot_mod(x: &[u64], y: &[u64], m: u64) -> u64 {
    x.iter().zip(y).fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, m), m))
}

/// A square matrix with entries in `Z/p^f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionMatrix {
    p: u64,
    f: u32,
    entries: Vec<Vec<u64>>,
}

impl PrecisionMatrix {
    pub fn new(p: u64, f: u32, entries: &[Vec<i128>]) -> Result<Self> {
        if f == 0 {
            return Err(Error::validation("precision exponent must be at least 1"));
        }
        if !crate::fqm::is_prime(p) {
            return Err(Error::validation(format!("{p} is not prime")));
        }
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::validation("matrix must be square"));
        }
        let entries = entries.iter().map(|r| r.iter().map(|&x| reduce_mod(x, p, f)).collect()).collect();
        Ok(PrecisionMatrix { p, f, entries })
    }

    pub(crate) fn from_reduced(p: u64, f: u32, entries: Vec<Vec<u64>>) -> Self {
        let m = p.pow(f);
        let entries = entries.into_iter().map(|r| r.into_iter().map(|x| x % m).collect()).collect();
        PrecisionMatrix { p, f, entries }
    }

    pub fn identity(p: u64, f: u32, n: usize) -> Self {
        Self::diagonal(p, f, &vec![1; n])
    }

    pub fn diagonal(p: u64, f: u32, diag: &[u64]) -> Self {
        let n = diag.len();
        let mut entries = vec![vec![0; n]; n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i][i] = d;
        }
        Self::from_reduced(p, f, entries)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    pub fn diagonal_entries(&self) -> Vec<u64> {
        (0..self.dim()).map(|i| self.entries[i][i]).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[i][j] == 0))
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let entries = (0..n).map(|i| (0..n).map(|j| self.entries[j][i]).collect()).collect();
        PrecisionMatrix { p: self.p, f: self.f, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.modulus();
        let n = self.dim();
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] = add_mod(out[i][j], mul_mod(a, other.entries[k][j], m), m);
                }
            }
        }
        PrecisionMatrix { p: self.p, f: self.f, entries: out }
    }

    /// `Sᵀ · self · S`.
    pub fn congruent(&self, s: &Self) -> Self {
        s.transpose().mul(self).mul(s)
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        self.entries.iter().map(|r| dot_mod(r, v, m)).collect()
    }

    /// `xᵀ · self · y`.
    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> u64 {
        dot_mod(x, &self.apply(y), self.modulus())
    }

    /// Determinant modulo `p`.
    pub fn det_mod_p(&self) -> u64 {
        let p = self.p;
        let n = self.dim();
        let mut a: Vec<Vec<u64>> = self.entries.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
        let mut det = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else {
                return 0;
            };
            if piv != c {
                a.swap(piv, c);
                det = (p - det) % p;
            }
            det = mul_mod(det, a[c][c], p);
            let inv = crate::linalg::inv_mod(a[c][c], p);
            for i in c + 1..n {
                let factor = mul_mod(a[i][c], inv, p);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    a[i][j] = sub_mod(a[i][j], mul_mod(factor, a[c][j], p), p);
                }
            }
        }
        det
    }

    pub fn is_unimodular(&self) -> bool {
        self.det_mod_p() != 0
    }

    /// Inverse modulo `p^f`.
    pub fn inverse(&self) -> Result<Self> {
        let (p, m, n) = (self.p, self.modulus(), self.dim());
        let mut a = self.entries.clone();
        let mut inv = Self::identity(p, self.f, n).entries;
        for c in 0..n {
            let piv = (c..n).find(|&i| a[i][c] % p != 0).ok_or(Error::NonUnimodular(p))?;
            a.swap(piv, c);
            inv.swap(piv, c);
            let u = inv_unit(a[c][c], p, m).expect("pivot is a unit");
            for j in 0..n {
                a[c][j] = mul_mod(a[c][j], u, m);
                inv[c][j] = mul_mod(inv[c][j], u, m);
            }
            for i in 0..n {
                if i == c || a[i][c] == 0 {
                    continue;
                }
                let factor = a[i][c];
                for j in 0..n {
                    a[i][j] = sub_mod(a[i][j], mul_mod(factor, a[c][j], m), m);
                    inv[i][j] = sub_mod(inv[i][j], mul_mod(factor, inv[c][j], m), m);
                }
            }
        }
        Ok(PrecisionMatrix { p, f: self.f, entries: inv })
    }

    /// The same entries reduced to a lower precision.
    pub fn truncate(&self, f: u32) -> Self {
        Self::from_reduced(self.p, f.min(self.f), self.entries.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        assert_eq!(reduce_mod(-1, 3, 2), 8);
        assert_eq!(valuation(18, 3, 3), Some(2));
        assert_eq!(valuation(0, 3, 3), None);
        assert_eq!(valuation(27, 3, 3), None);
        for k in -5..5 {
            assert_eq!(reduce_mod(7 + k * 27, 3, 3), 7);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let g = PrecisionMatrix::new(3, 2, &[vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 4]]).unwrap();
        let inv = g.inverse().unwrap();
        assert_eq!(g.mul(&inv), PrecisionMatrix::identity(3, 2, 3));
        let sing = PrecisionMatrix::new(3, 1, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::NonUnimodular(3))));
        assert_eq!(sing.det_mod_p(), 0);
    }
}
