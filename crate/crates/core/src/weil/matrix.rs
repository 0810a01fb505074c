use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use super::ring::CycRing;
use crate::arith::{CycNum, Rational};
use crate::error::{Error, Result};

/// `|D|^{-k/2} · scale · M` with `M` a matrix over `Z[ζ_L]`.
///
/// After every operation the content of `M` is moved into `scale` and the
/// first nonzero coefficient of `M` is made positive, so two matrices with
/// the same `k` are equal exactly when all their fields agree.
#[derive(Clone, Debug)]
pub struct ScaledMatrix {
    rows: usize,
    cols: usize,
    ring: Arc<CycRing>,
    base: u64,
    k: u8,
    scale: Rational,
    data: Vec<i128>,
}

impl ScaledMatrix {
    pub(crate) fn from_raw(
        rows: usize,
        cols: usize,
        ring: Arc<CycRing>,
        base: u64,
        k: u8,
        data: Vec<i128>,
    ) -> Self {
        let mut m = ScaledMatrix { rows, cols, ring, base, k, scale: Rational::one(), data };
        m.normalize();
        m
    }

    pub fn identity(n: usize, ring: Arc<CycRing>, base: u64) -> Self {
        let phi = ring.phi();
        let mut data = vec![0i128; n * n * phi];
        for i in 0..n {
            data[(i * n + i) * phi] = 1;
        }
        ScaledMatrix::from_raw(n, n, ring, base, 0, data)
    }

    /// An integer matrix (row-major) viewed over `Z[ζ_L]`.
    pub fn from_integers(rows: usize, cols: usize, entries: &[i64], ring: Arc<CycRing>, base: u64) -> Self {
        let phi = ring.phi();
        let mut data = vec![0i128; rows * cols * phi];
        for (i, &x) in entries.iter().enumerate() {
            data[i * phi] = x as i128;
        }
        ScaledMatrix::from_raw(rows, cols, ring, base, 0, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn order(&self) -> u64 {
        self.ring.order()
    }

    fn slot(&self, i: usize, j: usize) -> &[i128] {
        let phi = self.ring.phi();
        &self.data[(i * self.cols + j) * phi..(i * self.cols + j + 1) * phi]
    }

    /// Entry `(i, j)` with the rational scale applied; the `|D|^{-k/2}`
    /// factor is not included.
    pub fn entry(&self, i: usize, j: usize) -> CycNum {
        let coeffs = self
            .slot(i, j)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)) * &self.scale)
            .collect();
        CycNum::from_coeffs(coeffs, self.order())
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    fn normalize(&mut self) {
        let g = self.data.iter().fold(0i128, |acc, &x| acc.gcd(&x));
        if g == 0 {
            self.scale = Rational::zero();
            self.k = 0;
            return;
        }
        let lead_negative = self.data.iter().find(|&&x| x != 0).map_or(false, |&x| x < 0);
        let g = if lead_negative { -g } else { g };
        if g != 1 {
            for x in self.data.iter_mut() {
                *x /= g;
            }
            self.scale *= Rational::from_integer(BigInt::from(g));
        }
        if self.k == 1 {
            let r = self.base.sqrt();
            if r * r == self.base {
                self.k = 0;
                self.scale /= Rational::from_integer(BigInt::from(r));
            }
        }
    }

    pub fn mul(&self, other: &ScaledMatrix) -> Result<ScaledMatrix> {
        if self.cols != other.rows {
            return Err(Error::validation("matrix dimensions do not match"));
        }
        if self.order() != other.order() {
            return Err(Error::validation("matrices over different cyclotomic orders"));
        }
        if self.k == 1 && other.k == 1 && self.base != other.base {
            return Err(Error::validation("matrices with different |D| scalings"));
        }
        let base = if self.k == 1 || other.k == 0 { self.base } else { other.base };
        let phi = self.ring.phi();
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut data = vec![0i128; n * p * phi];
        let mut scratch = Vec::new();
        for i in 0..n {
            for t in 0..m {
                let a = self.slot(i, t);
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..p {
                    let b = other.slot(t, j);
                    let out = &mut data[(i * p + j) * phi..(i * p + j + 1) * phi];
                    self.ring.mul_add(a, b, out, &mut scratch);
                }
            }
        }
        let mut scale = &self.scale * &other.scale;
        let mut k = self.k + other.k;
        if k == 2 {
            k = 0;
            scale /= Rational::from_integer(BigInt::from(base));
        }
        let mut out = ScaledMatrix::from_raw(n, p, self.ring.clone(), base, k, data);
        out.scale *= scale;
        Ok(out)
    }

    /// Multiplies column `j` by `ζ^{exps[j]}`.
    pub fn mul_diagonal_right(&self, exps: &[u64]) -> ScaledMatrix {
        let phi = self.ring.phi();
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                data.extend(self.ring.shift(self.slot(i, j), exps[j]));
            }
        }
        debug_assert_eq!(data.len(), self.rows * self.cols * phi);
        let mut out = ScaledMatrix::from_raw(self.rows, self.cols, self.ring.clone(), self.base, self.k, data);
        out.scale *= &self.scale;
        out
    }

    pub fn pow(&self, e: u32) -> Result<ScaledMatrix> {
        let mut acc = ScaledMatrix::identity(self.rows, self.ring.clone(), self.base);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn conj_transpose(&self) -> ScaledMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.extend(self.ring.conj(self.slot(i, j)));
            }
        }
        let mut out = ScaledMatrix::from_raw(self.cols, self.rows, self.ring.clone(), self.base, self.k, data);
        out.scale *= &self.scale;
        out
    }

    /// Re-expresses a `k = 1` matrix over `new_base` where `base = new_base·m²`.
    pub fn rebase(&self, new_base: u64) -> Result<ScaledMatrix> {
        let mut out = self.clone();
        if self.k == 0 {
            out.base = new_base;
            return Ok(out);
        }
        if new_base == 0 || self.base % new_base != 0 {
            return Err(Error::validation("rebase: new base does not divide the old one"));
        }
        let q = self.base / new_base;
        let m = q.sqrt();
        if m * m != q {
            return Err(Error::validation("rebase: quotient of bases is not a square"));
        }
        out.base = new_base;
        out.scale /= Rational::from_integer(BigInt::from(m));
        out.normalize();
        Ok(out)
    }

    /// First entry `(i, j)` at which the two matrices differ.
    pub fn first_difference(&self, other: &ScaledMatrix) -> Option<(usize, usize)> {
        if self == other {
            return None;
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Some((usize::MAX, usize::MAX));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entry(i, j);
                let b = other.entry(i, j);
                if a != b || (self.k != other.k && !a.is_zero()) {
                    return Some((i, j));
                }
            }
        }
        Some((0, 0))
    }

    /// The matrix as a table of cyclotomic numbers together with `k` and `|D|`.
    pub fn to_cyc(&self) -> Vec<Vec<CycNum>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Largest absolute coefficient, as a crude size indicator.
    pub fn height(&self) -> i128 {
        self.data.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl PartialEq for ScaledMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols || self.order() != other.order() {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.k != other.k {
            return if self.k == 1 {
                sqrt_multiple(self, other)
            } else {
                sqrt_multiple(other, self)
            };
        }
        (self.k == 0 || self.base == other.base) && self.scale == other.scale && self.data == other.data
    }
}

/// Whether `a = b` for `a` carrying `|D|^{-1/2}` and `b` not, i.e. whether
/// `a`'s cyclotomic part is `√|D|` times `b`'s.
///
/// Checked as exact proportionality with ratio `r`, the exact identity
/// `r² = |D|`, and the sign of `r` from the complex embedding.
fn sqrt_multiple(a: &ScaledMatrix, b: &ScaledMatrix) -> bool {
    let ring = &a.ring;
    let phi = ring.phi();
    let n = a.rows * a.cols;
    let Some(p) = (0..n).find(|&i| b.data[i * phi..(i + 1) * phi].iter().any(|&x| x != 0)) else {
        return false;
    };
    let xp = &a.data[p * phi..(p + 1) * phi];
    let yp = &b.data[p * phi..(p + 1) * phi];
    let mut scratch = Vec::new();
    for i in 0..n {
        let x = &a.data[i * phi..(i + 1) * phi];
        let y = &b.data[i * phi..(i + 1) * phi];
        let mut lhs = vec![0i128; phi];
        let mut rhs = vec![0i128; phi];
        ring.mul_add(x, yp, &mut lhs, &mut scratch);
        ring.mul_add(y, xp, &mut rhs, &mut scratch);
        if lhs != rhs {
            return false;
        }
    }
    // (s_a·x_p)² = |D|·(s_b·y_p)²
    let mut x2 = vec![0i128; phi];
    let mut y2 = vec![0i128; phi];
    ring.mul_add(xp, xp, &mut x2, &mut scratch);
    ring.mul_add(yp, yp, &mut y2, &mut scratch);
    let fa = &a.scale * &a.scale;
    let fb = &b.scale * &b.scale * Rational::from_integer(BigInt::from(a.base));
    let squares_match = x2.iter().zip(&y2).all(|(&u, &v)| {
        Rational::from_integer(BigInt::from(u)) * &fa == Rational::from_integer(BigInt::from(v)) * &fb
    });
    if !squares_match {
        return false;
    }
    let embed = |v: &[i128]| -> num_complex::Complex64 {
        let l = ring.order() as f64;
        v.iter()
            .enumerate()
            .map(|(i, &c)| num_complex::Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * i as f64 / l))
            .sum()
    };
    let ratio = embed(xp) / embed(yp);
    let sign = if a.scale.is_negative() != b.scale.is_negative() { -1.0 } else { 1.0 };
    sign * ratio.re > 0.0
}

impl Eq for ScaledMatrix {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn folding_and_equality() {
        let ring = Arc::new(CycRing::new(4));
        let a = ScaledMatrix::from_integers(1, 1, &[2], ring.clone(), 3);
        let b = ScaledMatrix::from_integers(1, 1, &[4], ring.clone(), 3);
        assert_ne!(a, b);
        let mut c = ScaledMatrix::from_raw(1, 1, ring.clone(), 3, 1, vec![3, 0]);
        // (√3/√3·…)² : k=1 · k=1 folds to k=0 with factor 1/3
        c = c.mul(&c).unwrap();
        assert_eq!(c.k(), 0);
        assert_eq!(c, ScaledMatrix::from_integers(1, 1, &[3], ring.clone(), 3));
        assert_eq!(c.entry(0, 0), CycNum::from_integer(3, 4));
        assert_eq!(*a.scale(), rat(2, 1));
    }

    #[test]
    fn square_base_collapses() {
        let ring = Arc::new(CycRing::new(8));
        let a = ScaledMatrix::from_raw(1, 1, ring.clone(), 4, 1, vec![2, 0, 0, 0]);
        assert_eq!(a, ScaledMatrix::identity(1, ring, 4));
    }

    #[test]
    fn rebase_divides_scale() {
        let ring = Arc::new(CycRing::new(8));
        let a = ScaledMatrix::from_raw(1, 1, ring.clone(), 12, 1, vec![1, 0, 0, 0]);
        let b = a.rebase(3).unwrap();
        assert_eq!(b.base(), 3);
        assert_eq!(*b.scale(), rat(1, 2));
        assert!(a.rebase(5).is_err());
    }

    #[test]
    fn conjugate_transpose_of_zeta() {
        let ring = Arc::new(CycRing::new(4));
        let a = ScaledMatrix::from_raw(1, 2, ring.clone(), 1, 0, vec![0, 1, 1, 0]);
        let b = a.conj_transpose();
        assert_eq!(b.rows(), 2);
        assert_eq!(b.entry(0, 0), CycNum::zeta_power(-1, 4));
        let p = a.mul(&b).unwrap();
        assert_eq!(p, ScaledMatrix::from_integers(1, 1, &[2], ring, 1));
    }
}
