//! Exact linear algebra over Q by fraction-free (Bareiss) elimination, and
//! ranks modulo a prime for large certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// Row echelon form produced by Bareiss elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Clears denominators row by row.
pub fn integerize(m: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

pub fn echelon(m: &[Vec<BigInt>], cols: usize) -> Echelon {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let n = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots, cols }
}

pub fn rank(m: &[Vec<BigInt>], cols: usize) -> usize {
    echelon(m, cols).rank()
}

pub fn rank_rational(m: &[Vec<Rational>], cols: usize) -> usize {
    rank(&integerize(m), cols)
}

/// A basis of `{x : m·x = 0}`, one vector per free column, with that
/// coordinate equal to 1 and every other free coordinate 0.
pub fn kernel(m: &[Vec<BigInt>], cols: usize) -> Vec<Vec<Rational>> {
    let e = echelon(m, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rational::zero(); cols];
        x[f] = Rational::one();
        for (i, &p) in e.pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for j in p + 1..cols {
                if !x[j].is_zero() && !e.rows[i][j].is_zero() {
                    s += &x[j] * Rational::from_integer(e.rows[i][j].clone());
                }
            }
            x[p] = -s / Rational::from_integer(e.rows[i][p].clone());
        }
        out.push(x);
    }
    out
}

pub fn kernel_rational(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    kernel(&integerize(m), cols)
}

/// Scales a rational vector to a primitive integer vector with positive leading entry.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        let lead_negative = w.iter().find(|x| !x.is_zero()).map_or(false, |x| x.is_negative());
        let g = if lead_negative { -g } else { g };
        for x in w.iter_mut() {
            *x = &*x / &g;
        }
    }
    w
}

/// Rank of a dense matrix over `F_p`.
pub fn rank_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> usize {
    let n = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(piv) = (r..n).find(|&i| a[i][c] % p != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c] % p, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c] % p;
            if f == 0 {
                continue;
            }
            let f = f * inv % p;
            for j in c..cols {
                let t = f * prow[j] % p;
                row[j] = (row[j] + p - t) % p;
            }
        }
        r += 1;
    }
    r
}

/// Inverse of a unit modulo `m`.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn ints(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(m: &[Vec<BigInt>], x: &[Rational]) -> Vec<Rational> {
        m.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| Rational::from_integer(a.clone()) * b).sum())
            .collect()
    }

    #[test]
    fn kernel_of_single_row() {
        let m = ints(&[&[1, 0, 1, 0]]);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 3);
        assert!(k.contains(&vec![rat(-1, 1), rat(0, 1), rat(1, 1), rat(0, 1)]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ints(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(&ints(&[&[0, 2], &[3, 4]]), 2), 2);
        assert_eq!(rank(&[], 3), 0);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank_mod_p(vec![vec![3, 0], vec![0, 3]], 3), 0);
    }

    #[test]
    fn primitive_scaling() {
        let v = primitive_integer(&[rat(-1, 2), rat(1, 3), rat(0, 1)]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..6, cols in 1usize..7,
                        entries in proptest::collection::vec(-3i64..4, 42)) {
            let m: Vec<Vec<BigInt>> = (0..rows)
                .map(|i| (0..cols).map(|j| BigInt::from(entries[i * 7 + j])).collect())
                .collect();
            let k = kernel(&m, cols);
            prop_assert_eq!(k.len() + rank(&m, cols), cols);
            for v in &k {
                prop_assert!(mul(&m, v).iter().all(|x| x.is_zero()));
            }
            let kk: Vec<Vec<Rational>> = k.clone();
            prop_assert_eq!(rank_rational(&kk, cols), k.len());
            let mp: Vec<Vec<u64>> = (0..rows)
                .map(|i| (0..cols).map(|j| entries[i * 7 + j].rem_euclid(1_000_003) as u64).collect())
                .collect();
            prop_assert!(rank_mod_p(mp, 1_000_003) <= rank(&m, cols));
        }
    }
}
