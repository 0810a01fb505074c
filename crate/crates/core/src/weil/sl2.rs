use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = [[i64; 2]; 2];

pub const S_MAT: Mat2 = [[0, -1], [1, 0]];
pub const T_MAT: Mat2 = [[1, 1], [0, 1]];
pub const T_INV_MAT: Mat2 = [[1, -1], [0, 1]];
pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
    TInv,
}

impl Letter {
    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::S => S_MAT,
            Letter::T => T_MAT,
            Letter::TInv => T_INV_MAT,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::S => write!(f, "S"),
            Letter::T => write!(f, "T"),
            Letter::TInv => write!(f, "T^-1"),
        }
    }
}

/// A word in `S`, `T`, `T^{-1}` together with the matrix it multiplies out to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Word {
    pub matrix: Mat2,
    pub word: Vec<Letter>,
}

impl Sl2Word {
    pub fn product(&self) -> Mat2 {
        word_product(&self.word)
    }

    /// The word with consecutive `T^{±1}` letters merged into powers and `S` letters counted.
    pub fn runs(&self) -> Vec<Run> {
        let mut runs: Vec<Run> = Vec::new();
        for &l in &self.word {
            let step = match l {
                Letter::S => Run::S(1),
                Letter::T => Run::T(1),
                Letter::TInv => Run::T(-1),
            };
            match (runs.last_mut(), step) {
                (Some(Run::T(q)), Run::T(d)) => *q += d,
                (Some(Run::S(n)), Run::S(_)) => *n += 1,
                _ => runs.push(step),
            }
        }
        runs.retain(|r| *r != Run::T(0));
        runs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Run {
    S(u32),
    T(i64),
}

pub fn mat_mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn word_product(word: &[Letter]) -> Mat2 {
    word.iter().fold(IDENTITY, |acc, l| mat_mul2(&acc, &l.matrix()))
}

fn det(m: &Mat2) -> i128 {
    m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128
}

fn push_t_power(word: &mut Vec<Letter>, q: i64) {
    let l = if q >= 0 { Letter::T } else { Letter::TInv };
    word.extend(std::iter::repeat(l).take(q.unsigned_abs() as usize));
}

/// Decomposition by the Euclidean algorithm on the bottom row, acting by
/// right multiplication with `T^q` and `S^{-1}`.
pub fn sl2_word(m: Mat2) -> Result<Sl2Word> {
    if det(&m) != 1 {
        return Err(Error::NotInSl2(format!("{m:?} has determinant {}", det(&m))));
    }
    let mut cur = m;
    // inverses of the right factors, in the order they were applied
    let mut tail: Vec<Vec<Letter>> = Vec::new();
    while cur[1][0] != 0 {
        let c = cur[1][0];
        let q = -cur[1][1].div_euclid(c);
        if q != 0 {
            cur = mat_mul2(&cur, &[[1, q], [0, 1]]);
            let mut inv = Vec::new();
            push_t_power(&mut inv, -q);
            tail.push(inv);
        }
        // right multiplication by S^{-1}: (c, d) ↦ (−d, c)
        cur = mat_mul2(&cur, &[[0, 1], [-1, 0]]);
        tail.push(vec![Letter::S]);
    }
    let mut word = Vec::new();
    if cur[0][0] == -1 {
        word.extend([Letter::S, Letter::S]);
        push_t_power(&mut word, -cur[0][1]);
    } else {
        push_t_power(&mut word, cur[0][1]);
    }
    for part in tail.into_iter().rev() {
        word.extend(part);
    }
    let out = Sl2Word { matrix: m, word };
    debug_assert_eq!(out.product(), m);
    Ok(out)
}

/// Decomposition by the Euclidean algorithm on the first column, acting by
/// left multiplication. Yields a different word for the same matrix.
pub fn sl2_word_left(m: Mat2) -> Result<Sl2Word> {
    if det(&m) != 1 {
        return Err(Error::NotInSl2(format!("{m:?} has determinant {}", det(&m))));
    }
    let mut cur = m;
    let mut head: Vec<Letter> = Vec::new();
    while cur[1][0] != 0 {
        let c = cur[1][0];
        let q = -cur[0][0].div_euclid(c);
        if q != 0 {
            cur = mat_mul2(&[[1, q], [0, 1]], &cur);
            push_t_power(&mut head, -q);
        }
        // left multiplication by S^{-1}: (a, c) ↦ (c, −a)
        cur = mat_mul2(&[[0, 1], [-1, 0]], &cur);
        head.push(Letter::S);
    }
    let mut word = head;
    if cur[0][0] == -1 {
        word.extend([Letter::S, Letter::S]);
        push_t_power(&mut word, -cur[0][1]);
    } else {
        push_t_power(&mut word, cur[0][1]);
    }
    let out = Sl2Word { matrix: m, word };
    debug_assert_eq!(out.product(), m);
    Ok(out)
}

/// A pseudo-random element of `Γ(N)` with entries of moderate size.
///
/// `a = 1 + N·a'`, `c = N·c'` with `gcd(a, c) = 1`; the extended Euclidean
/// algorithm gives `a·d₀ − c·b₀ = 1` and the shift `t ≡ −b₀ (mod N)` makes
/// `b ≡ 0`, `d ≡ 1` modulo `N`.
pub fn random_gamma(n: u64, rng: &mut impl Rng, range: i64) -> Mat2 {
    let n = n as i64;
    loop {
        let a = 1 + n * rng.gen_range(-range..=range);
        let c = n * rng.gen_range(-range..=range);
        let e = a.extended_gcd(&c);
        if e.gcd.abs() != 1 {
            continue;
        }
        let (d0, b0) = if e.gcd == 1 { (e.x, -e.y) } else { (-e.x, e.y) };
        let r = rng.gen_range(-range..=range);
        let t = -b0 + n * r;
        let m = [[a, b0 + a * t], [c, d0 + c * t]];
        debug_assert_eq!(det(&m), 1);
        return m;
    }
}
