#![allow(dead_code)]

use discform::fqm::{EvenKind, JordanComponent, JordanSymbol};
use discform::FiniteQuadraticModule;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Least quadratic nonresidue modulo an odd prime, by Euler's criterion.
pub fn nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1).unwrap()
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// One representative per isometry class of Jordan block with group order
/// at most `bound`.
pub fn blocks(bound: u64) -> Vec<JordanComponent> {
    let mut out = Vec::new();
    for p in (3..=bound).filter(|&p| is_prime(p)) {
        let mut q = p;
        let mut e = 1;
        while q <= bound {
            out.push(JordanComponent::odd(p, e, 1).unwrap());
            out.push(JordanComponent::odd(p, e, nonresidue(p) as i64).unwrap());
            e += 1;
            q *= p;
        }
    }
    let mut e = 1;
    while 1u64 << e <= bound {
        for a in (1..1i64 << e).step_by(2) {
            for v in 0..2 {
                out.push(JordanComponent::two_odd(e, a, v).unwrap());
            }
        }
        e += 1;
    }
    let mut e = 1;
    while 1u64 << (2 * e) <= bound {
        out.push(JordanComponent::two_even(e, EvenKind::A).unwrap());
        out.push(JordanComponent::two_even(e, EvenKind::B).unwrap());
        e += 1;
    }
    out.sort_by_key(|c| c.to_string());
    out.dedup();
    out
}

/// Every multiset of blocks whose orders multiply to at most `bound`.
pub fn symbols_up_to(bound: u64) -> Vec<JordanSymbol> {
    let bl = blocks(bound);
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<JordanComponent>, u64)> = vec![(0, Vec::new(), 1)];
    while let Some((start, comps, order)) = stack.pop() {
        if !comps.is_empty() {
            out.push(JordanSymbol::new(comps.clone()));
        }
        for (i, c) in bl.iter().enumerate().skip(start) {
            let o = order * c.group_order();
            if o <= bound {
                let mut next = comps.clone();
                next.push(c.clone());
                stack.push((i, next, o));
            }
        }
    }
    out.sort_by_key(|s| (s.group_order(), s.to_string()));
    out
}

pub fn form(s: &str) -> FiniteQuadraticModule {
    FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
}

pub fn even_signature(d: &FiniteQuadraticModule) -> bool {
    d.signature().map(|s| s % 2 == 0).unwrap_or(false)
}
