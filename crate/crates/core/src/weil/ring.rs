use crate::arith::{cyclotomic_polynomial, euler_phi};

/// Integer arithmetic in `Z[ζ_L]`, power basis `ζ^0, …, ζ^{φ(L)−1}`.
///
/// `table[k]` holds the reduced form of `ζ^k` for `0 ≤ k < 2L`, so products
/// and monomial shifts reduce with one lookup per coefficient.
#[derive(Debug)]
pub struct CycRing {
    order: u64,
    phi: usize,
    table: Vec<Vec<i128>>,
}

impl CycRing {
    pub fn new(order: u64) -> Self {
        let phi = euler_phi(order) as usize;
        let poly = cyclotomic_polynomial(order);
        let mut table = Vec::with_capacity(2 * order as usize);
        let mut cur = vec![0i128; phi];
        cur[0] = 1;
        for _ in 0..2 * order {
            table.push(cur.clone());
            // multiply by ζ and reduce the overflowing top coefficient
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * poly[i] as i128;
                }
            }
        }
        CycRing { order, phi, table }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    /// `ζ^e` reduced.
    pub fn monomial(&self, e: u64) -> &[i128] {
        &self.table[(e % self.order) as usize]
    }

    /// `out += a·b`.
    pub fn mul_add(&self, a: &[i128], b: &[i128], out: &mut [i128], scratch: &mut Vec<i128>) {
        let phi = self.phi;
        scratch.clear();
        scratch.resize(2 * phi, 0);
        let mut any = false;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    scratch[i + j] += x * y;
                    any = true;
                }
            }
        }
        if !any {
            return;
        }
        for k in 0..phi {
            out[k] += scratch[k];
        }
        for k in phi..2 * phi {
            let c = scratch[k];
            if c != 0 {
                for (o, t) in out.iter_mut().zip(&self.table[k]) {
                    *o += c * t;
                }
            }
        }
    }

    /// `ζ^e · a`.
    pub fn shift(&self, a: &[i128], e: u64) -> Vec<i128> {
        let mut out = vec![0i128; self.phi];
        let e = (e % self.order) as usize;
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                for (o, t) in out.iter_mut().zip(&self.table[i + e]) {
                    *o += x * t;
                }
            }
        }
        out
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self, a: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; self.phi];
        let l = self.order as usize;
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                for (o, t) in out.iter_mut().zip(&self.table[(l - i) % l]) {
                    *o += x * t;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_roots() {
        let r = CycRing::new(4);
        assert_eq!(r.phi(), 2);
        assert_eq!(r.monomial(2), &[-1, 0]);
        assert_eq!(r.monomial(3), &[0, -1]);
        let mut out = vec![0; 2];
        let mut s = Vec::new();
        r.mul_add(&[0, 1], &[0, 1], &mut out, &mut s);
        assert_eq!(out, vec![-1, 0]);
        assert_eq!(r.conj(&[0, 1]), vec![0, -1]);
    }

    #[test]
    fn table_is_periodic() {
        for l in [1u64, 3, 8, 12, 24, 40] {
            let r = CycRing::new(l);
            for k in 0..l {
                assert_eq!(r.monomial(k), r.table[(k + l) as usize].as_slice(), "order {l}");
            }
        }
    }
}
