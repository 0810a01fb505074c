use super::matrix::{add_mod, inv_unit, mul_mod, pow_mod, sub_mod, PrecisionMatrix};
use crate::error::{Error, Result};

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// The least positive quadratic nonresidue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&t| legendre(t, p) == -1).expect("odd prime has a nonresidue")
}

/// Square root of a unit modulo `p^f` (odd `p`), by Newton iteration from a root mod `p`.
pub fn sqrt_mod(a: u64, p: u64, f: u32) -> Option<u64> {
    let m = p.pow(f);
    let a = a % m;
    let mut r = (1..p).find(|&r| r * r % p == a % p)?;
    for _ in 0..f {
        let err = sub_mod(mul_mod(r, r, m), a, m);
        if err == 0 {
            break;
        }
        let inv = inv_unit(mul_mod(2, r, m), p, m)?;
        r = sub_mod(r, mul_mod(err, inv, m), m);
    }
    (mul_mod(r, r, m) == a).then_some(r)
}

/// Simultaneous basis change bookkeeping: `g` tracks `Sᵀ G S`, `s` tracks `S`.
struct Congruence {
    m: u64,
    g: Vec<Vec<u64>>,
    s: Vec<Vec<u64>>,
}

impl Congruence {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.g.swap(i, j);
        for row in self.g.iter_mut().chain(self.s.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// `b_i ← b_i + c·b_j`.
    fn add(&mut self, i: usize, j: usize, c: u64) {
        let m = self.m;
        let n = self.g.len();
        for k in 0..n {
            let v = mul_mod(c, self.g[j][k], m);
            self.g[i][k] = add_mod(self.g[i][k], v, m);
        }
        for k in 0..n {
            let v = mul_mod(c, self.g[k][j], m);
            self.g[k][i] = add_mod(self.g[k][i], v, m);
        }
        for row in self.s.iter_mut() {
            row[i] = add_mod(row[i], mul_mod(c, row[j], m), m);
        }
    }

    /// `b_i ← c·b_i`.
    fn scale(&mut self, i: usize, c: u64) {
        let m = self.m;
        for k in 0..self.g.len() {
            self.g[i][k] = mul_mod(self.g[i][k], c, m);
        }
        for k in 0..self.g.len() {
            self.g[k][i] = mul_mod(self.g[k][i], c, m);
        }
        for row in self.s.iter_mut() {
            row[i] = mul_mod(row[i], c, m);
        }
    }
}

/// Diagonalizes a unimodular symmetric form over `Z/p^f`, `p` odd, to
/// `diag(1, …, 1)` or `diag(1, …, 1, t)` with `t` the least nonresidue.
///
/// Returns `(S, canonical)` with `Sᵀ G S = canonical`.
pub fn diagonalize_unimodular_odd(g: &PrecisionMatrix) -> Result<(PrecisionMatrix, PrecisionMatrix)> {
    let (p, f) = (g.p(), g.f());
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if !g.is_symmetric() {
        return Err(Error::validation("Gram matrix is not symmetric"));
    }
    if !g.is_unimodular() {
        return Err(Error::NonUnimodular(p));
    }
    let n = g.dim();
    let m = g.modulus();
    let mut c = Congruence { m, g: g.entries().to_vec(), s: PrecisionMatrix::identity(p, f, n).entries().to_vec() };

    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| c.g[i][i] % p != 0) {
            c.swap(k, i);
        } else {
            let (i, j) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| c.g[i][j] % p != 0)
                .ok_or(Error::NonUnimodular(p))?;
            // (b_i + b_j)² = 2(b_i, b_j) mod p, a unit
            c.add(i, j, 1);
            c.swap(k, i);
        }
        let inv = inv_unit(c.g[k][k], p, m).expect("pivot is a unit");
        for j in k + 1..n {
            let coeff = mul_mod(c.g[k][j], inv, m);
            if coeff != 0 {
                c.add(j, k, m - coeff);
            }
        }
    }

    let t = least_nonresidue(p);
    let t_inv = inv_unit(t, p, m).expect("t is a unit");
    let mut is_t = vec![false; n];
    for k in 0..n {
        let d = c.g[k][k];
        let (target, root) = match sqrt_mod(d, p, f) {
            Some(r) => (false, r),
            None => (true, sqrt_mod(mul_mod(d, t_inv, m), p, f).expect("d/t is a square")),
        };
        c.scale(k, inv_unit(root, p, m).expect("root is a unit"));
        is_t[k] = target;
    }
    // ones first, then the t entries
    let mut order: Vec<usize> = (0..n).filter(|&k| !is_t[k]).collect();
    let ones = order.len();
    order.extend((0..n).filter(|&k| is_t[k]));
    let s_old = c.s.clone();
    let g_old = c.g.clone();
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            c.s[r][new] = s_old[r][old];
        }
        c.g[new][new] = g_old[old][old];
    }

    // diag(t, t) ~ diag(1, 1) via A² + C² = t
    let mut first_t = ones;
    if n - first_t >= 2 {
        let (a, cc) = two_squares(t, p, f);
        while n - first_t >= 2 {
            let (i, j) = (first_t, first_t + 1);
            for row in c.s.iter_mut() {
                let (bi, bj) = (row[i], row[j]);
                let ni = sub_mod(mul_mod(a, bi, m), mul_mod(cc, bj, m), m);
                let nj = add_mod(mul_mod(cc, bi, m), mul_mod(a, bj, m), m);
                row[i] = mul_mod(ni, t_inv, m);
                row[j] = mul_mod(nj, t_inv, m);
            }
            first_t += 2;
        }
    }
    let s = PrecisionMatrix::from_reduced(p, f, c.s);
    let diag: Vec<u64> = (0..n).map(|k| if k < first_t { 1 } else { t }).collect();
    let canonical = PrecisionMatrix::diagonal(p, f, &diag);
    if g.congruent(&s) != canonical {
        return Err(Error::Invariant("diagonalization does not reproduce the canonical form".into()));
    }
    Ok((s, canonical))
}

/// `(A, C)` with `A² + C² ≡ t mod p^f`.
fn two_squares(t: u64, p: u64, f: u32) -> (u64, u64) {
    let m = p.pow(f);
    for a in 0..p {
        let rest = sub_mod(t, a * a, m);
        if rest % p != 0 && legendre(rest, p) == 1 {
            return (a, sqrt_mod(rest, p, f).expect("rest is a square"));
        }
    }
    unreachable!("every unit mod an odd prime is a sum of two squares")
}
