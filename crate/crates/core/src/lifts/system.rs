use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::fqm::{quotient, FiniteQuadraticModule, Quotient, Subgroup, ENUMERATION_BOUND};
use crate::linalg::{kernel, rank, rank_mod_p};

/// Systems with at most this many columns are decided by exact elimination.
pub const EXACT_RANK_BOUND: usize = 400;

/// Prime used for the modular Gram-rank certificate.
pub const RANK_PRIME: u64 = 2_147_483_647;

/// One summand `D_i = H_i^⊥ / H_i` of the lift system.
#[derive(Clone, Debug)]
pub struct LiftBlock {
    pub subgroup: Subgroup,
    pub quotient: Quotient,
    /// First row of this block.
    pub offset: usize,
}

impl LiftBlock {
    pub fn len(&self) -> usize {
        self.quotient.form.order() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The maps `↓ = (↓_{H_1}, …, ↓_{H_n})` and `↑ = ↑_{H_1} + … + ↑_{H_n}` as
/// sparse 0/1 matrices.
///
/// Rows are indexed by `⊔ D_i` (blocks in list order, classes in quotient
/// order), columns by the elements of `D`.
#[derive(Clone, Debug)]
pub struct LiftSystem {
    base: FiniteQuadraticModule,
    blocks: Vec<LiftBlock>,
    rows: usize,
    /// Per column `γ`: the rows holding a 1.
    down: Vec<Vec<u32>>,
    /// Per row: the columns holding a 1, built from cosets `γ + H`.
    up: Vec<Vec<u32>>,
    lookup: HashMap<Vec<usize>, usize>,
}

/// Builds the lift system of `D` for the given isotropic subgroups.
///
/// The trivial subgroup is refused unless `allow_trivial` is set.
pub fn build_lift_system(d: &FiniteQuadraticModule, subgroups: &[Subgroup], allow_trivial: bool) -> Result<LiftSystem> {
    d.ensure_enumerable(ENUMERATION_BOUND)?;
    for h in subgroups {
        if h.is_trivial() && !allow_trivial {
            return Err(Error::validation("trivial subgroup in lift system (set the include-trivial flag)"));
        }
    }
    let quotients: Vec<Quotient> = subgroups.par_iter().map(|h| quotient(d, h)).collect::<Result<_>>()?;
    let n = d.order() as usize;
    let mut blocks = Vec::with_capacity(subgroups.len());
    let mut lookup = HashMap::new();
    let mut rows = 0;
    for (h, q) in subgroups.iter().zip(quotients) {
        lookup.entry(h.indices().to_vec()).or_insert(blocks.len());
        let len = q.form.order() as usize;
        blocks.push(LiftBlock { subgroup: h.clone(), quotient: q, offset: rows });
        rows += len;
    }
    if rows > u32::MAX as usize {
        return Err(Error::Size(format!("{rows} rows")));
    }

    let mut down = vec![Vec::with_capacity(blocks.len()); n];
    for b in &blocks {
        for (g, col) in down.iter_mut().enumerate() {
            if let Some(c) = b.quotient.class_of(g) {
                col.push((b.offset + c) as u32);
            }
        }
    }

    let mut up = vec![Vec::new(); rows];
    for b in &blocks {
        let h = b.subgroup.indices();
        for &g in b.quotient.perp.indices() {
            let coset: Vec<usize> = h.iter().map(|&x| d.add_index(g, x)).collect();
            if coset.iter().any(|&x| x < g) {
                continue;
            }
            let class = b.quotient.class_of(g).ok_or_else(|| Error::Invariant("perp element outside H^⊥".into()))?;
            let row = &mut up[b.offset + class];
            row.extend(coset.iter().map(|&x| x as u32));
            row.sort_unstable();
        }
    }
    Ok(LiftSystem { base: d.clone(), blocks, rows, down, up, lookup })
}

impl LiftSystem {
    pub fn base(&self) -> &FiniteQuadraticModule {
        &self.base
    }

    pub fn blocks(&self) -> &[LiftBlock] {
        &self.blocks
    }

    /// `Σ_i |D_i|`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `|D|`.
    pub fn cols(&self) -> usize {
        self.down.len()
    }

    pub fn block_of(&self, h: &Subgroup) -> Option<usize> {
        self.lookup.get(h.indices()).copied()
    }

    /// Row of the class `γ + H_block`, if `γ ∈ H_block^⊥`.
    pub fn row_of(&self, block: usize, gamma: usize) -> Option<usize> {
        let b = &self.blocks[block];
        b.quotient.class_of(gamma).map(|c| b.offset + c)
    }

    /// Rows with a 1 in column `γ`.
    pub fn down_column(&self, gamma: usize) -> &[u32] {
        &self.down[gamma]
    }

    /// Columns with a 1 in `row` of `↓`, i.e. the members of the class.
    pub fn up_column(&self, row: usize) -> &[u32] {
        &self.up[row]
    }

    /// Dense `rows × |D|` matrix of `↓`.
    pub fn down_matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols()]; self.rows];
        for (g, col) in self.down.iter().enumerate() {
            for &r in col {
                m[r as usize][g] = 1;
            }
        }
        m
    }

    /// Dense `|D| × rows` matrix of `↑`.
    pub fn up_matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.rows]; self.cols()];
        for (r, row) in self.up.iter().enumerate() {
            for &g in row {
                m[g as usize][r] = 1;
            }
        }
        m
    }

    pub fn down_apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rows];
        for (g, col) in self.down.iter().enumerate() {
            if v[g].is_zero() {
                continue;
            }
            for &r in col {
                out[r as usize] += &v[g];
            }
        }
        out
    }

    pub fn up_apply(&self, z: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.cols()];
        for (r, row) in self.up.iter().enumerate() {
            if z[r].is_zero() {
                continue;
            }
            for &g in row {
                out[g as usize] += &z[r];
            }
        }
        out
    }

    /// `↑ᵀ↑ = ↓ᵀ↓`: entry `(γ, β)` counts the blocks where `γ` and `β` share a class.
    pub fn gram_mod(&self, p: u64) -> Vec<Vec<u64>> {
        let n = self.cols();
        let mut g = vec![vec![0u64; n]; n];
        for row in &self.up {
            for &a in row {
                for &b in row {
                    let e = &mut g[a as usize][b as usize];
                    *e = (*e + 1) % p;
                }
            }
        }
        g
    }
}

fn to_bigint(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Exact rational basis of `ker(↓)` by fraction-free elimination.
pub fn kernel_down(system: &LiftSystem) -> Vec<Vec<Rational>> {
    if system.rows() == 0 {
        let n = system.cols();
        return (0..n)
            .map(|i| (0..n).map(|j| Rational::from_integer(BigInt::from((i == j) as i64))).collect())
            .collect();
    }
    kernel(&to_bigint(&system.down_matrix()), system.cols())
}

/// Exact rank of `↑`, computed on the `|D| × rows` matrix.
pub fn rank_up(system: &LiftSystem) -> usize {
    rank(&to_bigint(&system.up_matrix()), system.rows())
}

/// `rank(↑) = |D|`.
///
/// Small systems compute `ker(↓)` and `rank(↑)` separately and insist that
/// they agree. Large systems use the Gram matrix `↑ᵀ↑` modulo a large prime;
/// full rank there implies full rank over `Q`, and a deficient modular rank
/// falls back to exact elimination.
pub fn is_up_surjective(system: &LiftSystem) -> Result<bool> {
    let n = system.cols();
    if n <= EXACT_RANK_BOUND {
        let k = kernel_down(system).len();
        let r = rank_up(system);
        if (k == 0) != (r == n) || k + r != n {
            return Err(Error::Invariant(format!("dim ker(↓) = {k} but rank(↑) = {r} for |D| = {n}")));
        }
        return Ok(k == 0);
    }
    if rank_mod_p(system.gram_mod(RANK_PRIME), RANK_PRIME) == n {
        return Ok(true);
    }
    Ok(kernel_down(system).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::fqm::{isotropic_subgroups, Element};

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    fn gen(d: &FiniteQuadraticModule, c: &[u64]) -> Subgroup {
        Subgroup::generated(d, &[Element::new(c.to_vec())]).unwrap()
    }

    #[test]
    fn hyperbolic_single() {
        let d = form("2^1:A");
        // elements 0, δ, γ, γ+δ are (0,0), (0,1), (1,0), (1,1)
        let s = build_lift_system(&d, &[gen(&d, &[1, 0])], false).unwrap();
        assert_eq!(s.down_matrix(), vec![vec![1, 0, 1, 0]]);
        assert_eq!(s.up_matrix(), vec![vec![1], vec![0], vec![1], vec![0]]);
        let k = kernel_down(&s);
        assert_eq!(k.len(), 3);
        let pairs: Vec<Rational> = k.iter().map(|v| &v[0] + &v[2]).collect();
        assert!(pairs.iter().all(|x| x.is_zero()));
        assert!(!is_up_surjective(&s).unwrap());
    }

    #[test]
    fn hyperbolic_both() {
        let d = form("2^1:A");
        let s = build_lift_system(&d, &[gen(&d, &[1, 0]), gen(&d, &[0, 1])], false).unwrap();
        assert_eq!(s.down_matrix(), vec![vec![1, 0, 1, 0], vec![1, 1, 0, 0]]);
        let k = kernel_down(&s);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + &v[2]).is_zero());
            assert!((&v[0] + &v[1]).is_zero());
        }
        assert!(!is_up_surjective(&s).unwrap());
    }

    #[test]
    fn trivial_subgroup() {
        let d = form("2^1:A");
        assert!(build_lift_system(&d, &[Subgroup::trivial(&d)], false).is_err());
        let s = build_lift_system(&d, &[Subgroup::trivial(&d)], true).unwrap();
        assert!(is_up_surjective(&s).unwrap());
        let empty = build_lift_system(&d, &[], false).unwrap();
        assert_eq!(kernel_down(&empty).len(), 4);
    }

    #[test]
    fn non_isotropic_refused() {
        let d = form("2^1:A");
        assert!(matches!(build_lift_system(&d, &[gen(&d, &[1, 1])], false), Err(Error::NotIsotropic)));
    }

    #[test]
    fn transpose_and_adjoint() {
        let d = FiniteQuadraticModule::direct_sum(&form("2^1:A"), &form("2^1:A"));
        let subs = isotropic_subgroups(&d, false, None, 1000).unwrap();
        let s = build_lift_system(&d, &subs, false).unwrap();
        let down = s.down_matrix();
        let up = s.up_matrix();
        for r in 0..s.rows() {
            for c in 0..s.cols() {
                assert_eq!(down[r][c], up[c][r]);
            }
        }
        let v: Vec<Rational> = (0..s.cols()).map(|i| rat(i as i64, 3)).collect();
        let dv = s.down_apply(&v);
        let z: Vec<Rational> = (0..s.rows()).map(|i| rat(1 - i as i64, 2)).collect();
        let uz = s.up_apply(&z);
        let lhs: Rational = uz.iter().zip(&v).map(|(a, b)| a * b).sum();
        let rhs: Rational = z.iter().zip(&dv).map(|(a, b)| a * b).sum();
        assert_eq!(lhs, rhs);
        assert_eq!(kernel_down(&s).len() + rank_up(&s), s.cols());
    }

    #[test]
    fn modular_rank_matches() {
        let d = FiniteQuadraticModule::direct_sum(&form("2^1:A"), &form("2^1:A"));
        let subs = isotropic_subgroups(&d, false, None, 1000).unwrap();
        let s = build_lift_system(&d, &subs, false).unwrap();
        assert_eq!(rank_mod_p(s.gram_mod(RANK_PRIME), RANK_PRIME), rank_up(&s));
    }
}
