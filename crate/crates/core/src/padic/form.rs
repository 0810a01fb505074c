use serde::{Deserialize, Serialize};

use super::matrix::{add_mod, mul_mod, PrecisionMatrix};
use super::odd::{diagonalize_unimodular_odd, least_nonresidue};
use super::search::{find_isotropic_primitive_2, quadratic_value_2};
use super::split::split_primitive_pair;
use crate::error::{Error, Result};
use crate::fqm::{Element, FiniteQuadraticModule};

/// Largest `|D|` for which the pairwise brute-force search is attempted.
pub const BRUTE_FORCE_BOUND: u64 = 10_000;

/// `(p, e)` with `q = p^e`, if `q > 1` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q % d == 0)?;
    let mut r = q;
    let mut e = 0;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// A unimodular form on `(Z/p^e)^n`, given by its integerized Gram data.
///
/// `bilinear` holds `p^e (g_i, g_j) mod p^e`. For `p = 2` the refined matrix
/// `quadratic` additionally carries `2^{e+1} Q(g_i)` on its diagonal, at
/// precision `2^{e+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZqForm {
    p: u64,
    e: u32,
    bilinear: PrecisionMatrix,
    quadratic: Option<PrecisionMatrix>,
}

impl ZqForm {
    /// `gram` is taken mod `p^e` for odd `p` and mod `2^{e+1}` for `p = 2`.
    pub fn new(p: u64, e: u32, gram: &[Vec<i128>]) -> Result<Self> {
        if e == 0 {
            return Err(Error::validation("exponent must be positive"));
        }
        let bilinear = PrecisionMatrix::new(p, e, gram)?;
        let quadratic = if p == 2 { Some(PrecisionMatrix::new(2, e + 1, gram)?) } else { None };
        Self::checked(p, e, bilinear, quadratic)
    }

    fn checked(p: u64, e: u32, bilinear: PrecisionMatrix, quadratic: Option<PrecisionMatrix>) -> Result<Self> {
        if !bilinear.is_symmetric() {
            return Err(Error::validation("Gram matrix is not symmetric"));
        }
        if !bilinear.is_unimodular() {
            return Err(Error::NonUnimodular(p));
        }
        Ok(ZqForm { p, e, bilinear, quadratic })
    }

    /// The form spanned by the generators `gens` of `D`, all of order `p^e`.
    pub fn from_fqm(d: &FiniteQuadraticModule, gens: &[usize]) -> Result<Self> {
        let q = gens.first().map(|&g| d.orders()[g]).ok_or_else(|| Error::validation("no generators"))?;
        if gens.iter().any(|&g| d.orders()[g] != q) {
            return Err(Error::validation("generators must all have the same order"));
        }
        let (p, e) = prime_power(q).ok_or_else(|| Error::validation(format!("order {q} is not a prime power")))?;
        let n = gens.len();
        let mut bil = vec![vec![0u64; n]; n];
        for (i, &gi) in gens.iter().enumerate() {
            for (j, &gj) in gens.iter().enumerate() {
                bil[i][j] = d.gram()[gi][gj].numerator_over(q);
            }
        }
        let quadratic = (p == 2).then(|| {
            let mut m = bil.clone();
            for (i, &gi) in gens.iter().enumerate() {
                m[i][i] = d.qvals()[gi].numerator_over(2 * q);
            }
            PrecisionMatrix::from_reduced(2, e + 1, m)
        });
        Self::checked(p, e, PrecisionMatrix::from_reduced(p, e, bil), quadratic)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn rank(&self) -> usize {
        self.bilinear.dim()
    }

    /// Bilinear Gram matrix mod `p^e`.
    pub fn bilinear(&self) -> &PrecisionMatrix {
        &self.bilinear
    }

    /// Refined 2-adic Gram matrix mod `2^{e+1}` (only for `p = 2`).
    pub fn quadratic(&self) -> Option<&PrecisionMatrix> {
        self.quadratic.as_ref()
    }

    /// `p^e (x, y) mod p^e`.
    pub fn pair(&self, x: &[u64], y: &[u64]) -> u64 {
        self.bilinear.bilinear(x, y)
    }

    /// `p^e (x, x) mod p^e` for odd `p`, `2^{e+1} Q(x) mod 2^{e+1}` for `p = 2`.
    pub fn norm(&self, x: &[u64]) -> u64 {
        match &self.quadratic {
            Some(g) => quadratic_value_2(g, x),
            None => self.pair(x, x),
        }
    }

    pub fn is_isotropic(&self, x: &[u64]) -> bool {
        self.norm(x) == 0
    }

    /// The form restricted to the span of `basis`.
    pub fn restrict(&self, basis: &[Vec<u64>]) -> ZqForm {
        let n = basis.len();
        let mut bil = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.pair(&basis[i], &basis[j]);
                bil[i][j] = v;
                bil[j][i] = v;
            }
        }
        let quadratic = self.quadratic.as_ref().map(|_| {
            let mut m = bil.clone();
            for i in 0..n {
                m[i][i] = self.norm(&basis[i]);
            }
            PrecisionMatrix::from_reduced(2, self.e + 1, m)
        });
        ZqForm { p: self.p, e: self.e, bilinear: PrecisionMatrix::from_reduced(self.p, self.e, bil), quadratic }
    }

    /// Restriction to a set of coordinates.
    pub fn restrict_coordinates(&self, coords: &[usize]) -> ZqForm {
        let basis: Vec<Vec<u64>> = coords
            .iter()
            .map(|&c| {
                let mut v = vec![0; self.rank()];
                v[c] = 1;
                v
            })
            .collect();
        self.restrict(&basis)
    }

    /// The rank hypothesis under which two isotropic orthogonal weakly independent vectors are guaranteed.
    pub fn check_rank_hypothesis(&self) -> Result<()> {
        let n = self.rank();
        let need = match (self.p, self.e) {
            (2, e) if e <= 2 => 7,
            (2, _) => 3,
            (_, 1) => 5,
            _ => 2,
        };
        if n < need {
            return Err(Error::Rank(format!("rank {n} < {need} for q = {}^{}", self.p, self.e)));
        }
        Ok(())
    }
}

/// Which argument produced an isotropic pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `p^{e-1}` times two basis vectors.
    ScaledBasis,
    /// `b_1 + b_2`, `b_3 + b_4` in a basis with Gram `diag(1, −1, 1, −1, …)`.
    HyperbolicPairs,
    /// One isotropic vector in each of two orthogonal block sums.
    OrthogonalSubsums,
    /// Split off a plane through one isotropic vector, then search its complement.
    SplitPlane,
    BruteForce,
}

/// Two isotropic orthogonal vectors, as coordinate vectors mod `p^e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropicPair {
    pub delta: Vec<u64>,
    pub mu: Vec<u64>,
    /// The vectors are weakly independent at level `p^level`.
    pub level: u32,
    pub construction: Construction,
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub(crate) fn combine(basis: &[Vec<u64>], coeffs: &[u64], m: u64) -> Vec<u64> {
    let n = basis.first().map_or(0, Vec::len);
    let mut out = vec![0u64; n];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(b) {
            *o = add_mod(*o, mul_mod(c, x, m), m);
        }
    }
    out
}

/// Constructive search for two isotropic, orthogonal, weakly independent vectors.
pub fn find_two_isotropic_form(form: &ZqForm) -> Result<IsotropicPair> {
    form.check_rank_hypothesis()?;
    let (p, e, n) = (form.p, form.e, form.rank());
    if (p != 2 && e >= 2) || (p == 2 && e >= 3) {
        let s = p.pow(e - 1);
        let mut delta = vec![0; n];
        let mut mu = vec![0; n];
        delta[0] = s;
        mu[1] = s;
        return Ok(IsotropicPair { delta, mu, level: 1, construction: Construction::ScaledBasis });
    }
    if p != 2 {
        return hyperbolic_pairs(form);
    }
    if let Some(pair) = orthogonal_subsums(form)? {
        return Ok(pair);
    }
    split_plane(form)
}

fn hyperbolic_pairs(form: &ZqForm) -> Result<IsotropicPair> {
    let (p, n) = (form.p, form.rank());
    let g = &form.bilinear;
    let pair = |delta, mu| IsotropicPair { delta, mu, level: 1, construction: Construction::HyperbolicPairs };
    if g.is_diagonal() {
        let d = g.diagonal_entries();
        let mut used = vec![false; n];
        let mut found = Vec::new();
        for i in 0..n {
            if used[i] || found.len() == 2 {
                continue;
            }
            if let Some(j) = (i + 1..n).find(|&j| !used[j] && (d[i] + d[j]) % p == 0) {
                used[i] = true;
                used[j] = true;
                let mut v = unit(n, i);
                v[j] = 1;
                found.push(v);
            }
        }
        if found.len() == 2 {
            let mu = found.pop().unwrap();
            return Ok(pair(found.pop().unwrap(), mu));
        }
    }
    let (sg, cg) = diagonalize_unimodular_odd(g)?;
    let t = least_nonresidue(p);
    for eps in [1, t] {
        let mut diag: Vec<u64> = (0..n).map(|i| if i < 4 && i % 2 == 1 { p - 1 } else { 1 }).collect();
        diag[n - 1] = eps;
        let target = PrecisionMatrix::diagonal(p, 1, &diag);
        let (st, ct) = diagonalize_unimodular_odd(&target)?;
        if ct != cg {
            continue;
        }
        let s = sg.mul(&st.inverse()?);
        debug_assert_eq!(g.congruent(&s), target);
        let col = |j: usize| s.column(j);
        let add = |a: Vec<u64>, b: Vec<u64>| a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect::<Vec<u64>>();
        return Ok(pair(add(col(0), col(1)), add(col(2), col(3))));
    }
    Err(Error::Invariant("no target form with a matching determinant class".into()))
}

/// Connected blocks of the Gram matrix, ordered by their first coordinate.
fn blocks(g: &PrecisionMatrix) -> Vec<Vec<usize>> {
    let n = g.dim();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut block = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < block.len() {
            let i = block[k];
            for j in 0..n {
                if !seen[j] && g.get(i, j) != 0 {
                    seen[j] = true;
                    block.push(j);
                }
            }
            k += 1;
        }
        block.sort_unstable();
        out.push(block);
    }
    out
}

fn search_on(form: &ZqForm, coords: &[usize]) -> Result<Option<Vec<u64>>> {
    let sub = form.restrict_coordinates(coords);
    match find_isotropic_primitive_2(sub.quadratic().expect("2-adic form")) {
        Ok(y) => {
            let mut v = vec![0; form.rank()];
            for (&c, &x) in coords.iter().zip(&y) {
                v[c] = x;
            }
            Ok(Some(v))
        }
        Err(Error::NotFound(_)) => Ok(None),
        Err(err) => Err(err),
    }
}

fn orthogonal_subsums(form: &ZqForm) -> Result<Option<IsotropicPair>> {
    let blocks = blocks(&form.bilinear);
    for cut in 1..blocks.len() {
        let left: Vec<usize> = blocks[..cut].concat();
        let right: Vec<usize> = blocks[cut..].concat();
        if left.len() < 3 || right.len() < 3 {
            continue;
        }
        let Some(delta) = search_on(form, &left)? else {
            continue;
        };
        let Some(mu) = search_on(form, &right)? else {
            continue;
        };
        return Ok(Some(IsotropicPair { delta, mu, level: form.e, construction: Construction::OrthogonalSubsums }));
    }
    Ok(None)
}

fn split_plane(form: &ZqForm) -> Result<IsotropicPair> {
    let q = form.q();
    let delta = find_isotropic_primitive_2(form.quadratic().expect("2-adic form"))?;
    let split = split_primitive_pair(&form.bilinear, &delta)?;
    let rest = form.restrict(&split.complement);
    let y = find_isotropic_primitive_2(rest.quadratic().expect("2-adic form"))?;
    let mu = combine(&split.complement, &y, q);
    Ok(IsotropicPair { delta, mu, level: form.e, construction: Construction::SplitPlane })
}

/// Two isotropic orthogonal weakly independent elements of `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoIsotropic {
    pub delta: Element,
    pub mu: Element,
    pub level: u32,
    pub construction: Construction,
}

/// `aδ + bμ = 0 ⇒ a ≡ b ≡ 0 mod p^level`, checked exhaustively.
pub fn weakly_independent(d: &FiniteQuadraticModule, x: &Element, y: &Element, p: u64, level: u32) -> bool {
    let pl = p.pow(level);
    let (ox, oy) = (d.element_order(x), d.element_order(y));
    if ox % pl != 0 || oy % pl != 0 {
        return false;
    }
    let mut ax = d.zero();
    for a in 0..ox {
        let mut s = ax.clone();
        for b in 0..oy {
            if (a % pl != 0 || b % pl != 0) && s.coords.iter().all(|&c| c == 0) {
                return false;
            }
            s = d.add(&s, y);
        }
        ax = d.add(&ax, x);
    }
    true
}

/// Isotropy, orthogonality and weak independence, checked exactly in `D`.
pub fn verify_two_isotropic(d: &FiniteQuadraticModule, x: &Element, y: &Element, p: u64, level: u32) -> bool {
    d.is_isotropic_element(x) && d.is_isotropic_element(y) && d.b_of(x, y).is_zero() && weakly_independent(d, x, y, p, level)
}

/// Exhaustive search over pairs of isotropic elements of order `p`.
pub fn brute_force_two_isotropic(d: &FiniteQuadraticModule, p: u64) -> Result<Option<(Element, Element)>> {
    let candidates: Vec<Element> = d
        .elements_bounded(BRUTE_FORCE_BOUND)?
        .into_iter()
        .filter(|x| d.element_order(x) == p && d.is_isotropic_element(x))
        .collect();
    for (i, x) in candidates.iter().enumerate() {
        let multiples: Vec<Element> = (1..p).map(|k| d.scale(k as i128, x)).collect();
        for y in &candidates[i + 1..] {
            if d.b_of(x, y).is_zero() && !multiples.contains(y) {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
    }
    Ok(None)
}

pub(crate) fn to_element(d: &FiniteQuadraticModule, gens: &[usize], v: &[u64]) -> Element {
    let mut coords = vec![0i128; d.rank()];
    for (&g, &x) in gens.iter().zip(v) {
        coords[g] = x as i128;
    }
    d.reduce(&coords)
}

/// Two isotropic orthogonal weakly independent elements of `D ≅ (Z/p^e)^n`.
///
/// The constructive path runs first; its output is re-verified in `D`. For
/// `|D| ≤ 10^4` a brute-force search backs it up.
pub fn find_two_isotropic(d: &FiniteQuadraticModule) -> Result<TwoIsotropic> {
    let gens: Vec<usize> = (0..d.rank()).collect();
    let form = ZqForm::from_fqm(d, &gens)?;
    form.check_rank_hypothesis()?;
    let p = form.p();
    let constructive = find_two_isotropic_form(&form).and_then(|pair| {
        let delta = to_element(d, &gens, &pair.delta);
        let mu = to_element(d, &gens, &pair.mu);
        if verify_two_isotropic(d, &delta, &mu, p, pair.level) {
            Ok(TwoIsotropic { delta, mu, level: pair.level, construction: pair.construction })
        } else {
            Err(Error::Invariant("constructed pair fails verification in D".into()))
        }
    });
    match constructive {
        Ok(found) => Ok(found),
        Err(err) if d.order() <= BRUTE_FORCE_BOUND => match brute_force_two_isotropic(d, p)? {
            Some((delta, mu)) => Ok(TwoIsotropic { delta, mu, level: 1, construction: Construction::BruteForce }),
            None => Err(err),
        },
        Err(err) => Err(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn scaled_basis() {
        let d = form("3^2:a=1+3^2:a=1");
        let r = find_two_isotropic(&d).unwrap();
        assert_eq!(r.delta.coords, vec![3, 0]);
        assert_eq!(r.mu.coords, vec![0, 3]);
        assert_eq!(r.construction, Construction::ScaledBasis);
    }

    #[test]
    fn diagonal_pairs() {
        let d = form("3^1:a=1+3^1:a=2+3^1:a=1+3^1:a=2+3^1:a=1");
        let r = find_two_isotropic(&d).unwrap();
        assert_eq!(r.delta.coords, vec![1, 1, 0, 0, 0]);
        assert_eq!(r.mu.coords, vec![0, 0, 1, 1, 0]);
    }

    #[test]
    fn non_diagonal_odd() {
        // all entries 1: no two opposite diagonal values
        let d = form("5^1:a=1").repeat_sum(5);
        let r = find_two_isotropic(&d).unwrap();
        assert!(verify_two_isotropic(&d, &r.delta, &r.mu, 5, 1));
        assert_eq!(r.construction, Construction::HyperbolicPairs);
        let g = form("3^1:a=1").repeat_sum(5);
        let r = find_two_isotropic(&g).unwrap();
        assert!(verify_two_isotropic(&g, &r.delta, &r.mu, 3, 1));
    }

    #[test]
    fn two_adic() {
        for sym in ["2^1:a=1,v=0", "2^1:a=3,v=1", "2^2:a=1,v=0", "2^1:B"] {
            let d = form(sym).repeat_sum(7);
            let r = find_two_isotropic(&d).unwrap();
            assert!(verify_two_isotropic(&d, &r.delta, &r.mu, 2, r.level), "{sym}");
            assert_ne!(r.construction, Construction::BruteForce, "{sym}");
        }
        let d = form("2^3:a=1,v=0").repeat_sum(3);
        let r = find_two_isotropic(&d).unwrap();
        assert_eq!(r.construction, Construction::ScaledBasis);
    }

    #[test]
    fn rank_errors() {
        assert!(matches!(find_two_isotropic(&form("3^1:a=1+3^1:a=2")), Err(Error::Rank(_))));
        assert!(matches!(find_two_isotropic(&form("3^2:a=1")), Err(Error::Rank(_))));
    }

    #[test]
    fn brute_force_agrees() {
        let d = form("3^1:a=1+3^1:a=2+3^1:a=1+3^1:a=2+3^1:a=1");
        let (x, y) = brute_force_two_isotropic(&d, 3).unwrap().unwrap();
        assert!(verify_two_isotropic(&d, &x, &y, 3, 1));
        assert!(brute_force_two_isotropic(&form("3^1:a=1+3^1:a=1"), 3).unwrap().is_none());
    }

    trait RepeatSum {
        fn repeat_sum(&self, n: usize) -> FiniteQuadraticModule;
    }

    impl RepeatSum for FiniteQuadraticModule {
        fn repeat_sum(&self, n: usize) -> FiniteQuadraticModule {
            (1..n).fold(self.clone(), |acc, _| FiniteQuadraticModule::direct_sum(&acc, self))
        }
    }
}
