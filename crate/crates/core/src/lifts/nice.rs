use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::system::LiftSystem;
use crate::arith::{rational_text, Rational};
use crate::error::{Error, Result};
use crate::fqm::{Element, FiniteQuadraticModule, Subgroup};
use crate::padic::weakly_independent;

/// Cyclic isotropic subgroups `H_0, …, H_n` of common order `n`, nicely
/// orthogonal for a target `γ`. `H_0` is the distinguished first entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceSequence {
    pub p: u64,
    pub target: Element,
    pub generators: Vec<Element>,
    #[serde(skip)]
    subgroups: Vec<Subgroup>,
}

impl NiceSequence {
    /// A sequence from explicit generators, `H_0` first.
    pub fn from_generators(d: &FiniteQuadraticModule, p: u64, target: Element, generators: Vec<Element>) -> Result<Self> {
        let subgroups = generators
            .iter()
            .map(|g| Subgroup::generated(d, std::slice::from_ref(g)))
            .collect::<Result<_>>()?;
        Ok(NiceSequence { p, target, generators, subgroups })
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Restores the subgroups after deserialization.
    pub fn rebuild(&mut self, d: &FiniteQuadraticModule) -> Result<()> {
        *self = Self::from_generators(d, self.p, self.target.clone(), std::mem::take(&mut self.generators))?;
        Ok(())
    }
}

/// A condition of nice orthogonality that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NiceViolation {
    Isotropy,
    /// (a) pairwise orthogonality.
    Orthogonality,
    /// (b) `H_0 + (H_i ∖ {0}) ⊆ H_1 ∪ … ∪ H_n`.
    Closure,
    /// (c) cyclic of the common order `n`, with `n + 1` members.
    Cyclicity,
    /// (d) weak independence of the generators.
    Independence,
    /// `γ ∈ H_i^⊥`.
    Target,
}

/// `h_{-1} = p^{ℓ-1} μ` and `h_j = p^{ℓ-1}(δ + jμ)` for `j = 0, …, p-1`.
///
/// `δ, μ` must be isotropic, orthogonal to each other and to `γ`, and weakly
/// independent at level `p^ℓ`.
pub fn nice_sequence(
    d: &FiniteQuadraticModule,
    gamma: &Element,
    delta: &Element,
    mu: &Element,
    p: u64,
    level: u32,
) -> Result<NiceSequence> {
    if level == 0 {
        return Err(Error::Input("level must be positive".into()));
    }
    let checks = [
        (d.is_isotropic_element(delta) && d.is_isotropic_element(mu), "δ and μ must be isotropic"),
        (d.b_of(delta, mu).is_zero(), "δ and μ must be orthogonal"),
        (d.b_of(gamma, delta).is_zero() && d.b_of(gamma, mu).is_zero(), "δ and μ must lie in γ^⊥"),
        (weakly_independent(d, delta, mu, p, level), "δ and μ must be weakly independent"),
    ];
    if let Some((_, msg)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::Input((*msg).into()));
    }
    let s = p.pow(level - 1) as i128;
    let mut generators = vec![d.scale(s, mu)];
    for j in 0..p {
        let v = d.add(delta, &d.scale(j as i128, mu));
        generators.push(d.scale(s, &v));
    }
    let seq = NiceSequence::from_generators(d, p, gamma.clone(), generators)?;
    if let Err(v) = verify_nice(d, &seq) {
        return Err(Error::Input(format!("constructed sequence violates {v:?}")));
    }
    Ok(seq)
}

/// Checks the nice-orthogonality conditions exhaustively and returns the
/// first violated one.
pub fn verify_nice(d: &FiniteQuadraticModule, seq: &NiceSequence) -> std::result::Result<(), NiceViolation> {
    let subs = seq.subgroups();
    let gens = &seq.generators;
    if subs.iter().any(|h| !h.is_isotropic(d)) {
        return Err(NiceViolation::Isotropy);
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !d.b_of(&gens[i], &gens[j]).is_zero() {
                return Err(NiceViolation::Orthogonality);
            }
        }
    }
    let n = subs.first().map_or(0, Subgroup::order);
    if n < 2
        || subs.len() != n + 1
        || subs.iter().zip(gens).any(|(h, g)| h.order() != n || d.element_order(g) as usize != n)
    {
        return Err(NiceViolation::Cyclicity);
    }
    let union: HashSet<usize> = subs[1..].iter().flat_map(|h| h.indices().iter().copied()).collect();
    for h in &subs[1..] {
        for &a in subs[0].indices() {
            for &b in h.indices().iter().filter(|&&b| b != 0) {
                if !union.contains(&d.add_index(a, b)) {
                    return Err(NiceViolation::Closure);
                }
            }
        }
    }
    for i in 0..subs.len() {
        let hi: HashSet<usize> = subs[i].indices().iter().copied().collect();
        for h in &subs[i + 1..] {
            if h.indices().iter().any(|&x| x != 0 && hi.contains(&x)) {
                return Err(NiceViolation::Independence);
            }
        }
    }
    if gens.iter().any(|g| !d.b_of(&seq.target, g).is_zero()) {
        return Err(NiceViolation::Target);
    }
    Ok(())
}

/// One coordinate of a vector in `C[⊔ D_i]`: the class `rep + H_block`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaEntry {
    pub block: usize,
    /// Smallest element index in the class.
    pub class: usize,
    #[serde(with = "rational_text")]
    pub value: Rational,
}

fn coset(d: &FiniteQuadraticModule, g: usize, h: &Subgroup) -> Vec<usize> {
    let mut c: Vec<usize> = h.indices().iter().map(|&x| d.add_index(g, x)).collect();
    c.sort_unstable();
    c
}

/// `ζ = −(1/n) Σ_j [0, α_j] + (1/n) Σ_{i ≥ 1} [i, γ + H_i]` with `↑ζ = e_γ`,
/// where the `α_j` are the `n − 1` classes of `H_0` covering
/// `M = ⊔_{i ≥ 1} (γ + H_i ∖ {γ})`.
pub fn preimage_basis_vector(d: &FiniteQuadraticModule, gamma: usize, seq: &NiceSequence) -> Result<Vec<ZetaEntry>> {
    let subs = seq.subgroups();
    let n = subs.first().map_or(0, Subgroup::order);
    if n < 2 || subs.len() != n + 1 {
        return Err(Error::Invariant("sequence must have n + 1 subgroups of order n ≥ 2".into()));
    }
    let inv_n = Rational::new(BigInt::from(1), BigInt::from(n));
    let mut m: Vec<usize> = Vec::with_capacity(n * (n - 1));
    for h in &subs[1..] {
        m.extend(h.indices().iter().filter(|&&x| x != 0).map(|&x| d.add_index(gamma, x)));
    }
    let mut sorted = m.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != m.len() {
        return Err(Error::Invariant("the sets γ + H_i ∖ {γ} are not disjoint".into()));
    }
    let members: HashSet<usize> = sorted.iter().copied().collect();
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &x in &sorted {
        let c = coset(d, x, &subs[0]);
        if c.iter().any(|y| !members.contains(y)) {
            return Err(Error::Invariant("M is not a union of H_0-cosets".into()));
        }
        classes.entry(c[0]).or_insert(c);
    }
    if classes.len() != n - 1 {
        return Err(Error::Invariant(format!("M splits into {} cosets, expected {}", classes.len(), n - 1)));
    }
    let mut out: Vec<ZetaEntry> =
        classes.keys().map(|&rep| ZetaEntry { block: 0, class: rep, value: -inv_n.clone() }).collect();
    for (i, h) in subs.iter().enumerate().skip(1) {
        out.push(ZetaEntry { block: i, class: coset(d, gamma, h)[0], value: inv_n.clone() });
    }
    Ok(out)
}

/// `↑ζ` for a sparse `ζ` over the subgroups `subs`, computed from cosets.
pub fn lift_sparse(d: &FiniteQuadraticModule, subs: &[Subgroup], zeta: &[ZetaEntry]) -> BTreeMap<usize, Rational> {
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for z in zeta {
        for x in coset(d, z.class, &subs[z.block]) {
            *out.entry(x).or_insert_with(Rational::zero) += &z.value;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Whether `↑ζ = e_γ` exactly.
pub fn lifts_to_basis_vector(d: &FiniteQuadraticModule, subs: &[Subgroup], zeta: &[ZetaEntry], gamma: usize) -> bool {
    let lifted = lift_sparse(d, subs, zeta);
    lifted.len() == 1 && lifted.get(&gamma).is_some_and(|v| *v == Rational::from_integer(BigInt::from(1)))
}

/// The dense vector of a sparse `ζ` in the coordinates of `system`, where
/// `blocks[i]` is the system block of the `i`-th subgroup of the sequence.
pub fn densify(system: &LiftSystem, blocks: &[usize], zeta: &[ZetaEntry]) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); system.rows()];
    for z in zeta {
        let block = *blocks.get(z.block).ok_or_else(|| Error::Invariant("block out of range".into()))?;
        let row = system.row_of(block, z.class).ok_or_else(|| Error::Invariant("class outside H^⊥".into()))?;
        v[row] += &z.value;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lifts::system::build_lift_system;

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    fn el(c: &[u64]) -> Element {
        Element::new(c.to_vec())
    }

    #[test]
    fn two_hyperbolic_planes() {
        let d = form("2^1:A+2^1:A");
        let (delta, mu) = (el(&[1, 0, 0, 0]), el(&[0, 0, 1, 0]));
        let seq = nice_sequence(&d, &d.zero(), &delta, &mu, 2, 1).unwrap();
        assert_eq!(seq.generators, vec![mu.clone(), delta.clone(), el(&[1, 0, 1, 0])]);
        assert_eq!(verify_nice(&d, &seq), Ok(()));
        let zeta = preimage_basis_vector(&d, 0, &seq).unwrap();
        let neg: Vec<_> = zeta.iter().filter(|z| z.value < Rational::zero()).collect();
        assert_eq!(neg.len(), 1);
        assert_eq!(neg[0].value, rat(-1, 2));
        assert_eq!(zeta.len(), 3);
        assert!(lifts_to_basis_vector(&d, seq.subgroups(), &zeta, 0));

        let system = build_lift_system(&d, seq.subgroups(), false).unwrap();
        let dense = densify(&system, &[0, 1, 2], &zeta).unwrap();
        let up = system.up_apply(&dense);
        assert_eq!(up[0], rat(1, 1));
        assert!(up[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn ternary_example() {
        let d = form("3^1:a=1+3^1:a=2+3^1:a=1+3^1:a=2");
        let (delta, mu) = (el(&[1, 1, 0, 0]), el(&[0, 0, 1, 1]));
        let seq = nice_sequence(&d, &d.zero(), &delta, &mu, 3, 1).unwrap();
        assert_eq!(seq.subgroups().len(), 4);
        assert!(seq.subgroups().iter().all(|h| h.order() == 3));
        let system = build_lift_system(&d, seq.subgroups(), false).unwrap();
        let blocks: Vec<usize> = (0..4).collect();
        let mut admitted = 0;
        for g in 0..d.order() as usize {
            let target = d.element(g);
            let Ok(seq) = NiceSequence::from_generators(&d, 3, target, seq.generators.clone()) else {
                continue;
            };
            if verify_nice(&d, &seq).is_err() {
                continue;
            }
            admitted += 1;
            let zeta = preimage_basis_vector(&d, g, &seq).unwrap();
            let up = system.up_apply(&densify(&system, &blocks, &zeta).unwrap());
            for (i, v) in up.iter().enumerate() {
                assert_eq!(*v, rat((i == g) as i64, 1));
            }
        }
        assert_eq!(admitted, 9);
    }

    #[test]
    fn rejects_bad_input() {
        let d = form("3^1:a=1+3^1:a=2+3^1:a=1+3^1:a=2");
        let delta = el(&[1, 1, 0, 0]);
        assert!(matches!(nice_sequence(&d, &d.zero(), &delta, &el(&[2, 2, 0, 0]), 3, 1), Err(Error::Input(_))));
        assert!(matches!(nice_sequence(&d, &d.zero(), &el(&[1, 0, 0, 0]), &delta, 3, 1), Err(Error::Input(_))));
    }

    #[test]
    fn detects_violations() {
        let d = form("3^1:a=1+3^1:a=2+3^1:a=1+3^1:a=2");
        let good = nice_sequence(&d, &d.zero(), &el(&[1, 1, 0, 0]), &el(&[0, 0, 1, 1]), 3, 1).unwrap();
        // a generator replaced by one that is not orthogonal to the others
        let mut gens = good.generators.clone();
        gens[1] = el(&[1, 2, 0, 0]);
        let bad = NiceSequence::from_generators(&d, 3, d.zero(), gens).unwrap();
        assert_eq!(verify_nice(&d, &bad), Err(NiceViolation::Orthogonality));
        // ⟨δ + 2μ⟩ replaced by a second copy of ⟨δ + μ⟩: μ + 2δ is no longer covered
        let mut gens = good.generators.clone();
        gens[3] = el(&[2, 2, 2, 2]);
        let bad = NiceSequence::from_generators(&d, 3, d.zero(), gens).unwrap();
        assert_eq!(verify_nice(&d, &bad), Err(NiceViolation::Closure));
        let bad = NiceSequence::from_generators(&d, 3, el(&[1, 0, 0, 0]), good.generators.clone()).unwrap();
        assert_eq!(verify_nice(&d, &bad), Err(NiceViolation::Target));
    }

    #[test]
    fn corrupted_sequence_errors() {
        let d = form("3^1:a=1+3^1:a=2+3^1:a=1+3^1:a=2");
        let good = nice_sequence(&d, &d.zero(), &el(&[1, 1, 0, 0]), &el(&[0, 0, 1, 1]), 3, 1).unwrap();
        let mut gens = good.generators.clone();
        gens[2] = gens[1].clone();
        let bad = NiceSequence::from_generators(&d, 3, d.zero(), gens).unwrap();
        assert!(matches!(preimage_basis_vector(&d, 0, &bad), Err(Error::Invariant(_))));
    }
}
