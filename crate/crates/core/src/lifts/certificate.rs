use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nice::{lifts_to_basis_vector, nice_sequence, preimage_basis_vector, verify_nice, NiceSequence, ZetaEntry};
use super::system::{build_lift_system, is_up_surjective};
use super::theorem::{check_theorem, part_generators, Hypothesis};
use crate::error::{Error, Result};
use crate::fqm::{Element, FiniteQuadraticModule, JordanSymbol, Subgroup, ENUMERATION_BOUND};
use crate::padic::{
    combine, find_two_isotropic_form, inv_unit, split_primitive_pair, to_element, valuation, Construction, ZqForm,
};

/// The orthogonal summand `(Z/p^e)^n` the certificate works in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpPart {
    pub p: u64,
    pub e: u32,
    pub generators: Vec<usize>,
}

/// How `γ` was split off before searching its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCase {
    /// `γ` has no component in the designated part; the whole part is used.
    Zero,
    /// The primitive part of `γ` has unit norm and splits off alone.
    UnitNorm,
    /// The primitive part of `γ` spans a plane with a partner `δ'`.
    Plane,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCertificate {
    pub index: usize,
    pub gamma: Element,
    pub case: SplitCase,
    pub delta: Element,
    pub mu: Element,
    pub level: u32,
    pub construction: Construction,
    pub sequence: NiceSequence,
    pub zeta: Vec<ZetaEntry>,
}

/// Explicit preimages `ζ_γ` with `↑ζ_γ = e_γ` for every `γ ∈ D`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub hypothesis: Option<Hypothesis>,
    pub part: ImpPart,
    pub order: u64,
    /// Distinct subgroups used across all sequences.
    pub subgroup_count: usize,
    /// Whether `↑` of the system on all those subgroups was checked to be onto.
    pub system_checked: bool,
    pub elements: Vec<ElementCertificate>,
}

/// Basis of the orthogonal complement of a unit-norm vector `v`.
fn unit_norm_complement(form: &ZqForm, v: &[u64]) -> Vec<Vec<u64>> {
    let (p, q, n) = (form.p(), form.q(), form.rank());
    let w = form.bilinear().apply(v);
    let i = w.iter().position(|x| x % p != 0).expect("unit norm implies a unit coordinate");
    let wi = inv_unit(w[i], p, q).expect("unit");
    (0..n)
        .filter(|&k| k != i)
        .map(|k| {
            let mut u = vec![0u64; n];
            u[k] = 1;
            u[i] = (q - (w[k] as u128 * wi as u128 % q as u128) as u64) % q;
            u
        })
        .collect()
}

/// One certificate entry, following the case split of the proof.
pub fn certify_element(d: &FiniteQuadraticModule, part: &ImpPart, form: &ZqForm, index: usize) -> Result<ElementCertificate> {
    let fail = |reason: String| Error::Certificate { index, reason };
    let (p, e, q) = (part.p, part.e, form.q());
    let gamma = d.element(index);
    let g: Vec<u64> = part.generators.iter().map(|&i| gamma.coords[i] % q).collect();
    let n = g.len();
    let (basis, case) = match g.iter().filter_map(|&x| valuation(x, p, e)).min() {
        None => ((0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect(), SplitCase::Zero),
        Some(s) => {
            let ps = p.pow(s);
            let prim: Vec<u64> = g.iter().map(|&x| x / ps).collect();
            if form.pair(&prim, &prim) % p != 0 {
                (unit_norm_complement(form, &prim), SplitCase::UnitNorm)
            } else {
                let split = split_primitive_pair(form.bilinear(), &prim).map_err(|err| fail(err.to_string()))?;
                (split.complement, SplitCase::Plane)
            }
        }
    };
    let sub = form.restrict(&basis);
    let pair = find_two_isotropic_form(&sub).map_err(|err| fail(err.to_string()))?;
    let delta = to_element(d, &part.generators, &combine(&basis, &pair.delta, q));
    let mu = to_element(d, &part.generators, &combine(&basis, &pair.mu, q));
    let sequence = nice_sequence(d, &gamma, &delta, &mu, p, pair.level).map_err(|err| fail(err.to_string()))?;
    let zeta = preimage_basis_vector(d, index, &sequence).map_err(|err| fail(err.to_string()))?;
    if !lifts_to_basis_vector(d, sequence.subgroups(), &zeta, index) {
        return Err(fail("↑ζ differs from e_γ".into()));
    }
    Ok(ElementCertificate { index, gamma, case, delta, mu, level: pair.level, construction: pair.construction, sequence, zeta })
}

/// Certificates for all elements of `D`, working inside `part`.
///
/// With `check_system` the lift system on all subgroups that occur is built
/// and `↑` is confirmed to be onto by an independent rank computation.
pub fn surjectivity_certificate_for(
    d: &FiniteQuadraticModule,
    part: &ImpPart,
    hypothesis: Option<Hypothesis>,
    check_system: bool,
) -> Result<Certificate> {
    d.ensure_enumerable(ENUMERATION_BOUND)?;
    let form = ZqForm::from_fqm(d, &part.generators)?;
    if (form.p(), form.e()) != (part.p, part.e) {
        return Err(Error::validation("designated part does not have the stated exponent"));
    }
    let elements: Vec<ElementCertificate> = (0..d.order() as usize)
        .into_par_iter()
        .map(|i| certify_element(d, part, &form, i))
        .collect::<Result<_>>()?;
    let mut seen: HashMap<Vec<usize>, Subgroup> = HashMap::new();
    for c in &elements {
        for h in c.sequence.subgroups() {
            seen.entry(h.indices().to_vec()).or_insert_with(|| h.clone());
        }
    }
    let subgroup_count = seen.len();
    if check_system {
        let mut subs: Vec<Subgroup> = seen.into_values().collect();
        subs.sort_by(|a, b| a.indices().cmp(b.indices()));
        let system = build_lift_system(d, &subs, false)?;
        if !is_up_surjective(&system)? {
            return Err(Error::Invariant("assembled lift system has a nonzero kernel".into()));
        }
    }
    Ok(Certificate { hypothesis, part: part.clone(), order: d.order(), subgroup_count, system_checked: check_system, elements })
}

/// Checks the hypotheses on `symbol` and certifies `from_jordan(symbol)`.
pub fn surjectivity_certificate(symbol: &JordanSymbol, check_system: bool) -> Result<Certificate> {
    let check = check_theorem(symbol);
    let fired = check.fired.ok_or_else(|| Error::Hypothesis(format!("no hypothesis (i)-(iv) holds for {symbol}")))?;
    let d = FiniteQuadraticModule::from_jordan(symbol);
    let part = ImpPart { p: fired.p, e: fired.j, generators: part_generators(symbol, fired.p, fired.j) };
    surjectivity_certificate_for(&d, &part, Some(fired.hypothesis), check_system)
}

/// Re-checks every entry of a certificate against `D`.
pub fn verify_certificate(d: &FiniteQuadraticModule, cert: &Certificate) -> Result<()> {
    if cert.elements.len() != d.order() as usize {
        return Err(Error::validation("certificate does not cover every element"));
    }
    cert.elements.par_iter().enumerate().try_for_each(|(i, c)| {
        let fail = |reason: &str| Error::Certificate { index: i, reason: reason.into() };
        if c.index != i || d.index_of(&c.gamma)? != i {
            return Err(fail("element index mismatch"));
        }
        let mut seq = c.sequence.clone();
        seq.rebuild(d)?;
        if seq.target != c.gamma {
            return Err(fail("sequence target is not γ"));
        }
        if let Err(v) = verify_nice(d, &seq) {
            return Err(fail(&format!("sequence violates {v:?}")));
        }
        if !lifts_to_basis_vector(d, seq.subgroups(), &c.zeta, i) {
            return Err(fail("↑ζ differs from e_γ"));
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> JordanSymbol {
        s.parse().unwrap()
    }

    #[test]
    fn refuses_without_hypothesis() {
        assert!(matches!(surjectivity_certificate(&sym("3^1:a=1"), false), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn second_hypothesis() {
        let s = sym("3^2:a=1").repeat(4);
        let cert = surjectivity_certificate(&s, false).unwrap();
        assert_eq!(cert.elements.len(), 6561);
        let d = FiniteQuadraticModule::from_jordan(&s);
        verify_certificate(&d, &cert).unwrap();
        assert!(cert.elements.iter().any(|c| c.case == SplitCase::UnitNorm));
        assert!(cert.elements.iter().any(|c| c.case == SplitCase::Plane));
    }

    #[test]
    fn extra_summand() {
        // a third-hypothesis part next to an unrelated ternary block
        let s = sym("2^1:a=1,v=0").repeat(9).concat(&sym("3^1:a=1"));
        let cert = surjectivity_certificate(&s, true).unwrap();
        assert_eq!(cert.hypothesis, Some(Hypothesis::III));
        let d = FiniteQuadraticModule::from_jordan(&s);
        verify_certificate(&d, &cert).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let s = sym("3^2:a=1").repeat(4);
        let d = FiniteQuadraticModule::from_jordan(&s);
        let form = ZqForm::from_fqm(&d, &[0, 1, 2, 3]).unwrap();
        let part = ImpPart { p: 3, e: 2, generators: vec![0, 1, 2, 3] };
        let c = certify_element(&d, &part, &form, 10).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let mut back: ElementCertificate = serde_json::from_str(&text).unwrap();
        back.sequence.rebuild(&d).unwrap();
        assert_eq!(back, c);
    }
}
