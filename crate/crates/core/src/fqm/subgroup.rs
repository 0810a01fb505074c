use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::module::{Element, FiniteQuadraticModule};
use crate::error::Result;

/// A subgroup of `D`, kept as sorted element indices together with generators.
///
/// Index order coincides with lexicographic order on coordinates, so the
/// element list is sorted in both senses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    generators: Vec<Element>,
    indices: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(d: &FiniteQuadraticModule) -> Self {
        let _ = d;
        Subgroup { generators: Vec::new(), indices: vec![0] }
    }

    /// The subgroup generated by `gens`.
    pub fn generated(d: &FiniteQuadraticModule, gens: &[Element]) -> Result<Self> {
        let mut members: HashSet<usize> = HashSet::from([0]);
        let mut list = vec![0usize];
        for g in gens {
            let gi = d.index_of(g)?;
            if members.contains(&gi) {
                continue;
            }
            extend_by(d, &mut members, &mut list, gi);
        }
        list.sort_unstable();
        Ok(Subgroup { generators: gens.to_vec(), indices: list })
    }

    /// Builds a subgroup from a closed index set, choosing generators greedily.
    pub fn from_closed_indices(d: &FiniteQuadraticModule, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        let mut members: HashSet<usize> = HashSet::from([0]);
        let mut list = vec![0usize];
        let mut generators = Vec::new();
        for &i in &indices {
            if members.len() == indices.len() {
                break;
            }
            if !members.contains(&i) {
                generators.push(d.element(i));
                extend_by(d, &mut members, &mut list, i);
            }
        }
        Subgroup { generators, indices }
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn elements(&self, d: &FiniteQuadraticModule) -> Vec<Element> {
        self.indices.iter().map(|&i| d.element(i)).collect()
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.indices.len() == 1
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn contains(&self, d: &FiniteQuadraticModule, x: &Element) -> bool {
        d.index_of(x).map_or(false, |i| self.contains_index(i))
    }

    /// True iff every element (not only every generator) has `Q = 0`.
    pub fn is_isotropic(&self, d: &FiniteQuadraticModule) -> bool {
        let mut coords = vec![0u64; d.rank()];
        self.indices.iter().all(|&i| {
            d.decode(i, &mut coords);
            d.q_numerator(&coords) == 0
        })
    }

    /// `S^⊥ = {γ : (γ, s) = 0 for all generators s}`.
    pub fn orthogonal_complement(&self, d: &FiniteQuadraticModule) -> Subgroup {
        let gens: Vec<Vec<u64>> = self.generators.iter().map(|g| g.coords.clone()).collect();
        let mut perp = Vec::new();
        d.for_each_element(|idx, coords| {
            if gens.iter().all(|g| d.b_numerator(coords, g) == 0) {
                perp.push(idx);
            }
        });
        Subgroup::from_closed_indices(d, perp)
    }
}

fn extend_by(d: &FiniteQuadraticModule, members: &mut HashSet<usize>, list: &mut Vec<usize>, g: usize) {
    let mut multiples = vec![];
    let mut m = g;
    while m != 0 {
        multiples.push(m);
        m = d.add_index(m, g);
    }
    let base = list.clone();
    for &s in &base {
        for &k in &multiples {
            let x = d.add_index(s, k);
            if members.insert(x) {
                list.push(x);
            }
        }
    }
}

/// `S^⊥` for a subgroup `S` of `D`.
pub fn orthogonal_complement(d: &FiniteQuadraticModule, s: &Subgroup) -> Subgroup {
    s.orthogonal_complement(d)
}

/// Whether every element of `s` is isotropic.
pub fn is_isotropic(d: &FiniteQuadraticModule, s: &Subgroup) -> bool {
    s.is_isotropic(d)
}

/// All isotropic subgroups of order at most `max_order`, sorted by order and
/// then by element list.
///
/// Breadth-first closure: start from cyclic groups of isotropic elements and
/// adjoin isotropic elements orthogonal to the current subgroup.
pub fn isotropic_subgroups(
    d: &FiniteQuadraticModule,
    include_trivial: bool,
    max_order: Option<usize>,
    bound: u64,
) -> Result<Vec<Subgroup>> {
    d.ensure_enumerable(bound)?;
    let max_order = max_order.unwrap_or(usize::MAX);
    let mut iso = Vec::new();
    d.for_each_element(|idx, coords| {
        if idx != 0 && d.q_numerator(coords) == 0 {
            iso.push(idx);
        }
    });
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let trivial = Subgroup::trivial(d);
    seen.insert(trivial.indices.clone());
    queue.push_back(trivial.clone());
    if include_trivial {
        out.push(trivial);
    }
    while let Some(s) = queue.pop_front() {
        let gens: Vec<Vec<u64>> = s.generators.iter().map(|g| g.coords.clone()).collect();
        for &x in &iso {
            if s.contains_index(x) {
                continue;
            }
            let xc = d.element(x);
            if gens.iter().any(|g| d.b_numerator(&xc.coords, g) != 0) {
                continue;
            }
            let mut new_gens = s.generators.clone();
            new_gens.push(xc);
            let t = Subgroup::generated(d, &new_gens)?;
            if t.order() > max_order || seen.contains(&t.indices) {
                continue;
            }
            seen.insert(t.indices.clone());
            if t.is_isotropic(d) {
                out.push(t.clone());
                queue.push_back(t);
            }
        }
    }
    out.sort_by(|a, b| (a.order(), &a.indices).cmp(&(b.order(), &b.indices)));
    Ok(out)
}
