use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::fqm::{FiniteQuadraticModule, JordanComponent, JordanSymbol};
use crate::padic::prime_power;

/// The four hypotheses under which every form is an oldform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    /// `p` odd, `j = 1`, at least 7 constituents.
    I,
    /// `p` odd, `j > 1`, at least 4 constituents.
    II,
    /// `p = 2`, `j ∈ {1, 2}`, at least 9 constituents.
    III,
    /// `p = 2`, `j ≥ 3`, at least 5 constituents.
    IV,
}

impl Hypothesis {
    pub fn for_part(p: u64, j: u32) -> Hypothesis {
        match (p, j) {
            (2, 1 | 2) => Hypothesis::III,
            (2, _) => Hypothesis::IV,
            (_, 1) => Hypothesis::I,
            _ => Hypothesis::II,
        }
    }

    /// Minimal number of constituents of the `p^j` part.
    pub fn required(self) -> usize {
        match self {
            Hypothesis::I => 7,
            Hypothesis::II => 4,
            Hypothesis::III => 9,
            Hypothesis::IV => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Hypothesis::I => "(i)",
            Hypothesis::II => "(ii)",
            Hypothesis::III => "(iii)",
            Hypothesis::IV => "(iv)",
        }
    }
}

/// Constituent counts of the `p^j` part of a Jordan symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartSummary {
    pub p: u64,
    pub j: u32,
    /// Number of rank-2 even blocks (only for `p = 2`).
    pub even_blocks: usize,
    /// Number of rank-1 constituents.
    pub odd_blocks: usize,
    /// Multiplicity of `Z/p^j` in the underlying group.
    pub cyclic_multiplicity: usize,
    pub hypothesis: Hypothesis,
    pub required: usize,
    pub satisfied: bool,
}

impl PartSummary {
    pub fn constituents(&self) -> usize {
        self.even_blocks + self.odd_blocks
    }
}

/// The hypothesis that applies, with the part it was found on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fired {
    pub hypothesis: Hypothesis,
    pub p: u64,
    pub j: u32,
}

/// The `|D| ≥ N^9` gate and the multiplicity argument behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryCheck {
    pub order: String,
    pub level: u64,
    /// `N^9` in decimal.
    pub bound: String,
    pub meets_bound: bool,
    /// Largest multiplicity of a cyclic factor `Z/p^j`.
    pub max_multiplicity: usize,
    pub multiplicity_at_least_9: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub parts: Vec<PartSummary>,
    pub fired: Option<Fired>,
    pub corollary: CorollaryCheck,
}

fn corollary(order: BigUint, level: u64, max_multiplicity: usize) -> CorollaryCheck {
    let bound: BigUint = Pow::pow(BigUint::from(level), 9u32);
    CorollaryCheck {
        meets_bound: order >= bound,
        order: order.to_string(),
        level,
        bound: bound.to_string(),
        max_multiplicity,
        multiplicity_at_least_9: max_multiplicity >= 9,
    }
}

fn first_fired(parts: &[PartSummary]) -> Option<Fired> {
    parts
        .iter()
        .filter(|s| s.satisfied)
        .min_by_key(|s| (s.hypothesis, s.p, s.j))
        .map(|s| Fired { hypothesis: s.hypothesis, p: s.p, j: s.j })
}

/// Evaluates the hypotheses on the constituent counts of a Jordan symbol.
pub fn check_theorem(symbol: &JordanSymbol) -> TheoremCheck {
    let mut counts: BTreeMap<(u64, u32), (usize, usize)> = BTreeMap::new();
    let mut order = BigUint::one();
    for c in &symbol.components {
        let entry = counts.entry((c.prime(), c.exponent())).or_default();
        match c {
            JordanComponent::TwoEven { .. } => entry.0 += 1,
            _ => entry.1 += 1,
        }
        order *= BigUint::from(c.group_order());
    }
    let parts: Vec<PartSummary> = counts
        .into_iter()
        .map(|((p, j), (even, odd))| {
            let hypothesis = Hypothesis::for_part(p, j);
            PartSummary {
                p,
                j,
                even_blocks: even,
                odd_blocks: odd,
                cyclic_multiplicity: 2 * even + odd,
                hypothesis,
                required: hypothesis.required(),
                satisfied: even + odd >= hypothesis.required(),
            }
        })
        .collect();
    let max_mult = parts.iter().map(|s| s.cyclic_multiplicity).max().unwrap_or(0);
    TheoremCheck { fired: first_fired(&parts), corollary: corollary(order, symbol.level(), max_mult), parts }
}

/// Generators of the `p^j` constituents of `symbol` in `from_jordan(symbol)`.
pub fn part_generators(symbol: &JordanSymbol, p: u64, j: u32) -> Vec<usize> {
    symbol
        .components
        .iter()
        .zip(symbol.generator_ranges())
        .filter(|(c, _)| c.prime() == p && c.exponent() == j)
        .flat_map(|(_, r)| r)
        .collect()
}

/// Hypothesis check from the group structure alone.
///
/// Odd parts are read off exactly. For `p = 2` the multiplicity `m = 2e + o`
/// only bounds `e + o ≥ m/2`, so `m ≥ 2·required` is demanded.
pub fn check_group_structure(d: &FiniteQuadraticModule) -> (Vec<PartSummary>, Option<Fired>) {
    let mut mult: BTreeMap<(u64, u32), usize> = BTreeMap::new();
    for &order in d.orders() {
        let mut rest = order;
        let mut f = 2;
        while rest > 1 {
            if rest % f == 0 {
                let mut q = 1;
                while rest % f == 0 {
                    rest /= f;
                    q *= f;
                }
                let (p, j) = prime_power(q).expect("prime power");
                *mult.entry((p, j)).or_default() += 1;
            }
            f += 1;
        }
    }
    let parts: Vec<PartSummary> = mult
        .into_iter()
        .map(|((p, j), m)| {
            let hypothesis = Hypothesis::for_part(p, j);
            let need = if p == 2 { 2 * hypothesis.required() } else { hypothesis.required() };
            PartSummary {
                p,
                j,
                even_blocks: 0,
                odd_blocks: if p == 2 { 0 } else { m },
                cyclic_multiplicity: m,
                hypothesis,
                required: need,
                satisfied: m >= need,
            }
        })
        .collect();
    let fired = first_fired(&parts);
    (parts, fired)
}

/// The corollary gate for a bare form.
pub fn corollary_for(d: &FiniteQuadraticModule) -> CorollaryCheck {
    let (parts, _) = check_group_structure(d);
    let max_mult = parts.iter().map(|s| s.cyclic_multiplicity).max().unwrap_or(0);
    corollary(BigUint::from(d.order()), d.level(), max_mult)
}
