use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvenKind {
    /// `x = 0`: both generators isotropic.
    A,
    /// `x = 2`: `Q(γ) = Q(δ) = 1/2^e`.
    B,
}

/// One constituent of a Jordan splitting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JordanComponent {
    /// Cyclic block of order `p^e`, `(γ,γ) = a/p^e`.
    Odd { p: u64, e: u32, a: u64 },
    /// Cyclic block of order `2^e`, `(γ,γ) = a/2^e`, `Q(γ) = (a + v·2^e)/2^{e+1}`.
    TwoOdd { e: u32, a: u64, v: u8 },
    /// Rank-two block of exponent `2^e` with Gram `2^{-e}[[x,1],[1,x]]`.
    TwoEven { e: u32, kind: EvenKind },
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl JordanComponent {
    pub fn odd(p: u64, e: u32, a: i64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::validation(format!("{p} is not an odd prime")));
        }
        if e == 0 {
            return Err(Error::validation("exponent must be positive"));
        }
        let q = p.checked_pow(e).ok_or_else(|| Error::validation("p^e overflows"))?;
        let a = a.rem_euclid(q as i64) as u64;
        if a % p == 0 {
            return Err(Error::validation(format!("a = {a} is divisible by p = {p}")));
        }
        Ok(JordanComponent::Odd { p, e, a })
    }

    pub fn two_odd(e: u32, a: i64, v: u8) -> Result<Self> {
        if e == 0 || e > 40 {
            return Err(Error::validation("2-adic exponent out of range"));
        }
        if a.rem_euclid(2) == 0 {
            return Err(Error::validation(format!("a = {a} must be odd")));
        }
        if v > 1 {
            return Err(Error::validation("v must be 0 or 1"));
        }
        let q = 1i64 << e;
        let c = (a + v as i64 * q).rem_euclid(2 * q);
        Ok(JordanComponent::TwoOdd {
            e,
            a: (c % q) as u64,
            v: (c / q) as u8,
        })
    }

    pub fn two_even(e: u32, kind: EvenKind) -> Result<Self> {
        if e == 0 || e > 40 {
            return Err(Error::validation("2-adic exponent out of range"));
        }
        Ok(JordanComponent::TwoEven { e, kind })
    }

    pub fn prime(&self) -> u64 {
        match self {
            JordanComponent::Odd { p, .. } => *p,
            _ => 2,
        }
    }

    pub fn exponent(&self) -> u32 {
        match self {
            JordanComponent::Odd { e, .. }
            | JordanComponent::TwoOdd { e, .. }
            | JordanComponent::TwoEven { e, .. } => *e,
        }
    }

    /// Number of cyclic generators contributed.
    pub fn rank(&self) -> usize {
        match self {
            JordanComponent::TwoEven { .. } => 2,
            _ => 1,
        }
    }

    pub fn group_order(&self) -> u64 {
        let q = self.prime().pow(self.exponent());
        q.pow(self.rank() as u32)
    }
}

impl fmt::Display for JordanComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JordanComponent::Odd { p, e, a } => write!(f, "{p}^{e}:a={a}"),
            JordanComponent::TwoOdd { e, a, v } => write!(f, "2^{e}:a={a},v={v}"),
            JordanComponent::TwoEven { e, kind } => write!(f, "2^{e}:{kind:?}"),
        }
    }
}

impl FromStr for JordanComponent {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |why: &str| Error::validation(format!("malformed Jordan component {text:?}: {why}"));
        let (head, tail) = text.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let (p, e) = head.trim().split_once('^').ok_or_else(|| bad("missing '^'"))?;
        let p: u64 = p.trim().parse().map_err(|_| bad("bad prime"))?;
        let e: u32 = e.trim().parse().map_err(|_| bad("bad exponent"))?;
        let tail = tail.trim();
        if p == 2 {
            match tail {
                "A" => return JordanComponent::two_even(e, EvenKind::A),
                "B" => return JordanComponent::two_even(e, EvenKind::B),
                _ => {}
            }
            let mut a = None;
            let mut v = None;
            for part in tail.split(',') {
                let (key, val) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                match key.trim() {
                    "a" => a = Some(val.trim().parse::<i64>().map_err(|_| bad("bad a"))?),
                    "v" => v = Some(val.trim().parse::<u8>().map_err(|_| bad("bad v"))?),
                    _ => return Err(bad("unknown key")),
                }
            }
            let a = a.ok_or_else(|| bad("missing a"))?;
            JordanComponent::two_odd(e, a, v.ok_or_else(|| bad("missing v"))?)
        } else {
            let val = tail
                .strip_prefix("a=")
                .ok_or_else(|| bad("expected a=<int>"))?;
            let a: i64 = val.trim().parse().map_err(|_| bad("bad a"))?;
            JordanComponent::odd(p, e, a)
        }
    }
}

/// An ordered list of Jordan constituents; the form is their orthogonal sum.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanSymbol {
    pub components: Vec<JordanComponent>,
}

impl JordanSymbol {
    pub fn new(components: Vec<JordanComponent>) -> Self {
        JordanSymbol { components }
    }

    /// The symbol repeated `n` times as an orthogonal sum.
    pub fn repeat(&self, n: usize) -> Self {
        let mut components = Vec::new();
        for _ in 0..n {
            components.extend(self.components.iter().cloned());
        }
        JordanSymbol { components }
    }

    pub fn concat(&self, other: &JordanSymbol) -> Self {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        JordanSymbol { components }
    }

    /// Generator index ranges of each component in the constructed form.
    pub fn generator_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.components
            .iter()
            .map(|c| {
                let r = start..start + c.rank();
                start = r.end;
                r
            })
            .collect()
    }

    pub fn group_order(&self) -> Option<u64> {
        self.components
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.group_order()))
    }

    pub fn level(&self) -> u64 {
        self.components.iter().fold(1u64, |acc, c| {
            let l = match c {
                JordanComponent::Odd { p, e, .. } => p.pow(*e),
                JordanComponent::TwoOdd { e, .. } => 1u64 << (e + 1),
                JordanComponent::TwoEven { e, .. } => 1u64 << e,
            };
            acc.lcm(&l)
        })
    }
}

impl fmt::Display for JordanSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for JordanSymbol {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(JordanSymbol::default());
        }
        let mut components = Vec::new();
        let mut rest = text;
        // '+' separates components, but a '+' never appears inside one.
        while !rest.is_empty() {
            let (head, tail) = rest.split_once('+').unwrap_or((rest, ""));
            components.push(head.parse()?);
            rest = tail;
            if rest.is_empty() && text.ends_with('+') {
                return Err(Error::validation("trailing '+' in Jordan symbol"));
            }
        }
        Ok(JordanSymbol { components })
    }
}
