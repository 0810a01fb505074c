use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::matrix::ScaledMatrix;
use super::ring::CycRing;
use super::sl2::{sl2_word, Mat2, Run, Sl2Word};
use crate::error::{Error, Result};
use crate::fqm::FiniteQuadraticModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    S,
    T,
}

/// `lcm(level, 8)`: every entry of `ρ` lives in `Q(ζ_L)` for this `L`.
pub fn weil_order(d: &FiniteQuadraticModule) -> u64 {
    d.level().lcm(&8)
}

/// The Weil representation of an even-signature form, with the matrices of
/// `ρ(T)` and `ρ(S)` cached.
#[derive(Clone, Debug)]
pub struct WeilRep {
    signature: u8,
    base: u64,
    ring: Arc<CycRing>,
    t_exps: Vec<u64>,
    t: ScaledMatrix,
    s: ScaledMatrix,
}

impl WeilRep {
    pub fn new(d: &FiniteQuadraticModule) -> Result<Self> {
        WeilRep::at_order(d, weil_order(d))
    }

    /// Entries realized in `Q(ζ_order)`; `order` must be a multiple of `lcm(level, 8)`.
    pub fn at_order(d: &FiniteQuadraticModule, order: u64) -> Result<Self> {
        let signature = d.signature()?;
        if signature % 2 != 0 {
            return Err(Error::OddSignature(signature));
        }
        if order % weil_order(d) != 0 {
            return Err(Error::InvalidOrder(format!(
                "{order} is not a multiple of lcm(level, 8) = {}",
                weil_order(d)
            )));
        }
        let ring = Arc::new(CycRing::new(order));
        let n = d.order() as usize;
        let phi = ring.phi();
        let level = d.level();
        let step = order / level;
        let mut t_exps = vec![0u64; n];
        d.for_each_element(|i, c| t_exps[i] = d.q_numerator(c) * step);
        let mut tdata = vec![0i128; n * n * phi];
        for i in 0..n {
            tdata[(i * n + i) * phi..(i * n + i + 1) * phi].copy_from_slice(ring.monomial(t_exps[i]));
        }
        let t = ScaledMatrix::from_raw(n, n, ring.clone(), n as u64, 0, tdata);

        let elements = d.elements_bounded(u64::MAX)?;
        let phase = (order - (signature as u64 * order / 8) % order) % order;
        let mut sdata = vec![0i128; n * n * phi];
        for (b, beta) in elements.iter().enumerate() {
            for (g, gamma) in elements.iter().enumerate() {
                let pair = d.b_numerator(&gamma.coords, &beta.coords) * step;
                let e = (phase + order - pair % order) % order;
                sdata[(b * n + g) * phi..(b * n + g + 1) * phi].copy_from_slice(ring.monomial(e));
            }
        }
        let s = ScaledMatrix::from_raw(n, n, ring.clone(), n as u64, 1, sdata);
        Ok(WeilRep { signature, base: n as u64, ring, t_exps, t, s })
    }

    pub fn signature(&self) -> u8 {
        self.signature
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn order(&self) -> u64 {
        self.ring.order()
    }

    pub(crate) fn ring(&self) -> &Arc<CycRing> {
        &self.ring
    }

    pub fn generator(&self, g: Generator) -> &ScaledMatrix {
        match g {
            Generator::S => &self.s,
            Generator::T => &self.t,
        }
    }

    pub fn identity(&self) -> ScaledMatrix {
        ScaledMatrix::identity(self.base as usize, self.ring.clone(), self.base)
    }

    fn t_power_exps(&self, q: i64) -> Vec<u64> {
        let l = self.order() as i128;
        self.t_exps
            .iter()
            .map(|&e| (e as i128 * q as i128).rem_euclid(l) as u64)
            .collect()
    }

    /// `ρ` of a word, with runs of `T` applied as a single diagonal.
    pub fn of_word(&self, word: &Sl2Word) -> Result<ScaledMatrix> {
        let mut acc = self.identity();
        for run in word.runs() {
            acc = match run {
                Run::T(q) => acc.mul_diagonal_right(&self.t_power_exps(q)),
                Run::S(k) => {
                    let mut a = acc;
                    for _ in 0..k {
                        a = a.mul(&self.s)?;
                    }
                    a
                }
            };
        }
        Ok(acc)
    }

    pub fn of_matrix(&self, m: Mat2) -> Result<ScaledMatrix> {
        self.of_word(&sl2_word(m)?)
    }
}

/// `ρ(T)` or `ρ(S)` for `D`.
pub fn rho_generator(d: &FiniteQuadraticModule, g: Generator) -> Result<ScaledMatrix> {
    Ok(WeilRep::new(d)?.generator(g).clone())
}

/// `ρ(M)` via the Euclidean word of `M`.
pub fn rho(d: &FiniteQuadraticModule, m: Mat2) -> Result<ScaledMatrix> {
    WeilRep::new(d)?.of_matrix(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, CycNum};
    use crate::weil::sl2::{sl2_word_left, S_MAT};

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    #[test]
    fn trivial_form() {
        let w = WeilRep::new(&form("")).unwrap();
        assert_eq!(w.generator(Generator::T), &w.identity());
        assert_eq!(w.generator(Generator::S), &w.identity());
    }

    #[test]
    fn hyperbolic_plane_generators() {
        let w = WeilRep::new(&form("2^1:A")).unwrap();
        let t = w.generator(Generator::T);
        let diag: Vec<CycNum> = (0..4).map(|i| t.entry(i, i)).collect();
        let expect: Vec<CycNum> = [1, 1, 1, -1].iter().map(|&x| CycNum::from_integer(x, 1)).collect();
        assert_eq!(diag, expect);
        let s = w.generator(Generator::S);
        // |D| = 4 is a square, so the 1/2 is rational
        assert_eq!(s.k(), 0);
        assert_eq!(s.entry(0, 0), CycNum::from_rational(rat(1, 2), 1));
        assert_eq!(s.entry(1, 2), CycNum::from_rational(rat(-1, 2), 1));
        let s2 = w.of_matrix([[-1, 0], [0, -1]]).unwrap();
        assert_eq!(s2, s.mul(s).unwrap());
    }

    #[test]
    fn level_translation_is_trivial() {
        for sym in ["2^1:A", "3^1:a=1+3^1:a=1", "2^2:a=1,v=0+2^2:a=3,v=0", "5^1:a=1+5^1:a=1"] {
            let d = form(sym);
            let w = WeilRep::new(&d).unwrap();
            let n = d.level() as i64;
            assert_eq!(w.of_matrix([[1, n], [0, 1]]).unwrap(), w.identity(), "{sym}");
        }
    }

    #[test]
    fn words_agree() {
        let w = WeilRep::new(&form("3^1:a=1+3^1:a=1")).unwrap();
        for m in [[[2, 1], [1, 1]], [[5, 3], [3, 2]], [[-7, 2], [-4, 1]], S_MAT] {
            let a = w.of_word(&sl2_word(m).unwrap()).unwrap();
            let b = w.of_word(&sl2_word_left(m).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn odd_signature_is_refused() {
        assert!(matches!(WeilRep::new(&form("2^1:a=1,v=0")), Err(Error::OddSignature(1))));
    }
}
