use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::jordan::{EvenKind, JordanComponent, JordanSymbol};
use crate::arith::{gauss_sum, root_of_unity, CycNum, QmodZ};
use crate::error::{Error, Result};
use crate::zmat::{smith, IMat};

/// Default bound on `|D|` for full enumerations.
pub const ENUMERATION_BOUND: u64 = 10_000_000;

/// An element of `D`, in coordinates with respect to the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub coords: Vec<u64>,
}

impl Element {
    pub fn new(coords: Vec<u64>) -> Self {
        Element { coords }
    }
}

/// A discriminant form `(D, Q)` presented by cyclic generators.
///
/// Alongside the Q/Z data the module keeps every value as a numerator over
/// the level, so the hot evaluation paths are pure integer arithmetic.
#[derive(Clone, Debug)]
pub struct FiniteQuadraticModule {
    orders: Vec<u64>,
    gram: Vec<Vec<QmodZ>>,
    qvals: Vec<QmodZ>,
    level: u64,
    gram_num: Vec<Vec<u64>>,
    q_num: Vec<u64>,
    weights: Vec<u64>,
    size: u64,
    signature: OnceLock<std::result::Result<u8, String>>,
}

impl PartialEq for FiniteQuadraticModule {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders && self.gram == other.gram && self.qvals == other.qvals
    }
}

impl FiniteQuadraticModule {
    pub fn new(orders: Vec<u64>, gram: Vec<Vec<QmodZ>>, qvals: Vec<QmodZ>) -> Result<Self> {
        let r = orders.len();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) || qvals.len() != r {
            return Err(Error::validation("gram/qvals dimensions do not match orders"));
        }
        if orders.iter().any(|&d| d == 0) {
            return Err(Error::validation("generator orders must be positive"));
        }
        let mut level = 1u64;
        for i in 0..r {
            level = level.lcm(&qvals[i].den());
            for j in 0..r {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::validation(format!("gram not symmetric at ({i},{j})")));
                }
                if !gram[i][j].mul_int(orders[i] as i128).is_zero() {
                    return Err(Error::validation(format!(
                        "d_{i}·(g_{i},g_{j}) ≠ 0 in Q/Z"
                    )));
                }
                level = level.lcm(&gram[i][j].den());
            }
            if gram[i][i] != qvals[i] + qvals[i] {
                return Err(Error::validation(format!("(g_{i},g_{i}) ≠ 2Q(g_{i})")));
            }
            if !qvals[i].mul_int(orders[i] as i128 * orders[i] as i128).is_zero() {
                return Err(Error::validation(format!("Q(d_{i}·g_{i}) ≠ 0")));
            }
        }
        let mut size = 1u64;
        let mut weights = vec![0u64; r];
        for i in (0..r).rev() {
            weights[i] = size;
            size = size
                .checked_mul(orders[i])
                .ok_or_else(|| Error::Size("group order overflows u64".into()))?;
        }
        let gram_num = gram
            .iter()
            .map(|row| row.iter().map(|x| x.numerator_over(level)).collect())
            .collect();
        let q_num = qvals.iter().map(|x| x.numerator_over(level)).collect();
        Ok(FiniteQuadraticModule {
            orders,
            gram,
            qvals,
            level,
            gram_num,
            q_num,
            weights,
            size,
            signature: OnceLock::new(),
        })
    }

    pub fn trivial() -> Self {
        FiniteQuadraticModule::new(Vec::new(), Vec::new(), Vec::new()).unwrap()
    }

    /// Orthogonal sum of the Jordan blocks of `symbol`.
    pub fn from_jordan(symbol: &JordanSymbol) -> Self {
        let mut orders = Vec::new();
        let mut blocks: Vec<(Vec<Vec<QmodZ>>, Vec<QmodZ>)> = Vec::new();
        for c in &symbol.components {
            match *c {
                JordanComponent::Odd { p, e, a } => {
                    let q = p.pow(e);
                    let inv2 = (q + 1) / 2;
                    orders.push(q);
                    let qa = (inv2 as u128 * a as u128 % q as u128) as i128;
                    blocks.push((vec![vec![QmodZ::new(a as i128, q)]], vec![QmodZ::new(qa, q)]));
                }
                JordanComponent::TwoOdd { e, a, v } => {
                    let q = 1u64 << e;
                    orders.push(q);
                    let qv = a as i128 + v as i128 * q as i128;
                    blocks.push((vec![vec![QmodZ::new(a as i128, q)]], vec![QmodZ::new(qv, 2 * q)]));
                }
                JordanComponent::TwoEven { e, kind } => {
                    let q = 1u64 << e;
                    orders.push(q);
                    orders.push(q);
                    let x = match kind {
                        EvenKind::A => 0,
                        EvenKind::B => 2,
                    };
                    let diag = QmodZ::new(x, q);
                    let off = QmodZ::new(1, q);
                    let qv = QmodZ::new(x, 2 * q);
                    blocks.push((vec![vec![diag, off], vec![off, diag]], vec![qv, qv]));
                }
            }
        }
        let r = orders.len();
        let mut gram = vec![vec![QmodZ::ZERO; r]; r];
        let mut qvals = Vec::with_capacity(r);
        let mut start = 0;
        for (g, q) in blocks {
            for i in 0..g.len() {
                for j in 0..g.len() {
                    gram[start + i][start + j] = g[i][j];
                }
            }
            start += g.len();
            qvals.extend(q);
        }
        FiniteQuadraticModule::new(orders, gram, qvals).expect("Jordan blocks are valid")
    }

    /// `L'/L` for an even lattice `L` with Gram matrix `gram`.
    pub fn from_even_lattice(gram: &[Vec<i64>]) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::validation("lattice Gram matrix is not square"));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::validation("lattice Gram matrix is not symmetric"));
                }
            }
            if gram[i][i] % 2 != 0 {
                return Err(Error::NotEven(gram[i][i]));
            }
        }
        let g: IMat = gram
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        let s = smith(&g, n, n);
        if s.diag.iter().any(|&d| d == 0) {
            return Err(Error::DegenerateLattice);
        }
        let keep: Vec<usize> = (0..n).filter(|&i| s.diag[i] > 1).collect();
        let col = |i: usize| -> Vec<i128> { (0..n).map(|k| s.v[k][i]).collect() };
        let pair = |x: &[i128], y: &[i128]| -> i128 {
            let mut acc = 0i128;
            for a in 0..n {
                for b in 0..n {
                    acc += x[a] * g[a][b] * y[b];
                }
            }
            acc
        };
        let cols: Vec<Vec<i128>> = keep.iter().map(|&i| col(i)).collect();
        let orders: Vec<u64> = keep.iter().map(|&i| s.diag[i] as u64).collect();
        let r = keep.len();
        let mut gmat = vec![vec![QmodZ::ZERO; r]; r];
        let mut qvals = Vec::with_capacity(r);
        for i in 0..r {
            for j in 0..r {
                gmat[i][j] = QmodZ::new(pair(&cols[i], &cols[j]), orders[i] * orders[j]);
            }
            qvals.push(QmodZ::new(pair(&cols[i], &cols[i]), 2 * orders[i] * orders[i]));
        }
        FiniteQuadraticModule::new(orders, gmat, qvals)
    }

    /// Orthogonal direct sum; generators of `a` come first.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let r = a.rank() + b.rank();
        let mut gram = vec![vec![QmodZ::ZERO; r]; r];
        for i in 0..a.rank() {
            for j in 0..a.rank() {
                gram[i][j] = a.gram[i][j];
            }
        }
        for i in 0..b.rank() {
            for j in 0..b.rank() {
                gram[a.rank() + i][a.rank() + j] = b.gram[i][j];
            }
        }
        let orders = a.orders.iter().chain(&b.orders).copied().collect();
        let qvals = a.qvals.iter().chain(&b.qvals).copied().collect();
        FiniteQuadraticModule::new(orders, gram, qvals).expect("direct sum of valid forms")
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn gram(&self) -> &[Vec<QmodZ>] {
        &self.gram
    }

    pub fn qvals(&self) -> &[QmodZ] {
        &self.qvals
    }

    /// `|D|`.
    pub fn order(&self) -> u64 {
        self.size
    }

    /// Least `m` with `m·Q = 0`: lcm of the denominators of the Gram and Q data.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn ensure_enumerable(&self, bound: u64) -> Result<()> {
        if self.size > bound {
            return Err(Error::Size(format!("|D| = {} exceeds bound {bound}", self.size)));
        }
        Ok(())
    }

    // ---- element indexing ------------------------------------------------

    pub fn index_of(&self, x: &Element) -> Result<usize> {
        self.check(x)?;
        Ok(self.index_of_coords(&x.coords))
    }

    pub fn index_of_coords(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| c * w)
            .sum::<u64>() as usize
    }

    pub fn decode(&self, index: usize, coords: &mut [u64]) {
        let mut rest = index as u64;
        for i in 0..self.rank() {
            coords[i] = rest / self.weights[i];
            rest %= self.weights[i];
        }
    }

    pub fn element(&self, index: usize) -> Element {
        let mut coords = vec![0; self.rank()];
        self.decode(index, &mut coords);
        Element { coords }
    }

    pub fn zero(&self) -> Element {
        Element { coords: vec![0; self.rank()] }
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.coords.len() != self.rank() || x.coords.iter().zip(&self.orders).any(|(c, d)| c >= d) {
            return Err(Error::validation(format!("element {:?} is not valid for D", x.coords)));
        }
        Ok(())
    }

    /// Reduces arbitrary integer coordinates into an element.
    pub fn reduce(&self, coords: &[i128]) -> Element {
        Element {
            coords: coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &d)| c.rem_euclid(d as i128) as u64)
                .collect(),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .zip(&self.orders)
                .map(|((a, b), d)| (a + b) % d)
                .collect(),
        }
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element {
            coords: x.coords.iter().zip(&self.orders).map(|(a, d)| (d - a) % d).collect(),
        }
    }

    pub fn scale(&self, k: i128, x: &Element) -> Element {
        Element {
            coords: x
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&a, &d)| (k.rem_euclid(d as i128) as u128 * a as u128 % d as u128) as u64)
                .collect(),
        }
    }

    pub fn add_index(&self, i: usize, j: usize) -> usize {
        let mut acc = 0u64;
        let (mut a, mut b) = (i as u64, j as u64);
        for k in 0..self.rank() {
            let w = self.weights[k];
            let s = (a / w + b / w) % self.orders[k];
            acc += s * w;
            a %= w;
            b %= w;
        }
        acc as usize
    }

    pub fn neg_index(&self, i: usize) -> usize {
        let mut acc = 0u64;
        let mut a = i as u64;
        for k in 0..self.rank() {
            let w = self.weights[k];
            let d = self.orders[k];
            acc += ((d - a / w) % d) * w;
            a %= w;
        }
        acc as usize
    }

    /// Order of an element in the group.
    pub fn element_order(&self, x: &Element) -> u64 {
        x.coords
            .iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&c, &d)| acc.lcm(&(d / c.gcd(&d))))
    }

    /// Calls `f(index, coords)` for every element in index order.
    pub fn for_each_element(&self, mut f: impl FnMut(usize, &[u64])) {
        let r = self.rank();
        let mut coords = vec![0u64; r];
        for idx in 0..self.size as usize {
            f(idx, &coords);
            for k in (0..r).rev() {
                coords[k] += 1;
                if coords[k] < self.orders[k] {
                    break;
                }
                coords[k] = 0;
            }
        }
    }

    pub fn elements(&self) -> Result<Vec<Element>> {
        self.elements_bounded(ENUMERATION_BOUND)
    }

    pub fn elements_bounded(&self, bound: u64) -> Result<Vec<Element>> {
        self.ensure_enumerable(bound)?;
        let mut out = Vec::with_capacity(self.size as usize);
        self.for_each_element(|_, c| out.push(Element { coords: c.to_vec() }));
        Ok(out)
    }

    // ---- evaluation ------------------------------------------------------

    /// `Q(x)·level mod level`.
    pub fn q_numerator(&self, coords: &[u64]) -> u64 {
        let l = self.level as u128;
        let r = self.rank();
        let mut acc: u128 = 0;
        for i in 0..r {
            let xi = coords[i] as u128;
            if xi == 0 {
                continue;
            }
            acc = (acc + xi * xi % l * self.q_num[i] as u128) % l;
            for j in i + 1..r {
                let xj = coords[j] as u128;
                if xj != 0 {
                    acc = (acc + xi * xj % l * self.gram_num[i][j] as u128) % l;
                }
            }
        }
        acc as u64
    }

    /// `(x, y)·level mod level`.
    pub fn b_numerator(&self, x: &[u64], y: &[u64]) -> u64 {
        let l = self.level as u128;
        let r = self.rank();
        let mut acc: u128 = 0;
        for i in 0..r {
            if x[i] == 0 {
                continue;
            }
            let mut row: u128 = 0;
            for j in 0..r {
                if y[j] != 0 {
                    row = (row + y[j] as u128 * self.gram_num[i][j] as u128) % l;
                }
            }
            acc = (acc + x[i] as u128 * row) % l;
        }
        acc as u64
    }

    pub fn eval_q(&self, x: &Element) -> Result<QmodZ> {
        self.check(x)?;
        Ok(QmodZ::new(self.q_numerator(&x.coords) as i128, self.level))
    }

    pub fn eval_b(&self, x: &Element, y: &Element) -> Result<QmodZ> {
        self.check(x)?;
        self.check(y)?;
        Ok(QmodZ::new(self.b_numerator(&x.coords, &y.coords) as i128, self.level))
    }

    pub fn q_of(&self, x: &Element) -> QmodZ {
        QmodZ::new(self.q_numerator(&x.coords) as i128, self.level)
    }

    pub fn b_of(&self, x: &Element, y: &Element) -> QmodZ {
        QmodZ::new(self.b_numerator(&x.coords, &y.coords) as i128, self.level)
    }

    pub fn is_isotropic_element(&self, x: &Element) -> bool {
        self.q_numerator(&x.coords) == 0
    }

    // ---- invariants ------------------------------------------------------

    /// Signature mod 8 from Milgram's formula.
    ///
    /// The exact identity `g² = |D|·e(s/4)` fixes `s mod 4`; the float
    /// embedding of `g/√|D|` picks between `s` and `s + 4`.
    pub fn signature(&self) -> Result<u8> {
        self.signature
            .get_or_init(|| compute_signature(self))
            .clone()
            .map_err(Error::DegenerateForm)
    }

    /// Exhaustive check that the radical of `(·,·)` is trivial.
    pub fn is_nondegenerate(&self) -> Result<bool> {
        self.ensure_enumerable(ENUMERATION_BOUND)?;
        let gens: Vec<Vec<u64>> = (0..self.rank())
            .map(|i| {
                let mut c = vec![0; self.rank()];
                c[i] = 1;
                c
            })
            .collect();
        let mut ok = true;
        self.for_each_element(|idx, coords| {
            if idx != 0 && gens.iter().all(|g| self.b_numerator(coords, g) == 0) {
                ok = false;
            }
        });
        Ok(ok)
    }
}

fn compute_signature(d: &FiniteQuadraticModule) -> std::result::Result<u8, String> {
    let g = gauss_sum(d);
    let order = g.order().lcm(&4);
    let g = g.lift(order).unwrap();
    let size = d.order() as i64;
    let norm = &g * &g.conj();
    if norm != CycNum::from_integer(size, 1) {
        return Err("|gauss sum|² ≠ |D|".into());
    }
    let square = &g * &g;
    let s4 = (0..4u8).find(|&s| {
        let phase = root_of_unity(QmodZ::new(s as i128, 4), order).unwrap();
        square == phase.scale(&crate::arith::rat(size, 1))
    });
    let Some(s4) = s4 else {
        return Err("gauss sum squared matches no |D|·e(s/4)".into());
    };
    let z = g.embed_complex() / (size as f64).sqrt();
    for s in [s4, s4 + 4] {
        let angle = 2.0 * std::f64::consts::PI * s as f64 / 8.0;
        if (z.re - angle.cos()).abs() < 1e-6 && (z.im - angle.sin()).abs() < 1e-6 {
            return Ok(s);
        }
    }
    Err("float disambiguation of the signature failed".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    #[test]
    fn jordan_block_values() {
        let d = form("3^1:a=2");
        assert_eq!(d.gram()[0][0], QmodZ::new(2, 3));
        assert_eq!(d.qvals()[0], QmodZ::new(1, 3));
        let d = form("2^1:A");
        let (g, dl) = (Element::new(vec![1, 0]), Element::new(vec![0, 1]));
        assert_eq!(d.eval_q(&g).unwrap(), QmodZ::ZERO);
        assert_eq!(d.eval_q(&dl).unwrap(), QmodZ::ZERO);
        assert_eq!(d.eval_b(&g, &dl).unwrap(), QmodZ::new(1, 2));
        assert_eq!(d.eval_q(&d.add(&g, &dl)).unwrap(), QmodZ::new(1, 2));
        assert_eq!(form("").order(), 1);
    }

    #[test]
    fn evaluation_examples() {
        let d = form("3^1:a=2");
        assert_eq!(d.eval_q(&d.zero()).unwrap(), QmodZ::ZERO);
        assert_eq!(d.eval_q(&Element::new(vec![2])).unwrap(), QmodZ::new(1, 3));
        assert!(d.eval_q(&Element::new(vec![3])).is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(form("").level(), 1);
        assert_eq!(form("2^1:a=1,v=0").level(), 4);
        assert_eq!(form("3^1:a=2").level(), 3);
        assert_eq!(form("2^1:A").level(), 2);
    }

    #[test]
    fn signatures() {
        assert_eq!(form("").signature().unwrap(), 0);
        assert_eq!(form("2^1:A").signature().unwrap(), 0);
        assert_eq!(form("3^1:a=2").signature().unwrap(), 2);
        assert_eq!(form("2^1:a=1,v=0").signature().unwrap(), 1);
        // E8 discriminant is trivial; D4 has a (Z_2)^2 form of signature 4 = "2^1:B".
        assert_eq!(form("2^1:B").signature().unwrap(), 4);
    }

    #[test]
    fn lattice_examples() {
        let d = FiniteQuadraticModule::from_even_lattice(&[vec![2]]).unwrap();
        assert_eq!(d.orders(), &[2]);
        assert_eq!(d.qvals()[0], QmodZ::new(1, 4));
        let h = FiniteQuadraticModule::from_even_lattice(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(h.order(), 1);
        let a2 = FiniteQuadraticModule::from_even_lattice(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(a2.orders(), &[3]);
        assert_eq!(a2.gram()[0][0], QmodZ::new(2, 3));
        assert_eq!(a2.qvals()[0], QmodZ::new(1, 3));
        assert_eq!(a2.signature().unwrap(), 2);
        assert!(matches!(
            FiniteQuadraticModule::from_even_lattice(&[vec![1]]),
            Err(Error::NotEven(1))
        ));
        assert!(matches!(
            FiniteQuadraticModule::from_even_lattice(&[vec![2, 2], vec![2, 2]]),
            Err(Error::DegenerateLattice)
        ));
        assert!(FiniteQuadraticModule::from_even_lattice(&[vec![2, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn d4_lattice_matches_type_b() {
        let d4 = vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ];
        let d = FiniteQuadraticModule::from_even_lattice(&d4).unwrap();
        assert_eq!(d.order(), 4);
        assert_eq!(d.signature().unwrap(), 4);
    }

    #[test]
    fn direct_sum_examples() {
        let x = form("3^1:a=1");
        let s = FiniteQuadraticModule::direct_sum(&FiniteQuadraticModule::trivial(), &x);
        assert_eq!(s, x);
        let y = FiniteQuadraticModule::direct_sum(&form("3^1:a=1"), &form("3^1:a=2"));
        assert_eq!(y.gram()[0][0], QmodZ::new(1, 3));
        assert_eq!(y.gram()[1][1], QmodZ::new(2, 3));
        assert_eq!(y.gram()[0][1], QmodZ::ZERO);
        assert_eq!(y.order(), 9);
    }

    #[test]
    fn element_order_in_z2_z2() {
        let d = form("2^1:A");
        let els = d.elements().unwrap();
        let coords: Vec<Vec<u64>> = els.iter().map(|e| e.coords.clone()).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(form("3^1:a=1+3^1:a=1").elements().unwrap().len(), 9);
        assert!(form("3^1:a=1+3^1:a=1").elements_bounded(5).is_err());
    }

    #[test]
    fn index_arithmetic_matches_coordinates() {
        let d = form("2^2:a=1,v=0+3^1:a=1+2^1:B");
        for i in 0..d.order() as usize {
            assert_eq!(d.index_of(&d.element(i)).unwrap(), i);
            assert_eq!(d.neg_index(i), d.index_of(&d.neg(&d.element(i))).unwrap());
            for j in (0..d.order() as usize).step_by(7) {
                let s = d.add(&d.element(i), &d.element(j));
                assert_eq!(d.add_index(i, j), d.index_of(&s).unwrap());
            }
        }
    }

    #[test]
    fn rejects_inconsistent_data() {
        let q = QmodZ::new(1, 4);
        assert!(FiniteQuadraticModule::new(vec![2], vec![vec![QmodZ::new(1, 3)]], vec![q]).is_err());
        assert!(FiniteQuadraticModule::new(vec![2], vec![vec![QmodZ::ZERO]], vec![q]).is_err());
    }
}
