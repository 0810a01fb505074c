use super::module::{Element, FiniteQuadraticModule};
use super::subgroup::Subgroup;
use crate::arith::QmodZ;
use crate::error::{Error, Result};
use crate::zmat::{mat_mul, smith, IMat};

/// Marks an element outside `H^⊥` in [`Quotient::projection`].
pub const OUTSIDE: u32 = u32::MAX;

/// The form `D_H = H^⊥/H` together with the class map from `D`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub form: FiniteQuadraticModule,
    /// For each element index of `D`: the index of `γ + H` in `D_H`, or [`OUTSIDE`].
    pub projection: Vec<u32>,
    pub perp: Subgroup,
    /// Representatives in `D` of the generators of `D_H`.
    pub lifts: Vec<Element>,
}

impl Quotient {
    pub fn class_of(&self, index: usize) -> Option<usize> {
        match self.projection[index] {
            OUTSIDE => None,
            c => Some(c as usize),
        }
    }
}

/// `D_H` for an isotropic subgroup `H`.
///
/// `H^⊥` and `H` are presented as lattices in `Z^r` containing `⊕ d_i Z`.
/// A basis of the first comes from the Smith form of its generators; the
/// relations of the second, written in that basis, are diagonalized again
/// and give the cyclic decomposition of the quotient.
pub fn quotient(d: &FiniteQuadraticModule, h: &Subgroup) -> Result<Quotient> {
    if !h.is_isotropic(d) {
        return Err(Error::NotIsotropic);
    }
    let perp = h.orthogonal_complement(d);
    if h.is_trivial() {
        let lifts = (0..d.rank())
            .map(|i| {
                let mut c = vec![0; d.rank()];
                c[i] = 1;
                Element::new(c)
            })
            .collect();
        return Ok(Quotient {
            form: d.clone(),
            projection: (0..d.order() as u32).collect(),
            perp,
            lifts,
        });
    }
    let r = d.rank();
    let orders = d.orders();
    let lattice = |gens: &[Element]| -> IMat {
        let cols = gens.len() + r;
        let mut a = vec![vec![0i128; cols]; r];
        for (j, g) in gens.iter().enumerate() {
            for i in 0..r {
                a[i][j] = g.coords[i] as i128;
            }
        }
        for i in 0..r {
            a[i][gens.len() + i] = orders[i] as i128;
        }
        a
    };
    let a_perp = lattice(perp.generators());
    let s1 = smith(&a_perp, r, a_perp[0].len());
    let s: Vec<i128> = s1.diag.clone();
    if s.iter().any(|&x| x == 0) {
        return Err(Error::Invariant("H^⊥ lattice is not of full rank".into()));
    }
    // B-coordinates of a vector x ∈ H^⊥-lattice: diag(1/s)·U·x.
    let to_b = |x: &[i128]| -> Result<Vec<i128>> {
        let mut y = vec![0i128; r];
        for i in 0..r {
            let v: i128 = (0..r).map(|k| s1.u[i][k] * x[k]).sum();
            if v % s[i] != 0 {
                return Err(Error::Invariant("vector not in the H^⊥ lattice".into()));
            }
            y[i] = v / s[i];
        }
        Ok(y)
    };
    let a_h = lattice(h.generators());
    let m = a_h[0].len();
    let mut x: IMat = vec![vec![0; m]; r];
    for j in 0..m {
        let col: Vec<i128> = (0..r).map(|i| a_h[i][j]).collect();
        let y = to_b(&col)?;
        for i in 0..r {
            x[i][j] = y[i];
        }
    }
    let s2 = smith(&x, r, m);
    let keep: Vec<usize> = (0..r).filter(|&i| s2.diag[i] != 1).collect();
    let t: Vec<u64> = keep.iter().map(|&i| s2.diag[i] as u64).collect();
    if t.iter().any(|&x| x == 0) {
        return Err(Error::Invariant("H is not of finite index in H^⊥".into()));
    }

    // Lift of quotient generator j: U^{-1}·diag(s)·U2^{-1}·e_j.
    let mut b: IMat = s1.u_inv.clone();
    for row in b.iter_mut() {
        for (k, v) in row.iter_mut().enumerate() {
            *v *= s[k];
        }
    }
    let lift_mat = mat_mul(&b, &s2.u_inv);
    let lifts: Vec<Element> = keep
        .iter()
        .map(|&j| {
            let col: Vec<i128> = (0..r).map(|i| lift_mat[i][j]).collect();
            d.reduce(&col)
        })
        .collect();

    let k = lifts.len();
    let mut gram = vec![vec![QmodZ::ZERO; k]; k];
    let mut qvals = Vec::with_capacity(k);
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = d.b_of(&lifts[i], &lifts[j]);
        }
        qvals.push(d.q_of(&lifts[i]));
    }
    let form = FiniteQuadraticModule::new(t.clone(), gram, qvals)?;

    let mut projection = vec![OUTSIDE; d.order() as usize];
    let mut coords = vec![0u64; r];
    let mut z = vec![0u64; k];
    for &idx in perp.indices() {
        d.decode(idx, &mut coords);
        let c: Vec<i128> = coords.iter().map(|&v| v as i128).collect();
        let y = to_b(&c)?;
        for (slot, &i) in keep.iter().enumerate() {
            let v: i128 = (0..r).map(|l| s2.u[i][l] * y[l]).sum();
            z[slot] = v.rem_euclid(t[slot] as i128) as u64;
        }
        projection[idx] = form.index_of_coords(&z) as u32;
    }
    Ok(Quotient { form, projection, perp, lifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqm::{isotropic_subgroups, ENUMERATION_BOUND};

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    #[test]
    fn trivial_subgroup_gives_identity() {
        let d = form("3^1:a=1+2^1:A");
        let q = quotient(&d, &Subgroup::trivial(&d)).unwrap();
        assert_eq!(q.form, d);
        assert_eq!(q.projection, (0..12).collect::<Vec<u32>>());
    }

    #[test]
    fn hyperbolic_plane_collapses() {
        let d = form("2^1:A");
        let h = Subgroup::generated(&d, &[Element::new(vec![1, 0])]).unwrap();
        let q = quotient(&d, &h).unwrap();
        assert_eq!(q.form.order(), 1);
        assert_eq!(q.projection, vec![0, OUTSIDE, 0, OUTSIDE]);
    }

    #[test]
    fn two_planes() {
        let d = form("2^1:A+2^1:A");
        let h = Subgroup::generated(&d, &[Element::new(vec![1, 0, 0, 0])]).unwrap();
        let q = quotient(&d, &h).unwrap();
        assert_eq!(q.form.order(), 4);
        assert_eq!(q.form.signature().unwrap(), 0);
    }

    #[test]
    fn rejects_anisotropic() {
        let d = form("2^1:A");
        let h = Subgroup::generated(&d, &[Element::new(vec![1, 1])]).unwrap();
        assert!(matches!(quotient(&d, &h), Err(Error::NotIsotropic)));
    }

    #[test]
    fn size_signature_and_class_structure() {
        for sym in ["2^1:A+2^1:A", "3^1:a=1+3^1:a=2", "2^2:a=1,v=0+2^2:a=3,v=0", "5^1:a=1+5^1:a=4", "2^3:A", "3^2:a=1", "2^1:B+2^1:B"] {
            let d = form(sym);
            for h in isotropic_subgroups(&d, true, None, ENUMERATION_BOUND).unwrap() {
                let q = quotient(&d, &h).unwrap();
                assert_eq!(q.form.order() as usize * h.order() * h.order(), d.order() as usize, "{sym}");
                assert_eq!(q.form.signature().unwrap(), d.signature().unwrap(), "{sym}");
                // every class has exactly |H| members and Q is constant on it
                let mut counts = vec![0usize; q.form.order() as usize];
                for (i, &c) in q.projection.iter().enumerate() {
                    if c != OUTSIDE {
                        counts[c as usize] += 1;
                        assert_eq!(d.q_of(&d.element(i)), q.form.q_of(&q.form.element(c as usize)));
                    }
                }
                assert!(counts.iter().all(|&c| c == h.order()), "{sym}");
                for (j, l) in q.lifts.iter().enumerate() {
                    let mut e = vec![0; q.form.rank()];
                    e[j] = 1;
                    assert_eq!(q.projection[d.index_of(l).unwrap()] as usize, q.form.index_of_coords(&e));
                }
            }
        }
    }
}
