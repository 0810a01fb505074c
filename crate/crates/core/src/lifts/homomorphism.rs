use super::system::build_lift_system;
use crate::error::Result;
use crate::fqm::{FiniteQuadraticModule, Subgroup};
use crate::weil::{weil_order, CheckReport, Generator, ScaledMatrix, WeilRep};

/// Checks `η(g)·↓_H = ↓_H·ρ(g)` and `ρ(g)·↑_H = ↑_H·η(g)` for `g ∈ {S, T}`,
/// with `η` the Weil representation of `D_H`.
///
/// Both sides are compared over the scaling `|D_H|^{-1/2}`; since
/// `|D| = |D_H|·|H|²` the factors of `ρ` are rebased exactly.
pub fn check_homomorphism(d: &FiniteQuadraticModule, h: &Subgroup) -> Result<Vec<CheckReport>> {
    let system = build_lift_system(d, std::slice::from_ref(h), true)?;
    let dh = &system.blocks()[0].quotient.form;
    let order = weil_order(d);
    let rho = WeilRep::at_order(d, order)?;
    let eta = WeilRep::at_order(dh, order)?;
    let base = dh.order();
    let ring = eta.ring().clone();
    let flat = |m: Vec<Vec<i64>>| m.into_iter().flatten().collect::<Vec<i64>>();
    let down = ScaledMatrix::from_integers(system.rows(), system.cols(), &flat(system.down_matrix()), ring.clone(), base);
    let up = ScaledMatrix::from_integers(system.cols(), system.rows(), &flat(system.up_matrix()), ring, base);
    let mut out = Vec::new();
    for (g, name) in [(Generator::S, "S"), (Generator::T, "T")] {
        let r = rho.generator(g).rebase(base)?;
        let e = eta.generator(g);
        out.push(CheckReport::compare(format!("η({name})·↓ = ↓·ρ({name})"), &e.mul(&down)?, &down.mul(&r)?));
        out.push(CheckReport::compare(format!("ρ({name})·↑ = ↑·η({name})"), &r.mul(&up)?, &up.mul(e)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqm::{isotropic_subgroups, Element};
    use crate::weil::all_passed;

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    #[test]
    fn trivial_subgroup_passes() {
        let d = form("2^1:A");
        assert!(all_passed(&check_homomorphism(&d, &Subgroup::trivial(&d)).unwrap()));
    }

    #[test]
    fn hyperbolic_plane() {
        let d = form("2^1:A");
        let h = Subgroup::generated(&d, &[Element::new(vec![1, 0])]).unwrap();
        let reports = check_homomorphism(&d, &h).unwrap();
        assert!(all_passed(&reports), "{reports:?}");
    }

    #[test]
    fn two_planes_all_subgroups() {
        let d = form("2^1:A+2^1:A");
        for h in isotropic_subgroups(&d, false, None, 1000).unwrap() {
            let reports = check_homomorphism(&d, &h).unwrap();
            assert!(all_passed(&reports), "{reports:?}");
        }
    }

    #[test]
    fn odd_and_mixed() {
        for sym in ["3^1:a=1+3^1:a=2", "3^2:a=1", "2^2:a=1,v=0+2^2:a=3,v=0"] {
            let d = form(sym);
            for h in isotropic_subgroups(&d, false, None, 1000).unwrap() {
                let reports = check_homomorphism(&d, &h).unwrap();
                assert!(all_passed(&reports), "{sym}: {reports:?}");
            }
        }
    }
}
