//! Unimodular diagonalization over Z/p^f and the search for two orthogonal
//! isotropic vectors.

use discform::padic::{diagonalize_unimodular_odd, find_two_isotropic, PrecisionMatrix};
use discform::{FiniteQuadraticModule, Result};

fn main() -> Result<()> {
    let g = PrecisionMatrix::new(5, 2, &[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]])?;
    let (s, canonical) = diagonalize_unimodular_odd(&g)?;
    println!("S = {:?}", s.entries());
    println!("SᵀGS = {:?}", canonical.entries());
    assert_eq!(g.congruent(&s), canonical);

    for sym in ["3^1:a=1+3^1:a=2+3^1:a=1+3^1:a=2+3^1:a=1", "2^3:a=1,v=0+2^3:a=3,v=0+2^3:a=5,v=1"] {
        let d = FiniteQuadraticModule::from_jordan(&sym.parse()?);
        let pair = find_two_isotropic(&d)?;
        println!(
            "{sym}: δ = {:?}, μ = {:?}, level {}, {:?}",
            pair.delta.coords, pair.mu.coords, pair.level, pair.construction
        );
    }
    Ok(())
}
