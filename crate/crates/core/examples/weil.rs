//! The Weil representation as exact matrices over a cyclotomic field.

use discform::weil::{all_passed, verify_relations, Generator, WeilRep};
use discform::{FiniteQuadraticModule, Result};

fn main() -> Result<()> {
    let d = FiniteQuadraticModule::from_jordan(&"2^1:A".parse()?);
    let w = WeilRep::new(&d)?;
    let s = w.generator(Generator::S);
    let t = w.generator(Generator::T);
    println!("ρ(T) diagonal: {:?}", (0..d.order() as usize).map(|i| t.entry(i, i).to_string()).collect::<Vec<_>>());
    println!("ρ(S) row 0: {:?}", (0..d.order() as usize).map(|j| s.entry(0, j).to_string()).collect::<Vec<_>>());

    let m = [[5, 2], [2, 1]];
    let r = w.of_matrix(m)?;
    println!("ρ({m:?}) has {} rows", r.rows());

    let reports = verify_relations(&d)?;
    for r in &reports {
        println!("{:<24} {:?}", r.check, r.status);
    }
    assert!(all_passed(&reports));
    Ok(())
}
