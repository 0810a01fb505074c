//! An explicit preimage of every basis vector under the up map, built from
//! nicely orthogonal sequences, then checked again from scratch.

use discform::lifts::{check_theorem, surjectivity_certificate, verify_certificate, SplitCase};
use discform::{FiniteQuadraticModule, JordanSymbol, Result};

fn main() -> Result<()> {
    let symbol: JordanSymbol = vec!["2^1:a=1,v=0"; 9].join("+").parse()?;
    let check = check_theorem(&symbol);
    let fired = check.fired.expect("nine constituents");
    println!("hypothesis {} on the {}^{} part", fired.hypothesis.label(), fired.p, fired.j);

    let cert = surjectivity_certificate(&symbol, true)?;
    let count = |c: SplitCase| cert.elements.iter().filter(|e| e.case == c).count();
    println!(
        "{} preimages over {} subgroups (zero {}, unit norm {}, plane {})",
        cert.elements.len(),
        cert.subgroup_count,
        count(SplitCase::Zero),
        count(SplitCase::UnitNorm),
        count(SplitCase::Plane)
    );
    let e = &cert.elements[5];
    println!("γ = {:?}: δ = {:?}, μ = {:?}, {} terms in ζ", e.gamma.coords, e.delta.coords, e.mu.coords, e.zeta.len());

    verify_certificate(&FiniteQuadraticModule::from_jordan(&symbol), &cert)?;
    println!("certificate verified");
    Ok(())
}
