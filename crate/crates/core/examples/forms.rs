//! Building discriminant forms and looking at their invariants, isotropic
//! subgroups and quotients.

use discform::fqm::{isotropic_subgroups, quotient};
use discform::{FiniteQuadraticModule, JordanSymbol, Result};

fn main() -> Result<()> {
    let symbol: JordanSymbol = "2^1:A+3^1:a=1+3^1:a=2".parse()?;
    let d = FiniteQuadraticModule::from_jordan(&symbol);
    println!("{symbol}: |D| = {}, level {}, signature {}", d.order(), d.level(), d.signature()?);

    // the discriminant form of the A2 root lattice
    let a2 = FiniteQuadraticModule::from_even_lattice(&[vec![2, -1], vec![-1, 2]])?;
    println!("A2: |D| = {}, signature {}", a2.order(), a2.signature()?);

    for h in isotropic_subgroups(&d, false, None, 10_000)? {
        let q = quotient(&d, &h)?;
        println!(
            "H = {:?} (order {}): |D_H| = {}, signature {}",
            h.indices(),
            h.order(),
            q.form.order(),
            q.form.signature()?
        );
    }
    Ok(())
}
