//! The up and down maps for a list of isotropic subgroups, their kernel and
//! image, and the intertwining check against the Weil representations.

use discform::fqm::isotropic_subgroups;
use discform::lifts::{build_lift_system, check_homomorphism, is_up_surjective, kernel_down, rank_up};
use discform::weil::all_passed;
use discform::{FiniteQuadraticModule, Result};

fn main() -> Result<()> {
    let d = FiniteQuadraticModule::from_jordan(&"2^1:A+2^1:A".parse()?);
    let subs = isotropic_subgroups(&d, false, None, 10_000)?;
    let system = build_lift_system(&d, &subs, false)?;
    println!("{} subgroups, ↓ is {} × {}", subs.len(), system.rows(), system.cols());
    println!("dim ker(↓) = {}, rank(↑) = {}", kernel_down(&system).len(), rank_up(&system));
    println!("↑ onto: {}", is_up_surjective(&system)?);

    for h in &subs {
        let ok = all_passed(&check_homomorphism(&d, h)?);
        println!("H = {:?}: intertwines with ρ(S), ρ(T): {ok}", h.indices());
    }
    Ok(())
}
