//! Old and new solution spaces for a coefficient table: two lifted forms and
//! one form annihilated by every class sum.

use discform::arith::rat;
use discform::fqm::{quotient, DescribedForm, Element, Subgroup};
use discform::lifts::build_lift_system;
use discform::oldnew::{is_oldform, lift_table, split, CoeffTable};
use discform::{JordanSymbol, Result};

fn main() -> Result<()> {
    let symbol: JordanSymbol = "2^1:A+2^1:A".parse()?;
    let d = DescribedForm::from(&symbol);
    let h = Subgroup::generated(&d.module, &[Element::new(vec![1, 0, 0, 0])])?;
    let q = quotient(&d.module, &h)?;

    // a form on D_H with coefficients n + γ, lifted to D
    let mut g = CoeffTable::zero(DescribedForm::explicit(q.form.clone()), 2, 3, 1)?;
    for (c, slot) in g.forms[0].iter_mut().enumerate() {
        for (n, x) in slot.iter_mut().enumerate() {
            *x = rat((n + c) as i64, 1);
        }
    }
    let lifted = lift_table(&g, &d, &h)?;

    let mut table = CoeffTable::zero(d.clone(), 2, 3, 2)?;
    table.forms[0] = lifted.forms[0].clone();
    // F_0 = 1, F_h = -1: every class sum vanishes
    table.forms[1][0] = vec![rat(1, 1); 4];
    table.forms[1][h.indices()[1]] = vec![rat(-1, 1); 4];

    let system = build_lift_system(&d.module, &[h], false)?;
    println!("form 0 old: {}", is_oldform(&table, &[rat(1, 1), rat(0, 1)], &system)?);
    println!("form 1 old: {}", is_oldform(&table, &[rat(0, 1), rat(1, 1)], &system)?);
    let report = split(&table, &system)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("{}", table.to_json());
    Ok(())
}
