//! Which hypothesis applies to a form, and the |D| ≥ N^9 gate.

use discform::lifts::check_theorem;
use discform::{JordanSymbol, Result};

fn main() -> Result<()> {
    for text in [
        vec!["3^1:a=1"; 7].join("+"),
        vec!["3^1:a=1"; 6].join("+"),
        vec!["5^2:a=1"; 4].join("+"),
        vec!["2^3:B"; 5].join("+"),
        vec!["2^1:A"; 5].join("+"),
    ] {
        let symbol: JordanSymbol = text.parse()?;
        let c = check_theorem(&symbol);
        println!(
            "{:<50} fired {:<5} |D| = {:<8} N^9 = {:<12} multiplicity {}",
            text.chars().take(48).collect::<String>(),
            c.fired.map_or("-", |f| f.hypothesis.label()),
            c.corollary.order,
            c.corollary.bound,
            c.corollary.max_multiplicity
        );
    }
    Ok(())
}
