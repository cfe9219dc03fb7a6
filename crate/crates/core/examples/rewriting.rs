//! Rewriting systems: completion, confluence and bounded equality.

use weakcomp::presentations::MonoidPresentation;
use weakcomp::rewriting::{check_confluence_lengthreducing, complete_bounded, equal_bounded};
use weakcomp::symbol::chars;

fn main() -> weakcomp::Result<()> {
    let pi = MonoidPresentation::parse("gens: a b c\nrel: aabbbcccc = b\n")?;
    let r = pi.rewrite_system();
    println!("{pi}: {:?}", check_confluence_lengthreducing(&r)?);
    println!("normal form of aabbbccccc: {}", r.normal_form(&chars("aabbbccccc")));

    let z = MonoidPresentation::from_strs("ab", &[("aba", "1")])?;
    let rz = z.rewrite_system();
    println!("{z}: {:?}", check_confluence_lengthreducing(&rz)?);
    if let Some(c) = complete_bounded(&rz, 64) {
        println!("completed: {:?}", c.finite_rules().unwrap_or_default());
        println!("ab = ba: {}", c.normal_form(&chars("ab")) == c.normal_form(&chars("ba")));
    }

    let m1 = MonoidPresentation::from_strs("xy", &[("xyyxxxyxxyyxxxy", "xy")])?;
    for maxlen in [10, 16] {
        let v = equal_bounded(&chars("xyyxxxyxxyyxxxy"), &chars("xy"), &m1.rewrite_system(), maxlen, 10_000)?;
        println!("M1 relation sides, search up to length {maxlen}: {v:?}");
    }
    Ok(())
}
