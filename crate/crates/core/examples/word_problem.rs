//! Word equality through the compression chain, with the different ways of
//! deciding the incompressible end.

use std::collections::HashMap;

use weakcomp::compression::{BaseStrategy, WordProblemSolver};
use weakcomp::grammars::zero_sum_wp_grammar;
use weakcomp::presentations::MonoidPresentation;
use weakcomp::symbol::chars;

fn main() -> weakcomp::Result<()> {
    let lhs = format!("{}{}{}xy", "xy".repeat(2), "xyx".repeat(3), "xyy".repeat(4));
    let pi_prime = MonoidPresentation::from_strs("xy", &[(&lhs, "xyxxy")])?;
    let m1 = MonoidPresentation::from_strs("xy", &[("xyyxxxyxxyyxxxy", "xy")])?;

    let s = WordProblemSolver::new(&pi_prime, &BaseStrategy::default())?;
    println!("Pi' (base: {})", s.base_name());
    for (u, v) in [(lhs.as_str(), "xyxxy"), ("xyxxyyx", &*format!("{lhs}yx")), ("xyx", "xyy")] {
        println!("  {u} = {v}: {:?}", s.equal(&chars(u), &chars(v))?);
    }

    // the left monoid of M1 is infinite cyclic; give its word problem as a grammar
    let chain_end = WordProblemSolver::new(&m1, &BaseStrategy::default())?
        .chain()
        .terminal
        .clone();
    let g = chain_end.alphabet().letters().to_vec();
    let wp = zero_sum_wp_grammar(&g, &HashMap::from([(g[0], 1), (g[1], -2)]))?;
    let by_grammar = WordProblemSolver::new(&m1, &BaseStrategy::Grammar(wp))?;
    let bounded = WordProblemSolver::new(
        &m1,
        &BaseStrategy::Bounded {
            maxlen: 10,
            maxstates: 10_000,
        },
    )?;
    println!("M1");
    for (u, v) in [
        ("xyyxxxyxxyyxxxy", "xy"),
        ("xyxxyyxxxy", "xyyxxxyxxy"),
        ("xyyxxxy", "xyxxy"),
    ] {
        let (u, v) = (chars(u), chars(v));
        println!(
            "  {u} = {v}: grammar {:?}, bounded {:?}",
            by_grammar.equal(&u, &v)?,
            bounded.equal(&u, &v)?
        );
    }
    Ok(())
}
