//! Lifts a word-problem grammar of the left monoid to one of the monoid,
//! checks it against the compression solver, and extracts the left monoid's
//! grammar back.

use std::collections::HashMap;

use weakcomp::compression::{compress, BaseStrategy, WordProblemSolver};
use weakcomp::grammars::{enumerate, zero_sum_wp_grammar};
use weakcomp::pipeline::{build_wp_grammar, extract_from_bundle, terminal_wp_grammar};
use weakcomp::presentations::MonoidPresentation;
use weakcomp::rewriting::Verdict;

fn main() -> weakcomp::Result<()> {
    let lhs = format!("{}{}{}xy", "xy".repeat(2), "xyx".repeat(3), "xyy".repeat(4));
    let pi_prime = MonoidPresentation::from_strs("xy", &[(&lhs, "xyxxy")])?;
    let m1 = MonoidPresentation::from_strs("xy", &[("xyyxxxyxxyyxxxy", "xy")])?;

    let pi = compress(&pi_prime)?.target;
    let g = compress(&m1)?.gamma;
    let cases = [
        (pi_prime, terminal_wp_grammar(&pi)?),
        (m1, zero_sum_wp_grammar(&g, &HashMap::from([(g[0], 1), (g[1], -2)]))?),
    ];
    for (p, base) in cases {
        let bundle = build_wp_grammar(&p, &base)?;
        println!("{p}");
        for (name, g) in bundle.stages() {
            println!("  {name:<14} {:>6} productions", g.production_count());
        }

        let solver = WordProblemSolver::new(&p, &BaseStrategy::default())?;
        let parser = bundle.parser();
        let words = p.alphabet().words_up_to(6);
        let mut checked = 0;
        for u in &words {
            for v in &words {
                let expected = solver.equal(u, v)?;
                if expected != Verdict::Unknown {
                    assert_eq!(parser.equal(u, v), expected == Verdict::Equal);
                    checked += 1;
                }
            }
        }
        println!("  grammar agrees with the solver on {checked} pairs");

        let back = extract_from_bundle(&bundle)?;
        let same = enumerate(&back, 8)? == enumerate(&base, 8)?;
        println!("  extracted left-monoid grammar matches the base up to length 8: {same}");
    }
    Ok(())
}
