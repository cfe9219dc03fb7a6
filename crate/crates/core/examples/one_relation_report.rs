//! The compression half of the context-free word problem question for
//! one-relation monoids with a non-trivial idempotent.

use weakcomp::grammars::parse_cfg;
use weakcomp::pipeline::decide_word_problem_cf;
use weakcomp::presentations::MonoidPresentation;

fn main() -> weakcomp::Result<()> {
    let m3 = MonoidPresentation::parse(include_str!("../data/m3.pres"))?;
    println!("{}\n", decide_word_problem_cf(&m3, None)?);

    let base = parse_cfg(include_str!("../data/m3_left_wp.cfg"))?;
    let report = decide_word_problem_cf(&m3, Some(&base))?;
    println!("{report}\n");

    let comm = MonoidPresentation::from_strs("ab", &[("ab", "ba")])?;
    let json = decide_word_problem_cf(&comm, None)?.to_json();
    println!("{}", serde_json::to_string_pretty(&json)?);
    Ok(())
}
