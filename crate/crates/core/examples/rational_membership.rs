//! Rational subset membership from a word-problem grammar.

use weakcomp::grammars::{parse_nfa, Nfa};
use weakcomp::pipeline::{build_wp_grammar, rational_membership, terminal_wp_grammar};
use weakcomp::presentations::MonoidPresentation;
use weakcomp::compression::compress;
use weakcomp::symbol::chars;

fn main() -> weakcomp::Result<()> {
    let p = MonoidPresentation::parse(include_str!("../data/pi_prime.pres"))?;
    let base = terminal_wp_grammar(&compress(&p)?.target)?;
    let wp = build_wp_grammar(&p, &base)?.built_wp;

    let r = parse_nfa(include_str!("../data/pi_prime_lhs.nfa"))?;
    for w in ["xyxxy", "xyx", "xyxyxyxxyxxyxxyyxyyxyyxyyxy"] {
        println!("{w} in R: {}", rational_membership(&wp, &chars(w), &r)?);
    }

    // the submonoid generated by xyxxy and xy
    let letters = p.alphabet().letters();
    let gens = Nfa::words(letters, [&chars("xyxxy"), &chars("xy")]).star();
    for w in ["xyxxyxy", "xyxyxyxxyxxyxxyyxyyxyyxyyxy", "xyy"] {
        println!("{w} in <xyxxy, xy>: {}", rational_membership(&wp, &chars(w), &gens)?);
    }
    Ok(())
}
