//! The grammar toolkit: text format, intersection with automata,
//! transducers, membership and bounded enumeration.

use std::collections::HashMap;

use weakcomp::grammars::{
    apply_fst, cfg_to_text, enumerate, intersect_regular, member, parse_cfg, Fst, Nfa,
};
use weakcomp::symbol::{chars, Symbol};

fn main() -> weakcomp::Result<()> {
    let dyck = parse_cfg("terminals: a b\nstart: S\nS -> 1 | a S b S\n")?;
    let ab = [Symbol::new("a"), Symbol::new("b")];
    println!("{}", cfg_to_text(&dyck));
    println!("aabb: {}  abba: {}", member(&dyck, &chars("aabb"))?, member(&dyck, &chars("abba"))?);

    // Dyck words avoiding "abab"
    let avoid = Nfa::avoiding_factor(&ab, &chars("abab"))?;
    let cut = intersect_regular(&dyck, &avoid)?;
    let words: Vec<String> = enumerate(&cut, 6)?.iter().map(|w| w.spell()).collect();
    println!("without abab, up to 6: {words:?}");

    // image under a ↦ xx, b ↦ y
    let h = HashMap::from([(ab[0], chars("xx")), (ab[1], chars("y"))]);
    let image = apply_fst(&dyck, &Fst::hom(&h))?;
    let words: Vec<String> = enumerate(&image, 6)?.iter().map(|w| w.spell()).collect();
    println!("image up to 6: {words:?}");
    Ok(())
}
