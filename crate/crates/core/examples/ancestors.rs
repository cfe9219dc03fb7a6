//! Ancestor closures and alternating products of context-free languages.

use weakcomp::closures::{
    alternating_product, bipartisan_ancestors, monadic_ancestors, wp_from_complete_monadic,
    MonadicCfSystem,
};
use weakcomp::grammars::{enumerate, parse_cfg, Cfg};
use weakcomp::rewriting::parse_rewrite_system;
use weakcomp::symbol::{chars, Symbol};

fn show(name: &str, g: &Cfg, n: usize) -> weakcomp::Result<()> {
    let words: Vec<String> = enumerate(g, n)?.iter().map(|w| w.spell()).collect();
    println!("{name}: {words:?}");
    Ok(())
}

fn main() -> weakcomp::Result<()> {
    let (a, b) = (Symbol::new("a"), Symbol::new("b"));

    // ancestors of {b} under ab -> b, a -> 1
    let target = Cfg::from_words(&[a, b], [&chars("b")]);
    let mut r = MonadicCfSystem::new(&[a, b]);
    r.add(Some(b), Cfg::from_words(&[a, b], [&chars("ab")]))?;
    r.add(None, Cfg::from_words(&[a, b], [&chars("aa")]))?;
    show("ancestors of b", &monadic_ancestors(&target, &r)?, 5)?;

    let an = parse_cfg("terminals: a #\nS -> a S a | #\n")?;
    let bn = parse_cfg("terminals: b #\nS -> b S b | #\n")?;
    show("a^n#a^n * b^n#b^n", &alternating_product(&an, &bn)?, 5)?;

    let g = parse_cfg("terminals: a b #\nS -> b # b | a # a\n")?;
    let mut rb = MonadicCfSystem::new(&[a, b]);
    rb.add(Some(b), Cfg::from_words(&[b], [&chars("bb")]))?;
    show("bipartisan", &bipartisan_ancestors(&g, &rb.clone().into(), &rb.into())?, 5)?;

    // word problem of <a, b | ab = 1> from its complete monadic system
    let bicyclic = parse_rewrite_system("gens: a b\nrule: ab -> 1\n")?;
    show("bicyclic word problem", &wp_from_complete_monadic(&bicyclic)?, 5)?;
    Ok(())
}
