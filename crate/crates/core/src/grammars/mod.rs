//! Context-free grammars, finite automata and transducers, with the closure
//! operations used by the word-problem constructions.

mod automata;
mod cfg;
mod cyk;
mod enumerate;
mod product;
mod text;

use std::collections::HashMap;

pub use automata::{Fst, FstArc, Nfa, DEFAULT_STATE_GUARD};
pub use cfg::{
    production_guard, set_production_guard, Cfg, CfgBuilder, GSym, Production,
    DEFAULT_PRODUCTION_GUARD,
};
pub use cyk::{member, CykParser};
pub use enumerate::{enumerate, set_enumeration_guard, DEFAULT_ENUMERATION_GUARD};
pub use product::{apply_fst, intersect_regular};
pub use text::{cfg_to_text, nfa_to_text, parse_cfg, parse_fst, parse_nfa};

use crate::error::{Error, Result};
use crate::symbol::{Symbol, Word};

pub fn union(g1: &Cfg, g2: &Cfg) -> Cfg {
    let mut g = Cfg::empty_language(g1.terminals());
    g.names[0] = None;
    let o1 = g.absorb(g1);
    let o2 = g.absorb(g2);
    g.productions.push(Production {
        lhs: 0,
        body: vec![GSym::N(g1.start + o1)],
    });
    g.productions.push(Production {
        lhs: 0,
        body: vec![GSym::N(g2.start + o2)],
    });
    g.simplify()
}

pub fn concat(g1: &Cfg, g2: &Cfg) -> Cfg {
    let mut g = Cfg::empty_language(g1.terminals());
    g.names[0] = None;
    let o1 = g.absorb(g1);
    let o2 = g.absorb(g2);
    g.productions.push(Production {
        lhs: 0,
        body: vec![GSym::N(g1.start + o1), GSym::N(g2.start + o2)],
    });
    g.simplify()
}

pub fn star(g1: &Cfg) -> Cfg {
    let mut g = Cfg::empty_language(g1.terminals());
    g.names[0] = None;
    let o = g.absorb(g1);
    g.productions.push(Production {
        lhs: 0,
        body: vec![],
    });
    g.productions.push(Production {
        lhs: 0,
        body: vec![GSym::N(g1.start + o), GSym::N(0)],
    });
    g.simplify()
}

/// `{u # u^rev : u ∈ letters*}`, the word-problem language of the free monoid.
pub fn wp_free_monoid_grammar(letters: &[Symbol]) -> Cfg {
    let mut b = Cfg::builder(letters);
    let s = b.nt("S");
    b.add(s, vec![GSym::T(Symbol::MARKER)]);
    for &a in letters {
        b.add(s, vec![GSym::T(a), GSym::N(s), GSym::T(a)]);
    }
    b.build(s)
}

/// `{u : u # ∈ L(wp)}`: the words equal to the identity, given the grammar of
/// `{u # v^rev : u = v}`.
pub fn identity_language_grammar(wp: &Cfg, letters: &[Symbol]) -> Result<Cfg> {
    let mut alphabet = letters.to_vec();
    alphabet.push(Symbol::MARKER);
    let shape = Nfa::star_of_letters(&alphabet, letters).concat(&Nfa::word(
        &alphabet,
        &Word::letter(Symbol::MARKER),
    ));
    let g = intersect_regular(wp, &shape)?;
    let mut h: HashMap<Symbol, Word> = letters.iter().map(|&a| (a, Word::letter(a))).collect();
    h.insert(Symbol::MARKER, Word::empty());
    for &t in g.terminals() {
        h.entry(t).or_insert_with(Word::empty);
    }
    Ok(g.hom_image(&h)?.with_terminals(letters))
}

/// Applies `left` to the part before `#` and `right` to the part after it.
pub fn two_sided_hom(
    g: &Cfg,
    left: &HashMap<Symbol, Word>,
    right: &HashMap<Symbol, Word>,
) -> Result<Cfg> {
    apply_fst(g, &Fst::marker_keyed(Symbol::MARKER, left, right))
}

/// Word-problem grammar `{u # v^rev : w(u) = w(v)}` of a monoid whose
/// elements are determined by an additive weight `w` on the letters (for
/// instance a presentation of the infinite cyclic group).
///
/// Nonterminals `S_k` generate all words of weight `k` in which left letters
/// count `+w` and a primed copy of every letter counts `−w`; every such word
/// of length at least two splits into two factors of weight within
/// `[−m, m]`, `m` the largest absolute weight. Restricting to `A* # A′*`
/// and erasing primes gives the language.
pub fn zero_sum_wp_grammar(letters: &[Symbol], weight: &HashMap<Symbol, i64>) -> Result<Cfg> {
    for a in letters {
        if !weight.contains_key(a) {
            return Err(Error::invalid(format!("no weight for letter {a}")));
        }
    }
    let m = letters.iter().map(|a| weight[a].abs()).max().unwrap_or(0).max(1);
    let primed: Vec<Symbol> = letters.iter().map(|a| a.decorated("′")).collect();
    let mut all: Vec<Symbol> = letters.to_vec();
    all.extend(primed.iter().copied());
    all.push(Symbol::MARKER);
    let mut b = Cfg::builder(&all);
    let ids: Vec<u32> = (-m..=m).map(|k| b.nt(&format!("S{k}"))).collect();
    let nt = |k: i64| ids[(k + m) as usize];
    b.add(nt(0), vec![]);
    b.add(nt(0), vec![GSym::T(Symbol::MARKER)]);
    for (i, &a) in letters.iter().enumerate() {
        b.add(nt(weight[&a]), vec![GSym::T(a)]);
        b.add(nt(-weight[&a]), vec![GSym::T(primed[i])]);
    }
    for k in -m..=m {
        for i in -m..=m {
            let j = k - i;
            if (-m..=m).contains(&j) {
                b.add(nt(k), vec![GSym::N(nt(i)), GSym::N(nt(j))]);
            }
        }
    }
    let g = b.build(nt(0));
    let shape = Nfa::star_of_letters(&all, letters)
        .concat(&Nfa::word(&all, &Word::letter(Symbol::MARKER)))
        .concat(&Nfa::star_of_letters(&all, &primed));
    let g = intersect_regular(&g, &shape)?;
    let mut h: HashMap<Symbol, Word> = letters.iter().map(|&a| (a, Word::letter(a))).collect();
    for (i, &p) in primed.iter().enumerate() {
        h.insert(p, Word::letter(letters[i]));
    }
    h.insert(Symbol::MARKER, Word::letter(Symbol::MARKER));
    g.hom_image(&h)
}

#[cfg(test)]
mod tests;
