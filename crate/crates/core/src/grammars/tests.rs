use std::collections::{BTreeSet, HashMap};

use super::*;
use crate::symbol::chars;

fn syms(s: &str) -> Vec<Symbol> {
    s.chars().map(|c| Symbol::new(&c.to_string())).collect()
}

fn w(s: &str) -> Word {
    chars(s)
}

fn words(list: &[&str]) -> BTreeSet<Word> {
    list.iter().map(|s| w(s)).collect()
}

fn all_words(alpha: &[Symbol], maxlen: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for u in &layer {
            for &a in alpha {
                let mut v = u.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn palindromes() -> Cfg {
    parse_cfg("start: S\nS -> a S a | b S b | #\n").unwrap()
}

#[test]
fn free_wp_grammar_membership() {
    let g = wp_free_monoid_grammar(&syms("ab"));
    assert!(member(&g, &w("ab#ba")).unwrap());
    assert!(member(&g, &w("#")).unwrap());
    assert!(!member(&g, &w("ab#ab")).unwrap());
    assert!(!member(&g, &w("ab")).unwrap());
    assert!(member(&g, &w("abc")).is_err());
    let expected: BTreeSet<Word> = all_words(&syms("ab"), 2)
        .into_iter()
        .map(|u| u.concat(&Word::letter(Symbol::MARKER)).concat(&u.reversed()))
        .collect();
    assert_eq!(enumerate(&g, 5).unwrap(), expected);
}

#[test]
fn cyk_agrees_with_enumeration() {
    let texts = [
        "start: S\nS -> a S b | S S | 1\n",
        "start: S\nS -> A B | b\nA -> a A | 1\nB -> S a | b b\n",
        "start: E\nE -> E + T | T\nT -> ( E ) | x\n",
    ];
    for t in texts {
        let g = parse_cfg(t).unwrap();
        let alpha = g.terminals().to_vec();
        let lang = enumerate(&g, 7).unwrap();
        let parser = CykParser::new(&g);
        for u in all_words(&alpha, 7) {
            assert_eq!(parser.accepts(u.symbols()), lang.contains(&u), "{t} on {u}");
        }
    }
}

#[test]
fn dyck_enumeration() {
    let g = parse_cfg("start: S\nS -> a S b S | 1\n").unwrap();
    assert_eq!(
        enumerate(&g, 4).unwrap(),
        words(&["1", "ab", "aabb", "abab"])
    );
}

#[test]
fn intersection_with_regular_language() {
    let alpha = syms("ab#");
    let shape = Nfa::star_of_letters(&alpha, &syms("a"))
        .concat(&Nfa::word(&alpha, &w("#")))
        .concat(&Nfa::star_of_letters(&alpha, &syms("a")));
    let g = intersect_regular(&palindromes(), &shape).unwrap();
    assert_eq!(enumerate(&g, 5).unwrap(), words(&["#", "a#a", "aa#aa"]));
    let none = intersect_regular(&palindromes(), &Nfa::word(&alpha, &w("ab#ab"))).unwrap();
    assert!(!none.is_nonempty());
}

#[test]
fn transducer_drops_trailing_marker() {
    // {u# : u ∈ a*} mapped to a*
    let g = parse_cfg("start: S\nS -> A #\nA -> a A | 1\n").unwrap();
    let mut t = Fst::new(&syms("a#"), &syms("a"));
    let s0 = t.add_state(false);
    let s1 = t.add_state(true);
    t.set_initial(s0);
    t.add_arc(s0, Some(Symbol::new("a")), w("a"), s0);
    t.add_arc(s0, Some(Symbol::MARKER), Word::empty(), s1);
    let out = apply_fst(&g, &t).unwrap();
    assert_eq!(enumerate(&out, 3).unwrap(), words(&["1", "a", "aa", "aaa"]));
}

#[test]
fn epsilon_input_transducer() {
    // inserts any number of c's before each a
    let g = Cfg::from_words(&syms("a"), [&w("aa")]);
    let mut t = Fst::new(&syms("a"), &syms("ac"));
    let s = t.add_state(true);
    t.set_initial(s);
    t.add_arc(s, None, w("c"), s);
    t.add_arc(s, Some(Symbol::new("a")), w("a"), s);
    let out = apply_fst(&g, &t).unwrap();
    let got = enumerate(&out, 4).unwrap();
    let expected = words(&["aa", "caa", "aca", "aac", "ccaa", "caca", "caac", "acca", "acac", "aacc"]);
    assert_eq!(got, expected);
}

#[test]
fn inverse_homomorphism() {
    let mut h = HashMap::new();
    h.insert(Symbol::new("c"), w("ab"));
    h.insert(Symbol::new("d"), w("a"));
    let g = parse_cfg("start: S\nS -> a b S | 1\n").unwrap();
    let inv = apply_fst(&g, &Fst::inverse_hom(&h)).unwrap();
    assert_eq!(enumerate(&inv, 3).unwrap(), words(&["1", "c", "cc", "ccc"]));
}

#[test]
fn hom_reverse_union_concat_star() {
    let g = parse_cfg("start: S\nS -> a b\n").unwrap();
    let mut h = HashMap::new();
    h.insert(Symbol::new("a"), w("xy"));
    h.insert(Symbol::new("b"), Word::empty());
    assert_eq!(enumerate(&g.hom_image(&h).unwrap(), 4).unwrap(), words(&["xy"]));
    assert_eq!(enumerate(&g.reverse(), 4).unwrap(), words(&["ba"]));
    let k = parse_cfg("start: S\nS -> c\n").unwrap();
    assert_eq!(enumerate(&union(&g, &k), 4).unwrap(), words(&["ab", "c"]));
    assert_eq!(enumerate(&concat(&g, &k), 4).unwrap(), words(&["abc"]));
    assert_eq!(
        enumerate(&star(&k), 3).unwrap(),
        words(&["1", "c", "cc", "ccc"])
    );
    let mut partial = HashMap::new();
    partial.insert(Symbol::new("a"), w("x"));
    assert!(g.hom_image(&partial).is_err());
}

#[test]
fn identity_language_of_free_monoid_is_trivial() {
    let g = identity_language_grammar(&wp_free_monoid_grammar(&syms("ab")), &syms("ab")).unwrap();
    assert_eq!(enumerate(&g, 4).unwrap(), words(&["1"]));
}

#[test]
fn zero_sum_grammar_matches_weights() {
    let mut wt = HashMap::new();
    wt.insert(Symbol::new("a"), 1);
    wt.insert(Symbol::new("b"), -1);
    wt.insert(Symbol::new("c"), 2);
    let g = zero_sum_wp_grammar(&syms("abc"), &wt).unwrap();
    let weight = |s: &[Symbol]| s.iter().map(|x| wt[x]).sum::<i64>();
    let lang = enumerate(&g, 5).unwrap();
    for u in all_words(&syms("abc"), 4) {
        for v in all_words(&syms("abc"), 4 - u.len()) {
            let x = u.concat(&Word::letter(Symbol::MARKER)).concat(&v);
            assert_eq!(
                lang.contains(&x),
                weight(u.symbols()) == weight(v.symbols()),
                "{x}"
            );
        }
    }
}

#[test]
fn simplify_preserves_language() {
    let g = parse_cfg(
        "start: S\nS -> A | B C | D\nA -> a | A\nB -> b B | b\nC -> C c\nD -> E\nE -> d e\nF -> f\n",
    )
    .unwrap();
    let s = g.simplify();
    assert_eq!(enumerate(&g, 4).unwrap(), enumerate(&s, 4).unwrap());
    assert!(s.production_count() < g.production_count());
    assert_eq!(enumerate(&s, 4).unwrap(), words(&["a", "de"]));
}

#[test]
fn empty_language_simplifies_to_start_only() {
    let g = parse_cfg("start: S\nS -> a S\n").unwrap();
    assert!(!g.is_nonempty());
    assert_eq!(g.simplify().production_count(), 0);
    assert!(enumerate(&g, 5).unwrap().is_empty());
    let text = cfg_to_text(&g.simplify());
    let again = parse_cfg(&text).unwrap();
    assert!(!again.is_nonempty());
    assert_eq!(again.terminals(), g.terminals());
}

#[test]
fn text_round_trip() {
    let g = parse_cfg("terminals: a b #\nstart: S\nS -> a S a | b T b | #\nT -> 1 | S\n").unwrap();
    let again = parse_cfg(&cfg_to_text(&g)).unwrap();
    assert_eq!(enumerate(&g, 7).unwrap(), enumerate(&again, 7).unwrap());
    assert!(matches!(
        parse_cfg("terminals: a\nS -> b\n"),
        Err(Error::Parse { line: 2, .. })
    ));
    let n = parse_nfa("alphabet: a b\nstates: 2\ninitial: 0\naccepting: 1\n0 a 1\n1 b 1\n0 1 1\n").unwrap();
    let n2 = parse_nfa(&nfa_to_text(&n)).unwrap();
    assert_eq!(n.enumerate(3), n2.enumerate(3));
    assert_eq!(n.enumerate(2), words(&["1", "a", "b", "ab", "bb"]));
    let t = parse_fst("alphabet: a\nstates: 1\ninitial: 0\naccepting: 0\n0 a / b b 0\n").unwrap();
    assert_eq!(t.outputs(&syms("aa"), 10), words(&["bbbb"]));
}

#[test]
fn automaton_operations() {
    let alpha = syms("ab");
    let avoid = Nfa::avoiding_factor(&alpha, &w("ab")).unwrap();
    for u in all_words(&alpha, 6) {
        assert_eq!(avoid.accepts(u.symbols()), !u.contains(&w("ab")), "{u}");
    }
    let ab = Nfa::word(&alpha, &w("ab"));
    let l = ab.union(&Nfa::word(&alpha, &w("b"))).star();
    assert!(l.accepts(&syms("babab")));
    assert!(!l.accepts(&syms("aa")));
    assert!(l.reverse().accepts(&syms("bab")));
    assert!(l.reverse().accepts(&syms("bba")));
    let d = l.difference(&Nfa::universal(&alpha).concat(&Nfa::word(&alpha, &w("bb")))).unwrap();
    assert!(d.accepts(&syms("ab")));
    assert!(!d.accepts(&syms("abb")));
    assert!(Nfa::empty(&alpha).is_empty());
    assert!(!Nfa::epsilon(&alpha).is_empty());
    let blowup = Nfa::universal(&alpha)
        .concat(&Nfa::word(&alpha, &w("a")))
        .concat(&Nfa::bounded_length(&alpha, 12));
    assert!(matches!(
        blowup.determinize_with_guard(100),
        Err(Error::Guard { .. })
    ));
}
