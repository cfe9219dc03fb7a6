//! String rewriting systems: one-step rewriting, bounded search oracles for
//! equality and ancestry, critical-pair confluence checks and a bounded
//! shortlex completion procedure.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammars::{enumerate, Cfg, CykParser};
use crate::symbol::{Alphabet, Word};

/// Three-valued answer of an equality query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equal,
    Distinct,
    Unknown,
}

impl Verdict {
    pub fn is_definite(self) -> bool {
        self != Verdict::Unknown
    }

    pub fn from_bool(equal: bool) -> Verdict {
        if equal {
            Verdict::Equal
        } else {
            Verdict::Distinct
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::Distinct => "distinct",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Rules whose left-hand sides form a context-free language with one common
/// right-hand side.
#[derive(Clone, Debug)]
pub struct GrammarRule {
    pub lhs: Cfg,
    pub rhs: Word,
}

#[derive(Clone, Debug)]
pub enum Rules {
    Finite(Vec<(Word, Word)>),
    Grammar(Vec<GrammarRule>),
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    rules: Rules,
}

impl RewriteSystem {
    pub fn finite(alphabet: Alphabet, rules: Vec<(Word, Word)>) -> Self {
        RewriteSystem {
            alphabet,
            rules: Rules::Finite(rules),
        }
    }

    pub fn grammar_backed(alphabet: Alphabet, rules: Vec<GrammarRule>) -> Self {
        RewriteSystem {
            alphabet,
            rules: Rules::Grammar(rules),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    /// The finite rule list; `None` for grammar-backed systems.
    pub fn finite_rules(&self) -> Option<&[(Word, Word)]> {
        match &self.rules {
            Rules::Finite(r) => Some(r),
            Rules::Grammar(_) => None,
        }
    }

    /// Finite rules with every grammar-described left-hand side of length at
    /// most `maxlen` spelled out.
    pub fn finite_within(&self, maxlen: usize) -> Result<Vec<(Word, Word)>> {
        match &self.rules {
            Rules::Finite(r) => Ok(r.clone()),
            Rules::Grammar(rs) => {
                let mut out = Vec::new();
                for rule in rs {
                    for lhs in enumerate(&rule.lhs, maxlen)? {
                        out.push((lhs, rule.rhs.clone()));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn is_monadic(&self) -> bool {
        let ok = |lhs_len: usize, rhs: &Word| rhs.len() <= 1 && lhs_len >= rhs.len();
        match &self.rules {
            Rules::Finite(r) => r.iter().all(|(l, rr)| ok(l.len(), rr)),
            Rules::Grammar(rs) => rs.iter().all(|g| {
                g.rhs.len() <= 1 && (g.rhs.is_empty() || !g.lhs.accepts_empty())
            }),
        }
    }

    pub fn is_special(&self) -> bool {
        match &self.rules {
            Rules::Finite(r) => r.iter().all(|(_, rr)| rr.is_empty()),
            Rules::Grammar(rs) => rs.iter().all(|g| g.rhs.is_empty()),
        }
    }

    /// Reverses every rule: `(l, r)` becomes `(l^rev, r^rev)`.
    pub fn reversed(&self) -> RewriteSystem {
        let rules = match &self.rules {
            Rules::Finite(r) => {
                Rules::Finite(r.iter().map(|(l, rr)| (l.reversed(), rr.reversed())).collect())
            }
            Rules::Grammar(rs) => Rules::Grammar(
                rs.iter()
                    .map(|g| GrammarRule {
                        lhs: g.lhs.reverse(),
                        rhs: g.rhs.reversed(),
                    })
                    .collect(),
            ),
        };
        RewriteSystem {
            alphabet: self.alphabet.clone(),
            rules,
        }
    }

    /// Normal form by repeated leftmost-innermost rewriting. Only meaningful
    /// (and only guaranteed to stop) for terminating finite systems.
    pub fn normal_form(&self, w: &Word) -> Word {
        match &self.rules {
            Rules::Finite(r) => normal_form(r, w),
            Rules::Grammar(_) => w.clone(),
        }
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        match &self.rules {
            Rules::Finite(r) => first_redex(r, w.symbols()).is_none(),
            Rules::Grammar(_) => rewrite_once(w, self).is_empty(),
        }
    }
}

impl fmt::Display for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rules {
            Rules::Finite(r) => {
                for (l, rr) in r {
                    writeln!(f, "rule: {} -> {}", l.spell(), rr.spell())?;
                }
                Ok(())
            }
            Rules::Grammar(rs) => {
                for g in rs {
                    writeln!(f, "rule: <grammar, {} productions> -> {}", g.lhs.production_count(), g.rhs.spell())?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `rule: aba -> 1` lines; `gens:` declares the alphabet as in
/// presentation files.
pub fn parse_rewrite_system(text: &str) -> Result<RewriteSystem> {
    let mut alphabet: Option<Alphabet> = None;
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(lineno, "expected `gens:` or `rule:`"))?;
        match key.trim() {
            "gens" => {
                let syms = rest.split_whitespace().map(crate::symbol::Symbol::new).collect();
                alphabet = Some(Alphabet::new(syms).map_err(|e| Error::parse(lineno, e))?);
            }
            "rule" => {
                let (l, r) = rest
                    .split_once("->")
                    .ok_or_else(|| Error::parse(lineno, "rule needs `->`"))?;
                raw.push((lineno, l.trim().to_string(), r.trim().to_string()));
            }
            other => return Err(Error::parse(lineno, format!("unknown key {other:?}"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `gens:` line"))?;
    let mut rules = Vec::new();
    for (lineno, l, r) in raw {
        rules.push((
            alphabet.parse_word(&l).map_err(|e| Error::parse(lineno, e))?,
            alphabet.parse_word(&r).map_err(|e| Error::parse(lineno, e))?,
        ));
    }
    Ok(RewriteSystem::finite(alphabet, rules))
}

/// All words obtained from `w` by one rule application at any position.
pub fn rewrite_once(w: &Word, r: &RewriteSystem) -> BTreeSet<Word> {
    let s = w.symbols();
    let mut out = BTreeSet::new();
    match &r.rules {
        Rules::Finite(rules) => {
            for (l, rr) in rules {
                for i in 0..=s.len().saturating_sub(l.len()) {
                    if i + l.len() <= s.len() && s[i..i + l.len()] == *l.symbols() {
                        out.insert(splice(s, i, i + l.len(), rr.symbols()));
                    }
                }
            }
        }
        Rules::Grammar(rules) => {
            for rule in rules {
                let parser = CykParser::new(&rule.lhs);
                for i in 0..=s.len() {
                    for j in i..=s.len() {
                        if parser.accepts(&s[i..j]) {
                            out.insert(splice(s, i, j, rule.rhs.symbols()));
                        }
                    }
                }
            }
        }
    }
    out
}

fn splice(s: &[crate::symbol::Symbol], i: usize, j: usize, mid: &[crate::symbol::Symbol]) -> Word {
    let mut v = Vec::with_capacity(s.len() - (j - i) + mid.len());
    v.extend_from_slice(&s[..i]);
    v.extend_from_slice(mid);
    v.extend_from_slice(&s[j..]);
    Word::new(v)
}

/// Position and rule index of the leftmost-innermost redex: the redex whose
/// right end is smallest.
fn first_redex(rules: &[(Word, Word)], s: &[crate::symbol::Symbol]) -> Option<(usize, usize)> {
    for end in 0..=s.len() {
        for (k, (l, _)) in rules.iter().enumerate() {
            if l.len() <= end && s[end - l.len()..end] == *l.symbols() {
                return Some((end - l.len(), k));
            }
        }
    }
    None
}

fn normal_form(rules: &[(Word, Word)], w: &Word) -> Word {
    let mut cur = w.clone();
    while let Some((i, k)) = first_redex(rules, cur.symbols()) {
        let (l, r) = &rules[k];
        cur = splice(cur.symbols(), i, i + l.len(), r.symbols());
    }
    cur
}

/// The part of a rewrite-graph component reachable within a length bound.
#[derive(Clone, Debug)]
pub struct Component {
    pub words: HashSet<Word>,
    /// True when no neighbour of an explored word was cut off by the length
    /// bound and the state budget was not exhausted.
    pub closed: bool,
}

/// Breadth-first exploration of the undirected rewrite graph from `start`.
pub fn explore_component(
    start: &Word,
    rules: &[(Word, Word)],
    maxlen: usize,
    maxstates: usize,
) -> Component {
    let mut words = HashSet::new();
    let mut closed = start.len() <= maxlen;
    if !closed {
        return Component { words, closed };
    }
    let both: Vec<(&Word, &Word)> = rules
        .iter()
        .flat_map(|(l, r)| [(l, r), (r, l)])
        .collect();
    let mut queue = VecDeque::new();
    words.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(w) = queue.pop_front() {
        let s = w.symbols();
        for &(from, to) in &both {
            if from.len() > s.len() {
                continue;
            }
            for i in 0..=s.len() - from.len() {
                if s[i..i + from.len()] != *from.symbols() {
                    continue;
                }
                let next_len = s.len() - from.len() + to.len();
                if next_len > maxlen {
                    closed = false;
                    continue;
                }
                let next = splice(s, i, i + from.len(), to.symbols());
                if !words.contains(&next) {
                    if words.len() >= maxstates {
                        closed = false;
                        continue;
                    }
                    words.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    Component { words, closed }
}

/// Bounded breadth-first equality test in `Mon⟨A | R⟩`.
pub fn equal_bounded(
    u: &Word,
    v: &Word,
    r: &RewriteSystem,
    maxlen: usize,
    maxstates: usize,
) -> Result<Verdict> {
    if u == v {
        return Ok(Verdict::Equal);
    }
    let rules = r.finite_within(maxlen)?;
    let comp = explore_component(u, &rules, maxlen, maxstates);
    Ok(if comp.words.contains(v) {
        Verdict::Equal
    } else if comp.closed {
        Verdict::Distinct
    } else {
        Verdict::Unknown
    })
}

/// `{ w : |w| ≤ maxlen, w →* x for some x ∈ target }` for a system whose
/// rules never increase length.
pub fn ancestors_bounded(
    target: &BTreeSet<Word>,
    r: &RewriteSystem,
    maxlen: usize,
) -> Result<BTreeSet<Word>> {
    let rules = r.finite_within(maxlen)?;
    if let Some((l, rr)) = rules.iter().find(|(l, rr)| l.len() < rr.len()) {
        return Err(Error::invalid(format!(
            "length-increasing rule {l} -> {rr}"
        )));
    }
    let mut seen: BTreeSet<Word> = target.iter().filter(|w| w.len() <= maxlen).cloned().collect();
    let mut queue: VecDeque<Word> = seen.iter().cloned().collect();
    while let Some(w) = queue.pop_front() {
        let s = w.symbols();
        for (l, rr) in &rules {
            if rr.len() > s.len() || s.len() - rr.len() + l.len() > maxlen {
                continue;
            }
            for i in 0..=s.len() - rr.len() {
                if s[i..i + rr.len()] == *rr.symbols() {
                    let prev = splice(s, i, i + rr.len(), l.symbols());
                    if seen.insert(prev.clone()) {
                        queue.push_back(prev);
                    }
                }
            }
        }
    }
    Ok(seen)
}

/// Outcome of a critical-pair confluence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Confluence {
    Complete,
    /// An unjoinable critical pair: both one-step reducts of `overlap`,
    /// already in normal form.
    Incomplete {
        overlap: Word,
        left: Word,
        right: Word,
    },
    /// Some rule is not shortlex-decreasing, so termination is not certified.
    Inapplicable,
}

/// Critical pairs between `(l1, r1)` and `(l2, r2)`: proper overlaps where a
/// suffix of `l1` is a prefix of `l2`, and occurrences of `l2` inside `l1`.
fn critical_pairs(
    (l1, r1): (&Word, &Word),
    (l2, r2): (&Word, &Word),
    same_rule: bool,
) -> Vec<(Word, Word, Word)> {
    let a = l1.symbols();
    let b = l2.symbols();
    let mut out = Vec::new();
    for k in 1..a.len().min(b.len()) {
        if a[a.len() - k..] == b[..k] {
            let overlap: Word = a.iter().chain(&b[k..]).copied().collect();
            let left: Word = r1.symbols().iter().chain(&b[k..]).copied().collect();
            let right: Word = a[..a.len() - k].iter().chain(r2.symbols()).copied().collect();
            out.push((overlap, left, right));
        }
    }
    if b.len() <= a.len() {
        for i in 0..=a.len() - b.len() {
            if same_rule && i == 0 {
                continue;
            }
            if a[i..i + b.len()] == *b {
                out.push((l1.clone(), r1.clone(), splice(a, i, i + b.len(), r2.symbols())));
            }
        }
    }
    out
}

fn all_critical_pairs(rules: &[(Word, Word)]) -> Vec<(Word, Word, Word)> {
    let mut out = Vec::new();
    for (i, (l1, r1)) in rules.iter().enumerate() {
        for (j, (l2, r2)) in rules.iter().enumerate() {
            out.extend(critical_pairs((l1, r1), (l2, r2), i == j));
        }
    }
    out
}

/// Checks local confluence of a shortlex-decreasing finite system.
pub fn check_confluence_lengthreducing(r: &RewriteSystem) -> Result<Confluence> {
    let rules = r
        .finite_rules()
        .ok_or_else(|| Error::invalid("confluence check needs finite rules"))?;
    if rules
        .iter()
        .any(|(l, rr)| !r.alphabet.shortlex_cmp(l, rr).is_gt())
    {
        return Ok(Confluence::Inapplicable);
    }
    for (overlap, left, right) in all_critical_pairs(rules) {
        let (nl, nr) = (normal_form(rules, &left), normal_form(rules, &right));
        if nl != nr {
            return Ok(Confluence::Incomplete {
                overlap,
                left: nl,
                right: nr,
            });
        }
    }
    Ok(Confluence::Complete)
}

/// Bounded Knuth–Bendix completion under the shortlex order of the
/// alphabet. Returns `None` when more than `maxrules` rules are needed.
pub fn complete_bounded(r: &RewriteSystem, maxrules: usize) -> Option<RewriteSystem> {
    const MAX_STEPS: usize = 200_000;
    let alphabet = r.alphabet.clone();
    let initial = r.finite_rules()?;
    let orient = |a: Word, b: Word| {
        if alphabet.shortlex_cmp(&a, &b).is_gt() {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut rules: Vec<(Word, Word)> = Vec::new();
    let mut pending: VecDeque<(Word, Word)> = initial.iter().cloned().collect();
    let mut steps = 0;
    while let Some((a, b)) = pending.pop_front() {
        steps += 1;
        if steps > MAX_STEPS {
            return None;
        }
        let (a, b) = (normal_form(&rules, &a), normal_form(&rules, &b));
        if a == b {
            continue;
        }
        let (l, rr) = orient(a, b);
        let mut kept = Vec::with_capacity(rules.len() + 1);
        for (l2, r2) in rules.drain(..) {
            if l2.contains(&l) {
                pending.push_back((l2, r2));
            } else {
                kept.push((l2, r2));
            }
        }
        rules = kept;
        rules.push((l.clone(), rr.clone()));
        for i in 0..rules.len() {
            let rhs = normal_form(&rules, &rules[i].1);
            rules[i].1 = rhs;
        }
        if rules.len() > maxrules {
            return None;
        }
        let last = rules.len() - 1;
        for (i, (l2, r2)) in rules.iter().enumerate() {
            let same = i == last;
            for (_, x, y) in critical_pairs((&l, &rr), (l2, r2), same) {
                pending.push_back((x, y));
            }
            if !same {
                for (_, x, y) in critical_pairs((l2, r2), (&l, &rr), false) {
                    pending.push_back((x, y));
                }
            }
        }
    }
    let result = RewriteSystem::finite(alphabet, rules);
    match check_confluence_lengthreducing(&result) {
        Ok(Confluence::Complete) => Some(result),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::chars;

    fn sys(gens: &str, rules: &[(&str, &str)]) -> RewriteSystem {
        let names: Vec<String> = gens.chars().map(|c| c.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let alphabet = Alphabet::from_names(&refs).unwrap();
        RewriteSystem::finite(
            alphabet,
            rules.iter().map(|(l, r)| (chars(l), chars(r))).collect(),
        )
    }

    fn set(ws: &[&str]) -> BTreeSet<Word> {
        ws.iter().map(|w| chars(w)).collect()
    }

    #[test]
    fn rewrite_once_examples() {
        assert_eq!(rewrite_once(&chars("abab"), &sys("ab", &[("aba", "1")])), set(&["b"]));
        assert_eq!(rewrite_once(&chars("bb"), &sys("ab", &[("bb", "a")])), set(&["a"]));
        assert!(rewrite_once(&Word::empty(), &sys("ab", &[("bb", "a")])).is_empty());
    }

    #[test]
    fn equal_bounded_examples() {
        let m1 = sys("xy", &[("xyyxxxyxxyyxxxy", "xy")]);
        assert_eq!(
            equal_bounded(&chars("xyyxxxyxxyyxxxy"), &chars("xy"), &m1, 15, 10_000).unwrap(),
            Verdict::Equal
        );
        assert_eq!(
            equal_bounded(&chars("x"), &chars("x"), &m1, 1, 10).unwrap(),
            Verdict::Equal
        );
        // a ↦ 1, b ↦ -2 is a homomorphism onto Z separating a and b
        let aba = sys("ab", &[("aba", "1")]);
        let v = equal_bounded(&chars("a"), &chars("b"), &aba, 8, 100_000).unwrap();
        assert_ne!(v, Verdict::Equal);
    }

    #[test]
    fn distinct_needs_closed_component() {
        let s = sys("ab", &[("aa", "a")]);
        // component of b is {b}: closed
        assert_eq!(
            equal_bounded(&chars("b"), &chars("a"), &s, 4, 100).unwrap(),
            Verdict::Distinct
        );
        // component of a grows without bound
        assert_eq!(
            equal_bounded(&chars("a"), &chars("b"), &s, 4, 100).unwrap(),
            Verdict::Unknown
        );
    }

    #[test]
    fn ancestors_examples() {
        let s = sys("ab", &[("bb", "a")]);
        assert_eq!(ancestors_bounded(&set(&["a"]), &s, 4).unwrap(), set(&["a", "bb"]));
        let s = sys("a", &[("aa", "1")]);
        assert_eq!(
            ancestors_bounded(&set(&["1"]), &s, 5).unwrap(),
            set(&["1", "aa", "aaaa"])
        );
        let grow = sys("ab", &[("a", "bb")]);
        assert!(ancestors_bounded(&set(&["a"]), &grow, 4).is_err());
    }

    #[test]
    fn confluence_examples() {
        let pi = RewriteSystem::finite(
            Alphabet::from_names(&["a1", "a2", "a3"]).unwrap(),
            vec![(
                Alphabet::from_names(&["a1", "a2", "a3"])
                    .unwrap()
                    .parse_word("a1a1a2a2a2a3a3a3a3")
                    .unwrap(),
                Word::letter(crate::symbol::Symbol::new("a2")),
            )],
        );
        assert_eq!(check_confluence_lengthreducing(&pi).unwrap(), Confluence::Complete);
        match check_confluence_lengthreducing(&sys("ab", &[("aba", "1")])).unwrap() {
            Confluence::Incomplete { overlap, left, right } => {
                assert_eq!(overlap, chars("ababa"));
                assert_eq!((left, right), (chars("ba"), chars("ab")));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            check_confluence_lengthreducing(&sys("ab", &[])).unwrap(),
            Confluence::Complete
        );
        assert_eq!(
            check_confluence_lengthreducing(&sys("ab", &[("a", "bb")])).unwrap(),
            Confluence::Inapplicable
        );
    }

    #[test]
    fn completion_of_aba() {
        let c = complete_bounded(&sys("ab", &[("aba", "1")]), 20).unwrap();
        assert_eq!(check_confluence_lengthreducing(&c).unwrap(), Confluence::Complete);
        // normal forms of short words correspond to the values a ↦ 1, b ↦ -2
        let alphabet = c.alphabet().clone();
        let words = alphabet.words_up_to(6);
        let nfs: BTreeSet<Word> = words.iter().map(|w| c.normal_form(w)).collect();
        let value = |w: &Word| -> i64 {
            w.symbols().iter().map(|s| if s.name() == "a" { 1 } else { -2 }).sum()
        };
        let values: BTreeSet<i64> = words.iter().map(value).collect();
        assert_eq!(nfs.len(), values.len());
    }

    #[test]
    fn completion_keeps_complete_systems() {
        let pi = sys("abc", &[("aabbbcccc", "b")]);
        let c = complete_bounded(&pi, 10).unwrap();
        assert_eq!(c.finite_rules().unwrap(), pi.finite_rules().unwrap());
        let empty = complete_bounded(&sys("ab", &[]), 10).unwrap();
        assert!(empty.finite_rules().unwrap().is_empty());
    }

    #[test]
    fn rule_file_parsing() {
        let r = parse_rewrite_system("gens: a b\nrule: aba -> 1\n").unwrap();
        assert_eq!(r.finite_rules().unwrap(), &[(chars("aba"), Word::empty())]);
        assert!(r.is_special() && r.is_monadic());
    }
}
