//! Interned symbols, words and alphabets.
//!
//! Symbols are opaque tokens identified by name. Names are interned in a
//! process-wide append-only table so that a [`Symbol`] is a `Copy` integer and
//! words are plain vectors of integers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Default)]
struct Interner {
    names: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        let mut int = Interner::default();
        for name in [MARKER_NAME, DIAMOND_NAME] {
            let id = int.names.len() as u32;
            int.names.push(name);
            int.ids.insert(name, id);
        }
        RwLock::new(int)
    })
}

const MARKER_NAME: &str = "#";
const DIAMOND_NAME: &str = "◊";

/// Spelling of the empty word in every text format.
pub const EMPTY_WORD: &str = "1";

/// An interned symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    /// The word-problem marker `#`.
    pub const MARKER: Symbol = Symbol(0);
    /// The diamond `◊` used when re-encoding occurrences of a sealing word.
    pub const DIAMOND: Symbol = Symbol(1);

    pub fn new(name: &str) -> Symbol {
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Symbol(id);
        }
        let mut int = interner().write().unwrap();
        if let Some(&id) = int.ids.get(name) {
            return Symbol(id);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = int.names.len() as u32;
        int.names.push(leaked);
        int.ids.insert(leaked, id);
        Symbol(id)
    }

    pub fn name(self) -> &'static str {
        interner().read().unwrap().names[self.0 as usize]
    }

    pub fn is_reserved(self) -> bool {
        self == Symbol::MARKER || self == Symbol::DIAMOND
    }

    /// A symbol derived from this one by appending `suffix` to its name.
    pub fn decorated(self, suffix: &str) -> Symbol {
        Symbol::new(&format!("{}{}", self.name(), suffix))
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Ok(Symbol::new(&name))
    }
}

/// A finite word; `Word::empty()` is ε.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn letter(s: Symbol) -> Word {
        Word(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// Start positions of all occurrences of `pat` (overlapping ones included).
    pub fn occurrences(&self, pat: &Word) -> Vec<usize> {
        if pat.is_empty() || pat.len() > self.len() {
            return Vec::new();
        }
        self.0
            .windows(pat.len())
            .enumerate()
            .filter(|(_, w)| *w == pat.symbols())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn find(&self, pat: &Word) -> Option<usize> {
        if pat.is_empty() {
            return Some(0);
        }
        if pat.len() > self.len() {
            return None;
        }
        self.0.windows(pat.len()).position(|w| w == pat.symbols())
    }

    pub fn rfind(&self, pat: &Word) -> Option<usize> {
        if pat.is_empty() {
            return Some(self.len());
        }
        if pat.len() > self.len() {
            return None;
        }
        self.0.windows(pat.len()).rposition(|w| w == pat.symbols())
    }

    pub fn contains(&self, pat: &Word) -> bool {
        self.find(pat).is_some()
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Spells the word: names are concatenated when every symbol is a single
    /// character, space-separated otherwise; ε is spelled `1`.
    pub fn spell(&self) -> String {
        if self.is_empty() {
            return EMPTY_WORD.to_string();
        }
        if self.0.iter().all(|s| s.name().chars().count() == 1) {
            self.0.iter().map(|s| s.name()).collect()
        } else {
            self.0
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.spell())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spell())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|x| x.name()))
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(d)?;
        Ok(names.iter().map(|n| Symbol::new(n)).collect())
    }
}

/// An ordered finite set of symbols. The order is significant: it is the
/// letter order used by shortlex comparisons.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Symbol>,
}

impl Alphabet {
    /// Builds an alphabet, rejecting duplicates and the reserved `#`/`◊`.
    pub fn new(letters: Vec<Symbol>) -> Result<Alphabet> {
        for (i, s) in letters.iter().enumerate() {
            if s.is_reserved() {
                return Err(Error::invalid(format!("reserved symbol {s} in alphabet")));
            }
            if s.name() == EMPTY_WORD || s.name().chars().any(char::is_whitespace) {
                return Err(Error::invalid(format!("bad generator name {:?}", s.name())));
            }
            if letters[..i].contains(s) {
                return Err(Error::invalid(format!("duplicate symbol {s}")));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn from_names(names: &[&str]) -> Result<Alphabet> {
        Alphabet::new(names.iter().map(|n| Symbol::new(n)).collect())
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.letters.contains(&s)
    }

    pub fn index_of(&self, s: Symbol) -> Option<usize> {
        self.letters.iter().position(|&x| x == s)
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.symbols().iter().all(|&s| self.contains(s))
    }

    /// The letters with the marker appended (`A_#`).
    pub fn with_marker(&self) -> Vec<Symbol> {
        let mut v = self.letters.clone();
        v.push(Symbol::MARKER);
        v
    }

    /// Parses a word over this alphabet.
    ///
    /// Whitespace-separated input is read token by token; otherwise the
    /// longest generator name matching at each position is taken. `1` is ε.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word_over(&self.letters, text)
    }

    /// All words of length exactly `n`, in shortlex order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * self.len());
            for w in &out {
                for &a in &self.letters {
                    let mut x = w.clone();
                    x.push(a);
                    next.push(x);
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `n`, in shortlex order.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| self.words_of_length(k)).collect()
    }

    /// Shortlex comparison using this alphabet's letter order.
    pub fn shortlex_cmp(&self, u: &Word, v: &Word) -> std::cmp::Ordering {
        u.len().cmp(&v.len()).then_with(|| {
            for (a, b) in u.symbols().iter().zip(v.symbols()) {
                let (ia, ib) = (self.index_of(*a), self.index_of(*b));
                if ia != ib {
                    return ia.cmp(&ib);
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.letters.iter()).finish()
    }
}

/// Parses a word over an explicit list of symbols (which may include the
/// reserved symbols). See [`Alphabet::parse_word`].
pub fn parse_word_over(letters: &[Symbol], text: &str) -> Result<Word> {
    let text = text.trim();
    if text == EMPTY_WORD || text.is_empty() {
        return Ok(Word::empty());
    }
    let lookup = |tok: &str| letters.iter().copied().find(|s| s.name() == tok);
    if text.split_whitespace().count() > 1 {
        return text
            .split_whitespace()
            .map(|tok| {
                lookup(tok).ok_or_else(|| Error::invalid(format!("unknown symbol {tok:?}")))
            })
            .collect();
    }
    if let Some(s) = lookup(text) {
        return Ok(Word::letter(s));
    }
    let mut sorted: Vec<Symbol> = letters.to_vec();
    sorted.sort_by_key(|s| std::cmp::Reverse(s.name().len()));
    let mut rest = text;
    let mut out = Vec::new();
    while !rest.is_empty() {
        let hit = sorted.iter().find(|s| rest.starts_with(s.name()));
        match hit {
            Some(&s) => {
                out.push(s);
                rest = &rest[s.name().len()..];
            }
            None => {
                return Err(Error::invalid(format!(
                    "cannot tokenize {text:?} at {rest:?}"
                )))
            }
        }
    }
    Ok(Word(out))
}

/// `A*`-style shorthand used throughout the tests: every character of `text`
/// is one symbol.
pub fn chars(text: &str) -> Word {
    if text == EMPTY_WORD {
        return Word::empty();
    }
    text.chars().map(|c| Symbol::new(&c.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_symbols_are_fixed() {
        assert_eq!(Symbol::new("#"), Symbol::MARKER);
        assert_eq!(Symbol::new("◊"), Symbol::DIAMOND);
        assert!(Alphabet::from_names(&["a", "#"]).is_err());
        assert!(Alphabet::from_names(&["a", "a"]).is_err());
    }

    #[test]
    fn word_parsing() {
        let a = Alphabet::from_names(&["a1", "a2", "a3"]).unwrap();
        let w = a.parse_word("a1a1a2").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(a.parse_word("a1 a2").unwrap().len(), 2);
        assert_eq!(a.parse_word("1").unwrap(), Word::empty());
        assert!(a.parse_word("a4").is_err());
        assert_eq!(w.spell(), "a1 a1 a2");
        assert_eq!(chars("xyx").spell(), "xyx");
    }

    #[test]
    fn reverse_is_involution() {
        let w = chars("xyyx");
        assert_eq!(w.reversed().reversed(), w);
        assert_eq!(chars("xy").reversed(), chars("yx"));
    }

    #[test]
    fn shortlex_uses_alphabet_order() {
        let a = Alphabet::from_names(&["y", "x"]).unwrap();
        assert!(a.shortlex_cmp(&chars("yx"), &chars("xy")).is_lt());
        assert!(a.shortlex_cmp(&chars("x"), &chars("yy")).is_lt());
    }
}
