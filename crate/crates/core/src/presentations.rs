//! Monoid presentations, their structural classification and the text format.
//!
//! ```text
//! # comment
//! gens: x y
//! rel: xyyxxxyxxyyxxxy = xy
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rewriting::{complete_bounded, RewriteSystem};
use crate::symbol::{Alphabet, Symbol, Word};

/// A finitely presented monoid `Mon⟨A | u_i = v_i⟩`.
#[derive(Clone, PartialEq, Eq)]
pub struct MonoidPresentation {
    alphabet: Alphabet,
    relations: Vec<(Word, Word)>,
}

impl MonoidPresentation {
    pub fn new(alphabet: Alphabet, relations: Vec<(Word, Word)>) -> Result<Self> {
        for (u, v) in &relations {
            if !alphabet.contains_word(u) || !alphabet.contains_word(v) {
                return Err(Error::invalid(format!(
                    "relation {u} = {v} is not over the generators"
                )));
            }
        }
        Ok(MonoidPresentation {
            alphabet,
            relations,
        })
    }

    /// Convenience constructor for single-character generators,
    /// e.g. `from_strs("xy", &[("xyxy", "xy")])`.
    pub fn from_strs(gens: &str, rels: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = gens.chars().map(|c| c.to_string()).collect();
        let alphabet = Alphabet::new(names.iter().map(|n| Symbol::new(n)).collect())?;
        let relations = rels
            .iter()
            .map(|(u, v)| Ok((alphabet.parse_word(u)?, alphabet.parse_word(v)?)))
            .collect::<Result<Vec<_>>>()?;
        MonoidPresentation::new(alphabet, relations)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }

    /// Relations oriented so that the first side is at least as long.
    pub fn oriented(&self) -> Vec<(Word, Word)> {
        self.relations
            .iter()
            .map(|(u, v)| {
                if u.len() >= v.len() {
                    (u.clone(), v.clone())
                } else {
                    (v.clone(), u.clone())
                }
            })
            .collect()
    }

    /// Sum of the lengths of all relation sides.
    pub fn total_length(&self) -> usize {
        self.relations.iter().map(|(u, v)| u.len() + v.len()).sum()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet.parse_word(text)
    }

    /// The relations read as a rewriting system, each oriented longer side
    /// first (shortlex for equal lengths).
    pub fn rewrite_system(&self) -> RewriteSystem {
        let rules = self
            .relations
            .iter()
            .map(|(u, v)| {
                if self.alphabet.shortlex_cmp(u, v).is_ge() {
                    (u.clone(), v.clone())
                } else {
                    (v.clone(), u.clone())
                }
            })
            .collect();
        RewriteSystem::finite(self.alphabet.clone(), rules)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut gens: Option<Alphabet> = None;
        let mut rels: Vec<(usize, String, String)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, "expected `gens:` or `rel:`"))?;
            match key.trim() {
                "gens" => {
                    if gens.is_some() {
                        return Err(Error::parse(lineno, "duplicate `gens:` line"));
                    }
                    let syms: Vec<Symbol> = rest.split_whitespace().map(Symbol::new).collect();
                    if syms.is_empty() {
                        return Err(Error::parse(lineno, "no generators"));
                    }
                    gens = Some(Alphabet::new(syms).map_err(|e| Error::parse(lineno, e))?);
                }
                "rel" => {
                    let (u, v) = rest
                        .split_once('=')
                        .ok_or_else(|| Error::parse(lineno, "relation needs `=`"))?;
                    rels.push((lineno, u.trim().to_string(), v.trim().to_string()));
                }
                other => return Err(Error::parse(lineno, format!("unknown key {other:?}"))),
            }
        }
        let alphabet = gens.ok_or_else(|| Error::parse(0, "missing `gens:` line"))?;
        let mut relations = Vec::with_capacity(rels.len());
        for (lineno, u, v) in rels {
            let u = alphabet.parse_word(&u).map_err(|e| Error::parse(lineno, e))?;
            let v = alphabet.parse_word(&v).map_err(|e| Error::parse(lineno, e))?;
            relations.push((u, v));
        }
        MonoidPresentation::new(alphabet, relations)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("gens:");
        for s in self.alphabet.letters() {
            out.push(' ');
            out.push_str(s.name());
        }
        out.push('\n');
        for (u, v) in &self.relations {
            out.push_str(&format!("rel: {} = {}\n", u.spell(), v.spell()));
        }
        out
    }
}

impl fmt::Debug for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.alphabet.letters().iter().map(|s| s.name()).collect();
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(u, v)| format!("{} = {}", u.spell(), v.spell()))
            .collect();
        write!(f, "Mon<{} | {}>", gens.join(", "), rels.join(", "))
    }
}

/// True iff `w` is empty or no proper non-empty prefix of `w` is also a suffix.
pub fn is_self_overlap_free(w: &Word) -> bool {
    let s = w.symbols();
    (1..s.len()).all(|k| s[..k] != s[s.len() - k..])
}

/// True iff both `u` and `v` begin and end with the non-empty word `w`.
pub fn is_sealed_by(u: &Word, v: &Word, w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::invalid("sealing word must be non-empty"));
    }
    Ok([u, v].iter().all(|x| x.starts_with(w) && x.ends_with(w)))
}

/// The self-overlap-free word sealing every relation, if there is one.
pub fn find_sealing_word(p: &MonoidPresentation) -> Option<Word> {
    let shortest = p
        .relations()
        .iter()
        .flat_map(|(u, v)| [u, v])
        .min_by_key(|w| w.len())?;
    (1..=shortest.len())
        .map(|k| shortest.slice(0, k))
        .filter(is_self_overlap_free)
        .find(|alpha| {
            p.relations()
                .iter()
                .all(|(u, v)| is_sealed_by(u, v, alpha).unwrap_or(false))
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub special: bool,
    pub subspecial: bool,
    pub weakly_compressible: bool,
    pub incompressible: bool,
    pub sealing_word: Option<Word>,
}

pub fn classify(p: &MonoidPresentation) -> Classification {
    let oriented = p.oriented();
    let special = oriented.iter().all(|(_, v)| v.is_empty());
    let subspecial = oriented.len() == 1 && {
        let (u, v) = &oriented[0];
        u.starts_with(v) && u.ends_with(v)
    };
    let sealing_word = find_sealing_word(p);
    Classification {
        special,
        subspecial,
        weakly_compressible: sealing_word.is_some(),
        incompressible: sealing_word.is_none(),
        sealing_word,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Idempotent {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Idempotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Idempotent::Yes => "yes",
            Idempotent::No => "no",
            Idempotent::Unknown => "unknown",
        })
    }
}

/// Default word-length bound of the right-cancellativity probe.
pub const IDEMPOTENT_PROBE_BOUND: usize = 8;

/// Decides whether a one-relation monoid has a non-trivial idempotent.
///
/// The subspecial non-special case is decided exactly. For a special relation
/// `u = 1` the answer is `yes` only when a bounded search (words up to
/// `probe_bound`, equality through a completed rewriting system) exhibits a
/// failure of right cancellativity; otherwise `unknown`.
pub fn has_nontrivial_idempotent(p: &MonoidPresentation, probe_bound: usize) -> Result<Idempotent> {
    if p.relations().len() != 1 {
        return Err(Error::invalid(
            "the idempotent criterion needs exactly one relation",
        ));
    }
    let (u, v) = p.oriented().remove(0);
    if u == v {
        return Ok(Idempotent::No);
    }
    if !v.is_empty() {
        let subspecial = u.starts_with(&v) && u.ends_with(&v);
        return Ok(if subspecial { Idempotent::Yes } else { Idempotent::No });
    }
    Ok(match right_cancellativity_witness(p, probe_bound) {
        Some(_) => Idempotent::Yes,
        None => Idempotent::Unknown,
    })
}

/// Searches for `x ≠ y` with `xz = yz` for a letter `z`, using normal forms of
/// a completed system. Returns `(x, y, z)`.
pub fn right_cancellativity_witness(
    p: &MonoidPresentation,
    bound: usize,
) -> Option<(Word, Word, Symbol)> {
    const MAX_WORDS: usize = 200_000;
    let complete = complete_bounded(&p.rewrite_system(), 64)?;
    let mut len = bound;
    while len > 0 && p.alphabet().len().checked_pow(len as u32).is_none_or(|n| n > MAX_WORDS) {
        len -= 1;
    }
    let words = p.alphabet().words_up_to(len);
    let mut seen: std::collections::HashMap<Word, Word> = std::collections::HashMap::new();
    let mut normal: Vec<Word> = words.iter().map(|w| complete.normal_form(w)).collect();
    normal.sort();
    normal.dedup();
    for &z in p.alphabet().letters() {
        seen.clear();
        for x in &normal {
            let mut xz = x.clone();
            xz.push(z);
            let nf = complete.normal_form(&xz);
            match seen.get(&nf) {
                Some(y) if y != x => return Some((y.clone(), x.clone(), z)),
                Some(_) => {}
                None => {
                    seen.insert(nf, x.clone());
                }
            }
        }
    }
    None
}
