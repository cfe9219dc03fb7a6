//! Plain-text formats for grammars, automata and transducers.
//!
//! Grammar:
//!
//! ```text
//! terminals: a b #
//! start: S
//! S -> a S a | b S b | #
//! ```
//!
//! Symbols are separated by whitespace, `1` is the empty body, and every
//! name that occurs on a left-hand side is a nonterminal. Automata list
//! `alphabet:`, `states:`, `initial:`, `accepting:` and one arc per line
//! (`p a q`, with `1` as ε label); transducer arcs read `p a / w q`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::symbol::{Symbol, Word, EMPTY_WORD};

use super::automata::{Fst, Nfa};
use super::cfg::{Cfg, GSym, Production};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with("//"))
}

fn symbols(line: usize, text: &str) -> Result<Vec<Symbol>> {
    text.split_whitespace()
        .map(|t| {
            if t == EMPTY_WORD {
                Err(Error::parse(line, "`1` cannot be declared as a symbol"))
            } else {
                Ok(Symbol::new(t))
            }
        })
        .collect()
}

/// Unique printable names for the nonterminals of `g`.
fn nonterminal_names(g: &Cfg) -> Vec<String> {
    let mut used: std::collections::HashSet<String> =
        g.terminals().iter().map(|t| t.name().to_string()).collect();
    used.insert(EMPTY_WORD.to_string());
    let mut out = Vec::with_capacity(g.nonterminal_count());
    for n in 0..g.nonterminal_count() as u32 {
        let base = g.names[n as usize]
            .clone()
            .filter(|s| !s.is_empty() && !s.contains(char::is_whitespace) && s != "|" && s != "->")
            .unwrap_or_else(|| format!("N{n}"));
        let mut name = base.clone();
        let mut k = 1;
        while used.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        used.insert(name.clone());
        out.push(name);
    }
    out
}

pub fn cfg_to_text(g: &Cfg) -> String {
    let names = nonterminal_names(g);
    let mut out = String::new();
    let terms: Vec<&str> = g.terminals().iter().map(|t| t.name()).collect();
    out.push_str(&format!("terminals: {}\n", terms.join(" ")));
    out.push_str(&format!("start: {}\n", names[g.start() as usize]));
    let by_lhs = g.productions_by_lhs();
    let mut order: Vec<u32> = vec![g.start()];
    order.extend((0..g.nonterminal_count() as u32).filter(|&n| n != g.start()));
    for a in order {
        let prods = &by_lhs[a as usize];
        if prods.is_empty() {
            continue;
        }
        let bodies: Vec<String> = prods
            .iter()
            .map(|&i| {
                let body = &g.productions()[i].body;
                if body.is_empty() {
                    EMPTY_WORD.to_string()
                } else {
                    body.iter()
                        .map(|s| match s {
                            GSym::T(t) => t.name().to_string(),
                            GSym::N(m) => names[*m as usize].clone(),
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            })
            .collect();
        out.push_str(&format!("{} -> {}\n", names[a as usize], bodies.join(" | ")));
    }
    out
}

pub fn parse_cfg(text: &str) -> Result<Cfg> {
    let mut terminals: Option<Vec<Symbol>> = None;
    let mut start: Option<(usize, String)> = None;
    let mut rules: Vec<(usize, String, String)> = Vec::new();
    for (line, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("terminals:") {
            terminals = Some(symbols(line, rest)?);
        } else if let Some(rest) = l.strip_prefix("start:") {
            start = Some((line, rest.trim().to_string()));
        } else if let Some((lhs, rhs)) = l.split_once("->") {
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(Error::parse(line, "malformed left-hand side"));
            }
            rules.push((line, lhs.to_string(), rhs.to_string()));
        } else {
            return Err(Error::parse(line, format!("unrecognised line `{l}`")));
        }
    }
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut names = Vec::new();
    for (_, lhs, _) in &rules {
        if !index.contains_key(lhs) {
            index.insert(lhs.clone(), names.len() as u32);
            names.push(Some(lhs.clone()));
        }
    }
    let declared = terminals.is_some();
    let mut terminals = terminals.unwrap_or_default();
    let mut productions = Vec::new();
    for (line, lhs, rhs) in &rules {
        for alt in rhs.split('|') {
            let toks: Vec<&str> = alt.split_whitespace().collect();
            if toks.is_empty() {
                return Err(Error::parse(*line, "empty alternative (write 1 for ε)"));
            }
            let mut body = Vec::new();
            if toks != [EMPTY_WORD] {
                for t in toks {
                    if let Some(&n) = index.get(t) {
                        body.push(GSym::N(n));
                    } else {
                        if t == EMPTY_WORD {
                            return Err(Error::parse(*line, "`1` must stand alone"));
                        }
                        let s = Symbol::new(t);
                        if !terminals.contains(&s) {
                            if declared {
                                return Err(Error::parse(
                                    *line,
                                    format!("undeclared terminal `{t}`"),
                                ));
                            }
                            terminals.push(s);
                        }
                        body.push(GSym::T(s));
                    }
                }
            }
            productions.push(Production {
                lhs: index[lhs],
                body,
            });
        }
    }
    let start = match start {
        Some((line, s)) => match index.get(&s) {
            Some(&n) => n,
            None if s.is_empty() || s.contains(char::is_whitespace) => {
                return Err(Error::parse(line, "malformed start symbol"))
            }
            // a start symbol without rules denotes the empty language
            None => {
                names.push(Some(s));
                (names.len() - 1) as u32
            }
        },
        None if !rules.is_empty() => 0,
        None => return Err(Error::parse(0, "grammar has no productions")),
    };
    let mut g = Cfg {
        terminals,
        names,
        start,
        productions,
    };
    g.dedup_productions();
    Ok(g)
}

struct Header {
    alphabet: Vec<Symbol>,
    states: usize,
    initial: Vec<usize>,
    accepting: Vec<usize>,
}

fn parse_states(line: usize, text: &str, states: usize) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            let p: usize = t
                .parse()
                .map_err(|_| Error::parse(line, format!("bad state `{t}`")))?;
            if p >= states {
                return Err(Error::parse(line, format!("state {p} out of range")));
            }
            Ok(p)
        })
        .collect()
}

fn parse_automaton_lines(
    text: &str,
) -> Result<(Header, Vec<(usize, Vec<String>)>)> {
    let mut alphabet = None;
    let mut states = None;
    let mut initial_text = None;
    let mut accepting_text = None;
    let mut arcs = Vec::new();
    for (line, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("alphabet:") {
            alphabet = Some(symbols(line, rest)?);
        } else if let Some(rest) = l.strip_prefix("states:") {
            states = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line, "bad state count"))?,
            );
        } else if let Some(rest) = l.strip_prefix("initial:") {
            initial_text = Some((line, rest.to_string()));
        } else if let Some(rest) = l.strip_prefix("accepting:") {
            accepting_text = Some((line, rest.to_string()));
        } else {
            arcs.push((line, l.split_whitespace().map(str::to_string).collect()));
        }
    }
    let states = states.ok_or_else(|| Error::parse(0, "missing `states:` line"))?;
    let (il, it) = initial_text.ok_or_else(|| Error::parse(0, "missing `initial:` line"))?;
    let initial = parse_states(il, &it, states)?;
    let accepting = match accepting_text {
        Some((al, at)) => parse_states(al, &at, states)?,
        None => Vec::new(),
    };
    Ok((
        Header {
            alphabet: alphabet.unwrap_or_default(),
            states,
            initial,
            accepting,
        },
        arcs,
    ))
}

fn label(line: usize, t: &str, alphabet: &[Symbol], declared: bool) -> Result<Option<Symbol>> {
    if t == EMPTY_WORD {
        return Ok(None);
    }
    let s = Symbol::new(t);
    if declared && !alphabet.contains(&s) {
        return Err(Error::parse(line, format!("undeclared symbol `{t}`")));
    }
    Ok(Some(s))
}

pub fn parse_nfa(text: &str) -> Result<Nfa> {
    let (h, arcs) = parse_automaton_lines(text)?;
    let declared = !h.alphabet.is_empty();
    let mut n = Nfa::new(&h.alphabet);
    for _ in 0..h.states {
        n.add_state(false);
    }
    for &p in &h.initial {
        n.set_initial(p);
    }
    for &p in &h.accepting {
        n.set_accepting(p, true);
    }
    for (line, toks) in arcs {
        if toks.len() != 3 {
            return Err(Error::parse(line, "arc lines read `from symbol to`"));
        }
        let p = parse_states(line, &toks[0], h.states)?[0];
        let q = parse_states(line, &toks[2], h.states)?[0];
        n.add_arc(p, label(line, &toks[1], &h.alphabet, declared)?, q);
    }
    Ok(n)
}

fn state_list(states: impl Iterator<Item = usize>) -> String {
    states.map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn nfa_to_text(n: &Nfa) -> String {
    let mut out = String::new();
    let alpha: Vec<&str> = n.alphabet().iter().map(|a| a.name()).collect();
    out.push_str(&format!("alphabet: {}\n", alpha.join(" ")));
    out.push_str(&format!("states: {}\n", n.num_states()));
    out.push_str(&format!("initial: {}\n", state_list(n.initial().iter().copied())));
    out.push_str(&format!(
        "accepting: {}\n",
        state_list((0..n.num_states()).filter(|&p| n.is_accepting(p)))
    ));
    for p in 0..n.num_states() {
        for &(l, q) in n.arcs(p) {
            let l = l.map(|a| a.name()).unwrap_or(EMPTY_WORD);
            out.push_str(&format!("{p} {l} {q}\n"));
        }
    }
    out
}

pub fn parse_fst(text: &str) -> Result<Fst> {
    let (h, arcs) = parse_automaton_lines(text)?;
    let mut t = Fst::new(&h.alphabet, &[]);
    for p in 0..h.states {
        t.add_state(h.accepting.contains(&p));
    }
    for &p in &h.initial {
        t.set_initial(p);
    }
    for (line, toks) in arcs {
        if toks.len() < 5 || toks[2] != "/" {
            return Err(Error::parse(line, "transducer arcs read `from in / out.. to`"));
        }
        let p = parse_states(line, &toks[0], h.states)?[0];
        let q = parse_states(line, toks.last().expect("nonempty"), h.states)?[0];
        let input = label(line, &toks[1], &h.alphabet, false)?;
        let out_toks = &toks[3..toks.len() - 1];
        let output = if out_toks == [EMPTY_WORD] {
            Word::empty()
        } else {
            Word::new(out_toks.iter().map(|s| Symbol::new(s)).collect())
        };
        t.add_arc(p, input, output, q);
    }
    Ok(t)
}
