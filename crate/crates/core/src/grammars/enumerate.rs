use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::symbol::{Symbol, Word};

use super::cfg::{Cfg, GSym};

/// Default bound on `maxlen · |terminals|` accepted by [`enumerate`].
pub const DEFAULT_ENUMERATION_GUARD: usize = 128;

/// Largest number of words any single nonterminal may accumulate.
const WORD_LIMIT: usize = 2_000_000;

static ENUMERATION_GUARD: AtomicUsize = AtomicUsize::new(DEFAULT_ENUMERATION_GUARD);

pub fn set_enumeration_guard(limit: usize) {
    ENUMERATION_GUARD.store(limit, Ordering::Relaxed);
}

/// All words of `L(g)` of length at most `maxlen`, computed bottom-up over
/// the strongly connected components of the nonterminal dependency graph.
pub fn enumerate(g: &Cfg, maxlen: usize) -> Result<BTreeSet<Word>> {
    let limit = ENUMERATION_GUARD.load(Ordering::Relaxed);
    let weight = maxlen.saturating_mul(g.terminals().len().max(1));
    if weight > limit {
        return Err(Error::Guard {
            stage: "enumerate".into(),
            what: "length·alphabet",
            count: weight,
            limit,
        });
    }
    let g = g.simplify();
    if !g.is_nonempty() {
        return Ok(BTreeSet::new());
    }
    let n = g.nonterminal_count();
    let by_lhs = g.productions_by_lhs();
    let succ: Vec<Vec<u32>> = (0..n)
        .map(|a| {
            let mut v: Vec<u32> = by_lhs[a]
                .iter()
                .flat_map(|&i| g.productions()[i].body.iter())
                .filter_map(|s| match s {
                    GSym::N(m) => Some(*m),
                    _ => None,
                })
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut langs: Vec<FxHashSet<Vec<Symbol>>> = vec![FxHashSet::default(); n];
    for comp in tarjan(&succ) {
        // components arrive callees first
        loop {
            let mut changed = false;
            for &a in &comp {
                for &i in &by_lhs[a as usize] {
                    let words = expand(&g.productions()[i].body, &langs, maxlen);
                    for w in words {
                        if langs[a as usize].insert(w) {
                            changed = true;
                        }
                    }
                    if langs[a as usize].len() > WORD_LIMIT {
                        return Err(Error::Guard {
                            stage: "enumerate".into(),
                            what: "word",
                            count: langs[a as usize].len(),
                            limit: WORD_LIMIT,
                        });
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
    Ok(langs[g.start() as usize]
        .iter()
        .map(|w| Word::new(w.clone()))
        .collect())
}

fn expand(body: &[GSym], langs: &[FxHashSet<Vec<Symbol>>], maxlen: usize) -> Vec<Vec<Symbol>> {
    let mut acc: Vec<Vec<Symbol>> = vec![Vec::new()];
    for s in body {
        let mut next = Vec::new();
        match s {
            GSym::T(a) => {
                for mut w in acc {
                    if w.len() < maxlen {
                        w.push(*a);
                        next.push(w);
                    }
                }
            }
            GSym::N(m) => {
                for w in &acc {
                    for v in &langs[*m as usize] {
                        if w.len() + v.len() <= maxlen {
                            let mut x = w.clone();
                            x.extend_from_slice(v);
                            next.push(x);
                        }
                    }
                }
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// Strongly connected components in reverse topological order.
pub(crate) fn tarjan(succ: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = succ.len();
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0u32;
    for root in 0..n {
        if index[root] != u32::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next] as usize;
                *next += 1;
                if index[w] == u32::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w as u32);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}
