use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::symbol::{Symbol, Word};

/// Default bound on the number of productions any construction may produce.
pub const DEFAULT_PRODUCTION_GUARD: usize = 200_000;

static PRODUCTION_GUARD: AtomicUsize = AtomicUsize::new(DEFAULT_PRODUCTION_GUARD);

/// Sets the process-wide production guard used by every closure operation.
pub fn set_production_guard(limit: usize) {
    PRODUCTION_GUARD.store(limit, Ordering::Relaxed);
}

pub fn production_guard() -> usize {
    PRODUCTION_GUARD.load(Ordering::Relaxed)
}

pub(crate) fn check_guard(count: usize, stage: &str) -> Result<()> {
    let limit = production_guard();
    if count > limit {
        return Err(Error::Guard {
            stage: stage.to_string(),
            what: "production",
            count,
            limit,
        });
    }
    Ok(())
}

/// A grammar symbol: a terminal or the index of a nonterminal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GSym {
    T(Symbol),
    N(u32),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Production {
    pub lhs: u32,
    pub body: Vec<GSym>,
}

/// A context-free grammar over a declared terminal alphabet.
#[derive(Clone)]
pub struct Cfg {
    pub(crate) terminals: Vec<Symbol>,
    pub(crate) names: Vec<Option<String>>,
    pub(crate) start: u32,
    pub(crate) productions: Vec<Production>,
}

impl Cfg {
    /// A grammar with a single nonterminal and no productions (`L = ∅`).
    pub fn empty_language(terminals: &[Symbol]) -> Cfg {
        Cfg {
            terminals: dedup(terminals.iter().copied()),
            names: vec![Some("S".into())],
            start: 0,
            productions: Vec::new(),
        }
    }

    /// Grammar of a finite language.
    pub fn from_words<'a>(terminals: &[Symbol], words: impl IntoIterator<Item = &'a Word>) -> Cfg {
        let mut g = Cfg::empty_language(terminals);
        for w in words {
            for &s in w.symbols() {
                if !g.terminals.contains(&s) {
                    g.terminals.push(s);
                }
            }
            g.productions.push(Production {
                lhs: 0,
                body: w.symbols().iter().map(|&s| GSym::T(s)).collect(),
            });
        }
        g.dedup_productions();
        g
    }

    pub fn builder(terminals: &[Symbol]) -> CfgBuilder {
        CfgBuilder {
            terminals: dedup(terminals.iter().copied()),
            names: Vec::new(),
            by_name: HashMap::new(),
            productions: Vec::new(),
        }
    }

    pub fn terminals(&self) -> &[Symbol] {
        &self.terminals
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production_count(&self) -> usize {
        self.productions.len()
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    /// Total number of body symbols plus productions; a size measure.
    pub fn size(&self) -> usize {
        self.productions.iter().map(|p| p.body.len() + 1).sum()
    }

    pub fn nonterminal_name(&self, n: u32) -> String {
        self.names[n as usize]
            .clone()
            .unwrap_or_else(|| format!("N{n}"))
    }

    /// Extends the declared terminal alphabet.
    pub fn with_terminals(mut self, extra: &[Symbol]) -> Cfg {
        for &s in extra {
            if !self.terminals.contains(&s) {
                self.terminals.push(s);
            }
        }
        self
    }

    pub(crate) fn add_nonterminal(&mut self, name: Option<String>) -> u32 {
        self.names.push(name);
        (self.names.len() - 1) as u32
    }

    /// Appends the nonterminals and productions of `other`, returning the
    /// offset applied to its nonterminal indices.
    pub(crate) fn absorb(&mut self, other: &Cfg) -> u32 {
        let offset = self.names.len() as u32;
        self.names.extend(other.names.iter().cloned());
        for &t in &other.terminals {
            if !self.terminals.contains(&t) {
                self.terminals.push(t);
            }
        }
        for p in &other.productions {
            self.productions.push(Production {
                lhs: p.lhs + offset,
                body: p
                    .body
                    .iter()
                    .map(|s| match *s {
                        GSym::N(n) => GSym::N(n + offset),
                        t => t,
                    })
                    .collect(),
            });
        }
        offset
    }

    pub(crate) fn dedup_productions(&mut self) {
        let mut seen = FxHashSet::default();
        self.productions.retain(|p| seen.insert(p.clone()));
    }

    /// Nonterminals that derive the empty word.
    pub fn nullable(&self) -> Vec<bool> {
        let n = self.names.len();
        let mut nullable = vec![false; n];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if !nullable[p.lhs as usize]
                    && p.body.iter().all(|s| matches!(s, GSym::N(m) if nullable[*m as usize]))
                {
                    nullable[p.lhs as usize] = true;
                    changed = true;
                }
            }
        }
        nullable
    }

    pub fn accepts_empty(&self) -> bool {
        self.nullable()[self.start as usize]
    }

    /// Nonterminals deriving at least one terminal word.
    pub fn productive(&self) -> Vec<bool> {
        let n = self.names.len();
        let mut productive = vec![false; n];
        let mut missing: Vec<usize> = Vec::with_capacity(self.productions.len());
        let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut queue = Vec::new();
        for (i, p) in self.productions.iter().enumerate() {
            let mut count = 0;
            for s in &p.body {
                if let GSym::N(m) = s {
                    occurs[*m as usize].push(i);
                    count += 1;
                }
            }
            missing.push(count);
            if count == 0 && !productive[p.lhs as usize] {
                productive[p.lhs as usize] = true;
                queue.push(p.lhs as usize);
            }
        }
        while let Some(a) = queue.pop() {
            for &i in &occurs[a] {
                missing[i] -= 1;
                if missing[i] == 0 {
                    let l = self.productions[i].lhs as usize;
                    if !productive[l] {
                        productive[l] = true;
                        queue.push(l);
                    }
                }
            }
        }
        productive
    }

    /// `L(g) ≠ ∅`.
    pub fn is_nonempty(&self) -> bool {
        self.productive()[self.start as usize]
    }

    /// Removes unproductive and unreachable nonterminals, duplicate
    /// productions, and inlines nonterminals with a single production of
    /// length at most one.
    pub fn simplify(&self) -> Cfg {
        let productive = self.productive();
        if !productive[self.start as usize] {
            let mut g = Cfg::empty_language(&self.terminals);
            g.names[0] = self.names[self.start as usize].clone();
            return g;
        }
        let useful_prod = |p: &Production| {
            productive[p.lhs as usize]
                && p.body
                    .iter()
                    .all(|s| !matches!(s, GSym::N(m) if !productive[*m as usize]))
        };
        let mut by_lhs: Vec<Vec<usize>> = vec![Vec::new(); self.names.len()];
        for (i, p) in self.productions.iter().enumerate() {
            if useful_prod(p) {
                by_lhs[p.lhs as usize].push(i);
            }
        }
        // single short productions get inlined
        let mut inline: Vec<Option<Vec<GSym>>> = vec![None; self.names.len()];
        for (a, prods) in by_lhs.iter().enumerate() {
            if a as u32 != self.start && prods.len() == 1 {
                let body = &self.productions[prods[0]].body;
                if body.len() <= 1 && body.first() != Some(&GSym::N(a as u32)) {
                    inline[a] = Some(body.clone());
                }
            }
        }
        let resolve = |s: GSym| -> Vec<GSym> {
            let mut cur = s;
            let mut steps = 0;
            loop {
                match cur {
                    GSym::N(m) => match &inline[m as usize] {
                        Some(b) if steps < inline.len() => {
                            if b.is_empty() {
                                return Vec::new();
                            }
                            cur = b[0];
                            steps += 1;
                        }
                        _ => return vec![cur],
                    },
                    t => return vec![t],
                }
            }
        };
        let mut start = self.start;
        if by_lhs[start as usize].len() == 1 {
            if let [GSym::N(m)] = self.productions[by_lhs[start as usize][0]].body[..] {
                if m != start {
                    if let [GSym::N(r)] = resolve(GSym::N(m))[..] {
                        start = r;
                    }
                }
            }
        }
        // reachability over the rewritten bodies
        let rewrite = |body: &[GSym]| -> Vec<GSym> {
            body.iter().flat_map(|&s| resolve(s)).collect()
        };
        let mut reachable = vec![false; self.names.len()];
        reachable[start as usize] = true;
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for &i in &by_lhs[a as usize] {
                for s in rewrite(&self.productions[i].body) {
                    if let GSym::N(m) = s {
                        if !reachable[m as usize] {
                            reachable[m as usize] = true;
                            stack.push(m);
                        }
                    }
                }
            }
        }
        let mut renum = vec![u32::MAX; self.names.len()];
        let mut names = Vec::new();
        for a in 0..self.names.len() {
            if reachable[a] && (inline[a].is_none() || a as u32 == start) {
                renum[a] = names.len() as u32;
                names.push(self.names[a].clone());
            }
        }
        let mut productions = Vec::new();
        let mut seen = FxHashSet::default();
        for a in 0..self.names.len() {
            if renum[a] == u32::MAX {
                continue;
            }
            for &i in &by_lhs[a] {
                let body: Vec<GSym> = rewrite(&self.productions[i].body)
                    .into_iter()
                    .map(|s| match s {
                        GSym::N(m) => GSym::N(renum[m as usize]),
                        t => t,
                    })
                    .collect();
                if body == [GSym::N(renum[a])] {
                    continue;
                }
                let p = Production {
                    lhs: renum[a],
                    body,
                };
                if seen.insert(p.clone()) {
                    productions.push(p);
                }
            }
        }
        Cfg {
            terminals: self.terminals.clone(),
            names,
            start: renum[start as usize],
            productions,
        }
    }

    /// `simplify` followed by the production guard.
    pub fn checked(&self, stage: &str) -> Result<Cfg> {
        check_guard(self.productions.len(), stage)?;
        let g = self.simplify();
        check_guard(g.productions.len(), stage)?;
        Ok(g)
    }

    /// Bodies of length at most two; fresh nonterminals chain long bodies.
    pub fn binarized(&self) -> Cfg {
        let mut g = Cfg {
            terminals: self.terminals.clone(),
            names: self.names.clone(),
            start: self.start,
            productions: Vec::with_capacity(self.productions.len()),
        };
        for p in &self.productions {
            if p.body.len() <= 2 {
                g.productions.push(p.clone());
                continue;
            }
            let mut lhs = p.lhs;
            let k = p.body.len();
            for i in 0..k - 2 {
                let next = g.add_nonterminal(None);
                g.productions.push(Production {
                    lhs,
                    body: vec![p.body[i], GSym::N(next)],
                });
                lhs = next;
            }
            g.productions.push(Production {
                lhs,
                body: vec![p.body[k - 2], p.body[k - 1]],
            });
        }
        g
    }

    /// Grammar of the reversed language.
    pub fn reverse(&self) -> Cfg {
        let mut g = self.clone();
        for p in &mut g.productions {
            p.body.reverse();
        }
        g
    }

    /// Substitutes every terminal `a` by the word `h(a)`. Terminals missing
    /// from `h` are an error.
    pub fn hom_image(&self, h: &HashMap<Symbol, Word>) -> Result<Cfg> {
        let mut terminals = Vec::new();
        for t in &self.terminals {
            let img = h
                .get(t)
                .ok_or_else(|| Error::invalid(format!("homomorphism undefined on {t}")))?;
            terminals.extend(img.symbols().iter().copied());
        }
        let productions = self
            .productions
            .iter()
            .map(|p| Production {
                lhs: p.lhs,
                body: p
                    .body
                    .iter()
                    .flat_map(|s| match *s {
                        GSym::T(t) => h[&t].symbols().iter().map(|&x| GSym::T(x)).collect(),
                        n => vec![n],
                    })
                    .collect(),
            })
            .collect();
        Ok(Cfg {
            terminals: dedup(terminals),
            names: self.names.clone(),
            start: self.start,
            productions,
        }
        .simplify())
    }

    /// Renames terminals; symbols not in `map` are kept.
    pub fn rename_terminals(&self, map: &HashMap<Symbol, Symbol>) -> Cfg {
        let h: HashMap<Symbol, Word> = self
            .terminals
            .iter()
            .map(|&t| (t, Word::letter(*map.get(&t).unwrap_or(&t))))
            .collect();
        self.hom_image(&h).expect("total renaming")
    }

    pub(crate) fn productions_by_lhs(&self) -> Vec<Vec<usize>> {
        let mut by = vec![Vec::new(); self.names.len()];
        for (i, p) in self.productions.iter().enumerate() {
            by[p.lhs as usize].push(i);
        }
        by
    }
}

impl fmt::Debug for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::cfg_to_text(self))
    }
}

pub(crate) fn dedup(it: impl IntoIterator<Item = Symbol>) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    for s in it {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Incremental construction of a grammar with named nonterminals.
pub struct CfgBuilder {
    terminals: Vec<Symbol>,
    names: Vec<Option<String>>,
    by_name: HashMap<String, u32>,
    productions: Vec<Production>,
}

impl CfgBuilder {
    /// The nonterminal called `name`, created on first use.
    pub fn nt(&mut self, name: &str) -> u32 {
        if let Some(&n) = self.by_name.get(name) {
            return n;
        }
        let n = self.names.len() as u32;
        self.names.push(Some(name.to_string()));
        self.by_name.insert(name.to_string(), n);
        n
    }

    pub fn fresh(&mut self) -> u32 {
        self.names.push(None);
        (self.names.len() - 1) as u32
    }

    pub fn add(&mut self, lhs: u32, body: Vec<GSym>) -> &mut Self {
        for s in &body {
            if let GSym::T(t) = s {
                if !self.terminals.contains(t) {
                    self.terminals.push(*t);
                }
            }
        }
        self.productions.push(Production { lhs, body });
        self
    }

    pub fn build(self, start: u32) -> Cfg {
        let mut g = Cfg {
            terminals: self.terminals,
            names: self.names,
            start,
            productions: self.productions,
        };
        if g.names.is_empty() {
            g.names.push(Some("S".into()));
        }
        g.dedup_productions();
        g
    }
}
