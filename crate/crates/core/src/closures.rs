//! Ancestor closures of context-free languages under monadic rewriting,
//! alternating products and bipartisan ancestors.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::grammars::{
    apply_fst, concat, enumerate, intersect_regular, wp_free_monoid_grammar, Cfg, Fst,
    GSym, Nfa, Production,
};
use crate::presentations::is_self_overlap_free;
use crate::rewriting::{check_confluence_lengthreducing, Confluence, RewriteSystem, Rules};
use crate::symbol::{Symbol, Word};

/// A monadic rewriting system given by one left-hand-side language per
/// target; `None` is the empty target.
#[derive(Clone, Debug)]
pub struct MonadicCfSystem {
    alphabet: Vec<Symbol>,
    lhs: BTreeMap<Option<Symbol>, Cfg>,
}

impl MonadicCfSystem {
    pub fn new(alphabet: &[Symbol]) -> MonadicCfSystem {
        MonadicCfSystem {
            alphabet: alphabet.to_vec(),
            lhs: BTreeMap::new(),
        }
    }

    /// Adds the rules `(u, target)` for `u ∈ L(lhs)`.
    pub fn add(&mut self, target: Option<Symbol>, lhs: Cfg) -> Result<()> {
        if target.is_some() && lhs.accepts_empty() {
            return Err(Error::invalid(format!(
                "rule (1, {}) would increase length",
                target.map(|t| t.name()).unwrap_or("1")
            )));
        }
        for &t in lhs.terminals().iter().chain(target.iter()) {
            if !self.alphabet.contains(&t) {
                self.alphabet.push(t);
            }
        }
        let merged = match self.lhs.remove(&target) {
            Some(old) => crate::grammars::union(&old, &lhs),
            None => lhs.simplify(),
        };
        self.lhs.insert(target, merged);
        Ok(())
    }

    pub fn from_rewrite_system(r: &RewriteSystem) -> Result<MonadicCfSystem> {
        if !r.is_monadic() {
            return Err(Error::invalid("rewriting system is not monadic"));
        }
        let mut s = MonadicCfSystem::new(r.alphabet().letters());
        match r.rules() {
            Rules::Finite(rules) => {
                let mut by_target: BTreeMap<Option<Symbol>, Vec<&Word>> = BTreeMap::new();
                for (l, rhs) in rules {
                    by_target
                        .entry(rhs.symbols().first().copied())
                        .or_default()
                        .push(l);
                }
                for (t, ls) in by_target {
                    s.add(t, Cfg::from_words(r.alphabet().letters(), ls))?;
                }
            }
            Rules::Grammar(rules) => {
                for rule in rules {
                    s.add(rule.rhs.symbols().first().copied(), rule.lhs.clone())?;
                }
            }
        }
        Ok(s)
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn lhs(&self, target: Option<Symbol>) -> Option<&Cfg> {
        self.lhs.get(&target)
    }

    pub fn is_empty(&self) -> bool {
        self.lhs.values().all(|g| !g.is_nonempty())
    }

    fn rename(&self, map: &HashMap<Symbol, Symbol>) -> MonadicCfSystem {
        let f = |a: Symbol| *map.get(&a).unwrap_or(&a);
        MonadicCfSystem {
            alphabet: self.alphabet.iter().map(|&a| f(a)).collect(),
            lhs: self
                .lhs
                .iter()
                .map(|(t, g)| (t.map(f), g.rename_terminals(map)))
                .collect(),
        }
    }
}

/// Rules `(w·α, α)` for `w ∈ L(lhs_core)`, or their mirror images
/// `(α^rev·w^rev, α^rev)` when `reversed` is set.
#[derive(Clone, Debug)]
pub struct AlphaMonadicSystem {
    alpha: Word,
    lhs_core: Cfg,
    reversed: bool,
}

impl AlphaMonadicSystem {
    /// Every `w ∈ L(lhs_core)` must be non-empty and begin with `α`, so that
    /// the occurrences of `α` in `w·α` are exactly those of its pieces.
    pub fn new(alpha: Word, lhs_core: Cfg) -> Result<AlphaMonadicSystem> {
        if alpha.is_empty() || !is_self_overlap_free(&alpha) {
            return Err(Error::invalid(format!("{alpha} is not self-overlap free")));
        }
        let lhs_core = lhs_core.simplify();
        if lhs_core.accepts_empty() {
            return Err(Error::invalid("left-hand-side core contains the empty word"));
        }
        let mut alphabet = lhs_core.terminals().to_vec();
        for &a in alpha.symbols() {
            if !alphabet.contains(&a) {
                alphabet.push(a);
            }
        }
        let bad = Nfa::word(&alphabet, &alpha)
            .concat(&Nfa::universal(&alphabet))
            .complement()?;
        if intersect_regular(&lhs_core, &bad)?.is_nonempty() {
            return Err(Error::invalid(format!(
                "left-hand-side core has words not starting with {alpha}"
            )));
        }
        Ok(AlphaMonadicSystem {
            alpha,
            lhs_core,
            reversed: false,
        })
    }

    pub fn alpha(&self) -> &Word {
        &self.alpha
    }

    pub fn lhs_core(&self) -> &Cfg {
        &self.lhs_core
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// The mirror system `{((wα)^rev, α^rev)}`.
    pub fn mirrored(&self) -> AlphaMonadicSystem {
        AlphaMonadicSystem {
            reversed: !self.reversed,
            ..self.clone()
        }
    }

    /// The word every rule rewrites to.
    pub fn target(&self) -> Word {
        if self.reversed {
            self.alpha.reversed()
        } else {
            self.alpha.clone()
        }
    }

    /// Grammar of all left-hand sides.
    pub fn lhs_grammar(&self) -> Cfg {
        let a = Cfg::from_words(&[], [&self.alpha]);
        let g = concat(&self.lhs_core, &a);
        if self.reversed {
            g.reverse()
        } else {
            g
        }
    }

    fn rename(&self, map: &HashMap<Symbol, Symbol>) -> AlphaMonadicSystem {
        AlphaMonadicSystem {
            alpha: self
                .alpha
                .symbols()
                .iter()
                .map(|a| *map.get(a).unwrap_or(a))
                .collect(),
            lhs_core: self.lhs_core.rename_terminals(map),
            reversed: self.reversed,
        }
    }
}

/// Either kind of one-sided system accepted by [`bipartisan_ancestors`].
#[derive(Clone, Debug)]
pub enum AncestorSystem {
    Monadic(MonadicCfSystem),
    Alpha(AlphaMonadicSystem),
}

impl From<MonadicCfSystem> for AncestorSystem {
    fn from(s: MonadicCfSystem) -> Self {
        AncestorSystem::Monadic(s)
    }
}

impl From<AlphaMonadicSystem> for AncestorSystem {
    fn from(s: AlphaMonadicSystem) -> Self {
        AncestorSystem::Alpha(s)
    }
}

impl AncestorSystem {
    pub fn ancestors(&self, g: &Cfg) -> Result<Cfg> {
        match self {
            AncestorSystem::Monadic(s) => monadic_ancestors(g, s),
            AncestorSystem::Alpha(s) => alpha_monadic_ancestors(g, s),
        }
    }

    fn letters(&self) -> Vec<Symbol> {
        match self {
            AncestorSystem::Monadic(s) => s.alphabet.clone(),
            AncestorSystem::Alpha(s) => {
                let mut v = s.lhs_core.terminals().to_vec();
                v.extend(s.alpha.symbols().iter().copied());
                v
            }
        }
    }

    fn rename(&self, map: &HashMap<Symbol, Symbol>) -> AncestorSystem {
        match self {
            AncestorSystem::Monadic(s) => AncestorSystem::Monadic(s.rename(map)),
            AncestorSystem::Alpha(s) => AncestorSystem::Alpha(s.rename(map)),
        }
    }
}

/// Grammar of `⟨L(g)⟩_R`, the words that rewrite into `L(g)`.
///
/// Every letter `b` becomes a nonterminal `X_b → b | lift(U_b)`, where the
/// lifted grammar of `U_b` uses `X_c` in place of each terminal `c`. Erasing
/// rules are undone by an insertion nonterminal `E → 1 | lift(U_ε) E` placed
/// on both sides of every terminal and around the start symbol.
pub fn monadic_ancestors(g: &Cfg, r: &MonadicCfSystem) -> Result<Cfg> {
    let mut letters: Vec<Symbol> = g.terminals().to_vec();
    for &a in &r.alphabet {
        if !letters.contains(&a) {
            letters.push(a);
        }
    }
    let mut out = Cfg::empty_language(&letters);
    out.names[0] = Some("S".into());
    let x: HashMap<Symbol, u32> = letters
        .iter()
        .map(|&a| (a, out.add_nonterminal(Some(format!("X_{}", a.name())))))
        .collect();
    let inserting = r.lhs.get(&None).filter(|u| u.is_nonempty()).cloned();
    let e = inserting
        .as_ref()
        .map(|_| out.add_nonterminal(Some("E".into())));

    let lift = |out: &mut Cfg, u: &Cfg| -> u32 {
        let off = out.absorb(u);
        for p in out.productions.iter_mut() {
            if p.lhs >= off {
                for s in p.body.iter_mut() {
                    if let GSym::T(t) = *s {
                        *s = GSym::N(x[&t]);
                    }
                }
            }
        }
        u.start() + off
    };

    for &a in &letters {
        let body = match e {
            Some(e) => vec![GSym::N(e), GSym::T(a), GSym::N(e)],
            None => vec![GSym::T(a)],
        };
        out.productions.push(Production { lhs: x[&a], body });
        if let Some(u) = r.lhs.get(&Some(a)) {
            if u.is_nonempty() {
                let s = lift(&mut out, u);
                out.productions.push(Production {
                    lhs: x[&a],
                    body: vec![GSym::N(s)],
                });
            }
        }
    }
    if let (Some(e), Some(u)) = (e, inserting.as_ref()) {
        let s = lift(&mut out, u);
        out.productions.push(Production { lhs: e, body: vec![] });
        out.productions.push(Production {
            lhs: e,
            body: vec![GSym::N(s), GSym::N(e)],
        });
    }
    let s = lift(&mut out, g);
    let body = match e {
        Some(e) => vec![GSym::N(e), GSym::N(s), GSym::N(e)],
        None => vec![GSym::N(s)],
    };
    out.productions.push(Production { lhs: 0, body });
    out.checked("monadic ancestors")
}

/// Grammar of `⟨L(g)⟩_I` for a system of rules `(wα, α)`.
///
/// Words are first written over `A ∪ {◊}` with every occurrence of `α`
/// replaced by `◊` (unique because `α` is self-overlap free); in that
/// encoding the rules become monadic with target `◊`, and the result is
/// decoded by `◊ ↦ α`.
pub fn alpha_monadic_ancestors(g: &Cfg, s: &AlphaMonadicSystem) -> Result<Cfg> {
    let target = s.target();
    let lhs = s.lhs_grammar();
    let mut letters: Vec<Symbol> = g.terminals().to_vec();
    for &a in lhs.terminals().iter().chain(target.symbols()) {
        if !letters.contains(&a) {
            letters.push(a);
        }
    }
    if letters.contains(&Symbol::DIAMOND) {
        return Err(Error::invalid("◊ is reserved"));
    }
    let diamond = Symbol::DIAMOND;
    let mut with_d = letters.clone();
    with_d.push(diamond);
    let mut sigma: HashMap<Symbol, Word> = letters.iter().map(|&a| (a, Word::letter(a))).collect();
    sigma.insert(diamond, target.clone());
    let encode = Fst::inverse_hom(&sigma);
    let alpha_free = Nfa::avoiding_factor(&with_d, &target)?;
    let encode_lang = |c: &Cfg| -> Result<Cfg> {
        let inv = apply_fst(&c.clone().with_terminals(&letters), &encode)?;
        intersect_regular(&inv, &alpha_free)
    };
    let g_d = encode_lang(g).map_err(|e| e.in_stage("encode"))?;
    let lhs_d = encode_lang(&lhs).map_err(|e| e.in_stage("encode rules"))?;
    let mut r = MonadicCfSystem::new(&with_d);
    r.add(Some(diamond), lhs_d)?;
    let anc = monadic_ancestors(&g_d, &r)?;
    let mut decode = sigma;
    for &t in anc.terminals() {
        decode.entry(t).or_insert_with(|| Word::letter(t));
    }
    Ok(anc.hom_image(&decode)?.with_terminals(&letters))
}

pub(crate) fn has_single_marker(g: &Cfg) -> Result<bool> {
    let mut letters: Vec<Symbol> = g.terminals().to_vec();
    if !letters.contains(&Symbol::MARKER) {
        letters.push(Symbol::MARKER);
    }
    let shape = marker_shape(&letters, &letters, &letters);
    Ok(!intersect_regular(g, &shape.complement()?)?.is_nonempty())
}

/// `left* # right*` over `alphabet`.
fn marker_shape(alphabet: &[Symbol], left: &[Symbol], right: &[Symbol]) -> Nfa {
    let l: Vec<Symbol> = left.iter().copied().filter(|&a| a != Symbol::MARKER).collect();
    let r: Vec<Symbol> = right.iter().copied().filter(|&a| a != Symbol::MARKER).collect();
    Nfa::star_of_letters(alphabet, &l)
        .concat(&Nfa::word(alphabet, &Word::letter(Symbol::MARKER)))
        .concat(&Nfa::star_of_letters(alphabet, &r))
}

/// Checks `u1#v1, u2#v2 ∈ L ⇒ u1u2#v2v1 ∈ L` on all words up to `maxlen`.
pub fn sample_concatenation_closed(g: &Cfg, maxlen: usize) -> Result<bool> {
    let sample = enumerate(g, maxlen)?;
    let split = |w: &Word| -> (Word, Word) {
        let i = w.find(&Word::letter(Symbol::MARKER)).expect("one marker");
        (w.slice(0, i), w.slice(i + 1, w.len()))
    };
    let parser = crate::grammars::CykParser::new(g);
    for a in &sample {
        let (u1, v1) = split(a);
        for b in &sample {
            let (u2, v2) = split(b);
            let mut w = u1.concat(&u2);
            w.push(Symbol::MARKER);
            let w = w.concat(&v2).concat(&v1);
            if !parser.accepts(w.symbols()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Grammar of `L1 ⋆ L2`: words `u1 u2 ⋯ uk # vk ⋯ v2 v1` with the
/// `ui # vi` taken alternately from `L1` and `L2`.
pub fn alternating_product(g1: &Cfg, g2: &Cfg) -> Result<Cfg> {
    for g in [g1, g2] {
        if !has_single_marker(g)? {
            return Err(Error::invalid(
                "alternating product needs languages inside A*#A*",
            ));
        }
    }
    for g in [g1, g2] {
        let small = g.terminals().len() * 4 <= crate::grammars::DEFAULT_ENUMERATION_GUARD;
        if small && !sample_concatenation_closed(g, 4)? {
            return Err(Error::invalid("language is not concatenation-closed"));
        }
    }
    let mut out = Cfg::empty_language(g1.terminals());
    out.names[0] = Some("S".into());
    let h1 = out.add_nonterminal(Some("H1".into()));
    let h2 = out.add_nonterminal(Some("H2".into()));
    let copy = |out: &mut Cfg, g: &Cfg, hole: u32| -> u32 {
        let off = out.absorb(g);
        for p in out.productions.iter_mut() {
            if p.lhs >= off {
                for s in p.body.iter_mut() {
                    if *s == GSym::T(Symbol::MARKER) {
                        *s = GSym::N(hole);
                    }
                }
            }
        }
        g.start() + off
    };
    let n1 = copy(&mut out, g1, h1);
    let n2 = copy(&mut out, g2, h2);
    for (h, other) in [(h1, n2), (h2, n1)] {
        out.productions.push(Production {
            lhs: h,
            body: vec![GSym::T(Symbol::MARKER)],
        });
        out.productions.push(Production {
            lhs: h,
            body: vec![GSym::N(other)],
        });
    }
    for n in [n1, n2] {
        out.productions.push(Production {
            lhs: 0,
            body: vec![GSym::N(n)],
        });
    }
    out.checked("alternating product")
}

/// Grammar of `{w1 # w2 : u1 # u2 ∈ L(g), w1 ∈ ⟨u1⟩_{R1}, w2 ∈ ⟨u2⟩_{R2}}`.
///
/// Letters right of the marker are renamed to primed copies, the two
/// systems act on disjoint alphabets one after the other, and the primes are
/// removed after restricting to `A* # A′*`.
pub fn bipartisan_ancestors(
    g: &Cfg,
    r1: &AncestorSystem,
    r2: &AncestorSystem,
) -> Result<Cfg> {
    let mut letters: Vec<Symbol> = Vec::new();
    for a in g
        .terminals()
        .iter()
        .copied()
        .chain(r1.letters())
        .chain(r2.letters())
    {
        if a != Symbol::MARKER && !letters.contains(&a) {
            letters.push(a);
        }
    }
    let prime: HashMap<Symbol, Symbol> =
        letters.iter().map(|&a| (a, a.decorated("′"))).collect();
    let primed: Vec<Symbol> = letters.iter().map(|a| prime[a]).collect();
    if primed.iter().any(|p| letters.contains(p)) {
        return Err(Error::invalid("alphabet already contains primed letters"));
    }
    let left: HashMap<Symbol, Word> = letters.iter().map(|&a| (a, Word::letter(a))).collect();
    let right: HashMap<Symbol, Word> = letters
        .iter()
        .map(|&a| (a, Word::letter(prime[&a])))
        .collect();
    let split = apply_fst(
        &g.clone().with_terminals(&letters),
        &Fst::marker_keyed(Symbol::MARKER, &left, &right),
    )
    .map_err(|e| e.in_stage("split"))?;
    let step1 = r1.ancestors(&split).map_err(|e| e.in_stage("left"))?;
    let step2 = r2
        .rename(&prime)
        .ancestors(&step1)
        .map_err(|e| e.in_stage("right"))?;
    let mut all = letters.clone();
    all.extend(primed.iter().copied());
    all.push(Symbol::MARKER);
    let shaped = intersect_regular(
        &step2.with_terminals(&all),
        &marker_shape(&all, &letters, &primed),
    )
    .map_err(|e| e.in_stage("shape"))?;
    let mut unprime: HashMap<Symbol, Word> = left;
    for (&a, &p) in &prime {
        unprime.insert(p, Word::letter(a));
    }
    unprime.insert(Symbol::MARKER, Word::letter(Symbol::MARKER));
    let mut terminals = letters;
    terminals.push(Symbol::MARKER);
    Ok(shaped.hom_image(&unprime)?.with_terminals(&terminals))
}

/// Irreducible words of a finite system, as an automaton.
pub fn irreducible_words(r: &RewriteSystem) -> Result<Nfa> {
    let letters = r.alphabet().letters();
    let rules = r
        .finite_rules()
        .ok_or_else(|| Error::invalid("irreducible words need finitely many rules"))?;
    let mut reducible = Nfa::empty(letters);
    for (l, _) in rules {
        reducible = reducible.union(&Nfa::containing_factor(letters, l));
    }
    reducible.complement()
}

/// Word-problem grammar `{u # v^rev : u = v}` of the monoid defined by a
/// complete, finite, monadic system: both sides descend to one normal form.
pub fn wp_from_complete_monadic(r: &RewriteSystem) -> Result<Cfg> {
    if r.finite_rules().is_none() || !r.is_monadic() {
        return Err(Error::invalid("expected a finite monadic system"));
    }
    match check_confluence_lengthreducing(r)? {
        Confluence::Complete => {}
        _ => return Err(Error::invalid("rewriting system is not complete")),
    }
    let letters = r.alphabet().letters();
    let irr = irreducible_words(r)?;
    let mut all = letters.to_vec();
    all.push(Symbol::MARKER);
    let shape = irr
        .clone()
        .with_alphabet(&all)
        .concat(&Nfa::word(&all, &Word::letter(Symbol::MARKER)))
        .concat(&irr.reverse().with_alphabet(&all));
    let d = intersect_regular(&wp_free_monoid_grammar(letters), &shape)?;
    let fwd = MonadicCfSystem::from_rewrite_system(r)?;
    let bwd = MonadicCfSystem::from_rewrite_system(&r.reversed())?;
    bipartisan_ancestors(&d, &fwd.into(), &bwd.into())
}
