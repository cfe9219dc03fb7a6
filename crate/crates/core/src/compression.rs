//! Weak compression: left pieces, left monoids, compression chains,
//! canonical forms, γ-parts and word equality through the chain.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grammars::{Cfg, CykParser};
use crate::presentations::{classify, find_sealing_word, MonoidPresentation};
use crate::rewriting::{
    complete_bounded, explore_component, Component, RewriteSystem, Verdict,
};
use crate::symbol::{Alphabet, Symbol, Word};

/// One compression `M ↦ L(M)` with respect to a sealing word `α`.
#[derive(Clone, Debug)]
pub struct CompressionStep {
    pub alpha: Word,
    /// Left pieces `Σ`, in order of first occurrence.
    pub sigma: Vec<Word>,
    /// `γ`-letters, `gamma[i] = φ(sigma[i])`.
    pub gamma: Vec<Symbol>,
    pub source: MonoidPresentation,
    pub target: MonoidPresentation,
}

impl CompressionStep {
    pub fn phi(&self, piece: &Word) -> Option<Symbol> {
        self.sigma
            .iter()
            .position(|s| s == piece)
            .map(|i| self.gamma[i])
    }

    pub fn piece_of(&self, gamma: Symbol) -> Option<&Word> {
        self.gamma
            .iter()
            .position(|&g| g == gamma)
            .map(|i| &self.sigma[i])
    }

    /// `φ` on a word of `Σ*`; `None` if some factor is not a left piece.
    pub fn phi_word(&self, pieces: &[Word]) -> Option<Word> {
        pieces.iter().map(|p| self.phi(p)).collect()
    }

    /// `φ⁻¹` on a word over `Γ`.
    pub fn unphi(&self, w: &Word) -> Result<Word> {
        let mut out = Word::empty();
        for &g in w.symbols() {
            let piece = self
                .piece_of(g)
                .ok_or_else(|| Error::invalid(format!("{g} is not a γ-letter of this step")))?;
            out.extend(piece);
        }
        Ok(out)
    }
}

/// `u = u′ u† u″` with `u′`, `u″` free of `α` and `u†` beginning and ending
/// with `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub prefix: Word,
    pub core: Word,
    pub suffix: Word,
}

/// A chain `M → L(M) → L²(M) → …` ending in an incompressible presentation.
#[derive(Clone, Debug)]
pub struct CompressionChain {
    pub steps: Vec<CompressionStep>,
    pub terminal: MonoidPresentation,
}

#[derive(Serialize)]
struct PhiEntry {
    piece: String,
    gamma: String,
}

#[derive(Serialize)]
struct StepReport {
    alpha: String,
    sigma: Vec<String>,
    phi: Vec<PhiEntry>,
    source: String,
    target: String,
}

#[derive(Serialize)]
struct ChainReport {
    steps: Vec<StepReport>,
    terminal: String,
    special: bool,
}

impl CompressionChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn source(&self) -> &MonoidPresentation {
        self.steps
            .first()
            .map(|s| &s.source)
            .unwrap_or(&self.terminal)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let report = ChainReport {
            steps: self
                .steps
                .iter()
                .map(|s| StepReport {
                    alpha: s.alpha.spell(),
                    sigma: s.sigma.iter().map(Word::spell).collect(),
                    phi: s
                        .sigma
                        .iter()
                        .zip(&s.gamma)
                        .map(|(p, g)| PhiEntry {
                            piece: p.spell(),
                            gamma: g.name().to_string(),
                        })
                        .collect(),
                    source: s.source.to_text(),
                    target: s.target.to_text(),
                })
                .collect(),
            terminal: self.terminal.to_text(),
            special: self.terminal.relations().iter().all(|(_, v)| v.is_empty()),
        };
        serde_json::to_value(report).expect("serializable report")
    }
}

impl fmt::Display for CompressionChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: alpha = {}", i + 1, s.alpha)?;
            for (p, g) in s.sigma.iter().zip(&s.gamma) {
                writeln!(f, "  {g} = {p}")?;
            }
            writeln!(f, "  {}", s.target)?;
        }
        write!(f, "terminal: {}", self.terminal)
    }
}

/// Splits `w ∈ (α(A* − A*αA*))*` at the occurrences of `α`.
pub fn factor_pieces(w: &Word, alpha: &Word) -> Option<Vec<Word>> {
    if w.is_empty() {
        return Some(Vec::new());
    }
    let occ = w.occurrences(alpha);
    if occ.first() != Some(&0) {
        return None;
    }
    let mut out = Vec::with_capacity(occ.len());
    for (k, &i) in occ.iter().enumerate() {
        let end = occ.get(k + 1).copied().unwrap_or(w.len());
        out.push(w.slice(i, end));
    }
    Some(out)
}

/// Left pieces `Σ`: the factors of the relation sides with their final `α`
/// removed, in order of first occurrence.
pub fn left_pieces(p: &MonoidPresentation, alpha: &Word) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = Vec::new();
    for (u, v) in p.relations() {
        for side in [u, v] {
            if !side.ends_with(alpha) || !side.starts_with(alpha) {
                return Err(Error::Internal(format!("{side} is not sealed by {alpha}")));
            }
            let stripped = side.slice(0, side.len() - alpha.len());
            let pieces = factor_pieces(&stripped, alpha)
                .ok_or_else(|| Error::Internal(format!("cannot factor {side} over pieces")))?;
            for piece in pieces {
                if !out.contains(&piece) {
                    out.push(piece);
                }
            }
        }
    }
    Ok(out)
}

fn piece_name(piece: &Word) -> String {
    if piece.symbols().iter().all(|s| s.name().chars().count() == 1) {
        format!("gamma_{}", piece.spell())
    } else {
        let parts: Vec<&str> = piece.symbols().iter().map(|s| s.name()).collect();
        format!("gamma_({})", parts.join("."))
    }
}

/// `γ`-letter for a left piece.
pub fn gamma_letter(piece: &Word) -> Symbol {
    Symbol::new(&piece_name(piece))
}

/// Letter standing for a piece outside `Σ`; these generate the free factor
/// of the extended left monoid.
pub fn free_gamma_letter(piece: &Word) -> Symbol {
    Symbol::new(&format!("{}'", piece_name(piece)))
}

/// One compression step. Fails for incompressible presentations and for
/// one-letter alphabets.
pub fn compress(p: &MonoidPresentation) -> Result<CompressionStep> {
    if p.alphabet().len() < 2 {
        return Err(Error::invalid(
            "presentations over one letter define cyclic monoids and are not compressed",
        ));
    }
    let alpha = find_sealing_word(p)
        .ok_or_else(|| Error::invalid(format!("{p} is incompressible")))?;
    compress_with(p, &alpha)
}

/// Compression with a given self-overlap-free sealing word.
pub fn compress_with(p: &MonoidPresentation, alpha: &Word) -> Result<CompressionStep> {
    if !crate::presentations::is_self_overlap_free(alpha) || alpha.is_empty() {
        return Err(Error::invalid(format!("{alpha} is not self-overlap free")));
    }
    let sigma = left_pieces(p, alpha)?;
    let gamma: Vec<Symbol> = sigma.iter().map(gamma_letter).collect();
    let to_gamma = |side: &Word| -> Word {
        let stripped = side.slice(0, side.len() - alpha.len());
        factor_pieces(&stripped, alpha)
            .expect("checked by left_pieces")
            .iter()
            .map(|piece| gamma[sigma.iter().position(|s| s == piece).expect("piece")])
            .collect()
    };
    let relations = p
        .relations()
        .iter()
        .map(|(u, v)| (to_gamma(u), to_gamma(v)))
        .collect();
    let target = MonoidPresentation::new(Alphabet::new(gamma.clone())?, relations)?;
    Ok(CompressionStep {
        alpha: alpha.clone(),
        sigma,
        gamma,
        source: p.clone(),
        target,
    })
}

pub fn is_compressible(p: &MonoidPresentation) -> bool {
    p.alphabet().len() >= 2 && classify(p).weakly_compressible
}

/// Compresses until the presentation is incompressible.
pub fn compress_chain(p: &MonoidPresentation) -> Result<CompressionChain> {
    let mut steps = Vec::new();
    let mut cur = p.clone();
    while is_compressible(&cur) {
        let step = compress(&cur)?;
        if step.target.total_length() >= cur.total_length() {
            return Err(Error::Internal("compression did not shorten relations".into()));
        }
        cur = step.target.clone();
        steps.push(step);
    }
    Ok(CompressionChain {
        steps,
        terminal: cur,
    })
}

pub fn canonical_form(w: &Word, alpha: &Word) -> Option<CanonicalForm> {
    let first = w.find(alpha)?;
    let last = w.rfind(alpha)?;
    Some(CanonicalForm {
        prefix: w.slice(0, first),
        core: w.slice(first, last + alpha.len()),
        suffix: w.slice(last + alpha.len(), w.len()),
    })
}

/// Maximal run of `γ`-part letters from one free factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// Letters of `Γ = φ(Σ)`, a word of the left monoid.
    Left(Word),
    /// Pieces outside `Σ`, compared literally.
    Free(Vec<Word>),
}

/// The pieces of `u†` without its final `α`; `None` if `w` has no `α`.
pub fn core_pieces(w: &Word, alpha: &Word) -> Option<Vec<Word>> {
    let cf = canonical_form(w, alpha)?;
    let stripped = cf.core.slice(0, cf.core.len() - alpha.len());
    Some(factor_pieces(&stripped, alpha).expect("canonical core factors over pieces"))
}

/// Alternating blocks of the `γ`-part of `w`.
pub fn gamma_blocks(w: &Word, step: &CompressionStep) -> Option<Vec<Block>> {
    let pieces = core_pieces(w, &step.alpha)?;
    let mut out: Vec<Block> = Vec::new();
    for piece in pieces {
        match (step.phi(&piece), out.last_mut()) {
            (Some(g), Some(Block::Left(b))) => b.push(g),
            (Some(g), _) => out.push(Block::Left(Word::letter(g))),
            (None, Some(Block::Free(b))) => b.push(piece),
            (None, _) => out.push(Block::Free(vec![piece])),
        }
    }
    Some(out)
}

/// The `γ`-part of `w`: `φ` of the pieces of `u†` without its final `α`.
/// Pieces outside `Σ` become fresh letters (see [`free_gamma_letter`]).
pub fn gamma_part(w: &Word, step: &CompressionStep) -> Option<Word> {
    let pieces = core_pieces(w, &step.alpha)?;
    Some(
        pieces
            .iter()
            .map(|p| step.phi(p).unwrap_or_else(|| free_gamma_letter(p)))
            .collect(),
    )
}

/// Decides equality in the incompressible end of a chain.
pub trait BaseSolver: Send + Sync {
    fn name(&self) -> &str;
    fn equal(&self, u: &Word, v: &Word) -> Result<Verdict>;
}

/// Normal forms of a complete rewriting system.
pub struct CompleteSystem {
    system: RewriteSystem,
}

impl CompleteSystem {
    pub fn new(p: &MonoidPresentation, maxrules: usize) -> Result<CompleteSystem> {
        let system = complete_bounded(&p.rewrite_system(), maxrules).ok_or_else(|| {
            Error::invalid(format!(
                "completion of {p} did not finish within {maxrules} rules"
            ))
        })?;
        Ok(CompleteSystem { system })
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }
}

impl BaseSolver for CompleteSystem {
    fn name(&self) -> &str {
        "complete"
    }

    fn equal(&self, u: &Word, v: &Word) -> Result<Verdict> {
        Ok(Verdict::from_bool(
            self.system.normal_form(u) == self.system.normal_form(v),
        ))
    }
}

/// Bounded breadth-first search; components are cached per start word.
pub struct BoundedBfs {
    rules: Vec<(Word, Word)>,
    maxlen: usize,
    maxstates: usize,
    cache: Mutex<HashMap<Word, Arc<Component>>>,
}

impl BoundedBfs {
    pub fn new(p: &MonoidPresentation, maxlen: usize, maxstates: usize) -> BoundedBfs {
        BoundedBfs {
            rules: p.oriented(),
            maxlen,
            maxstates,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn component(&self, w: &Word) -> Arc<Component> {
        if let Some(c) = self.cache.lock().expect("cache").get(w) {
            return c.clone();
        }
        let c = Arc::new(explore_component(w, &self.rules, self.maxlen, self.maxstates));
        let mut cache = self.cache.lock().expect("cache");
        for x in &c.words {
            cache.insert(x.clone(), c.clone());
        }
        cache.entry(w.clone()).or_insert_with(|| c.clone());
        c
    }
}

impl BaseSolver for BoundedBfs {
    fn name(&self) -> &str {
        "bounded"
    }

    fn equal(&self, u: &Word, v: &Word) -> Result<Verdict> {
        if u == v {
            return Ok(Verdict::Equal);
        }
        let c = self.component(u);
        Ok(if c.words.contains(v) {
            Verdict::Equal
        } else if c.closed {
            Verdict::Distinct
        } else {
            Verdict::Unknown
        })
    }
}

/// Membership of `u # v^rev` in a word-problem grammar.
pub struct WpGrammar {
    parser: CykParser,
}

impl WpGrammar {
    pub fn new(g: &Cfg) -> WpGrammar {
        WpGrammar {
            parser: CykParser::new(g),
        }
    }
}

impl BaseSolver for WpGrammar {
    fn name(&self) -> &str {
        "grammar"
    }

    fn equal(&self, u: &Word, v: &Word) -> Result<Verdict> {
        let mut w = u.clone();
        w.push(Symbol::MARKER);
        w.extend(&v.reversed());
        Ok(Verdict::from_bool(self.parser.accepts(w.symbols())))
    }
}

/// Equality in a one-generator monoid `⟨a | a^m = a^n, …⟩`: the least
/// congruence on ℕ containing the relations has index `min min(m, n)` and
/// period `gcd |m − n|` over the nontrivial relations.
pub struct Cyclic {
    index: Option<usize>,
    period: usize,
}

impl Cyclic {
    pub fn new(p: &MonoidPresentation) -> Result<Cyclic> {
        if p.alphabet().len() != 1 {
            return Err(Error::invalid("expected a one-generator presentation"));
        }
        let mut index: Option<usize> = None;
        let mut period = 0usize;
        for (u, v) in p.relations() {
            let (m, n) = (u.len().min(v.len()), u.len().max(v.len()));
            if m == n {
                continue;
            }
            index = Some(index.map_or(m, |i| i.min(m)));
            period = gcd(period, n - m);
        }
        Ok(Cyclic { index, period })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl BaseSolver for Cyclic {
    fn name(&self) -> &str {
        "cyclic"
    }

    fn equal(&self, u: &Word, v: &Word) -> Result<Verdict> {
        let (p, q) = (u.len(), v.len());
        let eq = p == q
            || matches!(self.index, Some(i) if p >= i && q >= i && (p.abs_diff(q)) % self.period == 0);
        Ok(Verdict::from_bool(eq))
    }
}

/// How the incompressible end of a chain is decided.
#[derive(Clone, Debug)]
pub enum BaseStrategy {
    /// Complete rewriting system when completion succeeds within 64 rules,
    /// otherwise bounded search.
    Auto { maxlen: usize, maxstates: usize },
    Complete { maxrules: usize },
    Bounded { maxlen: usize, maxstates: usize },
    /// A grammar of `{u # v^rev : u = v}` over the terminal alphabet.
    Grammar(Cfg),
}

pub const DEFAULT_MAXLEN: usize = 12;
pub const DEFAULT_MAXSTATES: usize = 200_000;
pub const AUTO_COMPLETION_RULES: usize = 64;

impl Default for BaseStrategy {
    fn default() -> Self {
        BaseStrategy::Auto {
            maxlen: DEFAULT_MAXLEN,
            maxstates: DEFAULT_MAXSTATES,
        }
    }
}

impl BaseStrategy {
    pub fn build(&self, p: &MonoidPresentation) -> Result<Box<dyn BaseSolver>> {
        if p.alphabet().len() == 1 && !matches!(self, BaseStrategy::Grammar(_)) {
            return Ok(Box::new(Cyclic::new(p)?));
        }
        Ok(match self {
            BaseStrategy::Auto { maxlen, maxstates } => {
                match CompleteSystem::new(p, AUTO_COMPLETION_RULES) {
                    Ok(c) => Box::new(c),
                    Err(_) => Box::new(BoundedBfs::new(p, *maxlen, *maxstates)),
                }
            }
            BaseStrategy::Complete { maxrules } => Box::new(CompleteSystem::new(p, *maxrules)?),
            BaseStrategy::Bounded { maxlen, maxstates } => {
                Box::new(BoundedBfs::new(p, *maxlen, *maxstates))
            }
            BaseStrategy::Grammar(g) => {
                if let Some(a) = p.alphabet().letters().iter().find(|a| !g.terminals().contains(a)) {
                    return Err(Error::invalid(format!(
                        "word-problem grammar lacks the generator {a}"
                    )));
                }
                Box::new(WpGrammar::new(g))
            }
        })
    }
}

/// Word-equality solver for a presentation, built once: the compression
/// chain is computed up front and the base solver is attached to its end.
pub struct WordProblemSolver {
    chain: CompressionChain,
    base: Box<dyn BaseSolver>,
}

impl WordProblemSolver {
    pub fn new(p: &MonoidPresentation, base: &BaseStrategy) -> Result<WordProblemSolver> {
        let chain = compress_chain(p)?;
        let base = base.build(&chain.terminal)?;
        Ok(WordProblemSolver { chain, base })
    }

    pub fn with_base(p: &MonoidPresentation, base: Box<dyn BaseSolver>) -> Result<Self> {
        Ok(WordProblemSolver {
            chain: compress_chain(p)?,
            base,
        })
    }

    pub fn chain(&self) -> &CompressionChain {
        &self.chain
    }

    pub fn base_name(&self) -> &str {
        self.base.name()
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<Verdict> {
        let alphabet = self.chain.source().alphabet();
        for w in [u, v] {
            if !alphabet.contains_word(w) {
                return Err(Error::invalid(format!("{w} is not a word over the generators")));
            }
        }
        self.equal_at(0, u, v)
    }

    /// Equality in the presentation at depth `level` of the chain.
    pub fn equal_at(&self, level: usize, u: &Word, v: &Word) -> Result<Verdict> {
        if u == v {
            return Ok(Verdict::Equal);
        }
        let Some(step) = self.chain.steps.get(level) else {
            return self.base.equal(u, v);
        };
        let (cu, cv) = (
            canonical_form(u, &step.alpha),
            canonical_form(v, &step.alpha),
        );
        let (cu, cv) = match (cu, cv) {
            (None, None) => return Ok(Verdict::Distinct),
            (Some(cu), Some(cv)) => (cu, cv),
            _ => return Ok(Verdict::Distinct),
        };
        if cu.prefix != cv.prefix || cu.suffix != cv.suffix {
            return Ok(Verdict::Distinct);
        }
        let bu = gamma_blocks(u, step).expect("contains alpha");
        let bv = gamma_blocks(v, step).expect("contains alpha");
        let (ru, unsure_u) = self.reduce(level, bu)?;
        let (rv, unsure_v) = self.reduce(level, bv)?;
        if unsure_u || unsure_v {
            return Ok(Verdict::Unknown);
        }
        if ru.len() != rv.len() {
            return Ok(Verdict::Distinct);
        }
        let mut unknown = false;
        for (x, y) in ru.iter().zip(&rv) {
            match (x, y) {
                (Block::Free(a), Block::Free(b)) => {
                    if a != b {
                        return Ok(Verdict::Distinct);
                    }
                }
                (Block::Left(a), Block::Left(b)) => match self.equal_at(level + 1, a, b)? {
                    Verdict::Distinct => return Ok(Verdict::Distinct),
                    Verdict::Unknown => unknown = true,
                    Verdict::Equal => {}
                },
                _ => return Ok(Verdict::Distinct),
            }
        }
        Ok(if unknown { Verdict::Unknown } else { Verdict::Equal })
    }

    /// Free-product reduction: drops left blocks equal to 1 and merges the
    /// free blocks around them. The flag reports an undecided block.
    fn reduce(&self, level: usize, blocks: Vec<Block>) -> Result<(Vec<Block>, bool)> {
        let mut out: Vec<Block> = Vec::with_capacity(blocks.len());
        let mut unsure = false;
        for b in blocks {
            match b {
                Block::Left(w) => match self.equal_at(level + 1, &w, &Word::empty())? {
                    Verdict::Equal => {}
                    Verdict::Distinct => out.push(Block::Left(w)),
                    Verdict::Unknown => {
                        unsure = true;
                        out.push(Block::Left(w));
                    }
                },
                Block::Free(ps) => match out.last_mut() {
                    Some(Block::Free(prev)) => prev.extend(ps),
                    _ => out.push(Block::Free(ps)),
                },
            }
        }
        Ok((out, unsure))
    }
}

/// `u =_M v` through the compression chain of `p`.
pub fn word_equal(
    p: &MonoidPresentation,
    u: &Word,
    v: &Word,
    base: &BaseStrategy,
) -> Result<Verdict> {
    WordProblemSolver::new(p, base)?.equal(u, v)
}

/// The special one-relation presentation a subspecial one is compressed to;
/// `None` when the chain does not end in a special presentation.
pub fn compress_to_special(p: &MonoidPresentation) -> Result<Option<MonoidPresentation>> {
    if p.relations().len() != 1 {
        return Err(Error::invalid("expected a one-relation presentation"));
    }
    let is_special = |q: &MonoidPresentation| {
        q.relations()
            .iter()
            .all(|(u, v)| u.is_empty() || v.is_empty())
    };
    if is_special(p) {
        return Ok(Some(p.clone()));
    }
    let chain = compress_chain(p)?;
    Ok(is_special(&chain.terminal).then_some(chain.terminal))
}
