//! Word-problem grammars of a weakly compressible monoid from those of its
//! left monoid and back, rational subset membership, and the report for
//! one-relation monoids with idempotents.
//!
//! Word-problem grammars follow the convention `{u # v^rev : u = v}` at
//! every public boundary.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::closures::{
    alternating_product, bipartisan_ancestors, has_single_marker, monadic_ancestors,
    wp_from_complete_monadic, AlphaMonadicSystem, MonadicCfSystem,
};
use crate::compression::{compress, compress_chain, compress_with, CompressionChain, CompressionStep};
use crate::error::{Error, Result};
use crate::grammars::{
    apply_fst, cfg_to_text, identity_language_grammar, intersect_regular, parse_cfg, union,
    wp_free_monoid_grammar, Cfg, CykParser, Fst, GSym, Nfa,
};
use crate::presentations::{
    classify, has_nontrivial_idempotent, Idempotent, MonoidPresentation, IDEMPOTENT_PROBE_BOUND,
};
use crate::rewriting::{complete_bounded, Confluence};
use crate::symbol::{Symbol, Word};

/// Stage names, in construction order.
pub const STAGES: [&str; 9] = [
    "G_Sigma1",
    "P_2",
    "Q",
    "tau_Q",
    "I_alpha",
    "L_alpha",
    "R_alpha",
    "WP_alpha",
    "W_alpha_minus",
];

/// A word-problem grammar of `M` together with the grammar of `L(M)` it was
/// built from and every intermediate stage.
#[derive(Clone, Debug)]
pub struct WpGrammarBundle {
    pub presentation: MonoidPresentation,
    pub step: CompressionStep,
    pub base_wp: Cfg,
    pub built_wp: Cfg,
    stages: Vec<(String, Cfg)>,
}

impl WpGrammarBundle {
    pub fn stage(&self, name: &str) -> Option<&Cfg> {
        self.stages.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn stages(&self) -> impl Iterator<Item = (&str, &Cfg)> {
        self.stages.iter().map(|(n, g)| (n.as_str(), g))
    }

    /// `u = v` in `M`, by membership of `u # v^rev`.
    pub fn parser(&self) -> WpParser {
        WpParser::new(&self.built_wp)
    }
}

/// Decides `u = v` from a word-problem grammar.
pub struct WpParser {
    parser: CykParser,
}

impl WpParser {
    pub fn new(wp: &Cfg) -> WpParser {
        WpParser {
            parser: CykParser::new(wp),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.parser.accepts(wp_word(u, v).symbols())
    }
}

/// `u # v^rev`.
pub fn wp_word(u: &Word, v: &Word) -> Word {
    let mut w = u.clone();
    w.push(Symbol::MARKER);
    w.extend(&v.reversed());
    w
}

/// Checks that `g` is over `letters ∪ {#}` and `L(g) ⊆ letters* # letters*`.
pub fn validate_wp_shape(g: &Cfg, letters: &[Symbol]) -> Result<()> {
    if let Some(t) = g
        .terminals()
        .iter()
        .find(|&&t| t != Symbol::MARKER && !letters.contains(&t))
    {
        return Err(Error::invalid(format!(
            "word-problem grammar uses {t}, which is not a generator"
        )));
    }
    if !has_single_marker(g)? {
        return Err(Error::invalid(
            "word-problem grammar has words without exactly one #",
        ));
    }
    Ok(())
}

fn with_marker(letters: &[Symbol]) -> Vec<Symbol> {
    let mut all = letters.to_vec();
    all.push(Symbol::MARKER);
    all
}

fn marker() -> Word {
    Word::letter(Symbol::MARKER)
}

/// `Σ_* = α(A* − A*αA*)`.
fn piece_language(letters: &[Symbol], alpha: &Word) -> Result<Nfa> {
    Ok(Nfa::word(letters, alpha).concat(&Nfa::avoiding_factor(letters, alpha)?))
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Builds a word-problem grammar of `p` from one of `L(p)`.
///
/// `base_wp` must be over the `γ`-letters of `compress(p)` and `#`.
pub fn build_wp_grammar(p: &MonoidPresentation, base_wp: &Cfg) -> Result<WpGrammarBundle> {
    let step = compress(p)?;
    build_with_step(p, step, base_wp)
}

fn build_with_step(
    p: &MonoidPresentation,
    step: CompressionStep,
    base_wp: &Cfg,
) -> Result<WpGrammarBundle> {
    validate_wp_shape(base_wp, &step.gamma)?;
    let letters = p.alphabet().letters().to_vec();
    let all = with_marker(&letters);
    let alpha = step.alpha.clone();
    let alpha_rev = alpha.reversed();
    let mut stages: Vec<(String, Cfg)> = Vec::new();

    let left: HashMap<Symbol, Word> = step
        .gamma
        .iter()
        .zip(&step.sigma)
        .map(|(&g, s)| (g, s.clone()))
        .collect();
    let right: HashMap<Symbol, Word> = step
        .gamma
        .iter()
        .zip(&step.sigma)
        .map(|(&g, s)| (g, s.reversed()))
        .collect();
    let base = base_wp.clone().with_terminals(&with_marker(&step.gamma));
    let g_sigma1 = stage(
        "G_Sigma1",
        apply_fst(&base, &Fst::marker_keyed(Symbol::MARKER, &left, &right)),
    )?
    .with_terminals(&all);

    let sigma_star = piece_language(&all, &alpha)?;
    let sigma2 = sigma_star.difference(&Nfa::words(&all, &step.sigma))?;
    let shape2 = sigma2
        .star()
        .concat(&Nfa::word(&all, &marker()))
        .concat(&sigma2.reverse().star());
    let p2 = stage(
        "P_2",
        intersect_regular(&wp_free_monoid_grammar(&letters), &shape2),
    )?
    .with_terminals(&all);

    let q = stage("Q", alternating_product(&g_sigma1, &p2))?;

    let mut tau: HashMap<Symbol, Word> = letters.iter().map(|&a| (a, Word::letter(a))).collect();
    tau.insert(
        Symbol::MARKER,
        alpha.concat(&marker()).concat(&alpha_rev),
    );
    let tau_q = stage("tau_Q", q.hom_image(&tau))?;

    let ip = stage("I_alpha", identity_language_grammar(&base, &step.gamma))?;
    let nonempty = Nfa::universal(&letters).difference(&Nfa::epsilon(&letters))?;
    let core = stage(
        "I_alpha",
        intersect_regular(&ip.hom_image(&left)?.with_terminals(&letters), &nonempty),
    )?;
    let i_alpha = AlphaMonadicSystem::new(alpha.clone(), core.clone())?;
    let l_alpha = stage(
        "L_alpha",
        bipartisan_ancestors(
            &tau_q,
            &i_alpha.clone().into(),
            &i_alpha.mirrored().into(),
        ),
    )?
    .with_terminals(&all);

    let free_wp = wp_free_monoid_grammar(&letters);
    let not_marker = Nfa::universal(&all).difference(&Nfa::word(&all, &marker()))?;
    let r_lhs = stage(
        "R_alpha",
        intersect_regular(&union(&l_alpha, &free_wp), &not_marker),
    )?;
    let mut r_alpha = MonadicCfSystem::new(&all);
    r_alpha.add(Some(Symbol::MARKER), r_lhs.clone())?;
    let contains_alpha = Nfa::containing_factor(&all, &alpha);
    let shape_alpha = contains_alpha
        .concat(&Nfa::word(&all, &marker()))
        .concat(&Nfa::containing_factor(&all, &alpha_rev));
    let anc = stage("WP_alpha", monadic_ancestors(&free_wp, &r_alpha))?;
    let wp_alpha = stage("WP_alpha", intersect_regular(&anc, &shape_alpha))?;

    let avoid = Nfa::avoiding_factor(&all, &alpha)?
        .intersect(&Nfa::star_of_letters(&all, &letters));
    let shape_minus = avoid
        .concat(&Nfa::word(&all, &marker()))
        .concat(&avoid.reverse());
    let w_minus = stage("W_alpha_minus", intersect_regular(&free_wp, &shape_minus))?;

    let built = union(&wp_alpha, &w_minus).with_terminals(&all);
    validate_wp_shape(&built, &letters)?;

    for (name, g) in [
        ("G_Sigma1", g_sigma1),
        ("P_2", p2),
        ("Q", q),
        ("tau_Q", tau_q),
        ("I_alpha", core),
        ("L_alpha", l_alpha),
        ("R_alpha", r_lhs),
        ("WP_alpha", wp_alpha),
        ("W_alpha_minus", w_minus),
    ] {
        stages.push((name.to_string(), g));
    }
    Ok(WpGrammarBundle {
        presentation: p.clone(),
        step,
        base_wp: base,
        built_wp: built,
        stages,
    })
}

/// Builds along the whole compression chain: `base_wp` is a grammar for the
/// incompressible end, and each step lifts it one level.
pub fn build_wp_grammar_chain(
    p: &MonoidPresentation,
    base_wp: &Cfg,
) -> Result<(CompressionChain, Vec<WpGrammarBundle>)> {
    let chain = compress_chain(p)?;
    let mut wp = base_wp.clone();
    let mut bundles = Vec::new();
    for step in chain.steps.iter().rev() {
        let b = build_with_step(&step.source, step.clone(), &wp)?;
        wp = b.built_wp.clone();
        bundles.push(b);
    }
    bundles.reverse();
    Ok((chain, bundles))
}

/// A word-problem grammar of an incompressible presentation, when one can
/// be written down exactly: one-generator monoids, free monoids, and
/// complete monadic systems.
pub fn terminal_wp_grammar(p: &MonoidPresentation) -> Result<Cfg> {
    let letters = p.alphabet().letters();
    if letters.len() == 1 {
        return Ok(cyclic_wp_grammar(p));
    }
    if p.relations().iter().all(|(u, v)| u == v) {
        return Ok(wp_free_monoid_grammar(letters));
    }
    let complete = complete_bounded(&p.rewrite_system(), crate::compression::AUTO_COMPLETION_RULES)
        .ok_or_else(|| {
            Error::invalid(format!("no complete rewriting system found for {p}"))
        })?;
    if !complete.is_monadic() {
        return Err(Error::invalid(format!(
            "the complete system for {p} is not monadic; supply a word-problem grammar"
        )));
    }
    debug_assert!(matches!(
        crate::rewriting::check_confluence_lengthreducing(&complete),
        Ok(Confluence::Complete)
    ));
    wp_from_complete_monadic(&complete)
}

/// `{a^p # a^q : a^p = a^q}` for `⟨a | a^m = a^n, …⟩`: either `p = q`, or
/// both exceed the index and differ by a multiple of the period.
fn cyclic_wp_grammar(p: &MonoidPresentation) -> Cfg {
    let a = p.alphabet().letters()[0];
    let mut index: Option<usize> = None;
    let mut period = 0usize;
    for (u, v) in p.relations() {
        let (m, n) = (u.len().min(v.len()), u.len().max(v.len()));
        if m < n {
            index = Some(index.map_or(m, |i| i.min(m)));
            period = gcd(period, n - m);
        }
    }
    let mut b = Cfg::builder(&[a, Symbol::MARKER]);
    let s = b.nt("S");
    let c = b.nt("C");
    b.add(c, vec![GSym::T(Symbol::MARKER)]);
    b.add(c, vec![GSym::T(a), GSym::N(c), GSym::T(a)]);
    b.add(s, vec![GSym::N(c)]);
    if let Some(i) = index {
        let l = b.nt("L");
        let r = b.nt("R");
        let d: Vec<GSym> = vec![GSym::T(a); period];
        b.add(l, vec![GSym::N(c)]);
        b.add(l, [d.clone(), vec![GSym::N(l)]].concat());
        b.add(r, vec![GSym::N(c)]);
        b.add(r, [vec![GSym::N(r)], d].concat());
        let pad = vec![GSym::T(a); i];
        b.add(s, [pad.clone(), vec![GSym::N(l)], pad.clone()].concat());
        b.add(s, [pad.clone(), vec![GSym::N(r)], pad].concat());
    }
    b.build(s)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Recovers a word-problem grammar of `L(p)` from one of `p`.
pub fn extract_lm_wp_grammar(p: &MonoidPresentation, wp_m: &Cfg) -> Result<Cfg> {
    let step = compress(p)?;
    extract_with_step(&step, wp_m)
}

fn extract_with_step(step: &CompressionStep, wp_m: &Cfg) -> Result<Cfg> {
    let letters = step.source.alphabet().letters().to_vec();
    validate_wp_shape(wp_m, &letters)?;
    let all = with_marker(&letters);
    let alpha = &step.alpha;
    let sigma1 = Nfa::words(&all, &step.sigma);
    let reversed: Vec<Word> = step.sigma.iter().map(Word::reversed).collect();
    let shape = sigma1
        .star()
        .concat(&Nfa::word(&all, &alpha.concat(&marker()).concat(&alpha.reversed())))
        .concat(&Nfa::words(&all, &reversed).star());
    let sliced = stage(
        "extract",
        intersect_regular(&wp_m.clone().with_terminals(&all), &shape),
    )?;

    // delete the α before # and the α^rev after it
    let mut untau = Fst::new(&all, &all);
    let l = untau.add_state(false);
    let r = untau.add_state(true);
    untau.set_initial(l);
    for &a in &letters {
        untau.add_arc(l, Some(a), Word::letter(a), l);
        untau.add_arc(r, Some(a), Word::letter(a), r);
    }
    let mid: Vec<Symbol> = alpha
        .concat(&marker())
        .concat(&alpha.reversed())
        .into_symbols();
    let mut cur = l;
    for (i, &s) in mid.iter().enumerate() {
        let last = i + 1 == mid.len();
        let next = if last { r } else { untau.add_state(false) };
        let out = if s == Symbol::MARKER { marker() } else { Word::empty() };
        untau.add_arc(cur, Some(s), out, next);
        cur = next;
    }
    let stripped = stage("extract", apply_fst(&sliced, &untau))?;

    let mut decode = Fst::new(&all, &with_marker(&step.gamma));
    let dl = decode.add_state(false);
    let dr = decode.add_state(true);
    decode.set_initial(dl);
    decode.add_arc(dl, Some(Symbol::MARKER), marker(), dr);
    for (g, piece) in step.gamma.iter().zip(&step.sigma) {
        for (hub, spelled) in [(dl, piece.clone()), (dr, piece.reversed())] {
            let syms = spelled.symbols();
            let mut cur = hub;
            for (i, &a) in syms.iter().enumerate() {
                let last = i + 1 == syms.len();
                let next = if last { hub } else { decode.add_state(false) };
                let out = if last { Word::letter(*g) } else { Word::empty() };
                decode.add_arc(cur, Some(a), out, next);
                cur = next;
            }
        }
    }
    let out = stage("extract", apply_fst(&stripped, &decode))?;
    Ok(out.with_terminals(&with_marker(&step.gamma)))
}

/// Whether `w` equals some word of `L(r)`, given a word-problem grammar.
pub fn rational_membership(wp: &Cfg, w: &Word, r: &Nfa) -> Result<bool> {
    let mut all = wp.terminals().to_vec();
    for &a in w.symbols().iter().chain(r.alphabet()) {
        if !all.contains(&a) {
            all.push(a);
        }
    }
    if !all.contains(&Symbol::MARKER) {
        all.push(Symbol::MARKER);
    }
    let query = Nfa::word(&all, &w.concat(&marker()))
        .concat(&r.reverse().with_alphabet(&all));
    Ok(intersect_regular(wp, &query)?.is_nonempty())
}

/// What is known about a one-relation monoid regarding a context-free word
/// problem.
#[derive(Clone, Debug)]
pub struct WordProblemReport {
    pub presentation: MonoidPresentation,
    pub idempotent: Idempotent,
    pub chain: Option<CompressionChain>,
    pub terminal_special: Option<MonoidPresentation>,
    pub built_wp: Option<Cfg>,
    /// Why no grammar was built, when none was.
    pub base_note: Option<String>,
}

pub const VIRTUAL_FREENESS_NOTE: &str = "whether the group of units of the terminal special \
presentation is virtually free is not decided here; the monoid has context-free word problem \
exactly when it is";

#[derive(Serialize)]
struct ReportJson {
    presentation: String,
    idempotent: Idempotent,
    compressible: bool,
    chain: Option<serde_json::Value>,
    chain_length: usize,
    terminal_special: Option<String>,
    built_wp: Option<String>,
    base_note: Option<String>,
    verdict: &'static str,
}

impl WordProblemReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            presentation: self.presentation.to_text(),
            idempotent: self.idempotent,
            compressible: self.chain.as_ref().is_some_and(|c| !c.is_empty()),
            chain: self.chain.as_ref().map(CompressionChain::to_json),
            chain_length: self.chain.as_ref().map_or(0, CompressionChain::len),
            terminal_special: self.terminal_special.as_ref().map(MonoidPresentation::to_text),
            built_wp: self.built_wp.as_ref().map(cfg_to_text),
            base_note: self.base_note.clone(),
            verdict: VIRTUAL_FREENESS_NOTE,
        })
        .expect("serializable report")
    }
}

impl std::fmt::Display for WordProblemReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "presentation: {}", self.presentation)?;
        writeln!(f, "non-trivial idempotent: {}", self.idempotent)?;
        match &self.chain {
            Some(c) if !c.is_empty() => writeln!(f, "compression chain of length {}\n{c}", c.len())?,
            _ => writeln!(f, "not compressible")?,
        }
        if let Some(t) = &self.terminal_special {
            writeln!(f, "terminal special presentation: {t}")?;
        }
        match (&self.built_wp, &self.base_note) {
            (Some(g), _) => writeln!(
                f,
                "word-problem grammar: {} productions",
                g.production_count()
            )?,
            (None, Some(n)) => writeln!(f, "word-problem grammar not built: {n}")?,
            _ => {}
        }
        write!(f, "note: {VIRTUAL_FREENESS_NOTE}")
    }
}

/// Compression half of the decision procedure for one-relation monoids:
/// idempotent status, compression chain, terminal special presentation and,
/// when a base grammar is given or can be written down, the lifted grammar.
pub fn decide_word_problem_cf(
    p: &MonoidPresentation,
    base_wp: Option<&Cfg>,
) -> Result<WordProblemReport> {
    let idempotent = has_nontrivial_idempotent(p, IDEMPOTENT_PROBE_BOUND)?;
    let chain = if classify(p).weakly_compressible && p.alphabet().len() > 1 {
        Some(compress_chain(p)?)
    } else {
        None
    };
    let terminal = chain.as_ref().map_or(p, |c| &c.terminal);
    let terminal_special = terminal
        .relations()
        .iter()
        .all(|(u, v)| u.is_empty() || v.is_empty())
        .then(|| terminal.clone());
    let base = match base_wp {
        Some(g) => Ok(g.clone()),
        None => terminal_wp_grammar(terminal),
    };
    let (built_wp, base_note) = match base {
        Ok(g) => match &chain {
            Some(c) if !c.is_empty() => {
                let (_, bundles) = build_wp_grammar_chain(p, &g)?;
                (Some(bundles[0].built_wp.clone()), None)
            }
            _ => (Some(g), None),
        },
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(WordProblemReport {
        presentation: p.clone(),
        idempotent,
        chain,
        terminal_special,
        built_wp,
        base_note,
    })
}

#[derive(Serialize, Deserialize)]
struct StageEntry {
    name: String,
    file: String,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    presentation: String,
    alpha: String,
    base_wp: String,
    built_wp: String,
    stages: Vec<StageEntry>,
}

pub const MANIFEST: &str = "manifest.json";

impl WpGrammarBundle {
    /// Writes every grammar to `dir` and a manifest naming the stages.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("presentation.txt"), self.presentation.to_text())?;
        fs::write(dir.join("base_wp.cfg"), cfg_to_text(&self.base_wp))?;
        fs::write(dir.join("built_wp.cfg"), cfg_to_text(&self.built_wp))?;
        let mut stages = Vec::new();
        for (name, g) in &self.stages {
            let file = format!("{name}.cfg");
            fs::write(dir.join(&file), cfg_to_text(g))?;
            stages.push(StageEntry {
                name: name.clone(),
                file,
            });
        }
        let manifest = Manifest {
            presentation: "presentation.txt".into(),
            alpha: self.step.alpha.symbols().iter().map(|s| s.name()).collect::<Vec<_>>().join(" "),
            base_wp: "base_wp.cfg".into(),
            built_wp: "built_wp.cfg".into(),
            stages,
        };
        fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<WpGrammarBundle> {
        let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST))?)?;
        let presentation =
            MonoidPresentation::parse(&fs::read_to_string(dir.join(&manifest.presentation))?)?;
        let alpha = Word::new(manifest.alpha.split_whitespace().map(Symbol::new).collect());
        let step = compress_with(&presentation, &alpha)?;
        let read = |f: &str| -> Result<Cfg> { parse_cfg(&fs::read_to_string(dir.join(f))?) };
        let base_wp = read(&manifest.base_wp)?;
        let built_wp = read(&manifest.built_wp)?;
        validate_wp_shape(&built_wp, presentation.alphabet().letters())?;
        let stages = manifest
            .stages
            .iter()
            .map(|s| Ok((s.name.clone(), read(&s.file)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WpGrammarBundle {
            presentation,
            step,
            base_wp,
            built_wp,
            stages,
        })
    }
}

/// `WP(L(M))` of a bundle, recovered from its built grammar.
pub fn extract_from_bundle(b: &WpGrammarBundle) -> Result<Cfg> {
    extract_with_step(&b.step, &b.built_wp)
}
