//! Command-line front end. Exit codes: 0 for a definite answer, 2 for
//! `unknown`, 1 for errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::compression::{
    compress, compress_chain, BaseStrategy, CompressionChain, WordProblemSolver, DEFAULT_MAXLEN,
    DEFAULT_MAXSTATES,
};
use crate::error::{Error, Result};
use crate::grammars::{parse_cfg, parse_nfa, set_production_guard, Cfg, DEFAULT_PRODUCTION_GUARD};
use crate::pipeline::{
    build_wp_grammar_chain, decide_word_problem_cf, rational_membership, terminal_wp_grammar,
    WpGrammarBundle,
};
use crate::presentations::{classify, has_nontrivial_idempotent, Idempotent, MonoidPresentation};
use crate::rewriting::Verdict;
use crate::symbol::{parse_word_over, Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "weakcomp", version, about = "Weak compression and word problems of monoids")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Production-count guard for grammar constructions
    #[arg(long, default_value_t = DEFAULT_PRODUCTION_GUARD, global = true)]
    guard: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Special / subspecial / weakly compressible, with a sealing word
    Classify { presentation: PathBuf },
    /// One compression step, or the whole chain with --chain
    Compress {
        presentation: PathBuf,
        #[arg(long)]
        chain: bool,
    },
    /// Decide u = v through the compression chain
    Eq {
        presentation: PathBuf,
        u: String,
        v: String,
        /// auto | complete | bounded | path to a word-problem grammar of the chain's end
        #[arg(long, default_value = "auto")]
        base: String,
        #[arg(long, default_value_t = DEFAULT_MAXLEN)]
        maxlen: usize,
        #[arg(long, default_value_t = DEFAULT_MAXSTATES)]
        maxstates: usize,
    },
    /// Build a word-problem grammar and save it as a bundle directory
    #[command(name = "build-wp")]
    BuildWp {
        presentation: PathBuf,
        /// auto | path to a word-problem grammar of the chain's end
        #[arg(long, default_value = "auto")]
        base_wp: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Membership of `u#w` in a bundle's grammar; with V, tests u = v
    Member {
        bundle: PathBuf,
        word: String,
        v: Option<String>,
    },
    /// Whether WORD equals some word accepted by the automaton
    Ratmem {
        bundle: PathBuf,
        word: String,
        nfa: PathBuf,
    },
    /// Non-trivial idempotents of a one-relation monoid
    Idempotent {
        presentation: PathBuf,
        #[arg(long, default_value_t = crate::presentations::IDEMPOTENT_PROBE_BOUND)]
        probe_bound: usize,
        /// Also print the compression chain and word-problem grammar report
        #[arg(long)]
        report: bool,
        #[arg(long)]
        base_wp: Option<PathBuf>,
    },
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    set_production_guard(cli.guard);
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read_presentation(path: &Path) -> Result<MonoidPresentation> {
    MonoidPresentation::parse(&read(path)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn read_grammar(path: &Path) -> Result<Cfg> {
    parse_cfg(&read(path)?)
}

fn emit(out: &mut dyn Write, format: Format, text: &str, value: serde_json::Value) -> Result<()> {
    match format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?,
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Equal => "equal",
        Verdict::Distinct => "distinct",
        Verdict::Unknown => "unknown",
    }
}

fn base_strategy(spec: &str, maxlen: usize, maxstates: usize) -> Result<BaseStrategy> {
    Ok(match spec {
        "auto" => BaseStrategy::Auto { maxlen, maxstates },
        "complete" => BaseStrategy::Complete { maxrules: 256 },
        "bounded" => BaseStrategy::Bounded { maxlen, maxstates },
        path => BaseStrategy::Grammar(read_grammar(Path::new(path))?),
    })
}

fn chain_text(chain: &CompressionChain) -> String {
    if chain.is_empty() {
        format!("incompressible: {}", chain.terminal)
    } else {
        chain.to_string()
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let format = cli.format;
    match &cli.command {
        Command::Classify { presentation } => {
            let p = read_presentation(presentation)?;
            let c = classify(&p);
            let sealing = c.sealing_word.as_ref().map(Word::spell);
            let text = format!(
                "special: {}\nsubspecial: {}\nweakly compressible: {}\nsealing word: {}",
                yes_no(c.special),
                yes_no(c.subspecial),
                yes_no(c.weakly_compressible),
                sealing.as_deref().unwrap_or("none")
            );
            emit(out, format, &text, serde_json::to_value(&c)?)?;
            Ok(0)
        }
        Command::Compress {
            presentation,
            chain,
        } => {
            let p = read_presentation(presentation)?;
            let c = if *chain {
                compress_chain(&p)?
            } else {
                let step = compress(&p)?;
                CompressionChain {
                    terminal: step.target.clone(),
                    steps: vec![step],
                }
            };
            emit(out, format, &chain_text(&c), c.to_json())?;
            Ok(0)
        }
        Command::Eq {
            presentation,
            u,
            v,
            base,
            maxlen,
            maxstates,
        } => {
            let p = read_presentation(presentation)?;
            let (u, v) = (p.parse_word(u)?, p.parse_word(v)?);
            let solver = WordProblemSolver::new(&p, &base_strategy(base, *maxlen, *maxstates)?)?;
            let verdict = solver.equal(&u, &v)?;
            let value = json!({
                "verdict": verdict_name(verdict),
                "chain_length": solver.chain().len(),
                "base": solver.base_name(),
            });
            emit(out, format, verdict_name(verdict), value)?;
            Ok(if verdict.is_definite() { 0 } else { 2 })
        }
        Command::BuildWp {
            presentation,
            base_wp,
            out: dir,
        } => {
            let p = read_presentation(presentation)?;
            let chain = compress_chain(&p)?;
            if chain.is_empty() {
                return Err(Error::invalid(format!("{p} is incompressible")));
            }
            let base = match base_wp.as_str() {
                "auto" => terminal_wp_grammar(&chain.terminal)?,
                path => read_grammar(Path::new(path))?,
            };
            let (_, bundles) = build_wp_grammar_chain(&p, &base)?;
            let b = &bundles[0];
            b.save(dir)?;
            let stages: Vec<serde_json::Value> = b
                .stages()
                .map(|(n, g)| json!({"name": n, "productions": g.production_count()}))
                .collect();
            let mut text = format!("alpha: {}\n", b.step.alpha);
            for (n, g) in b.stages() {
                text.push_str(&format!("{n}: {} productions\n", g.production_count()));
            }
            text.push_str(&format!(
                "built_wp: {} productions\nsaved to {}",
                b.built_wp.production_count(),
                dir.display()
            ));
            let value = json!({
                "alpha": b.step.alpha.spell(),
                "chain_length": chain.len(),
                "stages": stages,
                "built_wp_productions": b.built_wp.production_count(),
                "out": dir.display().to_string(),
            });
            emit(out, format, &text, value)?;
            Ok(0)
        }
        Command::Member { bundle, word, v } => {
            let b = WpGrammarBundle::load(bundle)?;
            let letters = b.presentation.alphabet().letters();
            let w = match v {
                Some(v) => {
                    let u = b.presentation.parse_word(word)?;
                    let v = b.presentation.parse_word(v)?;
                    crate::pipeline::wp_word(&u, &v)
                }
                None => {
                    let mut all = letters.to_vec();
                    all.push(Symbol::MARKER);
                    parse_word_over(&all, word)?
                }
            };
            let member = crate::grammars::member(&b.built_wp, &w)?;
            emit(out, format, &member.to_string(), json!({"word": w.spell(), "member": member}))?;
            Ok(0)
        }
        Command::Ratmem { bundle, word, nfa } => {
            let b = WpGrammarBundle::load(bundle)?;
            let w = b.presentation.parse_word(word)?;
            let r = parse_nfa(&read(nfa)?)?;
            if let Some(a) = r
                .alphabet()
                .iter()
                .find(|&&a| !b.presentation.alphabet().contains(a))
            {
                return Err(Error::invalid(format!("automaton letter {a} is not a generator")));
            }
            let member = rational_membership(&b.built_wp, &w, &r)?;
            emit(out, format, &member.to_string(), json!({"member": member}))?;
            Ok(0)
        }
        Command::Idempotent {
            presentation,
            probe_bound,
            report,
            base_wp,
        } => {
            let p = read_presentation(presentation)?;
            if *report {
                let base = base_wp.as_deref().map(read_grammar).transpose()?;
                let r = decide_word_problem_cf(&p, base.as_ref())?;
                emit(out, format, &r.to_string(), r.to_json())?;
                return Ok(if r.idempotent == Idempotent::Unknown { 2 } else { 0 });
            }
            let i = has_nontrivial_idempotent(&p, *probe_bound)?;
            emit(out, format, &i.to_string(), json!({"idempotent": i}))?;
            Ok(if i == Idempotent::Unknown { 2 } else { 0 })
        }
    }
}
