use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::symbol::Word;

use super::automata::{Fst, Nfa};
use super::cfg::{check_guard, production_guard, Cfg, GSym, Production};

/// `L(g) ∩ L(n)`, keeping the terminal alphabet of `g`.
pub fn intersect_regular(g: &Cfg, n: &Nfa) -> Result<Cfg> {
    let t = Fst::from_nfa(n);
    let mut r = transduce(g, &t, "intersect")?;
    r.terminals = g.terminals.clone();
    Ok(r)
}

/// Image of `L(g)` under the rational relation computed by `t`.
pub fn apply_fst(g: &Cfg, t: &Fst) -> Result<Cfg> {
    transduce(g, t, "transduce")
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Triple(u32, u32, u32),
    Eps(u32, u32),
}

/// Triple construction: nonterminals `(X, p, q)` for grammar symbols `X`
/// deriving a word that drives the transducer from `p` to `q`. Productive
/// triples are found bottom-up first; productions are then emitted only for
/// triples reachable from the start.
pub(crate) fn transduce(g: &Cfg, t: &Fst, stage: &str) -> Result<Cfg> {
    let g = g.simplify().binarized();
    let guard = production_guard();
    let nq = t.num_states();
    let has_eps = t.has_epsilon_input();

    let closure: Vec<Vec<u32>> = (0..nq)
        .map(|p| {
            let mut seen = vec![p];
            let mut i = 0;
            while i < seen.len() {
                for arc in t.arcs(seen[i]) {
                    if arc.input.is_none() && !seen.contains(&arc.target) {
                        seen.push(arc.target);
                    }
                }
                i += 1;
            }
            let mut c: Vec<u32> = seen.into_iter().map(|x| x as u32).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let in_closure = |p: usize, q: u32| closure[p].binary_search(&q).is_ok();

    let tcount = g.terminals.len() as u32;
    let term_index: FxHashMap<_, u32> = g
        .terminals
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i as u32))
        .collect();
    let sym = |s: &GSym| -> u32 {
        match *s {
            GSym::T(a) => term_index[&a],
            GSym::N(n) => tcount + n,
        }
    };
    let nsyms = (tcount as usize) + g.names.len();

    let mut unit_parents: Vec<Vec<u32>> = vec![Vec::new(); nsyms];
    let mut first_of: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nsyms];
    let mut second_of: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nsyms];
    let mut nullable_lhs = Vec::new();
    for p in &g.productions {
        let lhs = tcount + p.lhs;
        match p.body.as_slice() {
            [] => nullable_lhs.push(lhs),
            [x] => unit_parents[sym(x) as usize].push(lhs),
            [x, y] => {
                first_of[sym(x) as usize].push((lhs, sym(y)));
                second_of[sym(y) as usize].push((lhs, sym(x)));
            }
            _ => unreachable!("binarized"),
        }
    }

    let mut tr = Triples {
        known: FxHashSet::default(),
        fwd: FxHashMap::default(),
        bwd: FxHashMap::default(),
        queue: Vec::new(),
        limit: guard.saturating_mul(10),
        stage,
    };

    for (i, &a) in g.terminals.iter().enumerate() {
        for p in 0..nq {
            for arc in t.arcs(p) {
                if arc.input == Some(a) {
                    for &q in &closure[arc.target] {
                        tr.add(i as u32, p as u32, q)?;
                    }
                }
            }
        }
    }
    for &lhs in &nullable_lhs {
        for p in 0..nq as u32 {
            tr.add(lhs, p, p)?;
        }
    }

    let mut pending = Vec::new();
    loop {
        let Some((s, p, q)) = tr.queue.pop() else { break };
        pending.clear();
        for &a in &unit_parents[s as usize] {
            pending.push((a, p, q));
        }
        for &(a, y) in &first_of[s as usize] {
            if let Some(qs) = tr.fwd.get(&(y, q)) {
                for &q2 in qs {
                    pending.push((a, p, q2));
                }
            }
        }
        for &(a, x) in &second_of[s as usize] {
            if let Some(ps) = tr.bwd.get(&(x, p)) {
                for &p0 in ps {
                    pending.push((a, p0, q));
                }
            }
        }
        for &(a, p1, q1) in &pending {
            tr.add(a, p1, q1)?;
        }
    }

    // emission
    let by_lhs = g.productions_by_lhs();
    let mut out = Cfg::empty_language(t.output_alphabet());
    let mut ids: FxHashMap<Key, u32> = FxHashMap::default();
    let mut stack: Vec<Key> = Vec::new();
    let start_sym = tcount + g.start;
    for &i in t.initial() {
        for &p in &closure[i] {
            if let Some(fs) = tr.fwd.get(&(start_sym, p)) {
                for &f in fs {
                    if !t.is_accepting(f as usize) {
                        continue;
                    }
                    let mut body = Vec::new();
                    if has_eps {
                        body.push(GSym::N(id_of(&mut ids, Key::Eps(i as u32, p), &mut out, &mut stack)));
                    }
                    body.push(GSym::N(id_of(&mut ids, Key::Triple(start_sym, p, f), &mut out, &mut stack)));
                    out.productions.push(Production { lhs: 0, body });
                }
            }
        }
    }
    let out_word = |w: &Word| w.symbols().iter().map(|&b| GSym::T(b)).collect::<Vec<_>>();
    while let Some(k) = stack.pop() {
        let lhs = ids[&k];
        match k {
            Key::Eps(s, u) => {
                if s == u {
                    out.productions.push(Production { lhs, body: vec![] });
                }
                for arc in t.arcs(s as usize) {
                    if arc.input.is_none() && in_closure(arc.target, u) {
                        let mut body = out_word(&arc.output);
                        body.push(GSym::N(id_of(&mut ids, 
                            Key::Eps(arc.target as u32, u),
                            &mut out,
                            &mut stack,
                        )));
                        out.productions.push(Production { lhs, body });
                    }
                }
            }
            Key::Triple(s, p, q) if s < tcount => {
                let a = g.terminals[s as usize];
                for arc in t.arcs(p as usize) {
                    if arc.input == Some(a) && in_closure(arc.target, q) {
                        let mut body = out_word(&arc.output);
                        if has_eps {
                            body.push(GSym::N(id_of(&mut ids, 
                                Key::Eps(arc.target as u32, q),
                                &mut out,
                                &mut stack,
                            )));
                        }
                        out.productions.push(Production { lhs, body });
                    }
                }
            }
            Key::Triple(s, p, q) => {
                for &pi in &by_lhs[(s - tcount) as usize] {
                    match g.productions[pi].body.as_slice() {
                        [] => {
                            if p == q {
                                out.productions.push(Production { lhs, body: vec![] });
                            }
                        }
                        [x] => {
                            let sx = sym(x);
                            if tr.known.contains(&(sx, p, q)) {
                                let n = id_of(&mut ids, Key::Triple(sx, p, q), &mut out, &mut stack);
                                out.productions.push(Production {
                                    lhs,
                                    body: vec![GSym::N(n)],
                                });
                            }
                        }
                        [x, y] => {
                            let (sx, sy) = (sym(x), sym(y));
                            if let Some(rs) = tr.fwd.get(&(sx, p)) {
                                for &r in rs {
                                    if tr.known.contains(&(sy, r, q)) {
                                        let n1 = id_of(&mut ids, Key::Triple(sx, p, r), &mut out, &mut stack);
                                        let n2 = id_of(&mut ids, Key::Triple(sy, r, q), &mut out, &mut stack);
                                        out.productions.push(Production {
                                            lhs,
                                            body: vec![GSym::N(n1), GSym::N(n2)],
                                        });
                                    }
                                }
                            }
                        }
                        _ => unreachable!("binarized"),
                    }
                }
            }
        }
        check_guard(out.productions.len(), stage)?;
    }
    out.checked(stage)
}

fn id_of(ids: &mut FxHashMap<Key, u32>, k: Key, out: &mut Cfg, stack: &mut Vec<Key>) -> u32 {
    *ids.entry(k).or_insert_with(|| {
        stack.push(k);
        out.add_nonterminal(None)
    })
}

struct Triples<'a> {
    known: FxHashSet<(u32, u32, u32)>,
    fwd: FxHashMap<(u32, u32), Vec<u32>>,
    bwd: FxHashMap<(u32, u32), Vec<u32>>,
    queue: Vec<(u32, u32, u32)>,
    limit: usize,
    stage: &'a str,
}

impl Triples<'_> {
    fn add(&mut self, s: u32, p: u32, q: u32) -> Result<()> {
        if self.known.insert((s, p, q)) {
            if self.known.len() > self.limit {
                return Err(Error::Guard {
                    stage: self.stage.to_string(),
                    what: "triple",
                    count: self.known.len(),
                    limit: self.limit,
                });
            }
            self.fwd.entry((s, p)).or_default().push(q);
            self.bwd.entry((s, q)).or_default().push(p);
            self.queue.push((s, p, q));
        }
        Ok(())
    }
}
