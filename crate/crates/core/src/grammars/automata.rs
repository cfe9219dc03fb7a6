use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::symbol::{Symbol, Word};

use super::cfg::dedup;

/// Default bound on the number of subset states a determinization may build.
pub const DEFAULT_STATE_GUARD: usize = 10_000;

/// Nondeterministic finite automaton with ε-arcs.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Vec<Symbol>,
    arcs: Vec<Vec<(Option<Symbol>, usize)>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

impl Nfa {
    /// An automaton with no states.
    pub fn new(alphabet: &[Symbol]) -> Nfa {
        Nfa {
            alphabet: dedup(alphabet.iter().copied()),
            arcs: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.arcs.push(Vec::new());
        self.accepting.push(accepting);
        self.arcs.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, label: Option<Symbol>, to: usize) {
        if let Some(a) = label {
            if !self.alphabet.contains(&a) {
                self.alphabet.push(a);
            }
        }
        self.arcs[from].push((label, to));
    }

    pub fn set_initial(&mut self, state: usize) {
        if !self.initial.contains(&state) {
            self.initial.push(state);
        }
    }

    pub fn set_accepting(&mut self, state: usize, accepting: bool) {
        self.accepting[state] = accepting;
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn arcs(&self, state: usize) -> &[(Option<Symbol>, usize)] {
        &self.arcs[state]
    }

    pub fn has_epsilon(&self) -> bool {
        self.arcs.iter().flatten().any(|(l, _)| l.is_none())
    }

    /// Extends the alphabet without adding arcs.
    pub fn with_alphabet(mut self, extra: &[Symbol]) -> Nfa {
        for &a in extra {
            if !self.alphabet.contains(&a) {
                self.alphabet.push(a);
            }
        }
        self
    }

    pub fn empty(alphabet: &[Symbol]) -> Nfa {
        let mut n = Nfa::new(alphabet);
        let s = n.add_state(false);
        n.set_initial(s);
        n
    }

    pub fn epsilon(alphabet: &[Symbol]) -> Nfa {
        let mut n = Nfa::new(alphabet);
        let s = n.add_state(true);
        n.set_initial(s);
        n
    }

    pub fn word(alphabet: &[Symbol], w: &Word) -> Nfa {
        let mut n = Nfa::new(alphabet);
        let mut cur = n.add_state(w.is_empty());
        n.set_initial(cur);
        for (i, &a) in w.symbols().iter().enumerate() {
            let next = n.add_state(i + 1 == w.len());
            n.add_arc(cur, Some(a), next);
            cur = next;
        }
        n
    }

    /// Finite language given by a list of words (trie shaped).
    pub fn words<'a>(alphabet: &[Symbol], words: impl IntoIterator<Item = &'a Word>) -> Nfa {
        let mut n = Nfa::new(alphabet);
        let root = n.add_state(false);
        n.set_initial(root);
        let mut trie: FxHashMap<(usize, Symbol), usize> = FxHashMap::default();
        for w in words {
            let mut cur = root;
            for &a in w.symbols() {
                cur = match trie.get(&(cur, a)) {
                    Some(&q) => q,
                    None => {
                        let q = n.add_state(false);
                        n.add_arc(cur, Some(a), q);
                        trie.insert((cur, a), q);
                        q
                    }
                };
            }
            n.accepting[cur] = true;
        }
        n
    }

    /// One-letter words over `letters`.
    pub fn letters(alphabet: &[Symbol], letters: &[Symbol]) -> Nfa {
        let mut n = Nfa::new(alphabet);
        let s = n.add_state(false);
        let f = n.add_state(true);
        n.set_initial(s);
        for &a in letters {
            n.add_arc(s, Some(a), f);
        }
        n
    }

    /// `letters*`, with the automaton alphabet `alphabet ∪ letters`.
    pub fn star_of_letters(alphabet: &[Symbol], letters: &[Symbol]) -> Nfa {
        let mut n = Nfa::new(alphabet);
        let s = n.add_state(true);
        n.set_initial(s);
        for &a in letters {
            n.add_arc(s, Some(a), s);
        }
        n
    }

    /// `A*` over the whole alphabet.
    pub fn universal(alphabet: &[Symbol]) -> Nfa {
        Nfa::star_of_letters(alphabet, alphabet)
    }

    /// Words of length at most `n`.
    pub fn bounded_length(alphabet: &[Symbol], n: usize) -> Nfa {
        let mut a = Nfa::new(alphabet);
        for _ in 0..=n {
            a.add_state(true);
        }
        a.set_initial(0);
        for i in 0..n {
            for &x in alphabet {
                a.add_arc(i, Some(x), i + 1);
            }
        }
        a
    }

    /// `A* w A*`.
    pub fn containing_factor(alphabet: &[Symbol], w: &Word) -> Nfa {
        let star = Nfa::universal(alphabet);
        star.concat(&Nfa::word(alphabet, w)).concat(&star)
    }

    /// `A* − A* w A*`.
    pub fn avoiding_factor(alphabet: &[Symbol], w: &Word) -> Result<Nfa> {
        Nfa::containing_factor(alphabet, w).complement()
    }

    fn offset_copy(&mut self, other: &Nfa) -> usize {
        let off = self.arcs.len();
        for &a in &other.alphabet {
            if !self.alphabet.contains(&a) {
                self.alphabet.push(a);
            }
        }
        for (p, arcs) in other.arcs.iter().enumerate() {
            self.arcs.push(arcs.iter().map(|&(l, q)| (l, q + off)).collect());
            self.accepting.push(other.accepting[p]);
        }
        off
    }

    pub fn union(&self, other: &Nfa) -> Nfa {
        let mut n = self.clone();
        let off = n.offset_copy(other);
        for &i in &other.initial {
            n.set_initial(i + off);
        }
        n
    }

    pub fn concat(&self, other: &Nfa) -> Nfa {
        let mut n = self.clone();
        let finals: Vec<usize> = (0..n.arcs.len()).filter(|&p| n.accepting[p]).collect();
        for &p in &finals {
            n.accepting[p] = false;
        }
        let off = n.offset_copy(other);
        for &p in &finals {
            for &i in &other.initial {
                n.arcs[p].push((None, i + off));
            }
        }
        n
    }

    pub fn star(&self) -> Nfa {
        let mut n = Nfa::new(&self.alphabet);
        let hub = n.add_state(true);
        n.set_initial(hub);
        let off = n.offset_copy(self);
        for &i in &self.initial {
            n.arcs[hub].push((None, i + off));
        }
        for p in 0..self.arcs.len() {
            if self.accepting[p] {
                n.arcs[p + off].push((None, hub));
            }
        }
        n
    }

    pub fn reverse(&self) -> Nfa {
        let mut n = Nfa::new(&self.alphabet);
        for _ in 0..self.arcs.len() {
            n.add_state(false);
        }
        for &i in &self.initial {
            n.accepting[i] = true;
        }
        for (p, arcs) in self.arcs.iter().enumerate() {
            for &(l, q) in arcs {
                n.arcs[q].push((l, p));
            }
            if self.accepting[p] {
                n.set_initial(p);
            }
        }
        n
    }

    /// Applies a letter-to-letter renaming; unmapped letters are kept.
    pub fn rename(&self, map: &HashMap<Symbol, Symbol>) -> Nfa {
        let f = |a: Symbol| *map.get(&a).unwrap_or(&a);
        Nfa {
            alphabet: dedup(self.alphabet.iter().map(|&a| f(a))),
            arcs: self
                .arcs
                .iter()
                .map(|arcs| arcs.iter().map(|&(l, q)| (l.map(f), q)).collect())
                .collect(),
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
        }
    }

    pub fn epsilon_closure(&self, states: &mut Vec<usize>) {
        let mut seen: FxHashSet<usize> = states.iter().copied().collect();
        let mut i = 0;
        while i < states.len() {
            let p = states[i];
            for &(l, q) in &self.arcs[p] {
                if l.is_none() && seen.insert(q) {
                    states.push(q);
                }
            }
            i += 1;
        }
        states.sort_unstable();
    }

    /// Equivalent automaton without ε-arcs.
    pub fn remove_epsilon(&self) -> Nfa {
        if !self.has_epsilon() {
            return self.clone();
        }
        let mut n = Nfa::new(&self.alphabet);
        for _ in 0..self.arcs.len() {
            n.add_state(false);
        }
        for p in 0..self.arcs.len() {
            let mut cl = vec![p];
            self.epsilon_closure(&mut cl);
            let mut seen = FxHashSet::default();
            for &r in &cl {
                if self.accepting[r] {
                    n.accepting[p] = true;
                }
                for &(l, q) in &self.arcs[r] {
                    if l.is_some() && seen.insert((l, q)) {
                        n.arcs[p].push((l, q));
                    }
                }
            }
        }
        n.initial = self.initial.clone();
        n.trim()
    }

    /// Keeps only states that are reachable and co-reachable.
    pub fn trim(&self) -> Nfa {
        let k = self.arcs.len();
        let mut fwd = vec![false; k];
        let mut stack: Vec<usize> = self.initial.clone();
        for &i in &stack {
            fwd[i] = true;
        }
        while let Some(p) = stack.pop() {
            for &(_, q) in &self.arcs[p] {
                if !fwd[q] {
                    fwd[q] = true;
                    stack.push(q);
                }
            }
        }
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (p, arcs) in self.arcs.iter().enumerate() {
            for &(_, q) in arcs {
                rev[q].push(p);
            }
        }
        let mut bwd = vec![false; k];
        let mut stack: Vec<usize> = (0..k).filter(|&p| self.accepting[p]).collect();
        for &p in &stack {
            bwd[p] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut renum = vec![usize::MAX; k];
        let mut n = Nfa::new(&self.alphabet);
        for p in 0..k {
            if fwd[p] && bwd[p] {
                renum[p] = n.add_state(self.accepting[p]);
            }
        }
        for (p, arcs) in self.arcs.iter().enumerate() {
            if renum[p] == usize::MAX {
                continue;
            }
            for &(l, q) in arcs {
                if renum[q] != usize::MAX {
                    n.arcs[renum[p]].push((l, renum[q]));
                }
            }
        }
        for &i in &self.initial {
            if renum[i] != usize::MAX {
                n.set_initial(renum[i]);
            }
        }
        if n.arcs.is_empty() {
            return Nfa::empty(&self.alphabet);
        }
        n
    }

    /// Complete deterministic automaton over the current alphabet.
    pub fn determinize(&self) -> Result<Nfa> {
        self.determinize_with_guard(DEFAULT_STATE_GUARD)
    }

    pub fn determinize_with_guard(&self, guard: usize) -> Result<Nfa> {
        let mut start = self.initial.clone();
        self.epsilon_closure(&mut start);
        let mut index: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
        let mut d = Nfa::new(&self.alphabet);
        let s0 = d.add_state(start.iter().any(|&p| self.accepting[p]));
        d.set_initial(s0);
        index.insert(start.clone(), s0);
        let mut queue = VecDeque::from([start]);
        while let Some(set) = queue.pop_front() {
            let from = index[&set];
            let mut moves: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
            for &p in &set {
                for &(l, q) in &self.arcs[p] {
                    if let Some(a) = l {
                        moves.entry(a).or_default().push(q);
                    }
                }
            }
            for &a in &self.alphabet.clone() {
                let mut target = moves.remove(&a).unwrap_or_default();
                target.sort_unstable();
                target.dedup();
                self.epsilon_closure(&mut target);
                target.dedup();
                let to = match index.get(&target) {
                    Some(&t) => t,
                    None => {
                        if index.len() >= guard {
                            return Err(Error::Guard {
                                stage: "determinize".into(),
                                what: "state",
                                count: index.len() + 1,
                                limit: guard,
                            });
                        }
                        let t = d.add_state(target.iter().any(|&p| self.accepting[p]));
                        index.insert(target.clone(), t);
                        queue.push_back(target);
                        t
                    }
                };
                d.arcs[from].push((Some(a), to));
            }
        }
        Ok(d)
    }

    /// Complement relative to `alphabet*`.
    pub fn complement(&self) -> Result<Nfa> {
        let mut d = self.determinize()?;
        for acc in &mut d.accepting {
            *acc = !*acc;
        }
        Ok(d)
    }

    /// Product automaton; the alphabet is that of `self`.
    pub fn intersect(&self, other: &Nfa) -> Nfa {
        let a = self.remove_epsilon();
        let b = other.remove_epsilon();
        let mut n = Nfa::new(&self.alphabet);
        let mut index: FxHashMap<(usize, usize), usize> = FxHashMap::default();
        let mut queue = VecDeque::new();
        for &i in &a.initial {
            for &j in &b.initial {
                let s = n.add_state(a.accepting[i] && b.accepting[j]);
                index.insert((i, j), s);
                n.set_initial(s);
                queue.push_back((i, j));
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let from = index[&(p, q)];
            for &(l, p2) in &a.arcs[p] {
                for &(m, q2) in &b.arcs[q] {
                    if l != m {
                        continue;
                    }
                    let to = match index.get(&(p2, q2)) {
                        Some(&t) => t,
                        None => {
                            let t = n.add_state(a.accepting[p2] && b.accepting[q2]);
                            index.insert((p2, q2), t);
                            queue.push_back((p2, q2));
                            t
                        }
                    };
                    n.arcs[from].push((l, to));
                }
            }
        }
        if n.arcs.is_empty() {
            return Nfa::empty(&self.alphabet);
        }
        n.trim()
    }

    /// `L(self) − L(other)`.
    pub fn difference(&self, other: &Nfa) -> Result<Nfa> {
        let all = dedup(self.alphabet.iter().chain(other.alphabet.iter()).copied());
        let comp = other.clone().with_alphabet(&all).complement()?;
        Ok(self.intersect(&comp))
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut cur = self.initial.clone();
        self.epsilon_closure(&mut cur);
        for &a in w {
            let mut next: Vec<usize> = cur
                .iter()
                .flat_map(|&p| self.arcs[p].iter())
                .filter(|(l, _)| *l == Some(a))
                .map(|&(_, q)| q)
                .collect();
            next.sort_unstable();
            next.dedup();
            self.epsilon_closure(&mut next);
            next.dedup();
            if next.is_empty() {
                return false;
            }
            cur = next;
        }
        cur.iter().any(|&p| self.accepting[p])
    }

    pub fn is_empty(&self) -> bool {
        !self.trim().accepting.iter().any(|&a| a)
    }

    /// Accepted words of length at most `maxlen`.
    pub fn enumerate(&self, maxlen: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut start = self.initial.clone();
        self.epsilon_closure(&mut start);
        start.dedup();
        let mut layer: FxHashMap<Vec<Symbol>, Vec<usize>> = FxHashMap::default();
        layer.insert(Vec::new(), start);
        for len in 0..=maxlen {
            let mut next: FxHashMap<Vec<Symbol>, Vec<usize>> = FxHashMap::default();
            for (w, states) in &layer {
                if states.iter().any(|&p| self.accepting[p]) {
                    out.insert(Word::new(w.clone()));
                }
                if len == maxlen {
                    continue;
                }
                for &p in states {
                    for &(l, q) in &self.arcs[p] {
                        if let Some(a) = l {
                            let mut w2 = w.clone();
                            w2.push(a);
                            next.entry(w2).or_default().push(q);
                        }
                    }
                }
            }
            for states in next.values_mut() {
                states.sort_unstable();
                states.dedup();
                self.epsilon_closure(states);
                states.dedup();
            }
            layer = next;
        }
        out
    }
}

/// A transition of a finite-state transducer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FstArc {
    pub input: Option<Symbol>,
    pub output: Word,
    pub target: usize,
}

/// Finite-state transducer reading one symbol (or ε) and writing a word per arc.
#[derive(Clone, Debug)]
pub struct Fst {
    input: Vec<Symbol>,
    output: Vec<Symbol>,
    arcs: Vec<Vec<FstArc>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

impl Fst {
    pub fn new(input: &[Symbol], output: &[Symbol]) -> Fst {
        Fst {
            input: dedup(input.iter().copied()),
            output: dedup(output.iter().copied()),
            arcs: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.arcs.push(Vec::new());
        self.accepting.push(accepting);
        self.arcs.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, input: Option<Symbol>, output: Word, to: usize) {
        if let Some(a) = input {
            if !self.input.contains(&a) {
                self.input.push(a);
            }
        }
        for &b in output.symbols() {
            if !self.output.contains(&b) {
                self.output.push(b);
            }
        }
        self.arcs[from].push(FstArc {
            input,
            output,
            target: to,
        });
    }

    pub fn set_initial(&mut self, state: usize) {
        if !self.initial.contains(&state) {
            self.initial.push(state);
        }
    }

    pub fn input_alphabet(&self) -> &[Symbol] {
        &self.input
    }

    pub fn output_alphabet(&self) -> &[Symbol] {
        &self.output
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn arcs(&self, state: usize) -> &[FstArc] {
        &self.arcs[state]
    }

    pub fn has_epsilon_input(&self) -> bool {
        self.arcs.iter().flatten().any(|a| a.input.is_none())
    }

    /// Copies every word of `alphabet*`.
    pub fn identity(alphabet: &[Symbol]) -> Fst {
        let mut t = Fst::new(alphabet, alphabet);
        let s = t.add_state(true);
        t.set_initial(s);
        for &a in alphabet {
            t.add_arc(s, Some(a), Word::letter(a), s);
        }
        t
    }

    /// Copies exactly the words of `L(n)`.
    pub fn from_nfa(n: &Nfa) -> Fst {
        let n = n.remove_epsilon();
        let mut t = Fst::new(n.alphabet(), n.alphabet());
        for p in 0..n.num_states() {
            t.add_state(n.is_accepting(p));
        }
        for p in 0..n.num_states() {
            for &(l, q) in n.arcs(p) {
                t.add_arc(p, l, l.map(Word::letter).unwrap_or_default(), q);
            }
        }
        for &i in n.initial() {
            t.set_initial(i);
        }
        t
    }

    /// The homomorphism `a ↦ h(a)`; letters without an image are rejected.
    pub fn hom(h: &HashMap<Symbol, Word>) -> Fst {
        let mut keys: Vec<Symbol> = h.keys().copied().collect();
        keys.sort();
        let mut t = Fst::new(&keys, &[]);
        let s = t.add_state(true);
        t.set_initial(s);
        for a in keys {
            t.add_arc(s, Some(a), h[&a].clone(), s);
        }
        t
    }

    /// Relation `{(h(x), x)}` for a homomorphism `h: B* → A*`: applied to a
    /// language `L ⊆ A*` it yields `h⁻¹(L)`.
    pub fn inverse_hom(h: &HashMap<Symbol, Word>) -> Fst {
        let mut keys: Vec<Symbol> = h.keys().copied().collect();
        keys.sort();
        let mut t = Fst::new(&[], &keys);
        let hub = t.add_state(true);
        t.set_initial(hub);
        for b in keys {
            let img = h[&b].symbols().to_vec();
            match img.len() {
                0 => t.add_arc(hub, None, Word::letter(b), hub),
                1 => t.add_arc(hub, Some(img[0]), Word::letter(b), hub),
                k => {
                    let mut cur = hub;
                    for (i, &a) in img.iter().enumerate() {
                        let (next, out) = if i + 1 == k {
                            (hub, Word::letter(b))
                        } else {
                            (t.add_state(false), Word::empty())
                        };
                        t.add_arc(cur, Some(a), out, next);
                        cur = next;
                    }
                }
            }
        }
        t
    }

    /// Applies `left` before the first `marker` and `right` after it; the
    /// marker itself is copied. Words with two markers are rejected.
    pub fn marker_keyed(
        marker: Symbol,
        left: &HashMap<Symbol, Word>,
        right: &HashMap<Symbol, Word>,
    ) -> Fst {
        let mut t = Fst::new(&[marker], &[marker]);
        let l = t.add_state(true);
        let r = t.add_state(true);
        t.set_initial(l);
        let mut lk: Vec<_> = left.iter().collect();
        lk.sort();
        for (&a, w) in lk {
            t.add_arc(l, Some(a), w.clone(), l);
        }
        let mut rk: Vec<_> = right.iter().collect();
        rk.sort();
        for (&a, w) in rk {
            t.add_arc(r, Some(a), w.clone(), r);
        }
        t.add_arc(l, Some(marker), Word::letter(marker), r);
        t
    }

    /// Outputs for input `w`, cut off at output length `maxlen`.
    pub fn outputs(&self, w: &[Symbol], maxlen: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut seen: FxHashSet<(usize, usize, Vec<Symbol>)> = FxHashSet::default();
        let mut queue: VecDeque<(usize, usize, Vec<Symbol>)> = self
            .initial
            .iter()
            .map(|&i| (i, 0usize, Vec::new()))
            .collect();
        while let Some((p, pos, o)) = queue.pop_front() {
            if !seen.insert((p, pos, o.clone())) {
                continue;
            }
            if pos == w.len() && self.accepting[p] {
                out.insert(Word::new(o.clone()));
            }
            for arc in &self.arcs[p] {
                let npos = match arc.input {
                    None => pos,
                    Some(a) if pos < w.len() && w[pos] == a => pos + 1,
                    _ => continue,
                };
                if o.len() + arc.output.len() > maxlen {
                    continue;
                }
                let mut o2 = o.clone();
                o2.extend_from_slice(arc.output.symbols());
                queue.push_back((arc.target, npos, o2));
            }
        }
        out
    }
}
