use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::symbol::{Symbol, Word};

use super::cfg::{Cfg, GSym};

/// Membership tester built once per grammar: the grammar is brought into a
/// normal form with productions `A → a`, `A → B` and `A → B C`, and each
/// query runs a CYK table whose cells are closed under unit productions.
pub struct CykParser {
    nts: usize,
    start: u32,
    accepts_empty: bool,
    terminal_parents: FxHashMap<Symbol, Vec<u32>>,
    unit_parents: Vec<Vec<u32>>,
    pair_parents: FxHashMap<(u32, u32), Vec<u32>>,
    by_left: Vec<Vec<u32>>,
}

impl CykParser {
    pub fn new(g: &Cfg) -> CykParser {
        let g = g.simplify();
        let accepts_empty = g.accepts_empty();
        let mut b = g.binarized();
        // terminals inside binary bodies get their own nonterminal
        let mut term_nt: FxHashMap<Symbol, u32> = FxHashMap::default();
        let mut prods = Vec::new();
        for p in std::mem::take(&mut b.productions) {
            if p.body.len() == 2 {
                let mut body = Vec::with_capacity(2);
                for s in &p.body {
                    body.push(match *s {
                        GSym::T(a) => {
                            let n = *term_nt.entry(a).or_insert_with(|| {
                                let n = b.add_nonterminal(None);
                                prods.push((n, vec![GSym::T(a)]));
                                n
                            });
                            GSym::N(n)
                        }
                        n => n,
                    });
                }
                prods.push((p.lhs, body));
            } else {
                prods.push((p.lhs, p.body));
            }
        }
        let nts = b.names.len();
        let mut nullable = vec![false; nts];
        let mut changed = true;
        while changed {
            changed = false;
            for (lhs, body) in &prods {
                if !nullable[*lhs as usize]
                    && body
                        .iter()
                        .all(|s| matches!(s, GSym::N(m) if nullable[*m as usize]))
                {
                    nullable[*lhs as usize] = true;
                    changed = true;
                }
            }
        }
        let mut terminal_parents: FxHashMap<Symbol, Vec<u32>> = FxHashMap::default();
        let mut unit_parents = vec![Vec::new(); nts];
        let mut pair_parents: FxHashMap<(u32, u32), Vec<u32>> = FxHashMap::default();
        let mut by_left: Vec<Vec<u32>> = vec![Vec::new(); nts];
        for (lhs, body) in &prods {
            match body.as_slice() {
                [] => {}
                [GSym::T(a)] => terminal_parents.entry(*a).or_default().push(*lhs),
                [GSym::N(m)] => unit_parents[*m as usize].push(*lhs),
                [GSym::N(x), GSym::N(y)] => {
                    pair_parents.entry((*x, *y)).or_default().push(*lhs);
                    if !by_left[*x as usize].contains(y) {
                        by_left[*x as usize].push(*y);
                    }
                    if nullable[*y as usize] {
                        unit_parents[*x as usize].push(*lhs);
                    }
                    if nullable[*x as usize] {
                        unit_parents[*y as usize].push(*lhs);
                    }
                }
                _ => unreachable!("normal form"),
            }
        }
        for v in unit_parents.iter_mut() {
            v.sort_unstable();
            v.dedup();
        }
        CykParser {
            nts,
            start: b.start,
            accepts_empty,
            terminal_parents,
            unit_parents,
            pair_parents,
            by_left,
        }
    }

    fn close(&self, cell: &mut Vec<u32>, mark: &mut [bool]) {
        let mut i = 0;
        while i < cell.len() {
            let x = cell[i];
            for &a in &self.unit_parents[x as usize] {
                if !mark[a as usize] {
                    mark[a as usize] = true;
                    cell.push(a);
                }
            }
            i += 1;
        }
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let n = w.len();
        if n == 0 {
            return self.accepts_empty;
        }
        // table[i][l-1]: nonterminals deriving w[i..i+l]
        let mut table: Vec<Vec<Vec<u32>>> = vec![Vec::with_capacity(n); n];
        let mut mark = vec![false; self.nts];
        for (i, a) in w.iter().enumerate() {
            let mut cell = Vec::new();
            if let Some(ps) = self.terminal_parents.get(a) {
                for &p in ps {
                    if !mark[p as usize] {
                        mark[p as usize] = true;
                        cell.push(p);
                    }
                }
            }
            self.close(&mut cell, &mut mark);
            for &x in &cell {
                mark[x as usize] = false;
            }
            cell.sort_unstable();
            table[i].push(cell);
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let mut cell = Vec::new();
                for split in 1..len {
                    let left = &table[i][split - 1];
                    let right = &table[i + split][len - split - 1];
                    if right.is_empty() {
                        continue;
                    }
                    for &x in left {
                        for &y in &self.by_left[x as usize] {
                            if right.binary_search(&y).is_ok() {
                                for &a in &self.pair_parents[&(x, y)] {
                                    if !mark[a as usize] {
                                        mark[a as usize] = true;
                                        cell.push(a);
                                    }
                                }
                            }
                        }
                    }
                }
                self.close(&mut cell, &mut mark);
                for &x in &cell {
                    mark[x as usize] = false;
                }
                cell.sort_unstable();
                table[i].push(cell);
            }
        }
        table[0][n - 1].binary_search(&self.start).is_ok()
    }
}

/// `w ∈ L(g)`; letters outside the terminal alphabet are an error.
pub fn member(g: &Cfg, w: &Word) -> Result<bool> {
    if let Some(a) = w.symbols().iter().find(|a| !g.terminals().contains(a)) {
        return Err(Error::invalid(format!(
            "letter {a} is not a terminal of the grammar"
        )));
    }
    Ok(CykParser::new(g).accepts(w.symbols()))
}
