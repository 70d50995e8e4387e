//! Yields of recognizable forests and context-free languages.
//!
//! Derivation trees label a node for nonterminal `N` using a production of
//! length `k` with the symbol `N@k`. An empty production `N -> ε` becomes
//! the node `N@1(eps)`, where `eps` is a reserved leaf with empty yield.

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{Indexed, Rule, TreeRecognizer};
use crate::terms::{is_valid_symbol_name, parse_variable, Letter, RankedAlphabet, Tree};

/// The reserved leaf whose yield is the empty word.
pub const EPS: &str = "eps";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextFreeGrammar {
    terminals: BTreeSet<String>,
    nonterminals: BTreeSet<String>,
    start: String,
    productions: BTreeSet<(String, Vec<String>)>,
}

fn terminal_name_ok(t: &str) -> bool {
    t != EPS && !t.contains('@') && (is_valid_symbol_name(t) || parse_variable(t).is_some())
}

impl ContextFreeGrammar {
    /// Terminals are symbol names or variable names `xN`; nonterminals are
    /// symbol names. Neither may contain `@`, and `eps` is reserved.
    pub fn new(
        terminals: impl IntoIterator<Item = String>,
        nonterminals: impl IntoIterator<Item = String>,
        start: impl Into<String>,
        productions: impl IntoIterator<Item = (String, Vec<String>)>,
    ) -> Result<Self> {
        let g = ContextFreeGrammar {
            terminals: terminals.into_iter().collect(),
            nonterminals: nonterminals.into_iter().collect(),
            start: start.into(),
            productions: productions.into_iter().collect(),
        };
        for t in &g.terminals {
            if !terminal_name_ok(t) {
                return Err(Error::InvalidName(t.clone()));
            }
        }
        for n in &g.nonterminals {
            if n == EPS || n.contains('@') || !is_valid_symbol_name(n) {
                return Err(Error::InvalidName(n.clone()));
            }
            if g.terminals.contains(n) {
                return Err(Error::Invalid(format!("`{n}` is both terminal and nonterminal")));
            }
        }
        if !g.nonterminals.contains(&g.start) {
            return Err(Error::Invalid(format!("start symbol `{}` is not a nonterminal", g.start)));
        }
        for (lhs, rhs) in &g.productions {
            if !g.nonterminals.contains(lhs) {
                return Err(Error::Invalid(format!("`{lhs}` is not a nonterminal")));
            }
            if let Some(s) = rhs
                .iter()
                .find(|s| !g.terminals.contains(*s) && !g.nonterminals.contains(*s))
            {
                return Err(Error::UnknownSymbol(s.clone()));
            }
        }
        Ok(g)
    }

    pub fn terminals(&self) -> &BTreeSet<String> {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &BTreeSet<String> {
        &self.nonterminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn productions(&self) -> &BTreeSet<(String, Vec<String>)> {
        &self.productions
    }

    /// Membership of `w` in `L(G)`, via the derivation-tree recognizer.
    pub fn generates(&self, w: &[String]) -> Result<bool> {
        Ok(yield_member(&cfg_to_derivation_recognizer(self), w)?.is_some())
    }
}

/// Leaf labels from left to right; `eps` leaves contribute nothing.
pub fn tree_yield(t: &Tree) -> Vec<String> {
    t.leaves()
        .into_iter()
        .map(|l| l.to_string())
        .filter(|l| l != EPS)
        .collect()
}

fn terminal_letter(t: &str) -> Letter {
    match parse_variable(t) {
        Some(v) => Letter::Var(v),
        None => Letter::sym(t),
    }
}

/// Recognizer of the derivation trees of `g`. There is one state per
/// terminal and nonterminal (named after it) plus `eps` when the reserved
/// leaf is in the alphabet; the start symbol is final.
pub fn cfg_to_derivation_recognizer(g: &ContextFreeGrammar) -> TreeRecognizer {
    let mut symbols: BTreeMap<String, usize> = BTreeMap::new();
    let mut variables = BTreeSet::new();
    let mut states: BTreeSet<String> = g.nonterminals.clone();
    let mut rules = BTreeSet::new();
    for t in &g.terminals {
        match terminal_letter(t) {
            Letter::Var(v) => {
                variables.insert(v);
            }
            Letter::Sym(s) => {
                symbols.insert(s, 0);
            }
        }
        states.insert(t.clone());
        rules.insert(Rule::new(terminal_letter(t), Vec::new(), t.clone()));
    }
    let needs_eps = g.productions.iter().any(|(_, rhs)| rhs.is_empty()) || symbols.is_empty();
    if needs_eps {
        symbols.insert(String::from(EPS), 0);
        states.insert(String::from(EPS));
        rules.insert(Rule::leaf(EPS, EPS));
    }
    for (lhs, rhs) in &g.productions {
        let (k, args) = if rhs.is_empty() {
            (1, vec![String::from(EPS)])
        } else {
            (rhs.len(), rhs.clone())
        };
        let label = format!("{lhs}@{k}");
        symbols.insert(label.clone(), k);
        rules.insert(Rule::new(Letter::Sym(label), args, lhs.clone()));
    }
    let alphabet = RankedAlphabet::from_map(symbols).with_variables(variables);
    TreeRecognizer::from_parts(
        alphabet,
        states,
        [g.start.clone()].into_iter().collect(),
        rules,
    )
}

/// A grammar generating the yields of `L(a)`: a production `q -> q1...qn`
/// per rule, `q -> a` per leaf rule (`q -> ε` for `eps`) and a fresh start
/// symbol with `S -> q` for each final `q`. States become nonterminals,
/// renamed to `Q<i>` when their names are not usable.
pub fn recognizer_to_cfg(a: &TreeRecognizer) -> ContextFreeGrammar {
    let a = a.trim();
    let mut terminals: BTreeSet<String> = a
        .alphabet()
        .symbols()
        .iter()
        .filter(|(s, k)| **k == 0 && s.as_str() != EPS)
        .map(|(s, _)| s.clone())
        .collect();
    terminals.extend(a.alphabet().variables().iter().map(|v| format!("x{v}")));
    let usable = |q: &str| {
        q != EPS && !q.contains('@') && is_valid_symbol_name(q) && !terminals.contains(q)
    };
    let mut taken: BTreeSet<String> = a.states().iter().filter(|q| usable(q)).cloned().collect();
    let fresh = |base: String, taken: &mut BTreeSet<String>| {
        let mut name = base;
        while taken.contains(&name) || !usable(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        name
    };
    let mut rename: BTreeMap<&String, String> = BTreeMap::new();
    for (i, q) in a.states().iter().enumerate() {
        let name = if usable(q) {
            q.clone()
        } else {
            fresh(format!("Q{i}"), &mut taken)
        };
        rename.insert(q, name);
    }
    let start = fresh(String::from("S__start"), &mut taken);
    let mut productions = BTreeSet::new();
    for r in a.rules() {
        let rhs = if r.args.is_empty() {
            let leaf = r.symbol.to_string();
            if leaf == EPS {
                Vec::new()
            } else {
                vec![leaf]
            }
        } else {
            r.args.iter().map(|q| rename[q].clone()).collect()
        };
        productions.insert((rename[&r.target].clone(), rhs));
    }
    for q in a.finals() {
        productions.insert((start.clone(), vec![rename[q].clone()]));
    }
    let mut nonterminals: BTreeSet<String> = rename.into_values().collect();
    nonterminals.insert(start.clone());
    ContextFreeGrammar {
        terminals,
        nonterminals,
        start,
        productions,
    }
}

type Best = Option<(usize, String, Tree)>;

fn improve(slot: &mut Best, t: Tree) -> bool {
    let key = (t.size(), t.to_string());
    match slot {
        Some((s, text, _)) if (*s, text.as_str()) <= (key.0, key.1.as_str()) => false,
        _ => {
            *slot = Some((key.0, key.1, t));
            true
        }
    }
}

/// Calls `f` with every way of cutting `[i, j)` into `k` consecutive,
/// possibly empty spans, given as `k + 1` boundaries.
fn for_each_split(i: usize, j: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(bounds: &mut Vec<usize>, j: usize, left: usize, f: &mut impl FnMut(&[usize])) {
        if left == 0 {
            bounds.push(j);
            f(bounds);
            bounds.pop();
            return;
        }
        let from = *bounds.last().expect("nonempty");
        for b in from..=j {
            bounds.push(b);
            go(bounds, j, left - 1, f);
            bounds.pop();
        }
    }
    let mut bounds = vec![i];
    go(&mut bounds, j, k - 1, f);
}

/// Some tree of `L(a)` whose yield is `w`, the least in enumeration order,
/// or `None`. Dynamic programming over spans: `best[i][j][q]` is the least
/// tree reaching `q` with yield `w[i..j)`. Empty spans are handled by the
/// nullable-state fixpoint, and each span is iterated to a fixpoint since
/// unary chains and nullable siblings make it depend on itself.
pub fn yield_member(a: &TreeRecognizer, w: &[String]) -> Result<Option<Tree>> {
    for s in w {
        let ok = s != EPS && a.alphabet().letter_arity(&terminal_letter(s)) == Some(0);
        if !ok {
            return Err(Error::UnknownSymbol(s.clone()));
        }
    }
    let ix = Indexed::new(a);
    let n = w.len();
    let q = ix.len();
    let mut best: Vec<Vec<Vec<Best>>> = vec![vec![vec![None; q]; n + 1]; n + 1];
    let eps = Letter::sym(EPS);
    for len in 0..=n {
        for i in 0..=n - len {
            let j = i + len;
            loop {
                let mut changed = false;
                for (letter, rules) in &ix.trans {
                    for (args, target) in rules {
                        if args.is_empty() {
                            let fits = if len == 0 {
                                *letter == eps
                            } else {
                                len == 1 && *letter != eps && letter.to_string() == w[i]
                            };
                            if fits {
                                changed |= improve(&mut best[i][j][*target], Tree::new(letter.clone(), Vec::new()));
                            }
                            continue;
                        }
                        let mut found: Vec<Tree> = Vec::new();
                        for_each_split(i, j, args.len(), &mut |b| {
                            let kids: Option<Vec<Tree>> = args
                                .iter()
                                .enumerate()
                                .map(|(c, &p)| best[b[c]][b[c + 1]][p].as_ref().map(|x| x.2.clone()))
                                .collect();
                            if let Some(kids) = kids {
                                found.push(Tree::new(letter.clone(), kids));
                            }
                        });
                        for t in found {
                            changed |= improve(&mut best[i][j][*target], t);
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    Ok((0..q)
        .filter(|&s| ix.finals[s])
        .filter_map(|s| best[0][n][s].take())
        .min_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)))
        .map(|x| x.2))
}
