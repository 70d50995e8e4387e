//! Regular tree grammars.
//!
//! Productions are `N -> t` where `t` is a tree over the alphabet in which
//! nonterminals may occur as leaves. Normal form allows only `N -> f(N1..Nn)`
//! and `N -> a`.

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{Rule, TreeRecognizer};
use crate::terms::{into_canonical, is_plain_name, variable_form, Letter, RankedAlphabet, Tree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularTreeGrammar {
    alphabet: RankedAlphabet,
    nonterminals: BTreeSet<String>,
    start: String,
    productions: BTreeSet<(String, Tree)>,
}

impl RegularTreeGrammar {
    pub fn new(
        alphabet: RankedAlphabet,
        nonterminals: impl IntoIterator<Item = String>,
        start: impl Into<String>,
        productions: impl IntoIterator<Item = (String, Tree)>,
    ) -> Result<Self> {
        let g = RegularTreeGrammar {
            alphabet,
            nonterminals: nonterminals.into_iter().collect(),
            start: start.into(),
            productions: productions.into_iter().collect(),
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for n in &self.nonterminals {
            if !is_plain_name(n) || variable_form(n).is_some() {
                return Err(Error::InvalidName(n.clone()));
            }
            if self.alphabet.arity(n).is_some() {
                return Err(Error::Invalid(format!(
                    "nonterminal `{n}` is also an alphabet symbol"
                )));
            }
        }
        if !self.nonterminals.contains(&self.start) {
            return Err(Error::Invalid(format!(
                "start symbol `{}` is not a nonterminal",
                self.start
            )));
        }
        for (n, rhs) in &self.productions {
            if !self.nonterminals.contains(n) {
                return Err(Error::Invalid(format!("`{n}` is not a nonterminal")));
            }
            self.check_rhs(rhs)?;
        }
        Ok(())
    }

    fn check_rhs(&self, t: &Tree) -> Result<()> {
        if let Letter::Sym(s) = t.head() {
            if self.nonterminals.contains(s) {
                if !t.children().is_empty() {
                    return Err(Error::Invalid(format!("nonterminal `{s}` used with arguments")));
                }
                return Ok(());
            }
        }
        let expected = self
            .alphabet
            .letter_arity(t.head())
            .ok_or_else(|| Error::UnknownSymbol(t.head().to_string()))?;
        if expected != t.children().len() {
            return Err(Error::ArityMismatch {
                symbol: t.head().to_string(),
                expected,
                found: t.children().len(),
            });
        }
        t.children().iter().try_for_each(|c| self.check_rhs(c))
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn nonterminals(&self) -> &BTreeSet<String> {
        &self.nonterminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn productions(&self) -> &BTreeSet<(String, Tree)> {
        &self.productions
    }

    fn nonterminal_of<'a>(&self, t: &'a Tree) -> Option<&'a String> {
        match t.head() {
            Letter::Sym(s) if t.children().is_empty() && self.nonterminals.contains(s) => Some(s),
            _ => None,
        }
    }

    /// Whether every production is `N -> f(N1..Nn)` or `N -> a`.
    pub fn is_normal(&self) -> bool {
        self.productions.iter().all(|(_, t)| {
            self.nonterminal_of(t).is_none()
                && t.children().iter().all(|c| self.nonterminal_of(c).is_some())
        })
    }

    /// Trees without nonterminals of at most `max_nodes` nodes derivable
    /// from the start symbol, in enumeration order.
    pub fn generate(&self, max_nodes: usize) -> Vec<Tree> {
        let mut sets: BTreeMap<&String, BTreeSet<Tree>> =
            self.nonterminals.iter().map(|n| (n, BTreeSet::new())).collect();
        loop {
            let mut changed = false;
            for (n, rhs) in &self.productions {
                for t in self.expand(rhs, max_nodes, &sets) {
                    if let Some(set) = sets.get_mut(n) {
                        changed |= set.insert(t);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        into_canonical(sets.remove(&self.start).unwrap_or_default())
    }

    fn lower_bound(&self, t: &Tree) -> usize {
        1 + t.children().iter().map(|c| self.lower_bound(c)).sum::<usize>()
    }

    fn expand(&self, t: &Tree, budget: usize, sets: &BTreeMap<&String, BTreeSet<Tree>>) -> Vec<Tree> {
        if budget == 0 {
            return Vec::new();
        }
        if let Some(n) = self.nonterminal_of(t) {
            return sets[n].iter().filter(|s| s.size() <= budget).cloned().collect();
        }
        let mut partial: Vec<(Vec<Tree>, usize)> = vec![(Vec::new(), 1)];
        let mut rest: usize = t.children().iter().map(|c| self.lower_bound(c)).sum();
        for c in t.children() {
            rest -= self.lower_bound(c);
            let mut next = Vec::new();
            for (kids, used) in &partial {
                let Some(room) = budget.checked_sub(used + rest) else {
                    continue;
                };
                for e in self.expand(c, room, sets) {
                    let mut k = kids.clone();
                    let size = e.size();
                    k.push(e);
                    next.push((k, used + size));
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|(kids, _)| Tree::new(t.head().clone(), kids))
            .collect()
    }

    /// Equivalent grammar in normal form. Nested subtrees get fresh
    /// nonterminals `N__1, N__2, ...` in production order, naming the
    /// children of a node left to right before descending into them; chain
    /// productions are then replaced by their transitive closure.
    pub fn normalize(&self) -> RegularTreeGrammar {
        let mut nonterminals = self.nonterminals.clone();
        let mut counter = 0usize;
        let mut fresh = |nts: &mut BTreeSet<String>| loop {
            counter += 1;
            let name = format!("N__{counter}");
            if !nts.contains(&name) && self.alphabet.arity(&name).is_none() {
                nts.insert(name.clone());
                return name;
            }
        };
        let mut flat: Vec<(String, Tree)> = Vec::new();
        let mut chains: BTreeSet<(String, String)> = BTreeSet::new();
        for (n, rhs) in &self.productions {
            if let Some(m) = self.nonterminal_of(rhs) {
                chains.insert((n.clone(), m.clone()));
                continue;
            }
            let mut queue = VecDeque::from([(n.clone(), rhs.clone())]);
            while let Some((lhs, t)) = queue.pop_front() {
                let (head, children) = t.into_parts();
                let mut named = Vec::with_capacity(children.len());
                for c in children {
                    if let Some(m) = self.nonterminal_of(&c) {
                        named.push(Tree::leaf(m.clone()));
                    } else {
                        let m = fresh(&mut nonterminals);
                        named.push(Tree::leaf(m.clone()));
                        queue.push_back((m, c));
                    }
                }
                flat.push((lhs, Tree::new(head, named)));
            }
        }
        // reflexive-transitive closure of the chain relation
        let mut reach: BTreeMap<&String, BTreeSet<&String>> = nonterminals
            .iter()
            .map(|n| (n, [n].into_iter().collect()))
            .collect();
        loop {
            let mut changed = false;
            for (a, b) in &chains {
                let targets: Vec<&String> = reach
                    .iter()
                    .filter(|(_, r)| r.contains(a))
                    .map(|(n, _)| *n)
                    .collect();
                let b = nonterminals.get(b).expect("validated nonterminal");
                for n in targets {
                    changed |= reach.get_mut(n).expect("present").insert(b);
                }
            }
            if !changed {
                break;
            }
        }
        let mut productions = BTreeSet::new();
        for (n, targets) in &reach {
            for (lhs, t) in &flat {
                if targets.contains(lhs) {
                    productions.insert(((*n).clone(), t.clone()));
                }
            }
        }
        RegularTreeGrammar {
            alphabet: self.alphabet.clone(),
            nonterminals,
            start: self.start.clone(),
            productions,
        }
    }
}

/// States are the nonterminals of the normal form; the start symbol is the
/// only final state.
pub fn grammar_to_recognizer(g: &RegularTreeGrammar) -> TreeRecognizer {
    let n = g.normalize();
    let rules = n
        .productions
        .iter()
        .map(|(lhs, t)| {
            Rule::new(
                t.head().clone(),
                t.children().iter().map(|c| c.head().to_string()).collect(),
                lhs.clone(),
            )
        })
        .collect();
    TreeRecognizer::from_parts(
        n.alphabet.clone(),
        n.nonterminals.clone(),
        [n.start.clone()].into_iter().collect(),
        rules,
    )
}

/// Nonterminals are the useful states plus a fresh start symbol with a
/// chain production to each final state. States whose names clash with
/// alphabet symbols or are not usable as nonterminal names are renamed.
pub fn recognizer_to_grammar(a: &TreeRecognizer) -> RegularTreeGrammar {
    let a = a.trim();
    let alphabet = a.alphabet();
    let usable = |q: &str| {
        is_plain_name(q) && variable_form(q).is_none() && alphabet.arity(q).is_none()
    };
    let mut taken: BTreeSet<String> = a.states().iter().filter(|q| usable(q)).cloned().collect();
    let fresh = |base: &str, taken: &mut BTreeSet<String>| {
        let mut name = String::from(base);
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
            fresh(&format!("Q{i}"), &mut taken)
        };
        rename.insert(q, name);
    }
    let start = fresh("__start", &mut taken);
    let mut productions: BTreeSet<(String, Tree)> = a
        .rules()
        .iter()
        .map(|r| {
            let kids = r.args.iter().map(|q| Tree::leaf(rename[q].clone())).collect();
            (rename[&r.target].clone(), Tree::new(r.symbol.clone(), kids))
        })
        .collect();
    for q in a.finals() {
        productions.insert((start.clone(), Tree::leaf(rename[q].clone())));
    }
    let mut nonterminals: BTreeSet<String> = rename.into_values().collect();
    nonterminals.insert(start.clone());
    RegularTreeGrammar {
        alphabet: alphabet.clone(),
        nonterminals,
        start,
        productions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::tests::{fga, parity};
    use crate::terms::{enumerate_trees, parse_raw};

    fn ga() -> RankedAlphabet {
        RankedAlphabet::new([("g", 1), ("a", 0)]).unwrap()
    }

    fn grammar(al: &RankedAlphabet, nts: &[&str], prods: &[(&str, &str)]) -> RegularTreeGrammar {
        let names: BTreeSet<String> = nts.iter().map(|s| String::from(*s)).collect();
        let prods = prods.iter().map(|(n, t)| {
            let raw = parse_raw(t).unwrap();
            let tree = raw
                .to_tree_with(al, &|s| names.contains(s).then(|| Letter::sym(s)))
                .unwrap();
            (String::from(*n), tree)
        });
        RegularTreeGrammar::new(al.clone(), names.clone(), nts[0], prods).unwrap()
    }

    fn texts(ts: &[Tree]) -> Vec<String> {
        ts.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn generation() {
        let g0 = grammar(&ga(), &["S"], &[("S", "a"), ("S", "g(S)")]);
        assert_eq!(texts(&g0.generate(3)), ["a", "g(a)", "g(g(a))"]);
        let none = grammar(&ga(), &["S"], &[]);
        assert!(none.generate(5).is_empty());
        let fa = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
        let bin = grammar(&fa, &["S"], &[("S", "f(S,S)"), ("S", "a")]);
        assert_eq!(texts(&bin.generate(3)), ["a", "f(a,a)"]);
    }

    #[test]
    fn normal_form_names() {
        let g = grammar(&ga(), &["S"], &[("S", "g(g(a))")]);
        let n = g.normalize();
        assert!(n.is_normal());
        let prods: Vec<String> = n
            .productions()
            .iter()
            .map(|(l, t)| format!("{l} -> {t}"))
            .collect();
        assert_eq!(prods, ["N__1 -> g(N__2)", "N__2 -> a", "S -> g(N__1)"]);

        let chain = grammar(&ga(), &["S", "T"], &[("S", "T"), ("T", "a")]);
        let prods: Vec<String> = chain
            .normalize()
            .productions()
            .iter()
            .map(|(l, t)| format!("{l} -> {t}"))
            .collect();
        assert_eq!(prods, ["S -> a", "T -> a"]);
    }

    #[test]
    fn recognizer_round_trips() {
        let g0 = grammar(&ga(), &["S"], &[("S", "a"), ("S", "g(S)")]);
        let a = grammar_to_recognizer(&g0);
        for t in enumerate_trees(&ga(), 7) {
            assert!(a.accepts(&t).unwrap());
        }
        let empty = grammar_to_recognizer(&grammar(&ga(), &["S"], &[]));
        assert!(enumerate_trees(&ga(), 5).iter().all(|t| !empty.accepts(t).unwrap()));

        let p = parity();
        let g = recognizer_to_grammar(&p);
        let expected: Vec<Tree> = enumerate_trees(&fga(), 7)
            .into_iter()
            .filter(|t| p.accepts(t).unwrap())
            .collect();
        assert_eq!(g.generate(7), expected);
        let back = grammar_to_recognizer(&g);
        for t in enumerate_trees(&fga(), 7) {
            assert_eq!(back.accepts(&t).unwrap(), p.accepts(&t).unwrap());
        }
    }

    #[test]
    fn clashing_state_names_are_renamed() {
        let s = |x: &str| String::from(x);
        let a = TreeRecognizer::new(
            ga(),
            [s("a"), s("{p}")],
            [s("{p}")],
            [Rule::leaf("a", "a"), Rule::new(Letter::sym("g"), vec![s("a")], "{p}")],
        )
        .unwrap();
        let g = recognizer_to_grammar(&a);
        assert!(g.nonterminals().iter().all(|n| g.alphabet().arity(n).is_none()));
        assert_eq!(texts(&g.generate(5)), ["g(a)"]);
    }

    #[test]
    fn invalid_grammars() {
        let s = |x: &str| String::from(x);
        assert!(RegularTreeGrammar::new(ga(), [s("S")], "T", []).is_err());
        assert!(RegularTreeGrammar::new(ga(), [s("a")], "a", []).is_err());
        assert!(RegularTreeGrammar::new(ga(), [s("S")], "S", [(s("S"), Tree::leaf("b"))]).is_err());
    }
}
