//! Frontier-to-root tree recognizers.

use core::fmt;

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::terms::{fresh_name, Letter, RankedAlphabet, Tree};

/// `symbol(args...) -> target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub symbol: Letter,
    pub args: Vec<String>,
    pub target: String,
}

impl Rule {
    pub fn new(symbol: Letter, args: Vec<String>, target: impl Into<String>) -> Self {
        Rule {
            symbol,
            args,
            target: target.into(),
        }
    }

    pub fn leaf(symbol: impl Into<String>, target: impl Into<String>) -> Self {
        Rule::new(Letter::Sym(symbol.into()), Vec::new(), target)
    }
}

impl fmt::Display for Rule {
    /// `a -> q` or `f(q1,...,qn) -> q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        write!(f, " -> {}", self.target)
    }
}

/// A (possibly nondeterministic) frontier-to-root recognizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRecognizer {
    alphabet: RankedAlphabet,
    states: BTreeSet<String>,
    finals: BTreeSet<String>,
    rules: BTreeSet<Rule>,
}

impl TreeRecognizer {
    pub fn new(
        alphabet: RankedAlphabet,
        states: impl IntoIterator<Item = String>,
        finals: impl IntoIterator<Item = String>,
        rules: impl IntoIterator<Item = Rule>,
    ) -> Result<Self> {
        let a = TreeRecognizer {
            alphabet,
            states: states.into_iter().collect(),
            finals: finals.into_iter().collect(),
            rules: rules.into_iter().collect(),
        };
        a.validate()?;
        Ok(a)
    }

    pub(crate) fn from_parts(
        alphabet: RankedAlphabet,
        states: BTreeSet<String>,
        finals: BTreeSet<String>,
        rules: BTreeSet<Rule>,
    ) -> Self {
        let a = TreeRecognizer {
            alphabet,
            states,
            finals,
            rules,
        };
        debug_assert!(a.validate().is_ok(), "{:?}", a.validate());
        a
    }

    fn validate(&self) -> Result<()> {
        for q in &self.finals {
            if !self.states.contains(q) {
                return Err(Error::UnknownState(q.clone()));
            }
        }
        for r in &self.rules {
            let arity = self
                .alphabet
                .letter_arity(&r.symbol)
                .ok_or_else(|| Error::UnknownSymbol(r.symbol.to_string()))?;
            if arity != r.args.len() {
                return Err(Error::ArityMismatch {
                    symbol: r.symbol.to_string(),
                    expected: arity,
                    found: r.args.len(),
                });
            }
            for q in r.args.iter().chain(core::iter::once(&r.target)) {
                if !self.states.contains(q) {
                    return Err(Error::UnknownState(q.clone()));
                }
            }
        }
        Ok(())
    }

    /// A recognizer with no states: accepts nothing.
    pub fn empty(alphabet: RankedAlphabet) -> Self {
        TreeRecognizer::from_parts(alphabet, BTreeSet::new(), BTreeSet::new(), BTreeSet::new())
    }

    /// One final state accepting every tree over the alphabet.
    pub fn universal(alphabet: RankedAlphabet) -> Self {
        let q = String::from("q");
        let rules = alphabet
            .letters()
            .into_iter()
            .map(|(l, k)| Rule::new(l, vec![q.clone(); k], q.clone()))
            .collect();
        let states: BTreeSet<String> = [q].into_iter().collect();
        TreeRecognizer::from_parts(alphabet, states.clone(), states, rules)
    }

    /// Recognizer for an explicit finite forest. States are `t0, t1, ...`,
    /// one per distinct subtree in enumeration order.
    pub fn from_trees(alphabet: RankedAlphabet, trees: &[Tree]) -> Result<Self> {
        let mut alphabet = alphabet;
        for t in trees {
            alphabet.check(t)?;
            alphabet = alphabet.with_variables(t.variables());
        }
        let mut subtrees = BTreeSet::new();
        fn collect<'a>(t: &'a Tree, out: &mut BTreeSet<&'a Tree>) {
            out.insert(t);
            t.children().iter().for_each(|c| collect(c, out));
        }
        trees.iter().for_each(|t| collect(t, &mut subtrees));
        let ordered = crate::terms::into_canonical(subtrees.into_iter().cloned());
        let names: BTreeMap<&Tree, String> = ordered
            .iter()
            .enumerate()
            .map(|(i, t)| (t, format!("t{i}")))
            .collect();
        let rules = ordered
            .iter()
            .map(|t| {
                Rule::new(
                    t.head().clone(),
                    t.children().iter().map(|c| names[c].clone()).collect(),
                    names[t].clone(),
                )
            })
            .collect();
        let finals = trees.iter().map(|t| names[t].clone()).collect();
        let states = names.values().cloned().collect();
        Ok(TreeRecognizer::from_parts(alphabet, states, finals, rules))
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn finals(&self) -> &BTreeSet<String> {
        &self.finals
    }

    pub fn rules(&self) -> &BTreeSet<Rule> {
        &self.rules
    }

    /// Same machine over a larger frontier alphabet (symbols must match).
    pub fn with_alphabet(&self, alphabet: &RankedAlphabet) -> Result<Self> {
        let merged = self.alphabet.merge(alphabet)?;
        let mut a = self.clone();
        a.alphabet = merged;
        Ok(a)
    }

    pub fn with_finals(&self, finals: impl IntoIterator<Item = String>) -> Result<Self> {
        TreeRecognizer::new(
            self.alphabet.clone(),
            self.states.iter().cloned(),
            finals,
            self.rules.iter().cloned(),
        )
    }

    /// Renames every state through `f`, which must be injective on the
    /// state set.
    pub fn map_states(&self, mut f: impl FnMut(&str) -> String) -> Self {
        let map: BTreeMap<&String, String> = self.states.iter().map(|q| (q, f(q))).collect();
        debug_assert_eq!(
            map.values().collect::<BTreeSet<_>>().len(),
            map.len(),
            "state renaming must be injective"
        );
        TreeRecognizer::from_parts(
            self.alphabet.clone(),
            map.values().cloned().collect(),
            self.finals.iter().map(|q| map[q].clone()).collect(),
            self.rules
                .iter()
                .map(|r| Rule {
                    symbol: r.symbol.clone(),
                    args: r.args.iter().map(|q| map[q].clone()).collect(),
                    target: map[&r.target].clone(),
                })
                .collect(),
        )
    }

    /// No two rules share a left-hand side `(f, q1..qn)`.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.rules.iter().all(|r| seen.insert((&r.symbol, &r.args)))
    }

    /// Every left-hand side over the state set has at least one rule.
    pub fn is_complete(&self) -> bool {
        let n = self.states.len();
        let mut lhs: BTreeMap<&Letter, BTreeSet<&Vec<String>>> = BTreeMap::new();
        for r in &self.rules {
            lhs.entry(&r.symbol).or_default().insert(&r.args);
        }
        self.alphabet.letters().iter().all(|(l, k)| {
            let have = lhs.get(l).map_or(0, BTreeSet::len);
            match n.checked_pow(*k as u32) {
                Some(need) => have == need,
                None => false,
            }
        })
    }

    /// States reachable at the root of `t`. Shared subtrees are evaluated once.
    pub fn run(&self, t: &Tree) -> Result<BTreeSet<String>> {
        let ix = Indexed::new(self);
        let states = ix.eval(t)?;
        Ok(states.iter().map(|&i| ix.names[i].clone()).collect())
    }

    /// Plain recursive evaluation without memoization.
    pub fn run_naive(&self, t: &Tree) -> Result<BTreeSet<String>> {
        let arity = self
            .alphabet
            .letter_arity(t.head())
            .ok_or_else(|| Error::UnknownSymbol(t.head().to_string()))?;
        if arity != t.children().len() {
            return Err(Error::ArityMismatch {
                symbol: t.head().to_string(),
                expected: arity,
                found: t.children().len(),
            });
        }
        let child_sets = t
            .children()
            .iter()
            .map(|c| self.run_naive(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .rules
            .iter()
            .filter(|r| &r.symbol == t.head())
            .filter(|r| r.args.iter().zip(&child_sets).all(|(q, s)| s.contains(q)))
            .map(|r| r.target.clone())
            .collect())
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        let ix = Indexed::new(self);
        Ok(ix.eval(t)?.iter().any(|&q| ix.finals[q]))
    }

    /// Subset construction over reachable subsets. The result is
    /// deterministic and complete; a state is named `{q1_q2}` after its
    /// sorted members (`{}` for the empty subset).
    pub fn determinize(&self) -> TreeRecognizer {
        let ix = Indexed::new(self);
        let (subsets, table) = subset_construction(&ix);
        let mut taken = BTreeSet::new();
        let names: Vec<String> = subsets
            .iter()
            .map(|s| {
                let members: Vec<&str> = s.iter().map(|&i| ix.names[i].as_str()).collect();
                let name = fresh_name(&format!("{{{}}}", members.join("_")), &taken);
                taken.insert(name.clone());
                name
            })
            .collect();
        let finals = subsets
            .iter()
            .zip(&names)
            .filter(|(s, _)| s.iter().any(|&q| ix.finals[q]))
            .map(|(_, n)| n.clone())
            .collect();
        let rules = table
            .into_iter()
            .map(|(l, args, t)| {
                Rule::new(
                    l,
                    args.iter().map(|&i| names[i].clone()).collect(),
                    names[t].clone(),
                )
            })
            .collect();
        TreeRecognizer::from_parts(self.alphabet.clone(), taken, finals, rules)
    }

    /// Adds a non-final sink `__sink` and sends every missing left-hand side
    /// to it. Complete machines are returned unchanged.
    pub fn complete(&self) -> TreeRecognizer {
        if self.is_complete() {
            return self.clone();
        }
        let sink = fresh_name("__sink", &self.states);
        let mut states = self.states.clone();
        states.insert(sink.clone());
        let all: Vec<&String> = states.iter().collect();
        let present: BTreeSet<(&Letter, &Vec<String>)> =
            self.rules.iter().map(|r| (&r.symbol, &r.args)).collect();
        let mut rules = self.rules.clone();
        for (letter, k) in self.alphabet.letters() {
            for_each_tuple(all.len(), k, |tuple| {
                let args: Vec<String> = tuple.iter().map(|&i| all[i].clone()).collect();
                if !present.contains(&(&letter, &args)) {
                    rules.insert(Rule::new(letter.clone(), args, sink.clone()));
                }
            });
        }
        TreeRecognizer::from_parts(self.alphabet.clone(), states, self.finals.clone(), rules)
    }

    /// States that appear in the run of some tree.
    pub fn reachable_states(&self) -> BTreeSet<String> {
        let mut reach: BTreeSet<&String> = BTreeSet::new();
        loop {
            let before = reach.len();
            for r in &self.rules {
                if !reach.contains(&r.target) && r.args.iter().all(|q| reach.contains(q)) {
                    reach.insert(&r.target);
                }
            }
            if reach.len() == before {
                break;
            }
        }
        reach.into_iter().cloned().collect()
    }

    /// Keeps the states that are both reachable and co-reachable, with the
    /// rules among them.
    pub fn trim(&self) -> TreeRecognizer {
        let reach = self.reachable_states();
        let live_rules: Vec<&Rule> = self
            .rules
            .iter()
            .filter(|r| reach.contains(&r.target) && r.args.iter().all(|q| reach.contains(q)))
            .collect();
        let mut useful: BTreeSet<&String> =
            self.finals.iter().filter(|q| reach.contains(*q)).collect();
        loop {
            let before = useful.len();
            for r in &live_rules {
                if useful.contains(&r.target) {
                    useful.extend(r.args.iter());
                }
            }
            if useful.len() == before {
                break;
            }
        }
        let rules = live_rules
            .into_iter()
            .filter(|r| useful.contains(&r.target))
            .cloned()
            .collect();
        TreeRecognizer::from_parts(
            self.alphabet.clone(),
            useful.iter().map(|q| (*q).clone()).collect(),
            self.finals
                .iter()
                .filter(|q| useful.contains(q))
                .cloned()
                .collect(),
            rules,
        )
    }

    /// Smallest tree (size, then canonical text) reaching each state;
    /// `None` for unreachable states.
    pub fn state_witnesses(&self) -> BTreeMap<String, Option<Tree>> {
        let ix = Indexed::new(self);
        let w = min_witnesses(&ix);
        ix.names.iter().cloned().zip(w).collect()
    }
}

/// Index-based view of a recognizer used by the algorithms.
pub(crate) struct Indexed {
    pub names: Vec<String>,
    pub finals: Vec<bool>,
    pub letters: Vec<(Letter, usize)>,
    pub trans: BTreeMap<Letter, Vec<(Vec<usize>, usize)>>,
    pub alphabet: RankedAlphabet,
}

impl Indexed {
    pub fn new(a: &TreeRecognizer) -> Self {
        let names: Vec<String> = a.states.iter().cloned().collect();
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let finals = names.iter().map(|n| a.finals.contains(n)).collect();
        let mut trans: BTreeMap<Letter, Vec<(Vec<usize>, usize)>> = BTreeMap::new();
        for r in &a.rules {
            trans.entry(r.symbol.clone()).or_default().push((
                r.args.iter().map(|q| index[q.as_str()]).collect(),
                index[r.target.as_str()],
            ));
        }
        Indexed {
            names,
            finals,
            letters: a.alphabet.letters(),
            trans,
            alphabet: a.alphabet.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn step(&self, letter: &Letter, children: &[&BTreeSet<usize>]) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        if let Some(rules) = self.trans.get(letter) {
            for (args, target) in rules {
                if args.iter().zip(children).all(|(q, s)| s.contains(q)) {
                    out.insert(*target);
                }
            }
        }
        out
    }

    pub fn eval(&self, t: &Tree) -> Result<BTreeSet<usize>> {
        let mut memo = BTreeMap::new();
        self.eval_memo(t, &mut memo).cloned()
    }

    fn eval_memo<'t, 'm>(
        &self,
        t: &'t Tree,
        memo: &'m mut BTreeMap<&'t Tree, BTreeSet<usize>>,
    ) -> Result<&'m BTreeSet<usize>> {
        if !memo.contains_key(t) {
            let arity = self
                .alphabet
                .letter_arity(t.head())
                .ok_or_else(|| Error::UnknownSymbol(t.head().to_string()))?;
            if arity != t.children().len() {
                return Err(Error::ArityMismatch {
                    symbol: t.head().to_string(),
                    expected: arity,
                    found: t.children().len(),
                });
            }
            let mut sets = Vec::with_capacity(arity);
            for c in t.children() {
                sets.push(self.eval_memo(c, memo)?.clone());
            }
            let refs: Vec<&BTreeSet<usize>> = sets.iter().collect();
            let out = self.step(t.head(), &refs);
            memo.insert(t, out);
        }
        Ok(&memo[t])
    }
}

/// Calls `f` with every tuple in `{0..n}^k`, in lexicographic order.
pub(crate) fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > 0 && n == 0 {
        return;
    }
    let mut tuple = vec![0usize; k];
    loop {
        f(&tuple);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Reachable subsets and the complete deterministic transition table over
/// them, as `(letter, argument subset indices, target subset index)`.
pub(crate) fn subset_construction(
    ix: &Indexed,
) -> (Vec<BTreeSet<usize>>, Vec<(Letter, Vec<usize>, usize)>) {
    let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut table = Vec::new();
    let mut done: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    loop {
        let known = subsets.len();
        let mut new_entries = Vec::new();
        for (li, (letter, k)) in ix.letters.iter().enumerate() {
            for_each_tuple(known, *k, |tuple| {
                if done.contains(&(li, tuple.to_vec())) {
                    return;
                }
                let args: Vec<&BTreeSet<usize>> = tuple.iter().map(|&i| &subsets[i]).collect();
                let target = ix.step(letter, &args);
                new_entries.push((li, tuple.to_vec(), target));
            });
        }
        if new_entries.is_empty() {
            break;
        }
        for (li, tuple, target) in new_entries {
            let t = *index.entry(target.clone()).or_insert_with(|| {
                subsets.push(target);
                subsets.len() - 1
            });
            done.insert((li, tuple.clone()));
            table.push((ix.letters[li].0.clone(), tuple, t));
        }
    }
    (subsets, table)
}

type Ranked = (usize, String, Tree);

fn better(candidate: &Ranked, current: &Option<Ranked>) -> bool {
    match current {
        None => true,
        Some(c) => (candidate.0, &candidate.1) < (c.0, &c.1),
    }
}

/// Least fixpoint of "smallest tree reaching q". Each update strictly
/// decreases in (size, text) order, so the loop terminates.
pub(crate) fn min_witnesses(ix: &Indexed) -> Vec<Option<Tree>> {
    let mut best: Vec<Option<Ranked>> = vec![None; ix.len()];
    loop {
        let mut changed = false;
        for (letter, rules) in &ix.trans {
            for (args, target) in rules {
                if args.iter().any(|&q| best[q].is_none()) {
                    continue;
                }
                let children: Vec<Tree> = args
                    .iter()
                    .map(|&q| best[q].as_ref().map(|b| b.2.clone()).unwrap_or_else(|| unreachable!()))
                    .collect();
                let t = Tree::new(letter.clone(), children);
                let cand = (t.size(), t.to_string(), t);
                if better(&cand, &best[*target]) {
                    best[*target] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    best.into_iter().map(|b| b.map(|b| b.2)).collect()
}
