//! Root-to-frontier recognizers, path closure and the DR-recognizability test.

use crate::decide;
use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{Rule, TreeRecognizer};
use crate::terms::{fresh_name, Letter, RankedAlphabet, Tree};

/// `q f -> (q1,...,qn)`: in state `q` at an `f` node, continue in `qi` at
/// child `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootRule {
    pub state: String,
    pub symbol: Letter,
    pub children: Vec<String>,
}

/// A root-to-frontier recognizer. Deterministic machines are the sub-case
/// reported by [`RootRecognizer::is_deterministic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootRecognizer {
    alphabet: RankedAlphabet,
    states: BTreeSet<String>,
    initial: BTreeSet<String>,
    rules: BTreeSet<RootRule>,
    leaf_accept: BTreeSet<(String, Letter)>,
}

impl RootRecognizer {
    pub fn new(
        alphabet: RankedAlphabet,
        states: impl IntoIterator<Item = String>,
        initial: impl IntoIterator<Item = String>,
        rules: impl IntoIterator<Item = RootRule>,
        leaf_accept: impl IntoIterator<Item = (String, Letter)>,
    ) -> Result<Self> {
        let r = RootRecognizer {
            alphabet,
            states: states.into_iter().collect(),
            initial: initial.into_iter().collect(),
            rules: rules.into_iter().collect(),
            leaf_accept: leaf_accept.into_iter().collect(),
        };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let known = |q: &String| {
            if self.states.contains(q) {
                Ok(())
            } else {
                Err(Error::UnknownState(q.clone()))
            }
        };
        self.initial.iter().try_for_each(known)?;
        for r in &self.rules {
            let arity = self
                .alphabet
                .letter_arity(&r.symbol)
                .ok_or_else(|| Error::UnknownSymbol(r.symbol.to_string()))?;
            if arity == 0 || arity != r.children.len() {
                return Err(Error::ArityMismatch {
                    symbol: r.symbol.to_string(),
                    expected: arity,
                    found: r.children.len(),
                });
            }
            known(&r.state)?;
            r.children.iter().try_for_each(known)?;
        }
        for (q, a) in &self.leaf_accept {
            known(q)?;
            match self.alphabet.letter_arity(a) {
                Some(0) => {}
                Some(k) => {
                    return Err(Error::ArityMismatch {
                        symbol: a.to_string(),
                        expected: k,
                        found: 0,
                    })
                }
                None => return Err(Error::UnknownSymbol(a.to_string())),
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<String> {
        &self.initial
    }

    pub fn rules(&self) -> &BTreeSet<RootRule> {
        &self.rules
    }

    pub fn leaf_accept(&self) -> &BTreeSet<(String, Letter)> {
        &self.leaf_accept
    }

    /// One initial state and at most one rule per `(q, f)`.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.initial.len() == 1 && self.rules.iter().all(|r| seen.insert((&r.state, &r.symbol)))
    }

    /// The set of states from which `t` is accepted.
    fn accepting_states(&self, t: &Tree) -> Result<BTreeSet<&String>> {
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
        if arity == 0 {
            return Ok(self
                .leaf_accept
                .iter()
                .filter(|(_, a)| a == t.head())
                .map(|(q, _)| q)
                .collect());
        }
        let below = t
            .children()
            .iter()
            .map(|c| self.accepting_states(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .rules
            .iter()
            .filter(|r| &r.symbol == t.head())
            .filter(|r| r.children.iter().zip(&below).all(|(q, s)| s.contains(q)))
            .map(|r| &r.state)
            .collect())
    }

    pub fn run_root(&self, t: &Tree) -> Result<bool> {
        Ok(self
            .accepting_states(t)?
            .iter()
            .any(|q| self.initial.contains(*q)))
    }

    /// Reverses the direction: initial states become final, `q f -> (qs)`
    /// becomes `f(qs) -> q`, and leaf acceptance becomes a nullary rule.
    pub fn to_frontier(&self) -> TreeRecognizer {
        let mut rules: BTreeSet<Rule> = self
            .rules
            .iter()
            .map(|r| Rule::new(r.symbol.clone(), r.children.clone(), r.state.clone()))
            .collect();
        rules.extend(
            self.leaf_accept
                .iter()
                .map(|(q, a)| Rule::new(a.clone(), Vec::new(), q.clone())),
        );
        TreeRecognizer::from_parts(
            self.alphabet.clone(),
            self.states.clone(),
            self.initial.clone(),
            rules,
        )
    }
}

/// Frontier-to-root machine to root-to-frontier machine with the same language.
pub fn to_root(a: &TreeRecognizer) -> RootRecognizer {
    let mut rules = BTreeSet::new();
    let mut leaves = BTreeSet::new();
    for r in a.rules() {
        if r.args.is_empty() {
            leaves.insert((r.target.clone(), r.symbol.clone()));
        } else {
            rules.insert(RootRule {
                state: r.target.clone(),
                symbol: r.symbol.clone(),
                children: r.args.clone(),
            });
        }
    }
    RootRecognizer {
        alphabet: a.alphabet().clone(),
        states: a.states().clone(),
        initial: a.finals().clone(),
        rules,
        leaf_accept: leaves,
    }
}

pub fn from_root(r: &RootRecognizer) -> TreeRecognizer {
    r.to_frontier()
}

fn subset_name(s: &BTreeSet<&String>) -> String {
    let members: Vec<&str> = s.iter().map(|q| q.as_str()).collect();
    format!("{{{}}}", members.join("_"))
}

/// Deterministic root-to-frontier machine over subsets of the trimmed
/// machine's states, accepting the path closure of `L(a)`.
pub fn path_closure(a: &TreeRecognizer) -> RootRecognizer {
    let a = a.trim();
    let start: BTreeSet<&String> = a.finals().iter().collect();
    let mut names: BTreeMap<BTreeSet<&String>, String> = BTreeMap::new();
    let mut taken = BTreeSet::new();
    fn name_of<'a>(
        s: &BTreeSet<&'a String>,
        names: &mut BTreeMap<BTreeSet<&'a String>, String>,
        taken: &mut BTreeSet<String>,
    ) -> String {
        names
            .entry(s.clone())
            .or_insert_with(|| {
                let n = fresh_name(&subset_name(s), taken);
                taken.insert(n.clone());
                n
            })
            .clone()
    }
    let initial = name_of(&start, &mut names, &mut taken);
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::new();
    let mut rules = BTreeSet::new();
    let mut leaves = BTreeSet::new();
    while let Some(s) = queue.pop_front() {
        if !seen.insert(s.clone()) {
            continue;
        }
        let here = name_of(&s, &mut names, &mut taken);
        for (letter, k) in a.alphabet().letters() {
            let matching: Vec<&Rule> = a
                .rules()
                .iter()
                .filter(|r| r.symbol == letter && s.contains(&r.target))
                .collect();
            if matching.is_empty() {
                continue;
            }
            if k == 0 {
                leaves.insert((here.clone(), letter.clone()));
                continue;
            }
            let mut children = Vec::with_capacity(k);
            for i in 0..k {
                let child: BTreeSet<&String> = matching.iter().map(|r| &r.args[i]).collect();
                children.push(name_of(&child, &mut names, &mut taken));
                queue.push_back(child);
            }
            rules.insert(RootRule {
                state: here.clone(),
                symbol: letter,
                children,
            });
        }
    }
    RootRecognizer {
        alphabet: a.alphabet().clone(),
        states: names.into_values().collect(),
        initial: [initial].into_iter().collect(),
        rules,
        leaf_accept: leaves,
    }
}

/// Recognizable forests are DR-recognizable exactly when path-closed.
pub fn is_dr_recognizable(a: &TreeRecognizer) -> bool {
    decide::equivalent(&from_root(&path_closure(a)), a)
        .map(|e| e.holds())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::tests::parity;
    use crate::terms::{enumerate_trees, parse_tree};

    fn fab() -> RankedAlphabet {
        RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).unwrap()
    }

    fn r1() -> RootRecognizer {
        let s = |x: &str| String::from(x);
        RootRecognizer::new(
            fab(),
            [s("p"), s("p1"), s("p2")],
            [s("p")],
            [RootRule {
                state: s("p"),
                symbol: Letter::sym("f"),
                children: vec![s("p1"), s("p2")],
            }],
            [(s("p1"), Letter::sym("a")), (s("p2"), Letter::sym("b"))],
        )
        .unwrap()
    }

    #[test]
    fn root_runs() {
        let t = |s| parse_tree(s, &fab()).unwrap();
        assert!(r1().run_root(&t("f(a,b)")).unwrap());
        assert!(!r1().run_root(&t("f(b,a)")).unwrap());
        let no_init = RootRecognizer::new(
            fab(),
            r1().states().iter().cloned(),
            [],
            r1().rules().iter().cloned(),
            r1().leaf_accept().iter().cloned(),
        )
        .unwrap();
        assert!(!no_init.run_root(&t("f(a,b)")).unwrap());
        assert!(r1().is_deterministic());
    }

    #[test]
    fn direction_round_trip() {
        let p = parity();
        let r = to_root(&p);
        assert!(r.run_root(&parse_tree("f(a,a)", p.alphabet()).unwrap()).unwrap());
        let back = from_root(&r);
        assert_eq!(back, p);
        for t in enumerate_trees(p.alphabet(), 7) {
            assert_eq!(r.run_root(&t).unwrap(), p.accepts(&t).unwrap());
        }
        let empty = to_root(&TreeRecognizer::empty(fab()));
        assert!(empty.states().is_empty() && empty.rules().is_empty());
    }

    fn finite(trees: &[&str], al: &RankedAlphabet) -> TreeRecognizer {
        let ts: Vec<Tree> = trees.iter().map(|s| parse_tree(s, al).unwrap()).collect();
        TreeRecognizer::from_trees(al.clone(), &ts).unwrap()
    }

    #[test]
    fn path_closure_adds_mixed_trees() {
        let a = finite(&["f(a,b)", "f(b,a)"], &fab());
        let pc = path_closure(&a);
        assert!(pc.is_deterministic());
        let accepted: Vec<String> = enumerate_trees(&fab(), 7)
            .into_iter()
            .filter(|t| pc.run_root(t).unwrap())
            .map(|t| t.to_string())
            .collect();
        assert_eq!(accepted, ["f(a,a)", "f(a,b)", "f(b,a)", "f(b,b)"]);
        assert!(!is_dr_recognizable(&a));
    }

    #[test]
    fn unary_chains_are_path_closed() {
        let ga = RankedAlphabet::new([("g", 1), ("a", 0)]).unwrap();
        let s = |x: &str| String::from(x);
        let chains = TreeRecognizer::new(
            ga.clone(),
            [s("q")],
            [s("q")],
            [Rule::leaf("a", "q"), Rule::new(Letter::sym("g"), vec![s("q")], "q")],
        )
        .unwrap();
        let pc = path_closure(&chains);
        for t in enumerate_trees(&ga, 8) {
            assert!(pc.run_root(&t).unwrap());
        }
        assert!(is_dr_recognizable(&chains));
    }

    #[test]
    fn empty_language_is_path_closed() {
        let e = TreeRecognizer::empty(fab());
        let pc = path_closure(&e);
        assert!(pc.is_deterministic());
        for t in enumerate_trees(&fab(), 5) {
            assert!(!pc.run_root(&t).unwrap());
        }
        assert!(is_dr_recognizable(&e));
    }
}
