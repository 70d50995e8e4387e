//! Minimal recognizers, isomorphism and the syntactic congruence.

use core::fmt;

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{for_each_tuple, min_witnesses, Indexed, Rule, TreeRecognizer};
use crate::terms::{enumerate_over, Letter, Tree};

/// A tree with exactly one occurrence of the hole `x1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Context(Tree);

impl Context {
    pub fn new(tree: Tree) -> Result<Self> {
        if tree.occurrences(1) != 1 {
            return Err(Error::Invalid(format!(
                "context `{tree}` must contain x1 exactly once"
            )));
        }
        Ok(Context(tree))
    }

    pub fn tree(&self) -> &Tree {
        &self.0
    }

    /// Plugs `t` into the hole.
    pub fn apply(&self, t: &Tree) -> Tree {
        self.0.substitute(1, t)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Result of a congruence query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Congruence {
    Congruent,
    /// Separated, with the first separating context in enumeration order.
    Separated(Context),
    /// Separated, but no separating context fits within the search bound.
    SeparatedBeyondBound,
}

impl Congruence {
    pub fn holds(&self) -> bool {
        matches!(self, Congruence::Congruent)
    }
}

/// Renames the states of a deterministic machine whose states are all
/// reachable to `q0, q1, ...` in the order in which enumeration first
/// reaches them.
fn canonical(a: &TreeRecognizer) -> TreeRecognizer {
    let ix = Indexed::new(a);
    let witnesses = min_witnesses(&ix);
    let mut order: Vec<usize> = (0..ix.len()).collect();
    order.sort_by_cached_key(|&q| {
        witnesses[q]
            .as_ref()
            .map(|t| (t.size(), t.to_string()))
            .unwrap_or((usize::MAX, String::new()))
    });
    let mut name = vec![String::new(); ix.len()];
    for (i, &q) in order.iter().enumerate() {
        name[q] = format!("q{i}");
    }
    let index: BTreeMap<&String, usize> = ix.names.iter().enumerate().map(|(i, n)| (n, i)).collect();
    a.map_states(|q| name[index[&String::from(q)]].clone())
}

/// Determinize (complete, reachable subsets), refine the final/non-final
/// partition until it is a congruence, then name the blocks canonically.
pub fn minimize(a: &TreeRecognizer) -> TreeRecognizer {
    let d = a.determinize();
    let ix = Indexed::new(&d);
    let n = ix.len();
    let delta: BTreeMap<(&Letter, &[usize]), usize> = ix
        .trans
        .iter()
        .flat_map(|(l, rules)| rules.iter().map(move |(args, t)| ((l, args.as_slice()), *t)))
        .collect();
    let mut block: Vec<usize> = ix.finals.iter().map(|&f| usize::from(f)).collect();
    let mut count = block.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut signatures: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next = vec![0; n];
        for s in 0..n {
            let mut sig = Vec::new();
            for (letter, k) in &ix.letters {
                for pos in 0..*k {
                    for_each_tuple(n, k - 1, |others| {
                        let mut args = Vec::with_capacity(*k);
                        args.extend_from_slice(&others[..pos]);
                        args.push(s);
                        args.extend_from_slice(&others[pos..]);
                        sig.push(block[delta[&(letter, args.as_slice())]]);
                    });
                }
            }
            let fresh = signatures.len();
            next[s] = *signatures.entry((block[s], sig)).or_insert(fresh);
        }
        block = next;
        if signatures.len() == count {
            break;
        }
        count = signatures.len();
    }
    let block_name = |b: usize| format!("b{b}");
    let rules: BTreeSet<Rule> = ix
        .trans
        .iter()
        .flat_map(|(l, rules)| {
            let block = &block;
            rules.iter().map(move |(args, t)| {
                Rule::new(
                    l.clone(),
                    args.iter().map(|&q| block_name(block[q])).collect(),
                    block_name(block[*t]),
                )
            })
        })
        .collect();
    let states = block.iter().map(|&b| block_name(b)).collect();
    let finals = (0..n)
        .filter(|&q| ix.finals[q])
        .map(|q| block_name(block[q]))
        .collect();
    canonical(&TreeRecognizer::from_parts(d.alphabet().clone(), states, finals, rules))
}

/// Isomorphism of deterministic, complete machines whose states are all
/// reachable, by comparing canonical renamings.
pub fn isomorphic(a: &TreeRecognizer, b: &TreeRecognizer) -> Result<bool> {
    for m in [a, b] {
        if !m.is_deterministic() || !m.is_complete() {
            return Err(Error::Precondition(String::from(
                "isomorphism needs deterministic complete machines",
            )));
        }
        if m.reachable_states().len() != m.states().len() {
            return Err(Error::Precondition(String::from(
                "isomorphism needs every state to be reachable",
            )));
        }
    }
    if a.states().len() != b.states().len() {
        return Ok(false);
    }
    Ok(canonical(a) == canonical(b))
}

/// Number of syntactic classes met by trees, i.e. states of the minimal
/// complete machine.
pub fn index(a: &TreeRecognizer) -> usize {
    minimize(a).states().len()
}

/// Decides `s ≈ t` on the minimal machine. When they are separated, contexts
/// of at most `bound` nodes are searched in enumeration order for a
/// certificate.
pub fn syntactically_congruent(
    a: &TreeRecognizer,
    s: &Tree,
    t: &Tree,
    bound: usize,
) -> Result<Congruence> {
    if !s.is_ground() || !t.is_ground() {
        return Err(Error::Precondition(String::from(
            "congruence is defined on variable-free trees",
        )));
    }
    let m = minimize(a);
    if m.run(s)? == m.run(t)? {
        return Ok(Congruence::Congruent);
    }
    let mut letters: Vec<(Letter, usize)> = a
        .alphabet()
        .symbols()
        .iter()
        .map(|(f, &k)| (Letter::sym(f.clone()), k))
        .collect();
    letters.push((Letter::Var(1), 0));
    for c in enumerate_over(&letters, bound) {
        if c.occurrences(1) != 1 {
            continue;
        }
        let c = Context(c);
        if m.accepts(&c.apply(s))? != m.accepts(&c.apply(t))? {
            return Ok(Congruence::Separated(c));
        }
    }
    Ok(Congruence::SeparatedBeyondBound)
}
