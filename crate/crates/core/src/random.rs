//! Seeded random instances for property tests and benchmarks. Every
//! generator is a pure function of the RNG state.

use rand::Rng;

use crate::grammar::RegularTreeGrammar;
use crate::prelude::*;
use crate::recognizer::{for_each_tuple, Rule, TreeRecognizer};
use crate::terms::{Letter, RankedAlphabet, Tree};
use crate::transducer::{
    BottomUpTransducer, BuRule, LaRule, LookaheadTransducer, Rhs, TdRule, TopDownTransducer,
};

/// A tree of at most `max_nodes` nodes (at least one node); subtrees are
/// grown while budget remains, then closed with nullary symbols.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, alphabet: &RankedAlphabet, max_nodes: usize) -> Tree {
    let leaves: Vec<&String> = alphabet
        .symbols()
        .iter()
        .filter(|(_, &k)| k == 0)
        .map(|(s, _)| s)
        .collect();
    let inner: Vec<(&String, usize)> = alphabet
        .symbols()
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(s, &k)| (s, k))
        .collect();
    fn grow<R: Rng + ?Sized>(
        rng: &mut R,
        leaves: &[&String],
        inner: &[(&String, usize)],
        budget: usize,
    ) -> Tree {
        let fits: Vec<&(&String, usize)> = inner.iter().filter(|(_, k)| *k < budget).collect();
        if fits.is_empty() || rng.gen_bool(0.35) {
            return Tree::leaf(leaves[rng.gen_range(0..leaves.len())].clone());
        }
        let (f, k) = fits[rng.gen_range(0..fits.len())];
        let mut left = budget - 1;
        let mut kids = Vec::with_capacity(*k);
        for i in 0..*k {
            let reserve = k - i - 1;
            let share = rng.gen_range(1..=left - reserve);
            let kid = grow(rng, leaves, inner, share);
            left -= kid.size();
            kids.push(kid);
        }
        Tree::node((*f).clone(), kids)
    }
    grow(rng, &leaves, &inner, max_nodes.max(1))
}

/// A nondeterministic recognizer with 1 to `max_states` states `q0..`,
/// each possible rule present with probability `density`, and each state
/// final with probability one half.
pub fn random_recognizer<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    max_states: usize,
    density: f64,
) -> TreeRecognizer {
    let n = rng.gen_range(1..=max_states.max(1));
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut rules = BTreeSet::new();
    for (letter, k) in alphabet.letters() {
        for_each_tuple(n, k, |args| {
            for target in &names {
                if rng.gen_bool(density) {
                    rules.insert(Rule::new(
                        letter.clone(),
                        args.iter().map(|&i| names[i].clone()).collect(),
                        target.clone(),
                    ));
                }
            }
        });
    }
    let finals: BTreeSet<String> = names.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    TreeRecognizer::from_parts(alphabet.clone(), names.into_iter().collect(), finals, rules)
}

/// The same language presented with every state duplicated: `q` and `q'`
/// carry identical rules, with arguments chosen between copies at random.
pub fn duplicate_states<R: Rng + ?Sized>(rng: &mut R, a: &TreeRecognizer) -> TreeRecognizer {
    let copy = |q: &str| format!("{q}'");
    let mut states = a.states().clone();
    states.extend(a.states().iter().map(|q| copy(q)));
    let mut finals = a.finals().clone();
    finals.extend(a.finals().iter().map(|q| copy(q)));
    let mut rules = BTreeSet::new();
    for r in a.rules() {
        for target in [r.target.clone(), copy(&r.target)] {
            let args = r
                .args
                .iter()
                .map(|q| if rng.gen_bool(0.5) { copy(q) } else { q.clone() })
                .collect();
            rules.insert(Rule::new(r.symbol.clone(), args, target));
        }
        // keep every original combination available
        rules.insert(r.clone());
        let primed: Vec<String> = r.args.iter().map(|q| copy(q)).collect();
        rules.insert(Rule::new(r.symbol.clone(), primed, copy(&r.target)));
    }
    TreeRecognizer::from_parts(a.alphabet().clone(), states, finals, rules)
}

/// A grammar with nonterminals `S, N1, ...` and up to `max_productions`
/// productions whose right sides have at most `max_nodes` nodes.
pub fn random_grammar<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    max_nonterminals: usize,
    max_productions: usize,
    max_nodes: usize,
) -> RegularTreeGrammar {
    let n = rng.gen_range(1..=max_nonterminals.max(1));
    let names: Vec<String> = (0..n)
        .map(|i| if i == 0 { String::from("S") } else { format!("N{i}") })
        .collect();
    let mut extended = alphabet.symbols().clone();
    for nt in &names {
        extended.insert(nt.clone(), 0);
    }
    let extended = RankedAlphabet::from_map(extended);
    let count = rng.gen_range(0..=max_productions);
    let productions: Vec<(String, Tree)> = (0..count)
        .map(|_| {
            let lhs = names[rng.gen_range(0..n)].clone();
            (lhs, random_tree(rng, &extended, max_nodes))
        })
        .collect();
    RegularTreeGrammar::new(alphabet.clone(), names, "S", productions)
        .expect("generated grammar is well-formed")
}

/// Shape constraints for random top-down transducers.
#[derive(Debug, Clone, Copy, Default)]
pub struct TdShape {
    pub linear: bool,
    pub nondeleting: bool,
    pub deterministic: bool,
    pub total: bool,
}

fn random_rhs<R: Rng + ?Sized>(
    rng: &mut R,
    output: &RankedAlphabet,
    states: &[String],
    calls: &[usize],
) -> Rhs {
    let nullary: Vec<&String> = output.symbols().iter().filter(|(_, &k)| k == 0).map(|(s, _)| s).collect();
    if calls.is_empty() {
        return Rhs::Out(nullary[rng.gen_range(0..nullary.len())].clone(), Vec::new());
    }
    if calls.len() == 1 && rng.gen_bool(0.3) {
        return Rhs::call(states[rng.gen_range(0..states.len())].clone(), calls[0]);
    }
    let inner: Vec<(&String, usize)> = output
        .symbols()
        .iter()
        .filter(|(_, &k)| k > 0 && k <= calls.len().max(1) + 1)
        .map(|(s, &k)| (s, k))
        .collect();
    if inner.is_empty() {
        return Rhs::call(states[rng.gen_range(0..states.len())].clone(), calls[0]);
    }
    let (f, k) = inner[rng.gen_range(0..inner.len())];
    // distribute the calls over k slots, in order
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &c in calls {
        slots[rng.gen_range(0..k)].push(c);
    }
    let kids = slots
        .iter()
        .map(|s| {
            if s.len() == 1 {
                Rhs::call(states[rng.gen_range(0..states.len())].clone(), s[0])
            } else {
                random_rhs(rng, output, states, s)
            }
        })
        .collect();
    Rhs::Out(f.clone(), kids)
}

fn child_calls<R: Rng + ?Sized>(rng: &mut R, arity: usize, shape: TdShape) -> Vec<usize> {
    let mut calls = Vec::new();
    for i in 1..=arity {
        let times = match (shape.linear, shape.nondeleting) {
            (true, true) => 1,
            (true, false) => rng.gen_range(0..=1),
            (false, true) => rng.gen_range(1..=2),
            (false, false) => rng.gen_range(0..=2),
        };
        calls.extend(core::iter::repeat_n(i, times));
    }
    calls
}

pub fn random_td<R: Rng + ?Sized>(
    rng: &mut R,
    input: &RankedAlphabet,
    output: &RankedAlphabet,
    max_states: usize,
    shape: TdShape,
) -> TopDownTransducer {
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut rules = BTreeSet::new();
    for q in &states {
        for (f, &k) in input.symbols() {
            let count = if shape.deterministic {
                usize::from(shape.total || rng.gen_bool(0.8))
            } else {
                let low = usize::from(shape.total);
                rng.gen_range(low..=2)
            };
            for _ in 0..count {
                let calls = child_calls(rng, k, shape);
                let rhs = random_rhs(rng, output, &states, &calls);
                rules.insert(TdRule::new(q.clone(), f.clone(), rhs));
            }
        }
    }
    if shape.deterministic {
        // duplicates collapse in the set; keep the first rule per (q, f)
        let mut seen = BTreeSet::new();
        rules.retain(|r| seen.insert((r.state.clone(), r.symbol.clone())));
    }
    let initial: BTreeSet<String> = if shape.deterministic || rng.gen_bool(0.7) {
        [states[0].clone()].into_iter().collect()
    } else {
        states.iter().take(2).cloned().collect()
    };
    TopDownTransducer::new(input.clone(), output.clone(), states, initial, rules)
        .expect("generated transducer is well-formed")
}

pub fn random_bu<R: Rng + ?Sized>(
    rng: &mut R,
    input: &RankedAlphabet,
    output: &RankedAlphabet,
    max_states: usize,
    density: f64,
) -> BottomUpTransducer {
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut rules = BTreeSet::new();
    for (f, &k) in input.symbols() {
        for_each_tuple(n, k, |args| {
            for target in &states {
                if rng.gen_bool(density) {
                    let vars: Vec<Tree> = (1..=k as u32)
                        .flat_map(|i| core::iter::repeat_n(Tree::var(i), rng.gen_range(0..=2)))
                        .collect();
                    let rhs = random_output(rng, output, vars);
                    rules.insert(BuRule::new(
                        f.clone(),
                        args.iter().map(|&i| states[i].clone()).collect(),
                        target.clone(),
                        rhs,
                    ));
                }
            }
        });
    }
    let finals: BTreeSet<String> = states.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    BottomUpTransducer::new(input.clone(), output.clone(), states, finals, rules)
        .expect("generated transducer is well-formed")
}

/// An output tree with the given leaves plugged in somewhere.
fn random_output<R: Rng + ?Sized>(rng: &mut R, output: &RankedAlphabet, leaves: Vec<Tree>) -> Tree {
    let nullary: Vec<&String> = output.symbols().iter().filter(|(_, &k)| k == 0).map(|(s, _)| s).collect();
    let inner: Vec<(&String, usize)> = output.symbols().iter().filter(|(_, &k)| k > 0).map(|(s, &k)| (s, k)).collect();
    if leaves.is_empty() {
        return Tree::leaf(nullary[rng.gen_range(0..nullary.len())].clone());
    }
    if leaves.len() == 1 && (inner.is_empty() || rng.gen_bool(0.4)) {
        return leaves.into_iter().next().expect("one leaf");
    }
    if inner.is_empty() {
        return leaves.into_iter().next().expect("nonempty");
    }
    let (f, k) = inner[rng.gen_range(0..inner.len())];
    let mut slots: Vec<Vec<Tree>> = vec![Vec::new(); k];
    for l in leaves {
        slots[rng.gen_range(0..k)].push(l);
    }
    let kids = slots.into_iter().map(|s| random_output(rng, output, s)).collect();
    Tree::node(f.clone(), kids)
}

/// A look-ahead transducer of the given shape whose guards are small
/// random recognizers (or absent).
pub fn random_la<R: Rng + ?Sized>(
    rng: &mut R,
    input: &RankedAlphabet,
    output: &RankedAlphabet,
    max_states: usize,
    shape: TdShape,
) -> LookaheadTransducer {
    let base = random_td(rng, input, output, max_states, shape);
    let pool: Vec<TreeRecognizer> = (0..2).map(|_| random_recognizer(rng, input, 2, 0.5)).collect();
    let rules: Vec<LaRule> = base
        .rules()
        .iter()
        .map(|r| {
            let k = input.arity(&r.symbol).unwrap_or(0);
            let guards = (0..k)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        None
                    } else {
                        Some(pool[rng.gen_range(0..pool.len())].clone())
                    }
                })
                .collect();
            LaRule {
                rule: r.clone(),
                guards,
            }
        })
        .collect();
    LookaheadTransducer::new(
        input.clone(),
        output.clone(),
        base.states().clone(),
        base.initial().clone(),
        rules,
    )
    .expect("generated transducer is well-formed")
}

/// Convenience: a letter list for enumeration including frontier variables.
pub fn letters_of(alphabet: &RankedAlphabet) -> Vec<(Letter, usize)> {
    alphabet.letters()
}
