//! x-product and x-iteration. Each occurrence of the variable is replaced
//! independently.

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{Rule, TreeRecognizer};
use crate::terms::{fresh_name, Letter};

/// Trees of `L(a)` with every `x` leaf independently replaced by a tree of
/// `L(b)`. B-runs are grafted in: every B-rule reaching a final state of B
/// is copied to target each state that `a` assigns to `x`.
pub fn x_product(a: &TreeRecognizer, x: u32, b: &TreeRecognizer) -> Result<TreeRecognizer> {
    if !a.alphabet().same_symbols(b.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let var = Letter::Var(x);
    let left = a.map_states(|q| format!("1.{q}"));
    let right = b.map_states(|q| format!("2.{q}"));
    let bridges: Vec<&String> = left
        .rules()
        .iter()
        .filter(|r| r.symbol == var)
        .map(|r| &r.target)
        .collect();
    let mut rules: BTreeSet<Rule> = left
        .rules()
        .iter()
        .filter(|r| r.symbol != var)
        .chain(right.rules())
        .cloned()
        .collect();
    for r in right.rules() {
        if right.finals().contains(&r.target) {
            for p in &bridges {
                rules.insert(Rule::new(r.symbol.clone(), r.args.clone(), (*p).clone()));
            }
        }
    }
    let alphabet = a
        .alphabet()
        .clone()
        .without_variable(x)
        .with_variables(b.alphabet().variables().iter().copied());
    Ok(TreeRecognizer::from_parts(
        alphabet,
        left.states().iter().chain(right.states()).cloned().collect(),
        left.finals().clone(),
        rules,
    ))
}

/// The least forest containing `x` and closed under `L(a) ·x -`. The bare
/// variable is accepted by a fresh final state; every rule of `a` reaching
/// a final state is looped back onto the states `a` assigns to `x`.
pub fn x_iteration(a: &TreeRecognizer, x: u32) -> TreeRecognizer {
    let var = Letter::Var(x);
    let bare = fresh_name("__x", a.states());
    let bridges: Vec<&String> = a
        .rules()
        .iter()
        .filter(|r| r.symbol == var)
        .map(|r| &r.target)
        .collect();
    let mut rules = a.rules().clone();
    for r in a.rules() {
        if a.finals().contains(&r.target) {
            for p in &bridges {
                rules.insert(Rule::new(r.symbol.clone(), r.args.clone(), (*p).clone()));
            }
        }
    }
    rules.insert(Rule::new(var, Vec::new(), bare.clone()));
    let mut states = a.states().clone();
    states.insert(bare.clone());
    let mut finals = a.finals().clone();
    finals.insert(bare);
    TreeRecognizer::from_parts(
        a.alphabet().clone().with_variables([x]),
        states,
        finals,
        rules,
    )
}
