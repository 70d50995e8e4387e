use crate::error::Result;
use crate::prelude::*;
use crate::recognizer::{Rule, TreeRecognizer};
use crate::terms::Letter;

/// Disjoint sum; states are tagged `1.q` and `2.q`.
pub fn union(a: &TreeRecognizer, b: &TreeRecognizer) -> Result<TreeRecognizer> {
    let alphabet = a.alphabet().merge(b.alphabet())?;
    let left = a.map_states(|q| format!("1.{q}"));
    let right = b.map_states(|q| format!("2.{q}"));
    Ok(TreeRecognizer::from_parts(
        alphabet,
        left.states().iter().chain(right.states()).cloned().collect(),
        left.finals().iter().chain(right.finals()).cloned().collect(),
        left.rules().iter().chain(right.rules()).cloned().collect(),
    ))
}

/// Product machine over reachable pairs `<p,q>`.
pub fn intersect(a: &TreeRecognizer, b: &TreeRecognizer) -> Result<TreeRecognizer> {
    let alphabet = a.alphabet().merge(b.alphabet())?;
    let mut by_letter: BTreeMap<&Letter, (Vec<&Rule>, Vec<&Rule>)> = BTreeMap::new();
    for r in a.rules() {
        by_letter.entry(&r.symbol).or_default().0.push(r);
    }
    for r in b.rules() {
        by_letter.entry(&r.symbol).or_default().1.push(r);
    }
    let mut reached: BTreeSet<(&String, &String)> = BTreeSet::new();
    let mut rules = BTreeSet::new();
    loop {
        let before = (reached.len(), rules.len());
        for (ra, rb) in by_letter.values() {
            for x in ra {
                for y in rb {
                    let ok = x
                        .args
                        .iter()
                        .zip(&y.args)
                        .all(|(p, q)| reached.contains(&(p, q)));
                    if !ok {
                        continue;
                    }
                    reached.insert((&x.target, &y.target));
                    rules.insert(Rule::new(
                        x.symbol.clone(),
                        x.args.iter().zip(&y.args).map(|(p, q)| pair(p, q)).collect(),
                        pair(&x.target, &y.target),
                    ));
                }
            }
        }
        if (reached.len(), rules.len()) == before {
            break;
        }
    }
    let finals = reached
        .iter()
        .filter(|(p, q)| a.finals().contains(*p) && b.finals().contains(*q))
        .map(|(p, q)| pair(p, q))
        .collect();
    let states = reached.iter().map(|(p, q)| pair(p, q)).collect();
    Ok(TreeRecognizer::from_parts(alphabet, states, finals, rules))
}

pub(crate) fn pair(p: &str, q: &str) -> String {
    format!("<{p},{q}>")
}

/// Determinize (which also completes) and flip the final states.
pub fn complement(a: &TreeRecognizer) -> TreeRecognizer {
    let d = a.determinize().complete();
    let finals: BTreeSet<String> = d.states().difference(d.finals()).cloned().collect();
    TreeRecognizer::from_parts(
        d.alphabet().clone(),
        d.states().clone(),
        finals,
        d.rules().clone(),
    )
}

pub fn difference(a: &TreeRecognizer, b: &TreeRecognizer) -> Result<TreeRecognizer> {
    let b = b.with_alphabet(a.alphabet())?;
    intersect(a, &complement(&b))
}
