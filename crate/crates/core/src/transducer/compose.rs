use crate::error::{Error, Result};
use crate::ops::{pair, TreeHomomorphism};
use crate::prelude::*;
use crate::terms::{RankedAlphabet, Tree};

use super::bottomup::{BottomUpTransducer, BuRule};
use super::topdown::{Rhs, TdRule, TopDownTransducer};

/// All ways `t2` in state `q` can translate the right side `r` of `t1`.
/// Calls `p#i` of `t1` become calls `<p,q>#i` of the composition.
fn translate(t2: &TopDownTransducer, q: &str, r: &Rhs) -> Vec<Rhs> {
    match r {
        Rhs::Call { state, child } => vec![Rhs::call(pair(state, q), *child)],
        Rhs::Out(g, kids) => {
            let mut out = Vec::new();
            for rule in t2.rules().iter().filter(|x| x.state == q && &x.symbol == g) {
                out.extend(substitute(t2, &rule.rhs, kids));
            }
            out
        }
    }
}

/// Replaces each call `q'#j` in a right side of `t2` by a translation of
/// `kids[j]` in state `q'`; occurrences are translated independently.
fn substitute(t2: &TopDownTransducer, rhs: &Rhs, kids: &[Rhs]) -> Vec<Rhs> {
    match rhs {
        Rhs::Call { state, child } => translate(t2, state, &kids[child - 1]),
        Rhs::Out(h, parts) => {
            let mut acc: Vec<Vec<Rhs>> = vec![Vec::new()];
            for p in parts {
                let options = substitute(t2, p, kids);
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |o| {
                            let mut v = prefix.clone();
                            v.push(o.clone());
                            v
                        })
                    })
                    .collect();
            }
            acc.into_iter().map(|cs| Rhs::Out(h.clone(), cs)).collect()
        }
    }
}

/// A transducer for "apply `t1`, then `t2`", with states `<p,q>`. Only
/// built when `t2` is linear and nondeleting, or `t1` is deterministic and
/// total and `t2` is linear; outside those classes running `t2` over the
/// right sides of `t1` can duplicate or drop nondeterministic choices.
pub fn compose_td(t1: &TopDownTransducer, t2: &TopDownTransducer) -> Result<TopDownTransducer> {
    if !t1.output().same_symbols(t2.input()) {
        return Err(Error::AlphabetMismatch);
    }
    let guarded = (t2.is_linear() && t2.is_nondeleting())
        || (t1.is_deterministic() && t1.is_total() && t2.is_linear());
    if !guarded {
        return Err(Error::CompositionNotClosed);
    }
    let initial: BTreeSet<String> = t1
        .initial()
        .iter()
        .flat_map(|p| t2.initial().iter().map(move |q| pair(p, q)))
        .collect();
    let mut queue: VecDeque<(String, String)> = t1
        .initial()
        .iter()
        .flat_map(|p| t2.initial().iter().map(move |q| (p.clone(), q.clone())))
        .collect();
    let pairs: BTreeMap<String, (&String, &String)> = t1
        .states()
        .iter()
        .flat_map(|p| t2.states().iter().map(move |q| (pair(p, q), (p, q))))
        .collect();
    let mut states = BTreeSet::new();
    let mut rules = BTreeSet::new();
    while let Some((p, q)) = queue.pop_front() {
        let name = pair(&p, &q);
        if !states.insert(name.clone()) {
            continue;
        }
        for r in t1.rules().iter().filter(|r| r.state == p) {
            for rhs in translate(t2, &q, &r.rhs) {
                for (call, _) in rhs.calls() {
                    if !states.contains(call) {
                        let (p2, q2) = pairs[call];
                        queue.push_back((p2.clone(), q2.clone()));
                    }
                }
                rules.insert(TdRule::new(name.clone(), r.symbol.clone(), rhs));
            }
        }
    }
    Ok(TopDownTransducer::from_parts(
        t1.input().clone(),
        t2.output().clone(),
        states,
        initial,
        rules,
    ))
}

/// A relabeling that writes the applied rule `r<k>` (k-th rule in rule
/// order) at every node, followed by the homomorphism sending `r<k>` to
/// that rule's right side.
pub fn decompose_bu(b: &BottomUpTransducer) -> Result<(BottomUpTransducer, TreeHomomorphism)> {
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut relabel_rules = BTreeSet::new();
    let mut map = Vec::new();
    for (k, r) in b.rules().iter().enumerate() {
        let id = format!("r{k}");
        let n = r.args.len();
        ids.insert(id.clone(), n);
        relabel_rules.insert(BuRule::new(
            r.symbol.clone(),
            r.args.clone(),
            r.target.clone(),
            Tree::node(id.clone(), (1..=n as u32).map(Tree::var).collect()),
        ));
        map.push((id, r.rhs.clone()));
    }
    let ids = RankedAlphabet::from_map(ids);
    let relabel = BottomUpTransducer::from_parts(
        b.input().clone(),
        ids.clone(),
        b.states().clone(),
        b.finals().clone(),
        relabel_rules,
    );
    let hom = TreeHomomorphism::new(ids, b.output().clone(), map)?;
    Ok((relabel, hom))
}
