//! Emptiness, finiteness, equivalence and inclusion of recognizable forests.
//!
//! Witnesses and counterexamples are always the least tree in enumeration
//! order (node count, then canonical text).

use num_bigint::BigUint;

use crate::error::Result;
use crate::ops::{difference, union};
use crate::prelude::*;
use crate::recognizer::{min_witnesses, Indexed, TreeRecognizer};
use crate::terms::Tree;

/// A yes/no answer; a negative answer carries a witness tree when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    holds: bool,
    witness: Option<Tree>,
}

impl Verdict {
    pub fn yes() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn no(witness: Tree) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn holds(&self) -> bool {
        self.holds
    }

    pub fn witness(&self) -> Option<&Tree> {
        self.witness.as_ref()
    }
}

/// `holds` iff `L(a)` is empty; otherwise the least accepted tree.
pub fn is_empty(a: &TreeRecognizer) -> Verdict {
    let ix = Indexed::new(a);
    let best = min_witnesses(&ix);
    let smallest = best
        .into_iter()
        .zip(&ix.finals)
        .filter(|(_, f)| **f)
        .filter_map(|(w, _)| w)
        .min_by_key(|t| (t.size(), t.to_string()));
    match smallest {
        Some(t) => Verdict::no(t),
        None => Verdict::yes(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finiteness {
    /// Finite, with the exact number of accepted trees.
    Finite(BigUint),
    Infinite,
}

impl Finiteness {
    pub fn is_finite(&self) -> bool {
        matches!(self, Finiteness::Finite(_))
    }
}

/// Finite iff the dependency graph among useful states is acyclic. The
/// census counts runs of the trimmed subset machine, which are in
/// bijection with accepted trees.
pub fn is_finite(a: &TreeRecognizer) -> Finiteness {
    if has_useful_cycle(&a.trim()) {
        return Finiteness::Infinite;
    }
    let d = a.determinize().trim();
    let ix = Indexed::new(&d);
    let mut memo: Vec<Option<BigUint>> = vec![None; ix.len()];
    let total = (0..ix.len())
        .filter(|&q| ix.finals[q])
        .map(|q| count_runs(&ix, q, &mut memo))
        .fold(BigUint::from(0u32), |acc, c| acc + c);
    Finiteness::Finite(total)
}

fn has_useful_cycle(a: &TreeRecognizer) -> bool {
    let ix = Indexed::new(a);
    let mut edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ix.len()];
    for rules in ix.trans.values() {
        for (args, target) in rules {
            edges[*target].extend(args.iter().copied());
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut mark = vec![0u8; ix.len()];
    fn visit(q: usize, edges: &[BTreeSet<usize>], mark: &mut [u8]) -> bool {
        mark[q] = 1;
        for &p in &edges[q] {
            if mark[p] == 1 || (mark[p] == 0 && visit(p, edges, mark)) {
                return true;
            }
        }
        mark[q] = 2;
        false
    }
    (0..ix.len()).any(|q| mark[q] == 0 && visit(q, &edges, &mut mark))
}

fn count_runs(ix: &Indexed, q: usize, memo: &mut Vec<Option<BigUint>>) -> BigUint {
    if let Some(c) = &memo[q] {
        return c.clone();
    }
    let mut total = BigUint::from(0u32);
    for rules in ix.trans.values() {
        for (args, target) in rules {
            if *target != q {
                continue;
            }
            let mut product = BigUint::from(1u32);
            for &p in args {
                product *= count_runs(ix, p, memo);
            }
            total += product;
        }
    }
    memo[q] = Some(total.clone());
    total
}

/// Decided through emptiness of the symmetric difference.
pub fn equivalent(a: &TreeRecognizer, b: &TreeRecognizer) -> Result<Verdict> {
    let sym = union(&difference(a, b)?, &difference(b, a)?)?;
    Ok(is_empty(&sym))
}

/// `L(a) ⊆ L(b)` iff `L(a) ∖ L(b)` is empty.
pub fn included(a: &TreeRecognizer, b: &TreeRecognizer) -> Result<Verdict> {
    Ok(is_empty(&difference(a, b)?))
}
