use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{for_each_tuple, Indexed, TreeRecognizer};
use crate::terms::{into_canonical, Letter, RankedAlphabet, Tree};

use super::bottomup::{BottomUpTransducer, BuRule};
use super::topdown::{
    check_input, check_state_name, check_td_rule, run_top_down, Memo, Rhs, TdRule,
    TopDownTransducer,
};

/// A top-down rule that fires only when input child `i` is accepted by
/// `guards[i]` (`None` accepts everything).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaRule {
    pub rule: TdRule,
    pub guards: Vec<Option<TreeRecognizer>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookaheadTransducer {
    input: RankedAlphabet,
    output: RankedAlphabet,
    states: BTreeSet<String>,
    initial: BTreeSet<String>,
    rules: Vec<LaRule>,
}

impl LookaheadTransducer {
    pub fn new(
        input: RankedAlphabet,
        output: RankedAlphabet,
        states: impl IntoIterator<Item = String>,
        initial: impl IntoIterator<Item = String>,
        rules: impl IntoIterator<Item = LaRule>,
    ) -> Result<Self> {
        let t = LookaheadTransducer {
            input,
            output,
            states: states.into_iter().collect(),
            initial: initial.into_iter().collect(),
            rules: rules.into_iter().collect(),
        };
        t.states.iter().try_for_each(|q| check_state_name(q))?;
        if let Some(q) = t.initial.iter().find(|q| !t.states.contains(*q)) {
            return Err(Error::UnknownState(q.clone()));
        }
        for r in &t.rules {
            check_td_rule(&r.rule, &t.input, &t.output, &t.states)?;
            let n = t.input.arity(&r.rule.symbol).unwrap_or(0);
            if r.guards.len() != n {
                return Err(Error::Invalid(format!(
                    "rule `{}` needs {n} guards, has {}",
                    r.rule,
                    r.guards.len()
                )));
            }
            for g in r.guards.iter().flatten() {
                if !g.alphabet().same_symbols(&t.input) {
                    return Err(Error::AlphabetMismatch);
                }
            }
        }
        Ok(t)
    }

    /// Every rule unguarded.
    pub fn from_top_down(td: &TopDownTransducer) -> Self {
        let rules = td
            .rules()
            .iter()
            .map(|r| LaRule {
                rule: r.clone(),
                guards: vec![None; td.input().arity(&r.symbol).unwrap_or(0)],
            })
            .collect();
        LookaheadTransducer {
            input: td.input().clone(),
            output: td.output().clone(),
            states: td.states().clone(),
            initial: td.initial().clone(),
            rules,
        }
    }

    pub fn input(&self) -> &RankedAlphabet {
        &self.input
    }

    pub fn output(&self) -> &RankedAlphabet {
        &self.output
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<String> {
        &self.initial
    }

    pub fn rules(&self) -> &[LaRule] {
        &self.rules
    }

    /// The transducer with all guards dropped.
    pub fn underlying(&self) -> TopDownTransducer {
        TopDownTransducer::from_parts(
            self.input.clone(),
            self.output.clone(),
            self.states.clone(),
            self.initial.clone(),
            self.rules.iter().map(|r| r.rule.clone()).collect(),
        )
    }
}

fn guards_hold(guards: &[Option<TreeRecognizer>], t: &Tree) -> bool {
    guards
        .iter()
        .zip(t.children())
        .all(|(g, c)| g.as_ref().is_none_or(|g| g.accepts(c).unwrap_or(false)))
}

pub fn apply_la(t: &LookaheadTransducer, input: &Tree) -> Result<Vec<Tree>> {
    check_input(&t.input, input)?;
    let mut index: BTreeMap<(&str, &str), Vec<&LaRule>> = BTreeMap::new();
    for r in &t.rules {
        index
            .entry((&r.rule.state, &r.rule.symbol))
            .or_default()
            .push(r);
    }
    let rules_at = |q: &str, node: &Tree| -> Vec<&Rhs> {
        let Letter::Sym(f) = node.head() else {
            return Vec::new();
        };
        index
            .get(&(q, f.as_str()))
            .map(|rs| {
                rs.iter()
                    .filter(|r| guards_hold(&r.guards, node))
                    .map(|r| &r.rule.rhs)
                    .collect()
            })
            .unwrap_or_default()
    };
    let mut memo = Memo::new();
    let mut out = Vec::new();
    for q in &t.initial {
        out.extend(run_top_down(q, input, &rules_at, &mut memo));
    }
    Ok(into_canonical(out))
}

/// Splits `t` into a deterministic bottom-up relabeling followed by a
/// top-down transducer without look-ahead.
///
/// All distinct guards are run in parallel as one deterministic product
/// recognizer whose reachable state vectors are named `v0, v1, ...`. The
/// relabeling rewrites each node `f` of arity `n > 0` to `f@i1_..._in`,
/// where `ik` is the vector reached on child `k`; leaves keep their symbol.
/// Annotating children (rather than the node itself) lets the second stage
/// check the guards of children it deletes.
pub fn eliminate_lookahead(
    t: &LookaheadTransducer,
) -> Result<(BottomUpTransducer, TopDownTransducer)> {
    let mut guards: Vec<&TreeRecognizer> = Vec::new();
    for g in t.rules.iter().flat_map(|r| r.guards.iter().flatten()) {
        if !guards.contains(&g) {
            guards.push(g);
        }
    }
    let machines: Vec<(Indexed, BTreeMap<(Letter, Vec<usize>), usize>)> = guards
        .iter()
        .map(|g| {
            let ix = Indexed::new(&g.determinize());
            let delta = ix
                .trans
                .iter()
                .flat_map(|(l, rs)| rs.iter().map(move |(a, q)| ((l.clone(), a.clone()), *q)))
                .collect();
            (ix, delta)
        })
        .collect();
    let symbols: Vec<(&String, usize)> = t.input.symbols().iter().map(|(f, &k)| (f, k)).collect();
    let mut vectors: Vec<Vec<usize>> = Vec::new();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut table: Vec<(&String, Vec<usize>, usize)> = Vec::new();
    let mut done: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    loop {
        let known = vectors.len();
        let mut fresh = Vec::new();
        for (si, (f, k)) in symbols.iter().enumerate() {
            for_each_tuple(known, *k, |kids| {
                if done.contains(&(si, kids.to_vec())) {
                    return;
                }
                let letter = Letter::sym((*f).clone());
                let v: Vec<usize> = machines
                    .iter()
                    .enumerate()
                    .map(|(g, (_, delta))| {
                        let args: Vec<usize> = kids.iter().map(|&c| vectors[c][g]).collect();
                        delta[&(letter.clone(), args)]
                    })
                    .collect();
                fresh.push((si, kids.to_vec(), v));
            });
        }
        if fresh.is_empty() {
            break;
        }
        for (si, kids, v) in fresh {
            let id = *index.entry(v.clone()).or_insert_with(|| {
                vectors.push(v);
                vectors.len() - 1
            });
            done.insert((si, kids.clone()));
            table.push((symbols[si].0, kids, id));
        }
    }
    let name = |i: usize| format!("v{i}");
    let annotate = |f: &str, kids: &[usize]| -> String {
        if kids.is_empty() {
            String::from(f)
        } else {
            let ids: Vec<String> = kids.iter().map(|i| i.to_string()).collect();
            format!("{f}@{}", ids.join("_"))
        }
    };
    let mut annotated: BTreeMap<String, usize> = BTreeMap::new();
    let mut relabel_rules = BTreeSet::new();
    for (f, kids, target) in &table {
        let label = annotate(f, kids);
        if !kids.is_empty() && t.input.arity(&label).is_some() {
            return Err(Error::Invalid(format!(
                "annotated symbol `{label}` clashes with an input symbol"
            )));
        }
        annotated.insert(label.clone(), kids.len());
        relabel_rules.insert(BuRule::new(
            (*f).clone(),
            kids.iter().map(|&i| name(i)).collect(),
            name(*target),
            Tree::node(label, (1..=kids.len() as u32).map(Tree::var).collect()),
        ));
    }
    let annotated = RankedAlphabet::from_map(annotated);
    let states: BTreeSet<String> = (0..vectors.len()).map(name).collect();
    let relabel = BottomUpTransducer::from_parts(
        t.input.clone(),
        annotated.clone(),
        states.clone(),
        states,
        relabel_rules,
    );
    let guard_index = |g: &TreeRecognizer| guards.iter().position(|h| *h == g).expect("collected");
    let mut rules = BTreeSet::new();
    for r in &t.rules {
        for (f, kids, _) in table.iter().filter(|(f, _, _)| **f == r.rule.symbol) {
            let ok = r.guards.iter().zip(kids).all(|(g, &v)| match g {
                None => true,
                Some(g) => {
                    let gi = guard_index(g);
                    machines[gi].0.finals[vectors[v][gi]]
                }
            });
            if ok {
                rules.insert(TdRule::new(
                    r.rule.state.clone(),
                    annotate(f, kids),
                    r.rule.rhs.clone(),
                ));
            }
        }
    }
    let td = TopDownTransducer::from_parts(
        annotated,
        t.output.clone(),
        t.states.clone(),
        t.initial.clone(),
        rules,
    );
    Ok((relabel, td))
}
