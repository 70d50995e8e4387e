use core::fmt;

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::terms::{into_canonical, Letter, RankedAlphabet, Tree};

use super::topdown::{check_input, check_state_name};

/// `f(q1,...,qn) -> q : rhs`, where `rhs` is an output tree over `x1..xn`
/// standing for the outputs of the children.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BuRule {
    pub symbol: String,
    pub args: Vec<String>,
    pub target: String,
    pub rhs: Tree,
}

impl BuRule {
    pub fn new(symbol: impl Into<String>, args: Vec<String>, target: impl Into<String>, rhs: Tree) -> Self {
        BuRule {
            symbol: symbol.into(),
            args,
            target: target.into(),
            rhs,
        }
    }
}

impl fmt::Display for BuRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        write!(f, " -> {} : {}", self.target, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomUpTransducer {
    input: RankedAlphabet,
    output: RankedAlphabet,
    states: BTreeSet<String>,
    finals: BTreeSet<String>,
    rules: BTreeSet<BuRule>,
}

impl BottomUpTransducer {
    pub fn new(
        input: RankedAlphabet,
        output: RankedAlphabet,
        states: impl IntoIterator<Item = String>,
        finals: impl IntoIterator<Item = String>,
        rules: impl IntoIterator<Item = BuRule>,
    ) -> Result<Self> {
        let b = BottomUpTransducer {
            input,
            output,
            states: states.into_iter().collect(),
            finals: finals.into_iter().collect(),
            rules: rules.into_iter().collect(),
        };
        b.states.iter().try_for_each(|q| check_state_name(q))?;
        if let Some(q) = b.finals.iter().find(|q| !b.states.contains(*q)) {
            return Err(Error::UnknownState(q.clone()));
        }
        for r in &b.rules {
            let n = b
                .input
                .arity(&r.symbol)
                .ok_or_else(|| Error::UnknownSymbol(r.symbol.clone()))?;
            if n != r.args.len() {
                return Err(Error::ArityMismatch {
                    symbol: r.symbol.clone(),
                    expected: n,
                    found: r.args.len(),
                });
            }
            b.output.clone().with_variables(1..=n as u32).check(&r.rhs)?;
            if let Some(v) = r.rhs.variables().into_iter().find(|&v| v as usize > n) {
                return Err(Error::Invalid(format!(
                    "right side of a rule for `{}` uses x{v}",
                    r.symbol
                )));
            }
            if let Some(q) = r
                .args
                .iter()
                .chain(core::iter::once(&r.target))
                .find(|q| !b.states.contains(*q))
            {
                return Err(Error::UnknownState(q.clone()));
            }
        }
        Ok(b)
    }

    pub(crate) fn from_parts(
        input: RankedAlphabet,
        output: RankedAlphabet,
        states: BTreeSet<String>,
        finals: BTreeSet<String>,
        rules: BTreeSet<BuRule>,
    ) -> Self {
        BottomUpTransducer {
            input,
            output,
            states,
            finals,
            rules,
        }
    }

    /// One final state `q` copying every symbol.
    pub fn identity(alphabet: RankedAlphabet) -> Self {
        let q = String::from("q");
        let rules = alphabet
            .symbols()
            .iter()
            .map(|(f, &n)| {
                BuRule::new(
                    f.clone(),
                    vec![q.clone(); n],
                    q.clone(),
                    Tree::node(f.clone(), (1..=n as u32).map(Tree::var).collect()),
                )
            })
            .collect();
        let states: BTreeSet<String> = [q].into_iter().collect();
        BottomUpTransducer::from_parts(alphabet.clone(), alphabet, states.clone(), states, rules)
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

    pub fn finals(&self) -> &BTreeSet<String> {
        &self.finals
    }

    pub fn rules(&self) -> &BTreeSet<BuRule> {
        &self.rules
    }

    /// At most one rule per left-hand side `f(q1..qn)`.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.rules.iter().all(|r| seen.insert((&r.symbol, &r.args)))
    }

    pub fn is_linear(&self) -> bool {
        self.rules.iter().all(|r| {
            (1..=r.args.len() as u32).all(|i| r.rhs.occurrences(i) <= 1)
        })
    }

    pub fn is_nondeleting(&self) -> bool {
        self.rules.iter().all(|r| {
            (1..=r.args.len() as u32).all(|i| r.rhs.occurrences(i) >= 1)
        })
    }

    /// Every right side is a single output symbol over `x1..xn` in order.
    pub fn is_relabeling(&self) -> bool {
        self.rules.iter().all(|r| {
            !r.rhs.head().is_var()
                && r.rhs.children().len() == r.args.len()
                && r.rhs
                    .children()
                    .iter()
                    .enumerate()
                    .all(|(i, c)| c.head() == &Letter::Var(i as u32 + 1))
        })
    }
}

type Outcomes = BTreeSet<(String, Tree)>;

fn evaluate<'t>(
    b: &BottomUpTransducer,
    index: &BTreeMap<&str, Vec<&BuRule>>,
    t: &'t Tree,
    memo: &mut BTreeMap<&'t Tree, Outcomes>,
) -> Outcomes {
    if let Some(done) = memo.get(t) {
        return done.clone();
    }
    let kids: Vec<Outcomes> = t
        .children()
        .iter()
        .map(|c| evaluate(b, index, c, memo))
        .collect();
    let mut out = Outcomes::new();
    let f = match t.head() {
        Letter::Sym(f) => f.as_str(),
        Letter::Var(_) => "",
    };
    for r in index.get(f).map(|v| v.as_slice()).unwrap_or(&[]) {
        let mut combos: Vec<Vec<Tree>> = vec![Vec::new()];
        for (q, options) in r.args.iter().zip(&kids) {
            let matching: Vec<&Tree> = options
                .iter()
                .filter(|(s, _)| s == q)
                .map(|(_, o)| o)
                .collect();
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    matching.iter().map(move |o| {
                        let mut v = prefix.clone();
                        v.push((*o).clone());
                        v
                    })
                })
                .collect();
        }
        for outs in combos {
            out.insert((r.target.clone(), r.rhs.substitute_all(&outs)));
        }
    }
    memo.insert(t, out.clone());
    out
}

/// Outputs collected at final states.
pub fn apply_bu(b: &BottomUpTransducer, t: &Tree) -> Result<Vec<Tree>> {
    check_input(&b.input, t)?;
    let mut index: BTreeMap<&str, Vec<&BuRule>> = BTreeMap::new();
    for r in &b.rules {
        index.entry(&r.symbol).or_default().push(r);
    }
    let mut memo = BTreeMap::new();
    let outcomes = evaluate(b, &index, t, &mut memo);
    Ok(into_canonical(
        outcomes
            .into_iter()
            .filter(|(q, _)| b.finals.contains(q))
            .map(|(_, o)| o),
    ))
}
