use core::fmt;

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::terms::{into_canonical, is_plain_name, parse_raw, Letter, RankedAlphabet, RawTerm, Tree};

/// Right side of a top-down rule: output symbols over state calls `q#i`,
/// meaning "process input child `i` (1-based) in state `q`".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rhs {
    Out(String, Vec<Rhs>),
    Call { state: String, child: usize },
}

impl Rhs {
    pub fn call(state: impl Into<String>, child: usize) -> Rhs {
        Rhs::Call {
            state: state.into(),
            child,
        }
    }

    pub fn parse(text: &str, output: &RankedAlphabet) -> Result<Rhs> {
        Rhs::from_raw(&parse_raw(text)?, output)
    }

    pub fn from_raw(raw: &RawTerm, output: &RankedAlphabet) -> Result<Rhs> {
        if let Some((state, child)) = raw.name.rsplit_once('#') {
            if !raw.children.is_empty() {
                return Err(Error::syntax(raw.pos, "state calls take no arguments"));
            }
            let child = child
                .parse::<usize>()
                .ok()
                .filter(|&c| c >= 1 && !child.starts_with('0'))
                .ok_or_else(|| Error::syntax(raw.pos, format!("bad child index in `{}`", raw.name)))?;
            if state.is_empty() {
                return Err(Error::syntax(raw.pos, "missing state before `#`"));
            }
            return Ok(Rhs::call(state, child));
        }
        let expected = output
            .arity(&raw.name)
            .ok_or_else(|| Error::UnknownSymbol(raw.name.clone()))?;
        if expected != raw.children.len() {
            return Err(Error::ArityMismatch {
                symbol: raw.name.clone(),
                expected,
                found: raw.children.len(),
            });
        }
        let kids = raw
            .children
            .iter()
            .map(|c| Rhs::from_raw(c, output))
            .collect::<Result<Vec<_>>>()?;
        Ok(Rhs::Out(raw.name.clone(), kids))
    }

    /// Calls in left-to-right order.
    pub fn calls(&self) -> Vec<(&str, usize)> {
        let mut out = Vec::new();
        fn go<'a>(r: &'a Rhs, out: &mut Vec<(&'a str, usize)>) {
            match r {
                Rhs::Call { state, child } => out.push((state, *child)),
                Rhs::Out(_, kids) => kids.iter().for_each(|k| go(k, out)),
            }
        }
        go(self, &mut out);
        out
    }

    fn check(&self, output: &RankedAlphabet, arity: usize) -> Result<()> {
        match self {
            Rhs::Call { child, .. } => {
                if *child == 0 || *child > arity {
                    return Err(Error::Invalid(format!(
                        "state call on child {child} of a symbol of arity {arity}"
                    )));
                }
                Ok(())
            }
            Rhs::Out(f, kids) => {
                let expected = output.arity(f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                if expected != kids.len() {
                    return Err(Error::ArityMismatch {
                        symbol: f.clone(),
                        expected,
                        found: kids.len(),
                    });
                }
                kids.iter().try_for_each(|k| k.check(output, arity))
            }
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Call { state, child } => write!(f, "{state}#{child}"),
            Rhs::Out(s, kids) => {
                f.write_str(s)?;
                if !kids.is_empty() {
                    f.write_str("(")?;
                    for (i, k) in kids.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{k}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// `q, f -> rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TdRule {
    pub state: String,
    pub symbol: String,
    pub rhs: Rhs,
}

impl TdRule {
    pub fn new(state: impl Into<String>, symbol: impl Into<String>, rhs: Rhs) -> Self {
        TdRule {
            state: state.into(),
            symbol: symbol.into(),
            rhs,
        }
    }
}

impl fmt::Display for TdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {}", self.state, self.symbol, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopDownTransducer {
    input: RankedAlphabet,
    output: RankedAlphabet,
    states: BTreeSet<String>,
    initial: BTreeSet<String>,
    rules: BTreeSet<TdRule>,
}

pub(crate) fn check_state_name(q: &str) -> Result<()> {
    if is_plain_name(q) {
        Ok(())
    } else {
        Err(Error::InvalidName(String::from(q)))
    }
}

pub(crate) fn check_td_rule(
    r: &TdRule,
    input: &RankedAlphabet,
    output: &RankedAlphabet,
    states: &BTreeSet<String>,
) -> Result<()> {
    let n = input
        .arity(&r.symbol)
        .ok_or_else(|| Error::UnknownSymbol(r.symbol.clone()))?;
    r.rhs.check(output, n)?;
    for q in core::iter::once(r.state.as_str()).chain(r.rhs.calls().into_iter().map(|c| c.0)) {
        if !states.contains(q) {
            return Err(Error::UnknownState(String::from(q)));
        }
    }
    Ok(())
}

impl TopDownTransducer {
    pub fn new(
        input: RankedAlphabet,
        output: RankedAlphabet,
        states: impl IntoIterator<Item = String>,
        initial: impl IntoIterator<Item = String>,
        rules: impl IntoIterator<Item = TdRule>,
    ) -> Result<Self> {
        let t = TopDownTransducer {
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
            check_td_rule(r, &t.input, &t.output, &t.states)?;
        }
        Ok(t)
    }

    pub(crate) fn from_parts(
        input: RankedAlphabet,
        output: RankedAlphabet,
        states: BTreeSet<String>,
        initial: BTreeSet<String>,
        rules: BTreeSet<TdRule>,
    ) -> Self {
        TopDownTransducer {
            input,
            output,
            states,
            initial,
            rules,
        }
    }

    /// Builds a transducer from `(state, symbol, rhs text)` triples; the
    /// states are those mentioned.
    pub fn parse_rules<'s>(
        input: RankedAlphabet,
        output: RankedAlphabet,
        initial: impl IntoIterator<Item = &'s str>,
        rules: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let initial: BTreeSet<String> = initial.into_iter().map(String::from).collect();
        let mut states = initial.clone();
        let mut parsed = BTreeSet::new();
        for (q, f, rhs) in rules {
            let rhs = Rhs::parse(rhs, &output)?;
            states.insert(String::from(*q));
            states.extend(rhs.calls().into_iter().map(|c| String::from(c.0)));
            parsed.insert(TdRule::new(*q, *f, rhs));
        }
        TopDownTransducer::new(input, output, states, initial, parsed)
    }

    /// One state `q` copying every symbol.
    pub fn identity(alphabet: RankedAlphabet) -> Self {
        let q = String::from("q");
        let rules = alphabet
            .symbols()
            .iter()
            .map(|(f, &n)| {
                TdRule::new(
                    q.clone(),
                    f.clone(),
                    Rhs::Out(f.clone(), (1..=n).map(|i| Rhs::call("q", i)).collect()),
                )
            })
            .collect();
        let states: BTreeSet<String> = [q].into_iter().collect();
        TopDownTransducer::from_parts(alphabet.clone(), alphabet, states.clone(), states, rules)
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

    pub fn rules(&self) -> &BTreeSet<TdRule> {
        &self.rules
    }

    fn rule_count(&self) -> BTreeMap<(&str, &str), usize> {
        let mut count = BTreeMap::new();
        for r in &self.rules {
            *count.entry((r.state.as_str(), r.symbol.as_str())).or_insert(0) += 1;
        }
        count
    }

    /// At most one initial state and at most one rule per `(q, f)`.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1 && self.rule_count().values().all(|&c| c <= 1)
    }

    /// A rule for every state and input symbol.
    pub fn is_total(&self) -> bool {
        let count = self.rule_count();
        self.states.iter().all(|q| {
            self.input
                .symbols()
                .keys()
                .all(|f| count.contains_key(&(q.as_str(), f.as_str())))
        })
    }

    /// No right side processes a child twice.
    pub fn is_linear(&self) -> bool {
        self.rules.iter().all(|r| {
            let mut seen = BTreeSet::new();
            r.rhs.calls().into_iter().all(|(_, i)| seen.insert(i))
        })
    }

    /// Every right side processes every child.
    pub fn is_nondeleting(&self) -> bool {
        self.rules.iter().all(|r| {
            let n = self.input.arity(&r.symbol).unwrap_or(0);
            let used: BTreeSet<usize> = r.rhs.calls().into_iter().map(|c| c.1).collect();
            used.len() == n
        })
    }
}

pub(crate) type Memo<'t> = BTreeMap<(&'t str, &'t Tree), Vec<Tree>>;

/// Shared driver for top-down application. `rules_at(q, t)` lists the right
/// sides applicable in state `q` at the root of `t`.
pub(crate) fn run_top_down<'t, 'r: 't>(
    q: &'t str,
    t: &'t Tree,
    rules_at: &dyn Fn(&str, &Tree) -> Vec<&'r Rhs>,
    memo: &mut Memo<'t>,
) -> Vec<Tree> {
    if let Some(done) = memo.get(&(q, t)) {
        return done.clone();
    }
    let mut out = BTreeSet::new();
    for rhs in rules_at(q, t) {
        out.extend(expand(rhs, t, rules_at, memo));
    }
    let out: Vec<Tree> = out.into_iter().collect();
    memo.insert((q, t), out.clone());
    out
}

fn expand<'t, 'r: 't>(
    rhs: &'r Rhs,
    t: &'t Tree,
    rules_at: &dyn Fn(&str, &Tree) -> Vec<&'r Rhs>,
    memo: &mut Memo<'t>,
) -> Vec<Tree> {
    match rhs {
        Rhs::Call { state, child } => run_top_down(state, &t.children()[child - 1], rules_at, memo),
        Rhs::Out(f, kids) => {
            let mut acc: Vec<Vec<Tree>> = vec![Vec::new()];
            for k in kids {
                let options = expand(k, t, rules_at, memo);
                if options.is_empty() {
                    return Vec::new();
                }
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
            acc.into_iter()
                .map(|cs| Tree::new(Letter::Sym(f.clone()), cs))
                .collect()
        }
    }
}

pub(crate) fn check_input(input: &RankedAlphabet, t: &Tree) -> Result<()> {
    if !t.is_ground() {
        return Err(Error::Precondition(String::from(
            "transducers read variable-free trees",
        )));
    }
    input.check(t)
}

/// All outputs of `td` on `t`. Every state call is expanded independently,
/// so copies of a subtree may be translated differently.
pub fn apply_td(td: &TopDownTransducer, t: &Tree) -> Result<Vec<Tree>> {
    check_input(&td.input, t)?;
    let mut index: BTreeMap<(&str, &str), Vec<&Rhs>> = BTreeMap::new();
    for r in &td.rules {
        index.entry((&r.state, &r.symbol)).or_default().push(&r.rhs);
    }
    let rules_at = |q: &str, t: &Tree| -> Vec<&Rhs> {
        match t.head() {
            Letter::Sym(f) => index.get(&(q, f.as_str())).cloned().unwrap_or_default(),
            Letter::Var(_) => Vec::new(),
        }
    };
    let mut memo = Memo::new();
    let mut out = Vec::new();
    for q in &td.initial {
        out.extend(run_top_down(q, t, &rules_at, &mut memo));
    }
    Ok(into_canonical(out))
}
