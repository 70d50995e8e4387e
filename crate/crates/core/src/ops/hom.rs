//! Tree homomorphisms, their images and inverse images.

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{for_each_tuple, Indexed, Rule, TreeRecognizer};
use crate::terms::{fresh_name, Letter, RankedAlphabet, Tree};

/// Maps each source symbol `f` of arity `n` to a target tree over the
/// variables `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeHomomorphism {
    source: RankedAlphabet,
    target: RankedAlphabet,
    map: BTreeMap<String, Tree>,
}

impl TreeHomomorphism {
    pub fn new(
        source: RankedAlphabet,
        target: RankedAlphabet,
        map: impl IntoIterator<Item = (String, Tree)>,
    ) -> Result<Self> {
        let map: BTreeMap<String, Tree> = map.into_iter().collect();
        for (f, &n) in source.symbols() {
            let image = map
                .get(f)
                .ok_or_else(|| Error::Invalid(format!("homomorphism does not map `{f}`")))?;
            let scoped = target.clone().with_variables(1..=n as u32);
            scoped.check(image)?;
            if let Some(v) = image.variables().into_iter().find(|&v| v as usize > n) {
                return Err(Error::Invalid(format!(
                    "image of `{f}` uses x{v} but `{f}` has arity {n}"
                )));
            }
        }
        if let Some(extra) = map.keys().find(|f| source.arity(f).is_none()) {
            return Err(Error::UnknownSymbol(extra.clone()));
        }
        Ok(TreeHomomorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(alphabet: RankedAlphabet) -> Self {
        let map = alphabet
            .symbols()
            .iter()
            .map(|(f, &n)| (f.clone(), identity_image(f, n)))
            .collect();
        TreeHomomorphism {
            source: alphabet.clone(),
            target: alphabet,
            map,
        }
    }

    /// Letter-to-letter relabeling `f ↦ g(x1,...,xn)`.
    pub fn relabeling(
        source: RankedAlphabet,
        target: RankedAlphabet,
        relabel: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self> {
        let map: Vec<(String, Tree)> = relabel
            .into_iter()
            .map(|(f, g)| {
                let n = source.arity(&f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                Ok((f, identity_image(&g, n)))
            })
            .collect::<Result<_>>()?;
        TreeHomomorphism::new(source, target, map)
    }

    pub fn source(&self) -> &RankedAlphabet {
        &self.source
    }

    pub fn target(&self) -> &RankedAlphabet {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<String, Tree> {
        &self.map
    }

    pub fn image_of(&self, symbol: &str) -> Option<&Tree> {
        self.map.get(symbol)
    }

    /// Each variable occurs at most once in every image.
    pub fn is_linear(&self) -> bool {
        self.non_linear_symbol().is_none()
    }

    fn non_linear_symbol(&self) -> Option<&String> {
        self.map.iter().find_map(|(f, t)| {
            let n = self.source.arity(f).unwrap_or(0) as u32;
            (1..=n).any(|i| t.occurrences(i) > 1).then_some(f)
        })
    }

    /// Each variable occurs at least once in every image.
    pub fn is_nondeleting(&self) -> bool {
        self.map.iter().all(|(f, t)| {
            let n = self.source.arity(f).unwrap_or(0) as u32;
            (1..=n).all(|i| t.occurrences(i) >= 1)
        })
    }

    /// Every image is a single symbol over `x1..xn` in order.
    pub fn is_relabeling(&self) -> bool {
        self.map.iter().all(|(f, t)| {
            let n = self.source.arity(f).unwrap_or(0);
            !t.head().is_var()
                && t.children().len() == n
                && t
                    .children()
                    .iter()
                    .enumerate()
                    .all(|(i, c)| c.head() == &Letter::Var(i as u32 + 1))
        })
    }

    /// `h(f(t1..tn)) = h(f)[xi := h(ti)]`; frontier variables map to themselves.
    pub fn apply(&self, t: &Tree) -> Result<Tree> {
        match t.head() {
            Letter::Var(_) => Ok(t.clone()),
            Letter::Sym(f) => {
                let image = self
                    .map
                    .get(f)
                    .ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                let kids = t
                    .children()
                    .iter()
                    .map(|c| self.apply(c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(image.substitute_all(&kids))
            }
        }
    }
}

pub(crate) fn identity_image(symbol: &str, arity: usize) -> Tree {
    Tree::node(symbol, (1..=arity as u32).map(Tree::var).collect())
}

/// `h(L(a))` for linear `h`. Each rule of the trimmed machine is unfolded
/// into a chain of fresh states spelling out `h(f)`; images that are a bare
/// variable become state-to-state moves, removed by closure.
pub fn hom_image(h: &TreeHomomorphism, a: &TreeRecognizer) -> Result<TreeRecognizer> {
    if let Some(f) = h.non_linear_symbol() {
        return Err(Error::NonLinearHomomorphism(f.clone()));
    }
    if !h.source.same_symbols(a.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let a = a.trim();
    let mut taken = a.states().clone();
    let mut rules: BTreeSet<Rule> = BTreeSet::new();
    // (from, to): a tree reaching `from` also reaches `to`
    let mut moves: BTreeSet<(String, String)> = BTreeSet::new();
    for (ri, r) in a.rules().iter().enumerate() {
        let f = match &r.symbol {
            Letter::Var(_) => {
                rules.insert(r.clone());
                continue;
            }
            Letter::Sym(f) => f,
        };
        let image = &h.map[f];
        if let Letter::Var(i) = image.head() {
            moves.insert((r.args[*i as usize - 1].clone(), r.target.clone()));
            continue;
        }
        let mut counter = 0usize;
        unfold(image, &r.target, &r.args, ri, &mut counter, &mut taken, &mut rules);
    }
    // close rules under the moves
    loop {
        let before = rules.len();
        let snapshot: Vec<Rule> = rules.iter().cloned().collect();
        for r in snapshot {
            for (from, to) in &moves {
                if &r.target == from {
                    rules.insert(Rule::new(r.symbol.clone(), r.args.clone(), to.clone()));
                }
            }
        }
        if rules.len() == before {
            break;
        }
    }
    let alphabet = h
        .target
        .clone()
        .with_variables(a.alphabet().variables().iter().copied());
    Ok(TreeRecognizer::from_parts(
        alphabet,
        taken,
        a.finals().clone(),
        rules,
    ))
}

/// Adds rules recognizing `image` (with `xi` read as state `args[i-1]`) at
/// state `at`.
fn unfold(
    image: &Tree,
    at: &str,
    args: &[String],
    rule_index: usize,
    counter: &mut usize,
    taken: &mut BTreeSet<String>,
    rules: &mut BTreeSet<Rule>,
) {
    let mut child_states = Vec::with_capacity(image.children().len());
    for c in image.children() {
        match c.head() {
            Letter::Var(i) => child_states.push(args[*i as usize - 1].clone()),
            Letter::Sym(_) => {
                let name = fresh_name(&format!("h{rule_index}.{counter}"), taken);
                *counter += 1;
                taken.insert(name.clone());
                unfold(c, &name, args, rule_index, counter, taken, rules);
                child_states.push(name);
            }
        }
    }
    rules.insert(Rule::new(image.head().clone(), child_states, at));
}

/// `{ t : h(t) ∈ L(b) }`. The machine runs `b` symbolically over each image;
/// deleted arguments are read by a universal state `__any`. Copying
/// homomorphisms need a deterministic `b`, so `b` is determinized first in
/// that case.
pub fn hom_preimage(h: &TreeHomomorphism, b: &TreeRecognizer) -> Result<TreeRecognizer> {
    if !h.target.same_symbols(b.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let b = if h.is_linear() || b.is_deterministic() {
        b.clone()
    } else {
        b.determinize()
    };
    let ix = Indexed::new(&b);
    let any = fresh_name("__any", b.states());
    let mut rules = BTreeSet::new();
    for (letter, k) in h.source.letters() {
        let f = match &letter {
            Letter::Sym(f) => f,
            Letter::Var(_) => continue,
        };
        let image = &h.map[f];
        rules.insert(Rule::new(letter.clone(), vec![any.clone(); k], any.clone()));
        let present: Vec<bool> = (1..=k as u32).map(|i| image.occurrences(i) > 0).collect();
        let used: Vec<usize> = (0..k).filter(|&i| present[i]).collect();
        for_each_tuple(ix.len(), used.len(), |choice| {
            let mut assign: Vec<Option<usize>> = vec![None; k];
            for (slot, &q) in used.iter().zip(choice) {
                assign[*slot] = Some(q);
            }
            for target in eval_image(&ix, image, &assign) {
                let args = assign
                    .iter()
                    .map(|q| q.map_or_else(|| any.clone(), |q| ix.names[q].clone()))
                    .collect();
                rules.insert(Rule::new(letter.clone(), args, ix.names[target].clone()));
            }
        });
    }
    for r in b.rules() {
        if let Letter::Var(v) = r.symbol {
            if h.source.variables().contains(&v) {
                rules.insert(r.clone());
            }
        }
    }
    for &v in h.source.variables() {
        rules.insert(Rule::new(Letter::Var(v), Vec::new(), any.clone()));
    }
    let mut states = b.states().clone();
    states.insert(any);
    Ok(TreeRecognizer::from_parts(
        h.source.clone(),
        states,
        b.finals().clone(),
        rules,
    ))
}

fn eval_image(ix: &Indexed, image: &Tree, assign: &[Option<usize>]) -> BTreeSet<usize> {
    if let Letter::Var(i) = image.head() {
        return assign[*i as usize - 1].into_iter().collect();
    }
    let kids: Vec<BTreeSet<usize>> = image
        .children()
        .iter()
        .map(|c| eval_image(ix, c, assign))
        .collect();
    let refs: Vec<&BTreeSet<usize>> = kids.iter().collect();
    ix.step(image.head(), &refs)
}
