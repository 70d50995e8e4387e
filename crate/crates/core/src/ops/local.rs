//! Local forests and the Medvedev-type presentation of recognizable forests
//! as projections of local ones.

use crate::decide;
use crate::error::{Error, Result};
use crate::prelude::*;
use crate::recognizer::{Rule, TreeRecognizer};
use crate::terms::{Letter, RankedAlphabet, Tree};

use super::hom::{identity_image, TreeHomomorphism};

/// A forest given by its permitted root symbols and permitted forks
/// `(f, (g1..gn))`. Leaves are constrained only through forks and roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSpec {
    alphabet: RankedAlphabet,
    roots: BTreeSet<Letter>,
    forks: BTreeSet<(Letter, Vec<Letter>)>,
}

impl LocalSpec {
    pub fn new(
        alphabet: RankedAlphabet,
        roots: impl IntoIterator<Item = Letter>,
        forks: impl IntoIterator<Item = (Letter, Vec<Letter>)>,
    ) -> Result<Self> {
        let spec = LocalSpec {
            alphabet,
            roots: roots.into_iter().collect(),
            forks: forks.into_iter().collect(),
        };
        for r in &spec.roots {
            if !spec.alphabet.contains(r) {
                return Err(Error::UnknownSymbol(r.to_string()));
            }
        }
        for (f, kids) in &spec.forks {
            let n = spec
                .alphabet
                .letter_arity(f)
                .ok_or_else(|| Error::UnknownSymbol(f.to_string()))?;
            if n == 0 || n != kids.len() {
                return Err(Error::ArityMismatch {
                    symbol: f.to_string(),
                    expected: n,
                    found: kids.len(),
                });
            }
            if let Some(k) = kids.iter().find(|k| !spec.alphabet.contains(k)) {
                return Err(Error::UnknownSymbol(k.to_string()));
            }
        }
        Ok(spec)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn roots(&self) -> &BTreeSet<Letter> {
        &self.roots
    }

    pub fn forks(&self) -> &BTreeSet<(Letter, Vec<Letter>)> {
        &self.forks
    }

    /// Direct membership by the definition.
    pub fn contains(&self, t: &Tree) -> bool {
        fn forks_ok(spec: &LocalSpec, t: &Tree) -> bool {
            if t.children().is_empty() {
                return true;
            }
            let kids: Vec<Letter> = t.children().iter().map(|c| c.head().clone()).collect();
            spec.forks.contains(&(t.head().clone(), kids))
                && t.children().iter().all(|c| forks_ok(spec, c))
        }
        self.roots.contains(t.head()) && forks_ok(self, t)
    }
}

fn state_of(l: &Letter) -> String {
    l.to_string()
}

/// States remember the symbol just read; finals are the root symbols.
pub fn local_recognizer(spec: &LocalSpec) -> TreeRecognizer {
    let letters = spec.alphabet.letters();
    let mut rules = BTreeSet::new();
    for (l, k) in &letters {
        if *k == 0 {
            rules.insert(Rule::new(l.clone(), Vec::new(), state_of(l)));
        }
    }
    for (f, kids) in &spec.forks {
        rules.insert(Rule::new(
            f.clone(),
            kids.iter().map(state_of).collect(),
            state_of(f),
        ));
    }
    TreeRecognizer::from_parts(
        spec.alphabet.clone(),
        letters.iter().map(|(l, _)| state_of(l)).collect(),
        spec.roots.iter().map(state_of).collect(),
        rules,
    )
}

/// Root symbols and forks occurring in accepted trees.
pub fn local_hull(a: &TreeRecognizer) -> LocalSpec {
    let a = a.trim();
    let mut heads: BTreeMap<&String, BTreeSet<&Letter>> = BTreeMap::new();
    for r in a.rules() {
        heads.entry(&r.target).or_default().insert(&r.symbol);
    }
    let roots: BTreeSet<Letter> = a
        .rules()
        .iter()
        .filter(|r| a.finals().contains(&r.target))
        .map(|r| r.symbol.clone())
        .collect();
    let mut forks = BTreeSet::new();
    for r in a.rules().iter().filter(|r| !r.args.is_empty()) {
        let mut combos: Vec<Vec<Letter>> = vec![Vec::new()];
        for q in &r.args {
            let options = &heads[q];
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |l| {
                        let mut v = prefix.clone();
                        v.push((*l).clone());
                        v
                    })
                })
                .collect();
        }
        for kids in combos {
            forks.insert((r.symbol.clone(), kids));
        }
    }
    LocalSpec {
        alphabet: a.alphabet().clone(),
        roots,
        forks,
    }
}

/// Whether `L(a)` equals the local forest spanned by its own roots and forks.
pub fn is_local(a: &TreeRecognizer) -> bool {
    let hull = local_recognizer(&local_hull(a));
    decide::equivalent(&hull, a)
        .map(|e| e.holds())
        .unwrap_or(false)
}

/// A local forest over state-annotated symbols `f@q<i>` (the `i`-th state of
/// the trimmed deterministic machine) together with the projection back to
/// the original symbols. The projection image of the local forest is `L(a)`.
pub fn medvedev_presentation(a: &TreeRecognizer) -> (LocalSpec, TreeHomomorphism) {
    let det = if a.is_deterministic() {
        a.trim()
    } else {
        a.determinize().trim()
    };
    let index: BTreeMap<&String, usize> = det.states().iter().enumerate().map(|(i, q)| (q, i)).collect();
    let annotate = |l: &Letter, q: &String| format!("{l}@q{}", index[q]);
    let mut symbols = BTreeMap::new();
    let mut project = Vec::new();
    let mut heads: BTreeMap<&String, BTreeSet<String>> = BTreeMap::new();
    let mut roots = BTreeSet::new();
    for r in det.rules() {
        let Letter::Sym(_) = &r.symbol else { continue };
        let name = annotate(&r.symbol, &r.target);
        symbols.insert(name.clone(), r.args.len());
        project.push((name.clone(), r.symbol.to_string()));
        heads.entry(&r.target).or_default().insert(name.clone());
        if det.finals().contains(&r.target) {
            roots.insert(Letter::Sym(name));
        }
    }
    let mut forks = BTreeSet::new();
    for r in det.rules().iter().filter(|r| !r.args.is_empty() && !r.symbol.is_var()) {
        let mut combos: Vec<Vec<Letter>> = vec![Vec::new()];
        for q in &r.args {
            let options: Vec<String> = heads.get(q).map(|s| s.iter().cloned().collect()).unwrap_or_default();
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |l| {
                        let mut v = prefix.clone();
                        v.push(Letter::Sym(l.clone()));
                        v
                    })
                })
                .collect();
        }
        let parent = Letter::Sym(annotate(&r.symbol, &r.target));
        for kids in combos {
            forks.insert((parent.clone(), kids));
        }
    }
    let annotated = RankedAlphabet::from_map(symbols);
    let projection_map: Vec<(String, Tree)> = project
        .into_iter()
        .map(|(name, f)| {
            let n = annotated.arity(&name).unwrap_or(0);
            (name, identity_image(&f, n))
        })
        .collect();
    let target = a.alphabet().clone().without_variables();
    let hom = TreeHomomorphism::new(annotated.clone(), target, projection_map)
        .unwrap_or_else(|e| unreachable!("projection is well-formed: {e}"));
    let spec = LocalSpec {
        alphabet: annotated,
        roots,
        forks,
    };
    (spec, hom)
}
