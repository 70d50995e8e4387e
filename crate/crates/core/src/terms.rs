//! Ranked alphabets, trees over them, the canonical term syntax and bounded
//! enumeration.
//!
//! Frontier variables form one countable family `x1, x2, ...` shared by the
//! whole crate. They are never symbols: any name of the form `x` followed by
//! digits is reserved.

use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::prelude::*;

/// A node label: either a symbol of the alphabet or a frontier variable `xN`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Sym(String),
    Var(u32),
}

impl Letter {
    pub fn sym(name: impl Into<String>) -> Self {
        Letter::Sym(name.into())
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Letter::Sym(s) => Some(s),
            Letter::Var(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Letter::Var(_))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sym(s) => f.write_str(s),
            Letter::Var(i) => write!(f, "x{i}"),
        }
    }
}

/// `Some(n)` if `name` is spelled like a frontier variable (`x` + digits).
/// `x0` and zero-padded forms are reserved but yield `Some(0)` / the value;
/// callers decide whether such spellings are legal.
pub(crate) fn variable_form(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(digits.parse().unwrap_or(u32::MAX))
}

/// Parses a canonical variable spelling `xN` with `N >= 1` and no leading zero.
pub fn parse_variable(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.starts_with('0') {
        return None;
    }
    variable_form(name).filter(|&n| n > 0 && n != u32::MAX)
}

/// Symbol names: `[A-Za-z_][A-Za-z0-9_@]*`, excluding the reserved `xN` class.
pub fn is_valid_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    (first.is_ascii_alphabetic() || first == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '@')
        && variable_form(name).is_none()
}

/// Names usable for states and nonterminals in the text formats: a single
/// leaf token for [`parse_raw`] without `#` (reserved for state calls).
pub fn is_plain_name(name: &str) -> bool {
    !name.contains('#')
        && parse_raw(name).is_ok_and(|r| r.children.is_empty() && r.name == name)
}

/// A finite set of symbols with arities, plus the frontier variables that
/// trees over it may carry as extra nullary letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RankedAlphabet {
    symbols: BTreeMap<String, usize>,
    variables: BTreeSet<u32>,
}

impl RankedAlphabet {
    /// Builds an alphabet, checking names, uniqueness and that at least one
    /// nullary symbol exists.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let alphabet = Self::with_symbols(symbols)?;
        if !alphabet.symbols.values().any(|&k| k == 0) {
            return Err(Error::NoNullarySymbol);
        }
        Ok(alphabet)
    }

    /// Like [`RankedAlphabet::new`] but without the nullary-symbol requirement.
    /// Constructions such as relabelings may legitimately produce such
    /// signatures.
    pub fn with_symbols<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, arity) in symbols {
            let name = name.into();
            if !is_valid_symbol_name(&name) {
                return Err(Error::InvalidName(name));
            }
            if map.insert(name.clone(), arity).is_some() {
                return Err(Error::DuplicateSymbol(name));
            }
        }
        Ok(RankedAlphabet {
            symbols: map,
            variables: BTreeSet::new(),
        })
    }

    pub(crate) fn from_map(symbols: BTreeMap<String, usize>) -> Self {
        RankedAlphabet {
            symbols,
            variables: BTreeSet::new(),
        }
    }

    /// The same symbols with the given frontier variables declared.
    pub fn with_variables(mut self, vars: impl IntoIterator<Item = u32>) -> Self {
        self.variables.extend(vars);
        self
    }

    pub fn without_variable(mut self, var: u32) -> Self {
        self.variables.remove(&var);
        self
    }

    pub fn without_variables(mut self) -> Self {
        self.variables.clear();
        self
    }

    pub fn symbols(&self) -> &BTreeMap<String, usize> {
        &self.symbols
    }

    pub fn variables(&self) -> &BTreeSet<u32> {
        &self.variables
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.symbols.get(symbol).copied()
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        match letter {
            Letter::Sym(s) => self.symbols.contains_key(s),
            Letter::Var(v) => self.variables.contains(v),
        }
    }

    pub fn letter_arity(&self, letter: &Letter) -> Option<usize> {
        match letter {
            Letter::Sym(s) => self.arity(s),
            Letter::Var(v) => self.variables.contains(v).then_some(0),
        }
    }

    /// All letters with their arities: symbols first (by name), then variables.
    pub fn letters(&self) -> Vec<(Letter, usize)> {
        self.symbols
            .iter()
            .map(|(s, &k)| (Letter::Sym(s.clone()), k))
            .chain(self.variables.iter().map(|&v| (Letter::Var(v), 0)))
            .collect()
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.values().copied().max().unwrap_or(0)
    }

    /// Same symbol table (variables may differ).
    pub fn same_symbols(&self, other: &RankedAlphabet) -> bool {
        self.symbols == other.symbols
    }

    /// Symbols must agree; the variable sets are merged.
    pub fn merge(&self, other: &RankedAlphabet) -> Result<RankedAlphabet> {
        if !self.same_symbols(other) {
            return Err(Error::AlphabetMismatch);
        }
        let mut merged = self.clone();
        merged.variables.extend(other.variables.iter().copied());
        Ok(merged)
    }

    /// Checks that every symbol of `tree` is declared with the right arity.
    /// Variables are always accepted as leaves.
    pub fn check(&self, tree: &Tree) -> Result<()> {
        match &tree.head {
            Letter::Var(_) => {
                if !tree.children.is_empty() {
                    return Err(Error::Invalid(format!("variable {} has children", tree.head)));
                }
            }
            Letter::Sym(s) => {
                let expected = self
                    .arity(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                if expected != tree.children.len() {
                    return Err(Error::ArityMismatch {
                        symbol: s.clone(),
                        expected,
                        found: tree.children.len(),
                    });
                }
            }
        }
        tree.children.iter().try_for_each(|c| self.check(c))
    }
}

impl fmt::Display for RankedAlphabet {
    /// `f:2 g:1 a:0`, variables appended as `xN:0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, k) in &self.symbols {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{s}:{k}")?;
        }
        for v in &self.variables {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "x{v}:0")?;
        }
        Ok(())
    }
}

/// A finite ordered ranked tree. Structural equality is the only equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    head: Letter,
    children: Vec<Tree>,
}

impl Tree {
    pub fn new(head: Letter, children: Vec<Tree>) -> Self {
        Tree { head, children }
    }

    pub fn leaf(symbol: impl Into<String>) -> Self {
        Tree::new(Letter::Sym(symbol.into()), Vec::new())
    }

    pub fn node(symbol: impl Into<String>, children: Vec<Tree>) -> Self {
        Tree::new(Letter::Sym(symbol.into()), children)
    }

    pub fn var(index: u32) -> Self {
        Tree::new(Letter::Var(index), Vec::new())
    }

    pub fn head(&self) -> &Letter {
        &self.head
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn into_parts(self) -> (Letter, Vec<Tree>) {
        (self.head, self.children)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Tree::height).max().unwrap_or(0)
    }

    pub fn is_ground(&self) -> bool {
        !self.head.is_var() && self.children.iter().all(Tree::is_ground)
    }

    pub fn occurrences(&self, var: u32) -> usize {
        usize::from(self.head == Letter::Var(var))
            + self.children.iter().map(|c| c.occurrences(var)).sum::<usize>()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<u32>) {
        if let Letter::Var(v) = self.head {
            out.insert(v);
        }
        for c in &self.children {
            c.collect_variables(out);
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&Letter> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Letter>) {
        if self.children.is_empty() {
            out.push(&self.head);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    /// Replaces every occurrence of `var` by `by`.
    pub fn substitute(&self, var: u32, by: &Tree) -> Tree {
        if self.head == Letter::Var(var) {
            return by.clone();
        }
        Tree::new(
            self.head.clone(),
            self.children.iter().map(|c| c.substitute(var, by)).collect(),
        )
    }

    /// Simultaneous substitution `xi := by[i-1]`; variables beyond `by.len()`
    /// are left untouched.
    pub fn substitute_all(&self, by: &[Tree]) -> Tree {
        if let Letter::Var(v) = self.head {
            if v >= 1 && (v as usize) <= by.len() {
                return by[v as usize - 1].clone();
            }
        }
        Tree::new(
            self.head.clone(),
            self.children.iter().map(|c| c.substitute_all(by)).collect(),
        )
    }

    /// Parses canonical term text against `alphabet`.
    pub fn parse(text: &str, alphabet: &RankedAlphabet) -> Result<Tree> {
        parse_tree(text, alphabet)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Canonical text, `sym(c1,...,ck)` with no whitespace.
pub fn print_tree(tree: &Tree) -> String {
    tree.to_string()
}

/// Enumeration order: node count, then canonical text.
pub fn canonical_cmp(a: &Tree, b: &Tree) -> Ordering {
    a.size()
        .cmp(&b.size())
        .then_with(|| a.to_string().cmp(&b.to_string()))
}

/// Sorts into enumeration order and removes duplicates.
pub fn sort_canonical(trees: &mut Vec<Tree>) {
    trees.sort_by_cached_key(|t| (t.size(), t.to_string()));
    trees.dedup();
}

pub fn into_canonical(trees: impl IntoIterator<Item = Tree>) -> Vec<Tree> {
    let mut v: Vec<Tree> = trees.into_iter().collect();
    sort_canonical(&mut v);
    v
}

/// An unresolved term: names are not yet classified as symbols, variables,
/// states or nonterminals. File formats reuse this for rule right sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTerm {
    pub name: String,
    /// Byte offset of the name in the parsed text.
    pub pos: usize,
    pub children: Vec<RawTerm>,
}

/// Parses `name` or `name(t1,...,tn)`. Names run until `(`, `)`, `,` or
/// whitespace, except inside `<...>` or `{...}` brackets, which lets
/// synthetic state names such as `<p,q>` appear as leaves.
pub fn parse_raw(text: &str) -> Result<RawTerm> {
    let mut p = RawParser { text, pos: 0 };
    let term = p.term()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::syntax(p.pos, "trailing input"));
    }
    Ok(term)
}

struct RawParser<'a> {
    text: &'a str,
    pos: usize,
}

impl RawParser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn name(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            match c {
                '<' | '{' => depth += 1,
                '>' | '}' if depth > 0 => depth -= 1,
                '(' | ')' | ',' if depth == 0 => break,
                c if c.is_whitespace() && depth == 0 => break,
                _ => {}
            }
            self.pos += c.len_utf8();
        }
        if depth != 0 {
            return Err(Error::syntax(start, "unbalanced bracket in name"));
        }
        if self.pos == start {
            return Err(Error::syntax(start, "expected a name"));
        }
        Ok((self.text[start..self.pos].to_owned(), start))
    }

    fn term(&mut self) -> Result<RawTerm> {
        let (name, pos) = self.name()?;
        self.skip_ws();
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.term()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(Error::syntax(self.pos, "expected `,` or `)`")),
                }
            }
        }
        Ok(RawTerm {
            name,
            pos,
            children,
        })
    }
}

impl RawTerm {
    /// Resolves names against `alphabet`; `xN` names become variables.
    pub fn to_tree(&self, alphabet: &RankedAlphabet) -> Result<Tree> {
        self.to_tree_with(alphabet, &|_| None)
    }

    /// Like [`RawTerm::to_tree`], but names for which `extra` returns a leaf
    /// (nonterminals, state calls) are accepted as that leaf.
    pub fn to_tree_with(
        &self,
        alphabet: &RankedAlphabet,
        extra: &dyn Fn(&str) -> Option<Letter>,
    ) -> Result<Tree> {
        let head = if let Some(letter) = extra(&self.name) {
            if !self.children.is_empty() {
                return Err(Error::syntax(self.pos, format!("`{}` must be a leaf", self.name)));
            }
            letter
        } else if variable_form(&self.name).is_some() {
            let v = parse_variable(&self.name).ok_or_else(|| {
                Error::syntax(self.pos, format!("malformed variable `{}`", self.name))
            })?;
            if !self.children.is_empty() {
                return Err(Error::syntax(self.pos, "variables take no arguments"));
            }
            Letter::Var(v)
        } else {
            let expected = alphabet
                .arity(&self.name)
                .ok_or_else(|| Error::UnknownSymbol(self.name.clone()))?;
            if expected != self.children.len() {
                return Err(Error::ArityMismatch {
                    symbol: self.name.clone(),
                    expected,
                    found: self.children.len(),
                });
            }
            Letter::Sym(self.name.clone())
        };
        let children = self
            .children
            .iter()
            .map(|c| c.to_tree_with(alphabet, extra))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tree::new(head, children))
    }
}

/// Parses a tree in canonical syntax (whitespace between tokens is tolerated).
pub fn parse_tree(text: &str, alphabet: &RankedAlphabet) -> Result<Tree> {
    parse_raw(text)?.to_tree(alphabet)
}

/// Every variable-free tree over `alphabet` with at most `max_nodes` nodes,
/// each once, in enumeration order.
pub fn enumerate_trees(alphabet: &RankedAlphabet, max_nodes: usize) -> Vec<Tree> {
    let letters: Vec<(Letter, usize)> = alphabet
        .symbols()
        .iter()
        .map(|(s, &k)| (Letter::Sym(s.clone()), k))
        .collect();
    enumerate_over(&letters, max_nodes)
}

/// Enumeration over an explicit letter list (used for contexts and for
/// forests with frontier variables).
pub fn enumerate_over(letters: &[(Letter, usize)], max_nodes: usize) -> Vec<Tree> {
    by_size(letters, max_nodes).into_iter().flatten().collect()
}

/// `result[n]` holds all trees with exactly `n` nodes, sorted by text.
pub fn by_size(letters: &[(Letter, usize)], max_nodes: usize) -> Vec<Vec<Tree>> {
    let mut sizes: Vec<Vec<Tree>> = vec![Vec::new(); max_nodes + 1];
    for n in 1..=max_nodes {
        let mut class = Vec::new();
        for (letter, arity) in letters {
            if *arity == 0 {
                if n == 1 {
                    class.push(Tree::new(letter.clone(), Vec::new()));
                }
                continue;
            }
            if n - 1 < *arity {
                continue;
            }
            let mut parts = Vec::with_capacity(*arity);
            compositions(n - 1, *arity, &mut parts, &mut |parts| {
                let mut acc: Vec<Vec<Tree>> = vec![Vec::new()];
                for &p in parts {
                    let mut next = Vec::with_capacity(acc.len() * sizes[p].len());
                    for prefix in &acc {
                        for t in &sizes[p] {
                            let mut v = prefix.clone();
                            v.push(t.clone());
                            next.push(v);
                        }
                    }
                    acc = next;
                }
                class.extend(acc.into_iter().map(|cs| Tree::new(letter.clone(), cs)));
            });
        }
        class.sort_by_cached_key(|t| t.to_string());
        sizes[n] = class;
    }
    sizes
}

/// Calls `f` with every sequence of `k` positive integers summing to `total`.
fn compositions(total: usize, k: usize, parts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k == 0 {
        if total == 0 {
            f(parts);
        }
        return;
    }
    let rest = k - 1;
    for first in 1..=total.saturating_sub(rest) {
        parts.push(first);
        compositions(total - first, rest, parts, f);
        parts.pop();
    }
}

/// Picks a name not in `taken`, starting from `base` and appending `'`.
pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_owned();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fga() -> RankedAlphabet {
        RankedAlphabet::new([("f", 2), ("g", 1), ("a", 0)]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let t = parse_tree("f(a,g(a))", &fga()).unwrap();
        assert_eq!(
            t,
            Tree::node("f", vec![Tree::leaf("a"), Tree::node("g", vec![Tree::leaf("a")])])
        );
        assert_eq!(t.to_string(), "f(a,g(a))");
        assert_eq!(parse_tree("a", &fga()).unwrap(), Tree::leaf("a"));
        assert_eq!(parse_tree(" f( a , a ) ", &fga()).unwrap().to_string(), "f(a,a)");
        assert_eq!(Tree::var(1).to_string(), "x1");
    }

    #[test]
    fn parse_errors() {
        let fa = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
        assert!(matches!(
            parse_tree("f(a)", &fa),
            Err(Error::ArityMismatch { expected: 2, found: 1, .. })
        ));
        assert!(matches!(parse_tree("h(a)", &fa), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_tree("f(a,a", &fa), Err(Error::Syntax { .. })));
        assert!(matches!(parse_tree("f(a,a))", &fa), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_tree("f()", &fa), Err(Error::Syntax { .. })));
        assert!(matches!(parse_tree("x0", &fa), Err(Error::Syntax { .. })));
        assert!(matches!(parse_tree("x1(a)", &fa), Err(Error::Syntax { .. })));
    }

    #[test]
    fn alphabet_validation() {
        assert!(matches!(RankedAlphabet::new([("f", 2)]), Err(Error::NoNullarySymbol)));
        assert!(matches!(RankedAlphabet::new([("x3", 0)]), Err(Error::InvalidName(_))));
        assert!(matches!(RankedAlphabet::new([("1a", 0)]), Err(Error::InvalidName(_))));
        assert!(matches!(
            RankedAlphabet::new([("a", 0), ("a", 0)]),
            Err(Error::DuplicateSymbol(_))
        ));
        assert!(RankedAlphabet::new([("x", 0), ("x0a", 1), ("S@2", 2)]).is_ok());
        assert_eq!(fga().to_string(), "a:0 f:2 g:1");
    }

    #[test]
    fn enumeration_examples() {
        let a = RankedAlphabet::new([("a", 0)]).unwrap();
        assert_eq!(enumerate_trees(&a, 3), vec![Tree::leaf("a")]);
        let ga = RankedAlphabet::new([("g", 1), ("a", 0)]).unwrap();
        let texts: Vec<String> = enumerate_trees(&ga, 3).iter().map(|t| t.to_string()).collect();
        assert_eq!(texts, ["a", "g(a)", "g(g(a))"]);
    }

    /// Binary trees with k leaves have 2k-1 nodes and there are Catalan(k-1)
    /// of them.
    #[test]
    fn binary_tree_count_matches_catalan() {
        let fa = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
        let catalan = |n: u64| -> u64 {
            let mut c = 1u64;
            for i in 0..n {
                c = c * 2 * (2 * i + 1) / (i + 2);
            }
            c
        };
        let up_to = |max_nodes: u64| -> u64 { (1..=(max_nodes + 1) / 2).map(|k| catalan(k - 1)).sum() };
        // a, f(a,a), f(f(a,a),a), f(a,f(a,a))
        assert_eq!(enumerate_trees(&fa, 5).len() as u64, up_to(5));
        assert_eq!(up_to(5), 4);
        assert_eq!(enumerate_trees(&fa, 7).len() as u64, up_to(7));
        assert_eq!(enumerate_trees(&fa, 9).len() as u64, up_to(9));
    }

    #[test]
    fn substitution_examples() {
        let al = fga().with_variables([1]);
        let g_x1 = parse_tree("g(x1)", &al).unwrap();
        let a = Tree::leaf("a");
        assert_eq!(g_x1.substitute(1, &a).to_string(), "g(a)");
        let f_x1x1 = parse_tree("f(x1,x1)", &al).unwrap();
        let ga = parse_tree("g(a)", &al).unwrap();
        assert_eq!(f_x1x1.substitute(1, &ga).to_string(), "f(g(a),g(a))");
        assert_eq!(a.substitute(1, &Tree::leaf("b")), a);
    }

    #[test]
    fn raw_names_with_brackets() {
        let raw = parse_raw("f(<p,q>,{a_b})").unwrap();
        assert_eq!(raw.children[0].name, "<p,q>");
        assert_eq!(raw.children[1].name, "{a_b}");
    }
}
