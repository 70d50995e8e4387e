//! Regular tree expressions and the two directions of Kleene's theorem.
//!
//! Syntax: atoms `{t1,...,tk}`, union `e + e`, x-product `e .xN e`,
//! postfix x-iteration `e *xN`, parentheses. Iteration binds tightest, then
//! product (left-associative), then union.

use core::fmt;

use crate::error::{Error, Result};
use crate::ops::{union, x_iteration, x_product};
use crate::prelude::*;
use crate::recognizer::{Indexed, TreeRecognizer};
use crate::terms::{into_canonical, parse_raw, parse_variable, RankedAlphabet, Tree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(Vec<Tree>),
    Union(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, u32, Box<Expr>),
    Iteration(Box<Expr>, u32),
}

impl Expr {
    pub fn atom(trees: impl IntoIterator<Item = Tree>) -> Expr {
        Expr::Atom(into_canonical(trees))
    }

    fn empty() -> Expr {
        Expr::Atom(Vec::new())
    }

    fn is_empty_atom(&self) -> bool {
        matches!(self, Expr::Atom(ts) if ts.is_empty())
    }

    /// Union that drops empty operands.
    fn or(self, other: Expr) -> Expr {
        if self.is_empty_atom() {
            other
        } else if other.is_empty_atom() {
            self
        } else {
            Expr::Union(Box::new(self), Box::new(other))
        }
    }

    /// Product with an empty left operand is empty.
    fn dot(self, x: u32, other: Expr) -> Expr {
        if self.is_empty_atom() {
            Expr::empty()
        } else {
            Expr::Product(Box::new(self), x, Box::new(other))
        }
    }

    /// The iteration of the empty forest is `{x}`.
    fn star(self, x: u32) -> Expr {
        if self.is_empty_atom() {
            Expr::Atom(vec![Tree::var(x)])
        } else {
            Expr::Iteration(Box::new(self), x)
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Union(..) => 0,
            Expr::Product(..) => 1,
            Expr::Iteration(..) => 2,
            Expr::Atom(_) => 3,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Atom(ts) => {
                f.write_str("{")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str("}")?;
            }
            Expr::Union(l, r) => {
                l.write(f, 0)?;
                f.write_str(" + ")?;
                r.write(f, 1)?;
            }
            Expr::Product(l, x, r) => {
                l.write(f, 1)?;
                write!(f, " .x{x} ")?;
                r.write(f, 2)?;
            }
            Expr::Iteration(e, x) => {
                e.write(f, 2)?;
                write!(f, " *x{x}")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn variables(&self, out: &mut BTreeSet<u32>) {
        match self {
            Expr::Atom(ts) => ts.iter().for_each(|t| out.extend(t.variables())),
            Expr::Union(l, r) => {
                l.variables(out);
                r.variables(out);
            }
            Expr::Product(l, x, r) => {
                out.insert(*x);
                l.variables(out);
                r.variables(out);
            }
            Expr::Iteration(e, x) => {
                out.insert(*x);
                e.variables(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// An expression together with the alphabet its atoms are written over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRegex {
    alphabet: RankedAlphabet,
    expr: Expr,
}

impl TreeRegex {
    pub fn new(alphabet: RankedAlphabet, expr: Expr) -> Result<Self> {
        fn check(al: &RankedAlphabet, e: &Expr) -> Result<()> {
            match e {
                Expr::Atom(ts) => ts.iter().try_for_each(|t| {
                    al.clone().with_variables(t.variables()).check(t)
                }),
                Expr::Union(l, r) | Expr::Product(l, _, r) => {
                    check(al, l)?;
                    check(al, r)
                }
                Expr::Iteration(e, _) => check(al, e),
            }
        }
        check(&alphabet, &expr)?;
        let mut vars = BTreeSet::new();
        expr.variables(&mut vars);
        let alphabet = alphabet.with_variables(vars);
        Ok(TreeRegex { alphabet, expr })
    }

    pub fn parse(text: &str, alphabet: &RankedAlphabet) -> Result<Self> {
        let mut p = Parser {
            text,
            pos: 0,
            alphabet,
        };
        let expr = p.union()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(Error::syntax(p.pos, "trailing input"));
        }
        TreeRegex::new(alphabet.clone(), expr)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }
}

impl fmt::Display for TreeRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    alphabet: &'a RankedAlphabet,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn union(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            e = Expr::Union(Box::new(e), Box::new(self.product()?));
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.iteration()?;
        while self.peek() == Some('.') {
            self.pos += 1;
            let x = self.variable()?;
            e = Expr::Product(Box::new(e), x, Box::new(self.iteration()?));
        }
        Ok(e)
    }

    fn iteration(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            e = Expr::Iteration(Box::new(e), self.variable()?);
        }
        Ok(e)
    }

    fn variable(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(rest.len());
        self.pos += len;
        parse_variable(&rest[..len])
            .ok_or_else(|| Error::syntax(start, "expected a variable `xN`"))
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.union()?;
                if self.peek() != Some(')') {
                    return Err(Error::syntax(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('{') => self.atom(),
            _ => Err(Error::syntax(self.pos, "expected `{` or `(`")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let open = self.pos;
        self.pos += 1;
        let mut depth = 0usize;
        let mut items = Vec::new();
        let mut item_start = self.pos;
        loop {
            let Some(c) = self.text[self.pos..].chars().next() else {
                return Err(Error::syntax(open, "unterminated atom"));
            };
            match c {
                '(' | '<' | '{' => depth += 1,
                ')' | '>' if depth > 0 => depth -= 1,
                '}' if depth > 0 => depth -= 1,
                ',' | '}' if depth == 0 => {
                    items.push((item_start, &self.text[item_start..self.pos]));
                    self.pos += 1;
                    item_start = self.pos;
                    if c == '}' {
                        break;
                    }
                    continue;
                }
                _ => {}
            }
            self.pos += c.len_utf8();
        }
        if items.len() == 1 && items[0].1.trim().is_empty() {
            return Ok(Expr::empty());
        }
        let mut trees = Vec::with_capacity(items.len());
        for (at, item) in items {
            let lead = item.len() - item.trim_start().len();
            let raw = parse_raw(item.trim()).map_err(|e| shift(e, at + lead))?;
            trees.push(raw.to_tree(self.alphabet).map_err(|e| shift(e, at + lead))?);
        }
        Ok(Expr::atom(trees))
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        other => other,
    }
}

/// Structural recursion onto the forest operations, trimming each stage.
pub fn regex_to_recognizer(e: &TreeRegex) -> Result<TreeRecognizer> {
    fn go(al: &RankedAlphabet, e: &Expr) -> Result<TreeRecognizer> {
        Ok(match e {
            Expr::Atom(ts) => TreeRecognizer::from_trees(al.clone(), ts)?,
            Expr::Union(l, r) => union(&go(al, l)?, &go(al, r)?)?,
            Expr::Product(l, x, r) => x_product(&go(al, l)?, *x, &go(al, r)?)?,
            Expr::Iteration(e, x) => x_iteration(&go(al, e)?, *x),
        }
        .trim())
    }
    let a = go(&e.alphabet, &e.expr)?;
    a.with_alphabet(&e.alphabet)
}

/// Expression for `L(a)` by the inductive method. With states `q1..qm` of
/// the trimmed machine and a bridge variable `yi` standing for a subtree
/// evaluated to `qi`, `T(q,k)` denotes the trees reaching `q` whose proper
/// subtrees only pass through `q1..qk`:
///
/// * `T(q,0)` is the atom of one-step trees `f(y_p1,...,y_pn)`;
/// * `T(q,k+1) = T(q,k) .y (T(p,k) *y)` with `p = q(k+1)`, `y = y(k+1)`.
///
/// The result is the union of `T(q,m)` over final `q`, with every bridge
/// variable finally multiplied by the empty atom to discard open holes.
/// Bridge variables are `x1001, x1002, ...`, shifted past any variable
/// already in use.
pub fn recognizer_to_regex(a: &TreeRecognizer) -> TreeRegex {
    let a = a.trim();
    let ix = Indexed::new(&a);
    let m = ix.len();
    let base = a.alphabet().variables().iter().copied().max().unwrap_or(0).max(1000);
    let bridge = |i: usize| base + 1 + i as u32;
    let mut t: Vec<Expr> = (0..m)
        .map(|q| {
            let mut trees = Vec::new();
            for (letter, rules) in &ix.trans {
                for (args, target) in rules {
                    if *target == q {
                        let kids = args.iter().map(|&p| Tree::var(bridge(p))).collect();
                        trees.push(Tree::new(letter.clone(), kids));
                    }
                }
            }
            Expr::atom(trees)
        })
        .collect();
    for k in 0..m {
        let y = bridge(k);
        let loop_k = t[k].clone().star(y);
        t = t.into_iter().map(|e| e.dot(y, loop_k.clone())).collect();
    }
    let mut expr = Expr::empty();
    for (q, e) in t.into_iter().enumerate() {
        if ix.finals[q] {
            expr = expr.or(e);
        }
    }
    for k in 0..m {
        expr = expr.dot(bridge(k), Expr::empty());
    }
    TreeRegex::new(a.alphabet().clone(), expr).expect("atoms are built over the alphabet")
}
