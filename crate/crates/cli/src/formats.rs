//! Line-oriented document formats.
//!
//! Every document starts with a kind tag on its first line, followed by
//! keyword lines. `#` starts a comment when it begins a line or follows
//! whitespace, so state calls such as `q#1` survive. Printing is canonical:
//! sets in sorted order, one space between tokens, LF line endings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context as _, Result};
use arbor_core::cfl::ContextFreeGrammar;
use arbor_core::grammar::RegularTreeGrammar;
use arbor_core::ops::{LocalSpec, TreeHomomorphism};
use arbor_core::regex::TreeRegex;
use arbor_core::terms::{parse_raw, parse_variable, RawTerm};
use arbor_core::topdown::{RootRecognizer, RootRule};
use arbor_core::transducer::{
    BottomUpTransducer, BuRule, LaRule, LookaheadTransducer, Rhs, TdRule, TopDownTransducer,
};
use arbor_core::{Letter, RankedAlphabet, Rule, Tree, TreeRecognizer};

/// Separates documents in multi-document output.
pub const SEPARATOR: &str = "---";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Fta,
    Rfa,
    Rtg,
    Cfg,
    Td,
    Bu,
    Tdla,
    Regex,
    Local,
    Hom,
}

impl Kind {
    pub fn tag(self) -> &'static str {
        match self {
            Kind::Fta => "fta",
            Kind::Rfa => "rfa",
            Kind::Rtg => "rtg",
            Kind::Cfg => "cfg",
            Kind::Td => "td",
            Kind::Bu => "bu",
            Kind::Tdla => "tdla",
            Kind::Regex => "regex",
            Kind::Local => "local",
            Kind::Hom => "hom",
        }
    }

    fn from_tag(tag: &str) -> Option<Kind> {
        [
            Kind::Fta,
            Kind::Rfa,
            Kind::Rtg,
            Kind::Cfg,
            Kind::Td,
            Kind::Bu,
            Kind::Tdla,
            Kind::Regex,
            Kind::Local,
            Kind::Hom,
        ]
        .into_iter()
        .find(|k| k.tag() == tag)
    }
}

/// A look-ahead transducer together with the file names its guards were
/// loaded from, so that it prints back the way it was written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tdla {
    pub transducer: LookaheadTransducer,
    /// Parallel to `transducer.rules()`.
    pub guard_names: Vec<Vec<Option<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Fta(TreeRecognizer),
    Rfa(RootRecognizer),
    Rtg(RegularTreeGrammar),
    Cfg(ContextFreeGrammar),
    Td(TopDownTransducer),
    Bu(BottomUpTransducer),
    Tdla(Tdla),
    Regex(TreeRegex),
    Local(LocalSpec),
    Hom(TreeHomomorphism),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Fta(_) => Kind::Fta,
            Document::Rfa(_) => Kind::Rfa,
            Document::Rtg(_) => Kind::Rtg,
            Document::Cfg(_) => Kind::Cfg,
            Document::Td(_) => Kind::Td,
            Document::Bu(_) => Kind::Bu,
            Document::Tdla(_) => Kind::Tdla,
            Document::Regex(_) => Kind::Regex,
            Document::Local(_) => Kind::Local,
            Document::Hom(_) => Kind::Hom,
        }
    }
}

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    rest: &'a str,
}

fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = c.is_whitespace();
    }
    line
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                return None;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            Some(Line {
                number: i + 1,
                keyword,
                rest: rest.trim(),
            })
        })
        .collect()
}

/// Keyword lines of one document, with once-only headers checked.
struct Body<'a> {
    kind: Kind,
    lines: Vec<Line<'a>>,
}

impl<'a> Body<'a> {
    fn header(&self, keyword: &str) -> Result<Option<&Line<'a>>> {
        let mut found = self.lines.iter().filter(|l| l.keyword == keyword);
        let first = found.next();
        if let Some(again) = found.next() {
            bail!("line {}: duplicate `{keyword}` line", again.number);
        }
        Ok(first)
    }

    fn required(&self, keyword: &str) -> Result<&Line<'a>> {
        self.header(keyword)?
            .ok_or_else(|| anyhow!("{} document has no `{keyword}` line", self.kind.tag()))
    }

    fn names(&self, keyword: &str) -> Result<Vec<String>> {
        Ok(self
            .required(keyword)?
            .rest
            .split_whitespace()
            .map(String::from)
            .collect())
    }

    fn optional_names(&self, keyword: &str) -> Result<Vec<String>> {
        Ok(self
            .header(keyword)?
            .map(|l| l.rest.split_whitespace().map(String::from).collect())
            .unwrap_or_default())
    }

    fn repeated(&self, keyword: &'a str) -> impl Iterator<Item = &Line<'a>> + '_ {
        self.lines.iter().filter(move |l| l.keyword == keyword)
    }

    fn alphabet(&self, keyword: &str) -> Result<RankedAlphabet> {
        let line = self.required(keyword)?;
        parse_alphabet(line.rest).with_context(|| format!("line {}", line.number))
    }

    fn expect_only(&self, allowed: &[&str]) -> Result<()> {
        match self.lines.iter().find(|l| !allowed.contains(&l.keyword)) {
            Some(l) => bail!(
                "line {}: unexpected `{}` in {} document",
                l.number,
                l.keyword,
                self.kind.tag()
            ),
            None => Ok(()),
        }
    }
}

/// `f:2 g:1 a:0`, with `xN:0` entries declaring variables.
pub fn parse_alphabet(text: &str) -> Result<RankedAlphabet> {
    let mut symbols = Vec::new();
    let mut variables = Vec::new();
    for token in text.split_whitespace() {
        let (name, arity) = token
            .rsplit_once(':')
            .ok_or_else(|| anyhow!("expected `name:arity`, found `{token}`"))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| anyhow!("bad arity in `{token}`"))?;
        match parse_variable(name) {
            Some(v) if arity == 0 => variables.push(v),
            Some(_) => bail!("variable `{name}` must have arity 0"),
            None => symbols.push((name, arity)),
        }
    }
    Ok(RankedAlphabet::with_symbols(symbols)?.with_variables(variables))
}

fn split_arrow<'a>(line: &Line<'a>) -> Result<(&'a str, &'a str)> {
    line.rest
        .split_once("->")
        .map(|(l, r)| (l.trim(), r.trim()))
        .ok_or_else(|| anyhow!("line {}: expected `->`", line.number))
}

fn letter_of(name: &str) -> Letter {
    match parse_variable(name) {
        Some(v) => Letter::Var(v),
        None => Letter::sym(name),
    }
}

fn leaf_name(t: &RawTerm) -> Result<String> {
    if !t.children.is_empty() {
        bail!("`{}` must be a plain name", t.name);
    }
    Ok(t.name.clone())
}

/// Splits `(a,b,<p,q>)` into its top-level items.
fn tuple_items(text: &str) -> Result<Vec<String>> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| anyhow!("expected `(q1,...,qn)`, found `{text}`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut items = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '<' | '{' | '(' => depth += 1,
            '>' | '}' | ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                items.push(inner[start..i].trim().to_owned());
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(inner[start..].trim().to_owned());
    Ok(items)
}

fn at_line<T>(line: &Line<'_>, r: arbor_core::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!("line {}: {e}", line.number))
}

/// Parses a single document. `guard` loads the recognizer named by a tdla
/// guard reference.
pub fn parse_document(
    text: &str,
    guard: &mut dyn FnMut(&str) -> Result<TreeRecognizer>,
) -> Result<Document> {
    let mut lines = content_lines(text);
    if lines.is_empty() {
        bail!("empty document");
    }
    let tag = lines.remove(0);
    if !tag.rest.is_empty() {
        bail!("line {}: kind tag must stand alone", tag.number);
    }
    let kind = Kind::from_tag(tag.keyword)
        .ok_or_else(|| anyhow!("line {}: unknown document kind `{}`", tag.number, tag.keyword))?;
    let body = Body { kind, lines };
    let doc = match kind {
        Kind::Fta => Document::Fta(parse_fta(&body)?),
        Kind::Rfa => Document::Rfa(parse_rfa(&body)?),
        Kind::Rtg => Document::Rtg(parse_rtg(&body)?),
        Kind::Cfg => Document::Cfg(parse_cfg(&body)?),
        Kind::Td => Document::Td(parse_td(&body)?),
        Kind::Bu => Document::Bu(parse_bu(&body)?),
        Kind::Tdla => Document::Tdla(parse_tdla(&body, guard)?),
        Kind::Regex => Document::Regex(parse_regex(&body)?),
        Kind::Local => Document::Local(parse_local(&body)?),
        Kind::Hom => Document::Hom(parse_hom(&body)?),
    };
    Ok(doc)
}

/// Splits multi-document text at `---` lines.
pub fn split_documents(text: &str) -> Vec<String> {
    let mut docs = vec![String::new()];
    for line in text.lines() {
        if line.trim() == SEPARATOR {
            docs.push(String::new());
        } else {
            let current = docs.last_mut().expect("at least one document");
            current.push_str(line);
            current.push('\n');
        }
    }
    docs.retain(|d| !content_lines(d).is_empty());
    docs
}

fn parse_fta(body: &Body<'_>) -> Result<TreeRecognizer> {
    body.expect_only(&["alphabet", "states", "final", "rule"])?;
    let alphabet = body.alphabet("alphabet")?;
    let mut rules = Vec::new();
    for line in body.repeated("rule") {
        let (lhs, target) = split_arrow(line)?;
        let lhs = at_line(line, parse_raw(lhs))?;
        let args = lhs
            .children
            .iter()
            .map(leaf_name)
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("line {}", line.number))?;
        rules.push(Rule::new(letter_of(&lhs.name), args, target));
    }
    Ok(TreeRecognizer::new(
        alphabet,
        body.names("states")?,
        body.optional_names("final")?,
        rules,
    )?)
}

fn parse_rfa(body: &Body<'_>) -> Result<RootRecognizer> {
    body.expect_only(&["alphabet", "states", "initial", "rule", "leaf"])?;
    let alphabet = body.alphabet("alphabet")?;
    let mut rules = Vec::new();
    for line in body.repeated("rule") {
        let (lhs, rhs) = split_arrow(line)?;
        let mut parts = lhs.split_whitespace();
        let (Some(q), Some(f), None) = (parts.next(), parts.next(), parts.next()) else {
            bail!("line {}: expected `rule q f -> (q1,...,qn)`", line.number);
        };
        let children = tuple_items(rhs).with_context(|| format!("line {}", line.number))?;
        rules.push(RootRule {
            state: q.to_owned(),
            symbol: letter_of(f),
            children,
        });
    }
    let mut leaves = Vec::new();
    for line in body.repeated("leaf") {
        let mut parts = line.rest.split_whitespace();
        let (Some(q), Some(a), None) = (parts.next(), parts.next(), parts.next()) else {
            bail!("line {}: expected `leaf q a`", line.number);
        };
        leaves.push((q.to_owned(), letter_of(a)));
    }
    Ok(RootRecognizer::new(
        alphabet,
        body.names("states")?,
        body.optional_names("initial")?,
        rules,
        leaves,
    )?)
}

fn parse_rtg(body: &Body<'_>) -> Result<RegularTreeGrammar> {
    body.expect_only(&["alphabet", "nonterminals", "start", "prod"])?;
    let alphabet = body.alphabet("alphabet")?;
    let nonterminals: BTreeSet<String> = body.names("nonterminals")?.into_iter().collect();
    let start = body.required("start")?.rest;
    let mut productions = Vec::new();
    for line in body.repeated("prod") {
        let (lhs, rhs) = split_arrow(line)?;
        let raw = at_line(line, parse_raw(rhs))?;
        let tree = at_line(
            line,
            raw.to_tree_with(&alphabet, &|n| {
                nonterminals.contains(n).then(|| Letter::sym(n))
            }),
        )?;
        productions.push((lhs.to_owned(), tree));
    }
    Ok(RegularTreeGrammar::new(alphabet, nonterminals, start, productions)?)
}

fn parse_cfg(body: &Body<'_>) -> Result<ContextFreeGrammar> {
    body.expect_only(&["terminals", "nonterminals", "start", "prod"])?;
    let start = body.required("start")?.rest;
    let mut productions = Vec::new();
    for line in body.repeated("prod") {
        let (lhs, rhs) = split_arrow(line)?;
        productions.push((lhs.to_owned(), rhs.split_whitespace().map(String::from).collect()));
    }
    Ok(ContextFreeGrammar::new(
        body.optional_names("terminals")?,
        body.names("nonterminals")?,
        start,
        productions,
    )?)
}

/// The output alphabet defaults to the input alphabet when omitted.
fn alphabets(body: &Body<'_>) -> Result<(RankedAlphabet, RankedAlphabet)> {
    let input = body.alphabet("alphabet")?;
    let output = match body.header("output")? {
        Some(_) => body.alphabet("output")?,
        None => input.clone(),
    };
    Ok((input, output))
}

fn td_rule(line: &Line<'_>, output: &RankedAlphabet) -> Result<TdRule> {
    let (lhs, rhs) = split_arrow(line)?;
    let mut parts = lhs.split_whitespace();
    let (Some(q), Some(f), None) = (parts.next(), parts.next(), parts.next()) else {
        bail!("line {}: expected `rule q f -> rhs`", line.number);
    };
    let rhs = at_line(line, Rhs::parse(rhs, output))?;
    Ok(TdRule::new(q, f, rhs))
}

fn parse_td(body: &Body<'_>) -> Result<TopDownTransducer> {
    body.expect_only(&["alphabet", "output", "states", "initial", "rule"])?;
    let (input, output) = alphabets(body)?;
    let rules = body
        .repeated("rule")
        .map(|l| td_rule(l, &output))
        .collect::<Result<Vec<_>>>()?;
    Ok(TopDownTransducer::new(
        input,
        output,
        body.names("states")?,
        body.optional_names("initial")?,
        rules,
    )?)
}

fn parse_bu(body: &Body<'_>) -> Result<BottomUpTransducer> {
    body.expect_only(&["alphabet", "output", "states", "final", "rule"])?;
    let (input, output) = alphabets(body)?;
    let mut rules = Vec::new();
    for line in body.repeated("rule") {
        let (lhs, rest) = split_arrow(line)?;
        let (target, rhs) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("line {}: expected `-> q : rhs`", line.number))?;
        let lhs = at_line(line, parse_raw(lhs))?;
        let args = lhs
            .children
            .iter()
            .map(leaf_name)
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("line {}", line.number))?;
        let rhs = at_line(line, parse_raw(rhs.trim()).and_then(|r| r.to_tree(&output)))?;
        rules.push(BuRule::new(lhs.name, args, target.trim(), rhs));
    }
    Ok(BottomUpTransducer::new(
        input,
        output,
        body.names("states")?,
        body.optional_names("final")?,
        rules,
    )?)
}

fn is_unguarded(name: &str) -> bool {
    name == "_" || name == "any"
}

fn parse_tdla(
    body: &Body<'_>,
    guard: &mut dyn FnMut(&str) -> Result<TreeRecognizer>,
) -> Result<Tdla> {
    body.expect_only(&["alphabet", "output", "states", "initial", "rule"])?;
    let (input, output) = alphabets(body)?;
    let mut rules = Vec::new();
    let mut guard_names = Vec::new();
    for line in body.repeated("rule") {
        let (rule_text, names) = match line.rest.strip_suffix(']').and_then(|s| s.rsplit_once('[')) {
            Some((rule_text, list)) => {
                let names: Vec<String> = list.split(',').map(|s| s.trim().to_owned()).collect();
                (rule_text.trim_end(), names)
            }
            None => (line.rest, Vec::new()),
        };
        let stripped = Line {
            number: line.number,
            keyword: line.keyword,
            rest: rule_text,
        };
        let rule = td_rule(&stripped, &output)?;
        let arity = input.arity(&rule.symbol).unwrap_or(0);
        let names: Vec<Option<String>> = if names.is_empty() {
            vec![None; arity]
        } else {
            names
                .into_iter()
                .map(|n| (!is_unguarded(&n)).then_some(n))
                .collect()
        };
        let guards = names
            .iter()
            .map(|n| n.as_deref().map(&mut *guard).transpose())
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("line {}", line.number))?;
        rules.push(LaRule { rule, guards });
        guard_names.push(names);
    }
    let transducer = LookaheadTransducer::new(
        input,
        output,
        body.names("states")?,
        body.optional_names("initial")?,
        rules,
    )?;
    Ok(Tdla {
        transducer,
        guard_names,
    })
}

fn parse_regex(body: &Body<'_>) -> Result<TreeRegex> {
    let alphabet = body.alphabet("alphabet")?;
    let expr: Vec<String> = body
        .lines
        .iter()
        .filter(|l| l.keyword != "alphabet")
        .map(|l| format!("{} {}", l.keyword, l.rest))
        .collect();
    if expr.is_empty() {
        bail!("regex document has no expression");
    }
    Ok(TreeRegex::parse(expr.join(" ").trim(), &alphabet)?)
}

fn parse_local(body: &Body<'_>) -> Result<LocalSpec> {
    body.expect_only(&["alphabet", "roots", "fork"])?;
    let alphabet = body.alphabet("alphabet")?;
    let roots: Vec<Letter> = body
        .optional_names("roots")?
        .iter()
        .map(|n| letter_of(n))
        .collect();
    let mut forks = Vec::new();
    for line in body.repeated("fork") {
        let raw = at_line(line, parse_raw(line.rest))?;
        let kids = raw
            .children
            .iter()
            .map(|c| leaf_name(c).map(|n| letter_of(&n)))
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("line {}", line.number))?;
        forks.push((letter_of(&raw.name), kids));
    }
    Ok(LocalSpec::new(alphabet, roots, forks)?)
}

fn parse_hom(body: &Body<'_>) -> Result<TreeHomomorphism> {
    body.expect_only(&["alphabet", "output", "map"])?;
    let (source, target) = alphabets(body)?;
    let mut map = Vec::new();
    for line in body.repeated("map") {
        let (f, image) = split_arrow(line)?;
        let tree = at_line(line, parse_raw(image).and_then(|r| r.to_tree(&target)))?;
        map.push((f.to_owned(), tree));
    }
    Ok(TreeHomomorphism::new(source, target, map)?)
}

fn names_line(out: &mut String, keyword: &str, names: impl IntoIterator<Item = impl AsRef<str>>) {
    out.push_str(keyword);
    for n in names {
        out.push(' ');
        out.push_str(n.as_ref());
    }
    out.push('\n');
}

fn alphabet_line(out: &mut String, keyword: &str, alphabet: &RankedAlphabet) {
    let text = alphabet.to_string();
    if text.is_empty() {
        out.push_str(keyword);
        out.push('\n');
    } else {
        let _ = writeln!(out, "{keyword} {text}");
    }
}

fn output_line(out: &mut String, input: &RankedAlphabet, output: &RankedAlphabet) {
    if output != input {
        alphabet_line(out, "output", output);
    }
}

/// Canonical text of a document, ending with a newline.
pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    out.push_str(doc.kind().tag());
    out.push('\n');
    match doc {
        Document::Fta(a) => {
            alphabet_line(&mut out, "alphabet", a.alphabet());
            names_line(&mut out, "states", a.states());
            names_line(&mut out, "final", a.finals());
            for r in a.rules() {
                let _ = writeln!(out, "rule {r}");
            }
        }
        Document::Rfa(r) => {
            alphabet_line(&mut out, "alphabet", r.alphabet());
            names_line(&mut out, "states", r.states());
            names_line(&mut out, "initial", r.initial());
            for rule in r.rules() {
                let _ = writeln!(
                    out,
                    "rule {} {} -> ({})",
                    rule.state,
                    rule.symbol,
                    rule.children.join(",")
                );
            }
            for (q, a) in r.leaf_accept() {
                let _ = writeln!(out, "leaf {q} {a}");
            }
        }
        Document::Rtg(g) => {
            alphabet_line(&mut out, "alphabet", g.alphabet());
            names_line(&mut out, "nonterminals", g.nonterminals());
            let _ = writeln!(out, "start {}", g.start());
            for (n, t) in g.productions() {
                let _ = writeln!(out, "prod {n} -> {t}");
            }
        }
        Document::Cfg(g) => {
            names_line(&mut out, "terminals", g.terminals());
            names_line(&mut out, "nonterminals", g.nonterminals());
            let _ = writeln!(out, "start {}", g.start());
            for (n, w) in g.productions() {
                let mut line = format!("prod {n} ->");
                for s in w {
                    line.push(' ');
                    line.push_str(s);
                }
                out.push_str(&line);
                out.push('\n');
            }
        }
        Document::Td(t) => {
            alphabet_line(&mut out, "alphabet", t.input());
            output_line(&mut out, t.input(), t.output());
            names_line(&mut out, "states", t.states());
            names_line(&mut out, "initial", t.initial());
            for r in t.rules() {
                let _ = writeln!(out, "rule {r}");
            }
        }
        Document::Bu(b) => {
            alphabet_line(&mut out, "alphabet", b.input());
            output_line(&mut out, b.input(), b.output());
            names_line(&mut out, "states", b.states());
            names_line(&mut out, "final", b.finals());
            for r in b.rules() {
                let _ = writeln!(out, "rule {r}");
            }
        }
        Document::Tdla(t) => {
            let la = &t.transducer;
            alphabet_line(&mut out, "alphabet", la.input());
            output_line(&mut out, la.input(), la.output());
            names_line(&mut out, "states", la.states());
            names_line(&mut out, "initial", la.initial());
            for (r, names) in la.rules().iter().zip(&t.guard_names) {
                let _ = write!(out, "rule {}", r.rule);
                if names.iter().any(Option::is_some) {
                    let list: Vec<&str> = names.iter().map(|n| n.as_deref().unwrap_or("_")).collect();
                    let _ = write!(out, " [{}]", list.join(","));
                }
                out.push('\n');
            }
        }
        Document::Regex(r) => {
            alphabet_line(&mut out, "alphabet", r.alphabet());
            let _ = writeln!(out, "{r}");
        }
        Document::Local(l) => {
            alphabet_line(&mut out, "alphabet", l.alphabet());
            names_line(&mut out, "roots", l.roots().iter().map(|r| r.to_string()));
            for (f, kids) in l.forks() {
                let kids: Vec<String> = kids.iter().map(|k| k.to_string()).collect();
                let _ = writeln!(out, "fork {f}({})", kids.join(","));
            }
        }
        Document::Hom(h) => {
            alphabet_line(&mut out, "alphabet", h.source());
            output_line(&mut out, h.source(), h.target());
            for (f, t) in h.map() {
                let _ = writeln!(out, "map {f} -> {t}");
            }
        }
    }
    out
}

/// Joins printed documents with separator lines.
pub fn print_documents(docs: &[Document]) -> String {
    docs.iter()
        .map(print_document)
        .collect::<Vec<_>>()
        .join(&format!("{SEPARATOR}\n"))
}

/// Parses a tree written against `alphabet`.
pub fn parse_tree(text: &str, alphabet: &RankedAlphabet) -> Result<Tree> {
    Ok(arbor_core::terms::parse_tree(text, alphabet)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_guards(name: &str) -> Result<TreeRecognizer> {
        bail!("no guard `{name}` here")
    }

    fn round_trip(text: &str) -> Document {
        let doc = parse_document(text, &mut no_guards).unwrap();
        let printed = print_document(&doc);
        assert_eq!(parse_document(&printed, &mut no_guards).unwrap(), doc);
        assert_eq!(print_document(&parse_document(&printed, &mut no_guards).unwrap()), printed);
        doc
    }

    #[test]
    fn fta_prints_canonically() {
        let text = "fta  # parity\nalphabet f:2 g:1 a:0\nstates q0 q1\nfinal q0\n\
                    rule a -> q1\nrule g(q0) -> q1\nrule g(q1) -> q0\n\
                    rule f(q0,q0) -> q1\nrule f(q0,q1) -> q0\nrule f(q1,q0) -> q0\nrule f(q1,q1) -> q1\n";
        let doc = round_trip(text);
        let printed = print_document(&doc);
        assert!(printed.starts_with("fta\nalphabet a:0 f:2 g:1\nstates q0 q1\nfinal q0\nrule a -> q1\n"));
    }

    #[test]
    fn every_kind_round_trips() {
        round_trip("rfa\nalphabet f:2 a:0\nstates q\ninitial q\nrule q f -> (q,q)\nleaf q a\n");
        round_trip("rtg\nalphabet f:2 a:0\nnonterminals S\nstart S\nprod S -> f(S,a)\nprod S -> a\n");
        round_trip("cfg\nterminals a b\nnonterminals S\nstart S\nprod S -> a S b\nprod S ->\n");
        round_trip("td\nalphabet f:2 a:0\nstates q\ninitial q\nrule q f -> f(q#2,q#1)\nrule q a -> a\n");
        round_trip("td\nalphabet g:1 a:0\noutput f:2 a:0\nstates q\ninitial q\nrule q g -> f(q#1,q#1)\nrule q a -> a\n");
        round_trip("bu\nalphabet f:2 a:0\nstates q\nfinal q\nrule f(q,q) -> q : f(x2,x1)\nrule a -> q : a\n");
        round_trip("regex\nalphabet f:2 a:0\n{f(x1,a)} *x1 .x1 {a}\n");
        round_trip("local\nalphabet f:2 a:0 b:0\nroots f\nfork f(a,b)\n");
        round_trip("hom\nalphabet f:2 a:0\nmap f -> f(x1,f(x2,a))\nmap a -> a\n");
    }

    #[test]
    fn synthetic_state_names_survive() {
        round_trip("fta\nalphabet a:0 g:1\nstates <p,q> {q0_q1}\nfinal <p,q>\nrule a -> {q0_q1}\nrule g({q0_q1}) -> <p,q>\n");
    }

    #[test]
    fn tdla_guards_are_loaded_by_name() {
        let guard = "fta\nalphabet g:1 a:0\nstates q\nfinal q\nrule a -> q\n";
        let mut load = |name: &str| -> Result<TreeRecognizer> {
            assert_eq!(name, "leaf.fta");
            match parse_document(guard, &mut no_guards)? {
                Document::Fta(a) => Ok(a),
                _ => unreachable!(),
            }
        };
        let text = "tdla\nalphabet a:0 g:1\nstates q\ninitial q\nrule q g -> q#1 [leaf.fta]\nrule q a -> a\n";
        let doc = parse_document(text, &mut load).unwrap();
        assert_eq!(print_document(&doc), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_document("fta\nalphabet a:0\nstates q\nrule b -> q\n", &mut no_guards).unwrap_err();
        assert!(err.to_string().contains("unknown symbol"), "{err}");
        let err = parse_document("fta\nalphabet a:0\nstates q\nstates q\n", &mut no_guards).unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
        assert!(parse_document("nfa\n", &mut no_guards).is_err());
    }

    #[test]
    fn multi_document_split() {
        let docs = split_documents("fta\nalphabet a:0\nstates\n---\nfta\nalphabet a:0\nstates q\n");
        assert_eq!(docs.len(), 2);
    }
}
