//! Subcommands. Each one reads documents, calls into `arbor-core` and
//! renders a document, a verdict or a list of trees.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use arbor_core::cfl::{cfg_to_derivation_recognizer, recognizer_to_cfg, tree_yield, yield_member};
use arbor_core::decide::{equivalent, included, is_empty, is_finite, Finiteness};
use arbor_core::grammar::{grammar_to_recognizer, recognizer_to_grammar};
use arbor_core::minimal::minimize;
use arbor_core::ops::{
    complement, difference, hom_image, hom_preimage, intersect, is_local, local_recognizer,
    medvedev_presentation, union, x_iteration, x_product,
};
use arbor_core::regex::{recognizer_to_regex, regex_to_recognizer};
use arbor_core::terms::{enumerate_trees, into_canonical, parse_variable};
use arbor_core::topdown::{from_root, is_dr_recognizable, path_closure};
use arbor_core::transducer::{
    apply_bu, apply_la, apply_td, compose_td, decompose_bu, eliminate_lookahead,
    LookaheadTransducer,
};
use arbor_core::{RankedAlphabet, Tree, TreeRecognizer};
use clap::{Parser, Subcommand};

use crate::formats::{parse_document, parse_tree, print_documents, split_documents, Document, Tdla};

#[derive(Debug, Parser)]
#[command(name = "arbor", version, about = "Tree automata, grammars and tree transducers")]
pub struct Cli {
    /// Exit with status 1 when a predicate subcommand answers `false`.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a tree against a document's alphabet and print it canonically.
    Parse { doc: PathBuf, tree: String },
    /// Print documents in canonical form.
    Print {
        #[arg(required = true)]
        docs: Vec<PathBuf>,
    },
    /// Membership of a tree (or, for a cfg, a space-separated word).
    Member { doc: PathBuf, input: String },
    /// States reached at the root of a tree.
    Run { doc: PathBuf, tree: String },
    Determinize { doc: PathBuf },
    Complete { doc: PathBuf },
    Trim { doc: PathBuf },
    Minimize { doc: PathBuf },
    /// Language equality; a counterexample follows `false`.
    Equiv { a: PathBuf, b: PathBuf },
    /// Language inclusion of the first in the second.
    Include { a: PathBuf, b: PathBuf },
    Empty { doc: PathBuf },
    /// `true` and the number of accepted trees, or `false`.
    Finite { doc: PathBuf },
    Union { a: PathBuf, b: PathBuf },
    Intersect { a: PathBuf, b: PathBuf },
    Complement { doc: PathBuf },
    Difference { a: PathBuf, b: PathBuf },
    /// Replace each occurrence of the variable by a tree of the second forest.
    Xproduct { a: PathBuf, var: String, b: PathBuf },
    Xstar { doc: PathBuf, var: String },
    Himage { hom: PathBuf, doc: PathBuf },
    Hpreimage { hom: PathBuf, doc: PathBuf },
    #[command(name = "local?", alias = "is-local")]
    IsLocal { doc: PathBuf },
    Medvedev { doc: PathBuf },
    Pathclosure { doc: PathBuf },
    #[command(name = "dr?", alias = "is-dr")]
    IsDr { doc: PathBuf },
    ToGrammar { doc: PathBuf },
    FromGrammar { doc: PathBuf },
    ToRegex { doc: PathBuf },
    FromRegex { doc: PathBuf },
    ToCfg { doc: PathBuf },
    FromCfg { doc: PathBuf },
    /// Left-to-right leaf word of a tree.
    Yield { doc: PathBuf, tree: String },
    /// Whether some accepted tree has the given yield.
    YieldMember { doc: PathBuf, word: Vec<String> },
    Transduce { transducer: PathBuf, tree: String },
    Compose { first: PathBuf, second: PathBuf },
    Decompose { doc: PathBuf },
    EliminateLa { doc: PathBuf },
    /// Outputs of a transducer on the accepted trees up to a size bound.
    Surface {
        transducer: PathBuf,
        doc: PathBuf,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Accepted trees up to a size bound, in enumeration order.
    Enumerate {
        doc: PathBuf,
        #[arg(long, default_value_t = 5)]
        max: usize,
    },
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    /// `Some` for predicate subcommands.
    pub verdict: Option<bool>,
}

impl Outcome {
    fn text(stdout: String) -> Self {
        Outcome {
            stdout,
            verdict: None,
        }
    }

    fn docs(docs: &[Document]) -> Self {
        Outcome::text(print_documents(docs))
    }

    fn verdict(holds: bool, witness: Option<&Tree>) -> Self {
        let mut stdout = format!("{holds}\n");
        if let Some(w) = witness {
            stdout.push_str(&format!("{w}\n"));
        }
        Outcome {
            stdout,
            verdict: Some(holds),
        }
    }
}

/// Output text, diagnostic text and exit status of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line in-process.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Invocation {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Invocation {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => Invocation {
            code: if cli.strict && out.verdict == Some(false) { 1 } else { 0 },
            stdout: out.stdout,
            stderr: String::new(),
        },
        Err(e) => Invocation {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {}\n", format!("{e:#}").replace('\n', " ")),
        },
    }
}

/// Reads the single document in `path`. Guard files of look-ahead
/// transducers are resolved relative to the document's directory.
pub fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let docs = split_documents(&text);
    let [doc] = docs.as_slice() else {
        bail!("{}: expected exactly one document, found {}", path.display(), docs.len());
    };
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut guard = |name: &str| -> Result<TreeRecognizer> {
        match load(&dir.join(name))? {
            Document::Fta(a) => Ok(a),
            other => language(&other).with_context(|| format!("guard {name}")),
        }
    };
    parse_document(doc, &mut guard).with_context(|| path.display().to_string())
}

fn load_all(path: &Path) -> Result<Vec<Document>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    split_documents(&text)
        .iter()
        .map(|doc| {
            let mut guard = |name: &str| -> Result<TreeRecognizer> {
                language(&load(&dir.join(name))?).with_context(|| format!("guard {name}"))
            };
            parse_document(doc, &mut guard).with_context(|| path.display().to_string())
        })
        .collect()
}

/// The recognizable forest a document denotes, as a frontier-to-root
/// machine. A cfg denotes its derivation trees.
pub fn language(doc: &Document) -> Result<TreeRecognizer> {
    Ok(match doc {
        Document::Fta(a) => a.clone(),
        Document::Rfa(r) => from_root(r),
        Document::Rtg(g) => grammar_to_recognizer(g),
        Document::Regex(r) => regex_to_recognizer(r)?,
        Document::Local(l) => local_recognizer(l),
        Document::Cfg(g) => cfg_to_derivation_recognizer(g),
        other => bail!("a {} document does not denote a forest", other.kind().tag()),
    })
}

fn forest(path: &Path) -> Result<TreeRecognizer> {
    language(&load(path)?).with_context(|| path.display().to_string())
}

fn input_alphabet(doc: &Document) -> Result<RankedAlphabet> {
    Ok(match doc {
        Document::Td(t) => t.input().clone(),
        Document::Bu(b) => b.input().clone(),
        Document::Tdla(t) => t.transducer.input().clone(),
        Document::Hom(h) => h.source().clone(),
        other => language(other)?.alphabet().clone(),
    })
}

fn variable(text: &str) -> Result<u32> {
    parse_variable(text)
        .or_else(|| text.parse().ok().filter(|&n| n > 0))
        .ok_or_else(|| anyhow!("`{text}` is not a variable (expected xN)"))
}

fn trees(trees: impl IntoIterator<Item = Tree>) -> Outcome {
    Outcome::text(trees.into_iter().map(|t| format!("{t}\n")).collect())
}

fn lookahead(doc: Document) -> Result<Tdla> {
    match doc {
        Document::Tdla(t) => Ok(t),
        Document::Td(td) => {
            let transducer = LookaheadTransducer::from_top_down(&td);
            let guard_names = transducer.rules().iter().map(|r| vec![None; r.guards.len()]).collect();
            Ok(Tdla {
                transducer,
                guard_names,
            })
        }
        other => bail!("expected a td or tdla document, found {}", other.kind().tag()),
    }
}

fn transduce(doc: &Document, t: &Tree) -> Result<Vec<Tree>> {
    Ok(match doc {
        Document::Td(td) => apply_td(td, t)?,
        Document::Bu(bu) => apply_bu(bu, t)?,
        Document::Tdla(la) => apply_la(&la.transducer, t)?,
        other => bail!("expected a transducer, found a {} document", other.kind().tag()),
    })
}

pub fn execute(command: &Command) -> Result<Outcome> {
    use Command as C;
    Ok(match command {
        C::Parse { doc, tree } => {
            let alphabet = input_alphabet(&load(doc)?)?;
            trees([parse_tree(tree, &alphabet)?])
        }
        C::Print { docs } => {
            let mut all = Vec::new();
            for p in docs {
                all.extend(load_all(p)?);
            }
            Outcome::docs(&all)
        }
        C::Member { doc, input } => match load(doc)? {
            Document::Cfg(g) => {
                let word: Vec<String> = input.split_whitespace().map(String::from).collect();
                Outcome::verdict(g.generates(&word)?, None)
            }
            other => {
                let a = language(&other)?;
                let t = parse_tree(input, a.alphabet())?;
                Outcome::verdict(a.accepts(&t)?, None)
            }
        },
        C::Run { doc, tree } => {
            let a = forest(doc)?;
            let t = parse_tree(tree, a.alphabet())?;
            let states: Vec<String> = a.run(&t)?.into_iter().collect();
            Outcome::text(format!("{}\n", states.join(" ")))
        }
        C::Determinize { doc } => Outcome::docs(&[Document::Fta(forest(doc)?.determinize())]),
        C::Complete { doc } => Outcome::docs(&[Document::Fta(forest(doc)?.complete())]),
        C::Trim { doc } => Outcome::docs(&[Document::Fta(forest(doc)?.trim())]),
        C::Minimize { doc } => Outcome::docs(&[Document::Fta(minimize(&forest(doc)?))]),
        C::Equiv { a, b } => {
            let v = equivalent(&forest(a)?, &forest(b)?)?;
            Outcome::verdict(v.holds(), v.witness())
        }
        C::Include { a, b } => {
            let v = included(&forest(a)?, &forest(b)?)?;
            Outcome::verdict(v.holds(), v.witness())
        }
        C::Empty { doc } => {
            let v = is_empty(&forest(doc)?);
            Outcome::verdict(v.holds(), v.witness())
        }
        C::Finite { doc } => match is_finite(&forest(doc)?) {
            Finiteness::Finite(n) => Outcome {
                stdout: format!("true\n{n}\n"),
                verdict: Some(true),
            },
            Finiteness::Infinite => Outcome::verdict(false, None),
        },
        C::Union { a, b } => Outcome::docs(&[Document::Fta(union(&forest(a)?, &forest(b)?)?)]),
        C::Intersect { a, b } => {
            Outcome::docs(&[Document::Fta(intersect(&forest(a)?, &forest(b)?)?)])
        }
        C::Complement { doc } => Outcome::docs(&[Document::Fta(complement(&forest(doc)?))]),
        C::Difference { a, b } => {
            Outcome::docs(&[Document::Fta(difference(&forest(a)?, &forest(b)?)?)])
        }
        C::Xproduct { a, var, b } => Outcome::docs(&[Document::Fta(x_product(
            &forest(a)?,
            variable(var)?,
            &forest(b)?,
        )?)]),
        C::Xstar { doc, var } => {
            Outcome::docs(&[Document::Fta(x_iteration(&forest(doc)?, variable(var)?))])
        }
        C::Himage { hom, doc } => {
            let Document::Hom(h) = load(hom)? else {
                bail!("{}: expected a hom document", hom.display());
            };
            Outcome::docs(&[Document::Fta(hom_image(&h, &forest(doc)?)?)])
        }
        C::Hpreimage { hom, doc } => {
            let Document::Hom(h) = load(hom)? else {
                bail!("{}: expected a hom document", hom.display());
            };
            Outcome::docs(&[Document::Fta(hom_preimage(&h, &forest(doc)?)?)])
        }
        C::IsLocal { doc } => Outcome::verdict(is_local(&forest(doc)?), None),
        C::Medvedev { doc } => {
            let (spec, h) = medvedev_presentation(&forest(doc)?);
            Outcome::docs(&[Document::Local(spec), Document::Hom(h)])
        }
        C::Pathclosure { doc } => Outcome::docs(&[Document::Rfa(path_closure(&forest(doc)?))]),
        C::IsDr { doc } => Outcome::verdict(is_dr_recognizable(&forest(doc)?), None),
        C::ToGrammar { doc } => Outcome::docs(&[Document::Rtg(recognizer_to_grammar(&forest(doc)?))]),
        C::FromGrammar { doc } => match load(doc)? {
            Document::Rtg(g) => Outcome::docs(&[Document::Fta(grammar_to_recognizer(&g))]),
            other => bail!("expected an rtg document, found {}", other.kind().tag()),
        },
        C::ToRegex { doc } => Outcome::docs(&[Document::Regex(recognizer_to_regex(&forest(doc)?))]),
        C::FromRegex { doc } => match load(doc)? {
            Document::Regex(r) => Outcome::docs(&[Document::Fta(regex_to_recognizer(&r)?)]),
            other => bail!("expected a regex document, found {}", other.kind().tag()),
        },
        C::ToCfg { doc } => Outcome::docs(&[Document::Cfg(recognizer_to_cfg(&forest(doc)?))]),
        C::FromCfg { doc } => match load(doc)? {
            Document::Cfg(g) => Outcome::docs(&[Document::Fta(cfg_to_derivation_recognizer(&g))]),
            other => bail!("expected a cfg document, found {}", other.kind().tag()),
        },
        C::Yield { doc, tree } => {
            let alphabet = input_alphabet(&load(doc)?)?;
            let t = parse_tree(tree, &alphabet)?;
            Outcome::text(format!("{}\n", tree_yield(&t).join(" ")))
        }
        C::YieldMember { doc, word } => {
            let word: Vec<String> = word.iter().flat_map(|w| w.split_whitespace()).map(String::from).collect();
            let witness = yield_member(&forest(doc)?, &word)?;
            Outcome::verdict(witness.is_some(), witness.as_ref())
        }
        C::Transduce { transducer, tree } => {
            let doc = load(transducer)?;
            let t = parse_tree(tree, &input_alphabet(&doc)?)?;
            trees(transduce(&doc, &t)?)
        }
        C::Compose { first, second } => {
            let (Document::Td(t1), Document::Td(t2)) = (load(first)?, load(second)?) else {
                bail!("compose expects two td documents");
            };
            Outcome::docs(&[Document::Td(compose_td(&t1, &t2)?)])
        }
        C::Decompose { doc } => {
            let Document::Bu(b) = load(doc)? else {
                bail!("{}: expected a bu document", doc.display());
            };
            let (relabel, h) = decompose_bu(&b)?;
            Outcome::docs(&[Document::Bu(relabel), Document::Hom(h)])
        }
        C::EliminateLa { doc } => {
            let la = lookahead(load(doc)?)?;
            let (relabel, td) = eliminate_lookahead(&la.transducer)?;
            Outcome::docs(&[Document::Bu(relabel), Document::Td(td)])
        }
        C::Surface {
            transducer,
            doc,
            max,
        } => {
            let t = load(transducer)?;
            let a = forest(doc)?;
            let mut out = Vec::new();
            for input in enumerate_trees(a.alphabet(), *max) {
                if a.accepts(&input)? {
                    out.extend(transduce(&t, &input)?);
                }
            }
            trees(into_canonical(out))
        }
        C::Enumerate { doc, max } => {
            let a = forest(doc)?;
            let mut out = Vec::new();
            for t in enumerate_trees(a.alphabet(), *max) {
                if a.accepts(&t)? {
                    out.push(t);
                }
            }
            trees(out)
        }
    })
}
