//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Every check is exact; the time limits are
//! wall-clock budgets per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use arbor_core::cfl::{cfg_to_derivation_recognizer, recognizer_to_cfg, tree_yield, yield_member};
use arbor_core::decide::{equivalent, is_empty, is_finite, Finiteness};
use arbor_core::minimal::{isomorphic, minimize};
use arbor_core::ops::{
    complement, difference, hom_image, intersect, is_local, local_recognizer,
    medvedev_presentation, union,
};
use arbor_core::random::{
    duplicate_states, random_bu, random_la, random_recognizer, random_td, random_tree, TdShape,
};
use arbor_core::regex::{recognizer_to_regex, regex_to_recognizer};
use arbor_core::terms::{enumerate_trees, into_canonical, parse_tree};
use arbor_core::topdown::{from_root, is_dr_recognizable, path_closure};
use arbor_core::transducer::{
    apply_bu, apply_la, apply_td, compose_td, decompose_bu, eliminate_lookahead,
    surface_enumerate, Transducer,
};
use arbor_core::{ContextFreeGrammar, RankedAlphabet, Tree, TreeRecognizer};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(criterion: u64, instance: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(criterion * 100_000 + instance)
}

fn fgab() -> RankedAlphabet {
    RankedAlphabet::new([("f", 2), ("g", 1), ("a", 0), ("b", 0)]).unwrap()
}

fn fab() -> RankedAlphabet {
    RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).unwrap()
}

fn s(x: &str) -> String {
    String::from(x)
}

// ---------------------------------------------------------------- oracles

/// States reachable at the root, straight from the rule set.
fn naive_states(a: &TreeRecognizer, t: &Tree) -> BTreeSet<String> {
    let below: Vec<BTreeSet<String>> = t.children().iter().map(|c| naive_states(a, c)).collect();
    a.rules()
        .iter()
        .filter(|r| &r.symbol == t.head() && r.args.len() == below.len())
        .filter(|r| r.args.iter().zip(&below).all(|(q, set)| set.contains(q)))
        .map(|r| r.target.clone())
        .collect()
}

fn naive_accepts(a: &TreeRecognizer, t: &Tree) -> bool {
    naive_states(a, t).iter().any(|q| a.finals().contains(q))
}

/// States that some tree reaches, and those from which a final state is
/// reachable through contexts built from such trees.
fn useful_states(a: &TreeRecognizer) -> BTreeSet<String> {
    let mut reach = BTreeSet::new();
    loop {
        let before = reach.len();
        for r in a.rules() {
            if r.args.iter().all(|q| reach.contains(q)) {
                reach.insert(r.target.clone());
            }
        }
        if reach.len() == before {
            break;
        }
    }
    let mut co: BTreeSet<String> = a.finals().intersection(&reach).cloned().collect();
    loop {
        let before = co.len();
        for r in a.rules() {
            if co.contains(&r.target) && r.args.iter().all(|q| reach.contains(q)) {
                co.extend(r.args.iter().cloned());
            }
        }
        if co.len() == before {
            break;
        }
    }
    co
}

/// Exact language of a machine without cycles among useful states, or
/// `None` when such a cycle exists (the language is then infinite).
fn explicit_language(a: &TreeRecognizer) -> Option<BTreeSet<Tree>> {
    let useful = useful_states(a);
    let rules: Vec<_> = a
        .rules()
        .iter()
        .filter(|r| useful.contains(&r.target) && r.args.iter().all(|q| useful.contains(q)))
        .collect();
    // depth-first cycle detection on edges argument -> target
    fn visit(
        q: &String,
        rules: &[&arbor_core::Rule],
        state: &mut BTreeMap<String, u8>,
    ) -> bool {
        match state.get(q) {
            Some(1) => return false,
            Some(2) => return true,
            _ => {}
        }
        state.insert(q.clone(), 1);
        for r in rules.iter().filter(|r| r.args.contains(q)) {
            if !visit(&r.target, rules, state) {
                return false;
            }
        }
        state.insert(q.clone(), 2);
        true
    }
    let mut marks = BTreeMap::new();
    for q in &useful {
        if !visit(q, &rules, &mut marks) {
            return None;
        }
    }
    let mut trees: BTreeMap<String, BTreeSet<Tree>> = BTreeMap::new();
    loop {
        let mut changed = false;
        for r in &rules {
            let mut combos: Vec<Vec<Tree>> = vec![Vec::new()];
            for q in &r.args {
                let options = trees.get(q).cloned().unwrap_or_default();
                combos = combos
                    .into_iter()
                    .flat_map(|p| {
                        options.iter().map(move |o| {
                            let mut v = p.clone();
                            v.push(o.clone());
                            v
                        })
                    })
                    .collect();
            }
            for kids in combos {
                let t = Tree::new(r.symbol.clone(), kids);
                changed |= trees.entry(r.target.clone()).or_default().insert(t);
            }
        }
        if !changed {
            break;
        }
    }
    Some(
        a.finals()
            .iter()
            .flat_map(|q| trees.get(q).cloned().unwrap_or_default())
            .collect(),
    )
}

/// A grammar in Chomsky normal form, plus whether the start symbol derives
/// the empty word.
struct Cnf {
    start: String,
    nullable_start: bool,
    binary: Vec<(String, String, String)>,
    lexical: Vec<(String, String)>,
}

fn to_cnf(g: &ContextFreeGrammar) -> Cnf {
    let is_nt = |x: &str| g.nonterminals().contains(x);
    let mut prods: Vec<(String, Vec<String>)> = Vec::new();
    let mut counter = 0;
    // TERM and BIN
    for (lhs, rhs) in g.productions() {
        if rhs.len() < 2 {
            prods.push((lhs.clone(), rhs.clone()));
            continue;
        }
        let syms: Vec<String> = rhs
            .iter()
            .map(|x| {
                if is_nt(x) {
                    x.clone()
                } else {
                    let name = format!("<T {x}>");
                    prods.push((name.clone(), vec![x.clone()]));
                    name
                }
            })
            .collect();
        let mut head = lhs.clone();
        for i in 0..syms.len() - 2 {
            counter += 1;
            let next = format!("<B {counter}>");
            prods.push((head, vec![syms[i].clone(), next.clone()]));
            head = next;
        }
        prods.push((head, syms[syms.len() - 2..].to_vec()));
    }
    let nonterminal = |x: &str, prods: &[(String, Vec<String>)]| {
        is_nt(x) || prods.iter().any(|(l, _)| l == x)
    };
    // DEL
    let mut nullable: BTreeSet<String> = BTreeSet::new();
    loop {
        let before = nullable.len();
        for (l, r) in &prods {
            if r.iter().all(|x| nullable.contains(x)) {
                nullable.insert(l.clone());
            }
        }
        if nullable.len() == before {
            break;
        }
    }
    let mut expanded: BTreeSet<(String, Vec<String>)> = BTreeSet::new();
    for (l, r) in &prods {
        if r.is_empty() {
            continue;
        }
        expanded.insert((l.clone(), r.clone()));
        if r.len() == 2 {
            if nullable.contains(&r[1]) {
                expanded.insert((l.clone(), vec![r[0].clone()]));
            }
            if nullable.contains(&r[0]) {
                expanded.insert((l.clone(), vec![r[1].clone()]));
            }
        }
    }
    // UNIT
    let all: BTreeSet<String> = expanded.iter().map(|(l, _)| l.clone()).chain(g.nonterminals().iter().cloned()).collect();
    let mut binary = Vec::new();
    let mut lexical = Vec::new();
    for a in &all {
        let mut units: BTreeSet<String> = [a.clone()].into_iter().collect();
        loop {
            let before = units.len();
            for (l, r) in &expanded {
                if units.contains(l) && r.len() == 1 && nonterminal(&r[0], &prods) {
                    units.insert(r[0].clone());
                }
            }
            if units.len() == before {
                break;
            }
        }
        for (l, r) in expanded.iter().filter(|(l, _)| units.contains(l)) {
            match r.as_slice() {
                [x] if !nonterminal(x, &prods) => lexical.push((a.clone(), x.clone())),
                [x, y] => binary.push((a.clone(), x.clone(), y.clone())),
                _ => {}
            }
            let _ = l;
        }
    }
    Cnf {
        start: g.start().to_owned(),
        nullable_start: nullable.contains(g.start()),
        binary,
        lexical,
    }
}

fn cyk(g: &Cnf, w: &[String]) -> bool {
    let n = w.len();
    if n == 0 {
        return g.nullable_start;
    }
    let mut table = vec![vec![BTreeSet::<&str>::new(); n + 1]; n];
    for (i, x) in w.iter().enumerate() {
        for (a, t) in &g.lexical {
            if t == x {
                table[i][1].insert(a);
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            for split in 1..len {
                for (a, b, c) in &g.binary {
                    if table[i][split].contains(b.as_str())
                        && table[i + split][len - split].contains(c.as_str())
                    {
                        table[i][len].insert(a);
                    }
                }
            }
        }
    }
    table[0][n].contains(g.start.as_str())
}

fn words(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<String>| {
                alphabet.iter().map(move |x| {
                    let mut v = w.clone();
                    v.push(s(x));
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn dyck() -> ContextFreeGrammar {
    ContextFreeGrammar::new(
        [s("lp"), s("rp")],
        [s("S")],
        "S",
        [(s("S"), vec![s("lp"), s("S"), s("rp"), s("S")]), (s("S"), vec![])],
    )
    .unwrap()
}

fn anbn() -> ContextFreeGrammar {
    ContextFreeGrammar::new(
        [s("a"), s("b")],
        [s("S")],
        "S",
        [
            (s("S"), vec![s("a"), s("S"), s("b")]),
            (s("S"), vec![s("a"), s("b")]),
        ],
    )
    .unwrap()
}

fn parity() -> TreeRecognizer {
    let text = std::fs::read_to_string(common::manifest_dir().join("tests/data/parity.fta")).unwrap();
    match arbor::parse_document(&text, &mut |_| anyhow::bail!("no guards")).unwrap() {
        arbor::Document::Fta(a) => a,
        _ => unreachable!(),
    }
}

fn finite_set(alphabet: &RankedAlphabet, trees: &[&str]) -> TreeRecognizer {
    let trees: Vec<Tree> = trees.iter().map(|t| parse_tree(t, alphabet).unwrap()).collect();
    TreeRecognizer::from_trees(alphabet.clone(), &trees).unwrap()
}

// ---------------------------------------------------------------- criteria

fn determinization() -> Check {
    let trees = enumerate_trees(&fgab(), 7);
    for i in 0..100 {
        let a = random_recognizer(&mut rng(1, i), &fgab(), 4, 0.12);
        let d = a.determinize();
        ensure!(d.is_deterministic(), "instance {i}: determinize is not deterministic");
        for t in &trees {
            ensure!(
                d.accepts(t).unwrap() == naive_accepts(&a, t),
                "instance {i}: disagreement on {t}"
            );
        }
    }
    Ok(format!("100 NFTAs x {} trees", trees.len()))
}

fn boolean_algebra() -> Check {
    let trees = enumerate_trees(&fgab(), 7);
    for i in 0..100 {
        let mut r = rng(2, i);
        let a = random_recognizer(&mut r, &fgab(), 3, 0.15);
        let b = random_recognizer(&mut r, &fgab(), 3, 0.15);
        let u = union(&a, &b).unwrap();
        let n = intersect(&a, &b).unwrap();
        let c = complement(&a);
        let d = difference(&a, &b).unwrap();
        for t in &trees {
            let (x, y) = (naive_accepts(&a, t), naive_accepts(&b, t));
            ensure!(u.accepts(t).unwrap() == (x || y), "instance {i}: union on {t}");
            ensure!(n.accepts(t).unwrap() == (x && y), "instance {i}: intersect on {t}");
            ensure!(c.accepts(t).unwrap() == !x, "instance {i}: complement on {t}");
            ensure!(d.accepts(t).unwrap() == (x && !y), "instance {i}: difference on {t}");
        }
        let lhs = complement(&u);
        let rhs = intersect(&complement(&a), &complement(&b)).unwrap();
        ensure!(equivalent(&lhs, &rhs).unwrap().holds(), "instance {i}: De Morgan fails");
    }
    Ok(format!("100 pairs x {} trees, De Morgan by equivalence", trees.len()))
}

fn kleene() -> Check {
    let trees = enumerate_trees(&fgab(), 6);
    let mut largest = 0;
    for i in 0..100 {
        let a = random_recognizer(&mut rng(3, i), &fgab(), 3, 0.12);
        let e = recognizer_to_regex(&a);
        largest = largest.max(e.to_string().len());
        let back = regex_to_recognizer(&e).map_err(|err| format!("instance {i}: {err}"))?;
        for t in &trees {
            ensure!(
                back.accepts(t).unwrap() == naive_accepts(&a, t),
                "instance {i}: round trip differs on {t}"
            );
        }
        ensure!(equivalent(&a, &back).unwrap().holds(), "instance {i}: not equivalent");
    }
    Ok(format!("100 machines, longest expression {largest} chars"))
}

fn minimization() -> Check {
    let mut sizes = BTreeSet::new();
    for i in 0..50 {
        let mut r = rng(4, i);
        let a = random_recognizer(&mut r, &fgab(), 3, 0.12);
        let dup = duplicate_states(&mut r, &a);
        ensure!(dup.states().len() == 2 * a.states().len(), "instance {i}: duplication failed");
        let (m1, m2) = (minimize(&a), minimize(&dup));
        ensure!(isomorphic(&m1, &m2).unwrap(), "instance {i}: minimal machines differ");
        ensure!(m1 == m2, "instance {i}: canonical names differ");
        sizes.insert(m1.states().len());
    }
    let p = minimize(&parity());
    ensure!(p.states().len() == 2, "minimize(P) has {} states", p.states().len());
    Ok(format!("50 languages x 2 presentations, minimal sizes {sizes:?}; |minimize(P)| = 2"))
}

fn decisions() -> Check {
    let trees = enumerate_trees(&fgab(), 9);
    let (mut empty, mut finite, mut infinite) = (0, 0, 0);
    for i in 0..200 {
        let a = random_recognizer(&mut rng(5, i), &fgab(), 4, 0.22);
        let first = trees.iter().find(|t| naive_accepts(&a, t));
        let v = is_empty(&a);
        let nonempty_oracle = useful_states(&a).iter().any(|q| a.finals().contains(q));
        ensure!(v.holds() == !nonempty_oracle, "instance {i}: emptiness verdict");
        match (v.witness(), first) {
            (Some(w), Some(f)) => ensure!(w == f, "instance {i}: witness {w} is not the first tree {f}"),
            (Some(w), None) => ensure!(
                w.size() > 9 && naive_accepts(&a, w),
                "instance {i}: witness {w} contradicts enumeration"
            ),
            (None, Some(f)) => return Err(format!("instance {i}: empty but accepts {f}")),
            (None, None) => empty += 1,
        }
        let count = trees.iter().filter(|t| naive_accepts(&a, t)).count();
        match (is_finite(&a), explicit_language(&a)) {
            (Finiteness::Infinite, None) => infinite += 1,
            (Finiteness::Finite(n), Some(lang)) => {
                finite += 1;
                ensure!(n == BigUint::from(lang.len()), "instance {i}: census {n} vs {}", lang.len());
                let small = lang.iter().filter(|t| t.size() <= 9).count();
                ensure!(small == count, "instance {i}: enumeration count {count} vs {small}");
            }
            (got, _) => return Err(format!("instance {i}: finiteness verdict {got:?} is wrong")),
        }
    }
    for i in 0..50 {
        let mut r = rng(5, 1000 + i);
        let picked: Vec<Tree> = (0..4).map(|_| random_tree(&mut r, &fgab(), 9)).collect();
        let a = TreeRecognizer::from_trees(fgab(), &picked).unwrap();
        let count = trees.iter().filter(|t| naive_accepts(&a, t)).count();
        let distinct: BTreeSet<&Tree> = picked.iter().collect();
        ensure!(count == distinct.len(), "acyclic {i}: enumeration found {count}");
        ensure!(
            is_finite(&a) == Finiteness::Finite(BigUint::from(count)),
            "acyclic {i}: census differs from enumeration"
        );
    }
    Ok(format!(
        "200 machines ({empty} empty, {finite} finite, {infinite} infinite) + 50 acyclic censuses over {} trees",
        trees.len()
    ))
}

fn yield_theorem() -> Check {
    for (name, g, terms) in [("Dyck", dyck(), ["lp", "rp"]), ("anbn", anbn(), ["a", "b"])] {
        let cnf = to_cnf(&g);
        let deriv = cfg_to_derivation_recognizer(&g);
        for w in words(&terms, 8) {
            let expected = cyk(&cnf, &w);
            let found = yield_member(&deriv, &w).unwrap();
            ensure!(found.is_some() == expected, "{name}: {w:?} CYK says {expected}");
            if let Some(t) = found {
                ensure!(deriv.accepts(&t).unwrap() && tree_yield(&t) == w, "{name}: bad witness {t}");
            }
            ensure!(g.generates(&w).unwrap() == expected, "{name}: generates({w:?})");
        }
    }
    // Without unary symbols or empty leaves a tree with a yield of length
    // k <= 5 has at most 9 nodes, so the bounded comparison is exact.
    let mut machines = vec![cfg_to_derivation_recognizer(&anbn())];
    machines.extend((0..30).map(|i| random_recognizer(&mut rng(6, i), &fab(), 3, 0.2)));
    for (i, a) in machines.iter().enumerate() {
        let g = recognizer_to_cfg(a);
        let cnf = to_cnf(&g);
        let yields: BTreeSet<Vec<String>> = enumerate_trees(a.alphabet(), 11)
            .iter()
            .filter(|t| naive_accepts(a, t))
            .map(tree_yield)
            .collect();
        let leaves: Vec<&str> = a
            .alphabet()
            .symbols()
            .iter()
            .filter(|(_, &k)| k == 0)
            .map(|(s, _)| s.as_str())
            .collect();
        for w in words(&leaves, 5) {
            ensure!(
                cyk(&cnf, &w) == yields.contains(&w),
                "machine {i}: {w:?} generated={} among yields={}",
                cyk(&cnf, &w),
                yields.contains(&w)
            );
        }
    }
    Ok(String::from("Dyck, anbn to length 8; 31 recognizer_to_cfg checks to length 5"))
}

fn locality() -> Check {
    for (name, g) in [("Dyck", dyck()), ("anbn", anbn())] {
        ensure!(is_local(&cfg_to_derivation_recognizer(&g)), "{name} derivations not local");
    }
    for i in 0..50 {
        let a = random_recognizer(&mut rng(7, i), &fgab(), 3, 0.12);
        let (spec, h) = medvedev_presentation(&a);
        ensure!(h.is_relabeling(), "instance {i}: projection is not letter-to-letter");
        let image = hom_image(&h, &local_recognizer(&spec)).unwrap();
        ensure!(equivalent(&a, &image).unwrap().holds(), "instance {i}: projection differs");
    }
    Ok(String::from("2 derivation forests local; 50 Medvedev round trips"))
}

fn dr_theory() -> Check {
    let pair = finite_set(&fab(), &["f(a,b)", "f(b,a)"]);
    ensure!(!is_dr_recognizable(&pair), "{{f(a,b),f(b,a)}} reported DR-recognizable");
    let closure = from_root(&path_closure(&pair));
    let accepted: Vec<String> = enumerate_trees(&fab(), 9)
        .into_iter()
        .filter(|t| closure.accepts(t).unwrap())
        .map(|t| t.to_string())
        .collect();
    ensure!(
        accepted == ["f(a,a)", "f(a,b)", "f(b,a)", "f(b,b)"],
        "closure accepts {accepted:?}"
    );
    ensure!(is_finite(&closure) == Finiteness::Finite(BigUint::from(4u32)), "closure is not 4 trees");
    let chain = RankedAlphabet::new([("g", 1), ("a", 0)]).unwrap();
    let gn = TreeRecognizer::universal(chain);
    ensure!(is_dr_recognizable(&gn), "{{g^n(a)}} reported not DR-recognizable");
    Ok(String::from("pair not DR, closure = 4 trees, chain DR"))
}

fn sequential_td(
    t1: &arbor_core::TopDownTransducer,
    t2: &arbor_core::TopDownTransducer,
    t: &Tree,
) -> Vec<Tree> {
    into_canonical(
        apply_td(t1, t)
            .unwrap()
            .iter()
            .flat_map(|s| apply_td(t2, s).unwrap()),
    )
}

fn transducers() -> Check {
    let inputs = enumerate_trees(&fgab(), 6);
    for i in 0..100 {
        let mut r = rng(9, i);
        let (first, second) = if i % 2 == 0 {
            (
                TdShape { linear: true, ..TdShape::default() },
                TdShape { linear: true, nondeleting: true, ..TdShape::default() },
            )
        } else {
            (
                TdShape { deterministic: true, total: true, ..TdShape::default() },
                TdShape { linear: true, ..TdShape::default() },
            )
        };
        let t1 = random_td(&mut r, &fgab(), &fgab(), 2, first);
        let t2 = random_td(&mut r, &fgab(), &fgab(), 2, second);
        let c = compose_td(&t1, &t2).map_err(|e| format!("compose {i}: {e}"))?;
        for t in &inputs {
            ensure!(apply_td(&c, t).unwrap() == sequential_td(&t1, &t2, t), "compose {i}: differs on {t}");
        }
    }
    for i in 0..100 {
        let b = random_bu(&mut rng(9, 1000 + i), &fgab(), &fgab(), 3, 0.15);
        let (relabel, h) = decompose_bu(&b).map_err(|e| format!("decompose {i}: {e}"))?;
        ensure!(relabel.is_relabeling(), "decompose {i}: first stage is not a relabeling");
        for t in &inputs {
            let via = into_canonical(apply_bu(&relabel, t).unwrap().iter().map(|s| h.apply(s).unwrap()));
            ensure!(via == apply_bu(&b, t).unwrap(), "decompose {i}: differs on {t}");
        }
    }
    for i in 0..100 {
        let mut r = rng(9, 2000 + i);
        let shape = if i % 2 == 0 {
            TdShape { linear: true, ..TdShape::default() }
        } else {
            TdShape { deterministic: true, ..TdShape::default() }
        };
        let la = random_la(&mut r, &fgab(), &fgab(), 2, shape);
        let (relabel, td) = eliminate_lookahead(&la).map_err(|e| format!("look-ahead {i}: {e}"))?;
        for t in &inputs {
            let via = into_canonical(
                apply_bu(&relabel, t)
                    .unwrap()
                    .iter()
                    .flat_map(|s| apply_td(&td, s).unwrap()),
            );
            ensure!(via == apply_la(&la, t).unwrap(), "look-ahead {i}: differs on {t}");
        }
    }
    let chain = RankedAlphabet::new([("g", 1), ("a", 0)]).unwrap();
    let out = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
    let copy = arbor_core::TopDownTransducer::parse_rules(
        chain.clone(),
        out,
        ["q"],
        &[("q", "g", "f(q#1,q#1)"), ("q", "a", "a")],
    )
    .unwrap();
    let surface = surface_enumerate(Transducer::TopDown(&copy), &TreeRecognizer::universal(chain), 5).unwrap();
    let sizes: Vec<usize> = surface.iter().map(Tree::size).collect();
    ensure!(sizes == [1, 3, 7, 15, 31], "copying surface sizes {sizes:?}");
    Ok(format!("300 instances over {} inputs; surface sizes {sizes:?}", inputs.len()))
}

fn cli_determinism() -> Check {
    let first: Vec<String> = common::CASES.iter().map(|c| common::run_binary(c.args)).collect();
    let second: Vec<String> = common::CASES.iter().map(|c| common::run_binary(c.args)).collect();
    for ((case, a), b) in common::CASES.iter().zip(&first).zip(&second) {
        ensure!(a == b, "{}: output changed between runs", case.name);
        ensure!(
            common::read_golden(case.name).as_deref() == Some(a.as_str()),
            "{}: output differs from the golden file",
            case.name
        );
    }
    Ok(format!("{} golden cases, two runs byte-identical", common::CASES.len()))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 10] = [
        (1, "determinization soundness", Duration::from_secs(60), determinization),
        (2, "boolean algebra", Duration::from_secs(60), boolean_algebra),
        (3, "Kleene round trip", Duration::from_secs(120), kleene),
        (4, "minimization canonicity", Duration::from_secs(30), minimization),
        (5, "decision suite", Duration::from_secs(120), decisions),
        (6, "yield theorem", Duration::from_secs(120), yield_theorem),
        (7, "locality and Medvedev", Duration::from_secs(60), locality),
        (8, "DR theory", Duration::from_secs(5), dr_theory),
        (9, "transducers", Duration::from_secs(180), transducers),
        (10, "CLI determinism", Duration::from_secs(30), cli_determinism),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err(String::from("panicked")));
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= limit => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over time limit of {}s ({detail})", limit.as_secs()),
            Err(why) => format!("FAIL  {why}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {n:>2} {name:<26} {:>7.2}s  {verdict}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
