//! The golden-file cases, shared by the golden and acceptance suites.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

macro_rules! cases {
    ($($name:literal => [$($arg:literal),* $(,)?]),* $(,)?) => {
        &[$(Case { name: $name, args: &[$($arg),*] }),*]
    };
}

pub const CASES: &[Case] = cases![
    "parse" => ["parse", "tests/data/parity.fta", "f( a , g(a) )"],
    "parse_arity_error" => ["parse", "tests/data/parity.fta", "f(a)"],
    "print_parity" => ["print", "tests/data/parity.fta"],
    "print_all_kinds" => [
        "print",
        "tests/data/parity.fta",
        "tests/data/root.rfa",
        "tests/data/g0.rtg",
        "tests/data/dyck.cfg",
        "tests/data/copy.td",
        "tests/data/firstchild.bu",
        "tests/data/guarded.tdla",
        "tests/data/chain.regex",
        "tests/data/pair.local",
        "tests/data/relabel.hom",
    ],
    "print_invalid" => ["print", "tests/data/broken.fta"],
    "member_true" => ["member", "tests/data/parity.fta", "f(a,a)"],
    "member_false_strict" => ["--strict", "member", "tests/data/parity.fta", "a"],
    "member_cfg" => ["member", "tests/data/dyck.cfg", "lp lp rp rp lp rp"],
    "member_rfa" => ["member", "tests/data/root.rfa", "f(a,b)"],
    "run" => ["run", "tests/data/nfta.fta", "a"],
    "determinize" => ["determinize", "tests/data/nfta.fta"],
    "complete" => ["complete", "tests/data/nfta.fta"],
    "trim" => ["trim", "tests/data/empty.fta"],
    "minimize_parity" => ["minimize", "tests/data/parity.fta"],
    "minimize_nfta" => ["minimize", "tests/data/nfta.fta"],
    "equiv_self" => ["equiv", "tests/data/parity.fta", "tests/data/parity.fta"],
    "equiv_false" => ["equiv", "tests/data/chain.fta", "tests/data/even_chain.fta"],
    "equiv_grammar" => ["equiv", "tests/data/chain.fta", "tests/data/g0.rtg"],
    "include_true" => ["include", "tests/data/even_chain.fta", "tests/data/chain.fta"],
    "include_false_strict" => ["--strict", "include", "tests/data/chain.fta", "tests/data/even_chain.fta"],
    "empty_true" => ["empty", "tests/data/empty.fta"],
    "empty_false" => ["empty", "tests/data/parity.fta"],
    "finite_census" => ["finite", "tests/data/swapped.fta"],
    "finite_infinite" => ["finite", "tests/data/chain.fta"],
    "union" => ["union", "tests/data/chain.fta", "tests/data/even_chain.fta"],
    "intersect" => ["intersect", "tests/data/chain.fta", "tests/data/even_chain.fta"],
    "complement" => ["complement", "tests/data/parity.fta"],
    "difference" => ["difference", "tests/data/chain.fta", "tests/data/even_chain.fta"],
    "xproduct" => ["xproduct", "tests/data/gx.fta", "x1", "tests/data/a.fta"],
    "xstar" => ["xstar", "tests/data/gx.fta", "x1"],
    "himage" => ["himage", "tests/data/relabel.hom", "tests/data/parity.fta"],
    "himage_erasing" => ["himage", "tests/data/erase.hom", "tests/data/parity.fta"],
    "hpreimage" => ["hpreimage", "tests/data/erase.hom", "tests/data/nfta.fta"],
    "local_spec" => ["local?", "tests/data/pair.local"],
    "local_parity" => ["local?", "tests/data/parity.fta"],
    "medvedev" => ["medvedev", "tests/data/swapped.fta"],
    "pathclosure" => ["pathclosure", "tests/data/swapped.fta"],
    "dr_false" => ["dr?", "tests/data/swapped.fta"],
    "dr_true" => ["dr?", "tests/data/chain.fta"],
    "to_grammar" => ["to-grammar", "tests/data/parity.fta"],
    "from_grammar" => ["from-grammar", "tests/data/deep.rtg"],
    "to_regex" => ["to-regex", "tests/data/even_chain.fta"],
    "from_regex" => ["from-regex", "tests/data/chain.regex"],
    "to_cfg" => ["to-cfg", "tests/data/swapped.fta"],
    "from_cfg" => ["from-cfg", "tests/data/anbn.cfg"],
    "yield" => ["yield", "tests/data/swapped.fta", "f(b,a)"],
    "yield_member" => ["yield-member", "tests/data/dyck.cfg", "lp", "lp", "rp", "rp"],
    "yield_member_false" => ["yield-member", "tests/data/anbn.cfg", "a a b"],
    "transduce_copy" => ["transduce", "tests/data/copy.td", "g(g(a))"],
    "transduce_flip" => ["transduce", "tests/data/flip.td", "f(a,g(a))"],
    "transduce_bu" => ["transduce", "tests/data/firstchild.bu", "f(g(a),a)"],
    "transduce_tdla" => ["transduce", "tests/data/guarded.tdla", "f(g(a),g(g(a)))"],
    "compose" => ["compose", "tests/data/swap.td", "tests/data/flip.td"],
    "compose_mismatch" => ["compose", "tests/data/flip.td", "tests/data/copy.td"],
    "decompose" => ["decompose", "tests/data/firstchild.bu"],
    "eliminate_la" => ["eliminate-la", "tests/data/guarded.tdla"],
    "surface" => ["surface", "tests/data/copy.td", "tests/data/chain.fta", "--max", "4"],
    "enumerate" => ["enumerate", "tests/data/parity.fta", "--max", "5"],
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{name}.out"))
}

/// Everything an invocation printed, in the layout of a golden file.
pub fn transcript(code: i32, stdout: &str, stderr: &str) -> String {
    format!("{stdout}[exit {code}]\n{stderr}")
}

/// Runs the real binary from the crate directory so paths stay relative.
pub fn run_binary(args: &[&str]) -> String {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_arbor"))
        .args(args)
        .current_dir(manifest_dir())
        .output()
        .expect("arbor binary runs");
    transcript(
        out.status.code().unwrap_or(-1),
        &String::from_utf8_lossy(&out.stdout),
        &String::from_utf8_lossy(&out.stderr),
    )
}

pub fn read_golden(name: &str) -> Option<String> {
    std::fs::read_to_string(golden_path(name)).ok()
}

pub fn exists(p: &Path) -> bool {
    p.exists()
}
