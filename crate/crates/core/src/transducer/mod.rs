//! Top-down and bottom-up tree transducers, regular look-ahead,
//! composition, decomposition and bounded surface forests.
//!
//! All application functions return output sets in enumeration order
//! without duplicates.

mod bottomup;
mod compose;
mod lookahead;
mod topdown;

use crate::error::Result;
use crate::prelude::*;
use crate::recognizer::TreeRecognizer;
use crate::terms::{enumerate_trees, into_canonical, Tree};

pub use bottomup::{apply_bu, BottomUpTransducer, BuRule};
pub use compose::{compose_td, decompose_bu};
pub use lookahead::{apply_la, eliminate_lookahead, LaRule, LookaheadTransducer};
pub use topdown::{apply_td, Rhs, TdRule, TopDownTransducer};

/// Either kind of transducer, for operations that accept both.
#[derive(Debug, Clone, Copy)]
pub enum Transducer<'a> {
    TopDown(&'a TopDownTransducer),
    BottomUp(&'a BottomUpTransducer),
}

impl Transducer<'_> {
    pub fn apply(&self, t: &Tree) -> Result<Vec<Tree>> {
        match self {
            Transducer::TopDown(td) => apply_td(td, t),
            Transducer::BottomUp(bu) => apply_bu(bu, t),
        }
    }
}

/// `τ(L(a))` restricted to inputs of at most `max_input_nodes` nodes.
pub fn surface_enumerate(
    t: Transducer<'_>,
    a: &TreeRecognizer,
    max_input_nodes: usize,
) -> Result<Vec<Tree>> {
    let mut out = Vec::new();
    for input in enumerate_trees(a.alphabet(), max_input_nodes) {
        if a.accepts(&input)? {
            out.extend(t.apply(&input)?);
        }
    }
    Ok(into_canonical(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::Rule;
    use crate::terms::{Letter, RankedAlphabet};

    fn ga() -> RankedAlphabet {
        RankedAlphabet::new([("g", 1), ("a", 0)]).unwrap()
    }

    fn chains() -> TreeRecognizer {
        let s = |x: &str| String::from(x);
        TreeRecognizer::new(
            ga(),
            [s("q")],
            [s("q")],
            [Rule::leaf("a", "q"), Rule::new(Letter::sym("g"), vec![s("q")], "q")],
        )
        .unwrap()
    }

    #[test]
    fn identity_surface() {
        let id = TopDownTransducer::identity(ga());
        let out = surface_enumerate(Transducer::TopDown(&id), &chains(), 3).unwrap();
        let text: Vec<String> = out.iter().map(|t| t.to_string()).collect();
        assert_eq!(text, ["a", "g(a)", "g(g(a))"]);
        let none = surface_enumerate(Transducer::TopDown(&id), &TreeRecognizer::empty(ga()), 5);
        assert!(none.unwrap().is_empty());
    }

    #[test]
    fn copying_surface_sizes() {
        let fa = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
        let copy = TopDownTransducer::parse_rules(
            ga(),
            fa,
            ["q"],
            &[("q", "g", "f(q#1,q#1)"), ("q", "a", "a")],
        )
        .unwrap();
        let out = surface_enumerate(Transducer::TopDown(&copy), &chains(), 5).unwrap();
        let sizes: Vec<usize> = out.iter().map(|t| t.size()).collect();
        // oracle: size(n) = 2 size(n-1) + 1 with size(0) = 1
        let mut expected = Vec::new();
        let mut s = 1;
        for _ in 0..=4 {
            expected.push(s);
            s = 2 * s + 1;
        }
        assert_eq!(sizes, expected);
        assert!(sizes.iter().enumerate().all(|(n, &k)| k == (1 << (n + 1)) - 1));
    }
}
