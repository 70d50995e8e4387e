//! Recognizable forests over ranked alphabets.
//!
//! The crate is `no_std` and only needs `alloc`. It covers frontier-to-root
//! and root-to-frontier tree recognizers, regular tree grammars, regular tree
//! expressions, the usual closure operations on forests, minimization, the
//! standard decision procedures, the yield bridge to context-free languages
//! and top-down / bottom-up tree transducers.
//!
//! Everything is an immutable value; constructions return new machines with
//! canonical, deterministic state names so that printed output is stable.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod prelude;

pub mod cfl;
pub mod decide;
pub mod error;
pub mod grammar;
pub mod minimal;
pub mod ops;
#[cfg(feature = "random")]
pub mod random;
pub mod recognizer;
pub mod regex;
pub mod terms;
pub mod topdown;
pub mod transducer;

pub use cfl::ContextFreeGrammar;
pub use error::{Error, Result};
pub use grammar::RegularTreeGrammar;
pub use minimal::Context;
pub use ops::{LocalSpec, TreeHomomorphism};
pub use recognizer::{Rule, TreeRecognizer};
pub use regex::TreeRegex;
pub use terms::{Letter, RankedAlphabet, Tree};
pub use topdown::RootRecognizer;
pub use transducer::{BottomUpTransducer, LookaheadTransducer, Rhs, TopDownTransducer};
