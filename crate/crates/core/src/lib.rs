//! Decision procedures for fragments of first-order logic over finite and
//! infinite words, built on ordered syntactic monoids with ω-acceptance
//! tables.
//!
//! Typical use: compile an expression, build its [`SyntacticContext`], then
//! query [`fragments`] or [`topology`].

pub mod alphabet;
pub mod automata;
pub mod bits;
pub mod error;
pub mod expressions;
pub mod fixtures;
pub mod fragments;
pub mod monoids;
pub mod polynomials;
pub mod syntactic;
pub mod topology;

pub use alphabet::{Alphabet, FiniteWord, LetterSet, UPWord, Word};
pub use automata::{ExtBuchiAutomaton, FiniteWordAutomaton};
pub use error::{Error, Limits, Result};
pub use expressions::{compile, compile_str, load, parse, parse_file, Expr};
pub use fragments::{classify, ClassifyOptions, Flags, FragmentReport};
pub use monoids::OrderedMonoid;
pub use polynomials::{Monomial, Polynomial, TailKind};
pub use syntactic::{
    syntactic_context, Context, Equivalence, LinkedPair, MonoidDump, Morphism, OmegaTable,
    Recognizer, SyntacticContext,
};
pub use topology::TopologyReport;
