//! Extended-pattern normalization and ordered-rule compilation.
//!
//! This crate turns patterns with sums (`p + q`), relative complements
//! (`p \ q`), anti-patterns (`!p`) and aliases (`x@p`) into equivalent
//! sums of plain constructor patterns, and uses that machinery to
//!
//! * detect useless clauses and check exhaustiveness of pattern lists,
//! * disambiguate ordered pattern lists into order-independent sets,
//! * shrink pattern sets to a minimal equivalent subset,
//! * compile ordered constructor rewrite systems with extended patterns
//!   into plain, order-independent constructor rewrite systems that define
//!   the same one-step relation,
//! * print the result in a native syntax or in the `(VAR ...)(RULES ...)`
//!   syntax consumed by termination provers.
//!
//! The guide under `book/` walks through the concepts chapter by chapter;
//! its code snippets are compiled as doc-tests of this crate.

pub mod signature;
pub mod term;
pub mod pattern;
pub mod oracle;
pub mod normalize;
pub mod engine;
pub mod analysis;
pub mod minimize;
pub mod rules;
pub mod parse;

pub use normalize::{NormalForm, NormalizeConfig};
pub use pattern::Pattern;
pub use signature::{Signature, SortId, SymbolId};
pub use term::{FreshNamer, Position, Substitution, Term, Var};
