//! Decision procedures for almost periodicity (uniform recurrence) of
//! morphic sequences.
//!
//! * [`pure`] decides `φ^∞(s)` for non-erasing morphisms through the growing
//!   / bounded letter split and the left and right tail graphs.
//! * [`automatic`] decides `h(φ^∞(s))` for uniform morphisms and codings by
//!   doubling a graph on letter pairs.
//! * [`oracle`] measures finite prefixes and is used to cross-check every
//!   verdict empirically.

pub mod automatic;
pub mod bitmatrix;
pub mod decision;
pub mod error;
pub mod graph;
pub mod growth;
pub mod matrix;
pub mod oracle;
pub mod pure;
pub mod route;
pub mod sample;
pub mod suites;
pub mod word;

pub use decision::{Clause, Decision, Method, Side, Verdict, Witness};
pub use error::{Error, Result};
pub use word::{Alphabet, Coding, Letter, Morphism, Word};
