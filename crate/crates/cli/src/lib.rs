//! Spec-file parsing, report assembly and the bundled corpus behind the
//! `morphic` binary.

pub mod app;
pub mod corpus;
pub mod report;
pub mod spec;
