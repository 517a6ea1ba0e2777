//! Morphisms shipped with the tool, each with its expected verdict.

use std::path::Path;

use crate::spec::{parse_spec, ParseError, SpecDocument};

/// `(file name, text)` of every bundled entry, sorted by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "ab-doubling.morph",
        include_str!("../corpus/ab-doubling.morph"),
    ),
    (
        "binary-one-contains-zero.morph",
        include_str!("../corpus/binary-one-contains-zero.morph"),
    ),
    (
        "binary-one-doubles.morph",
        include_str!("../corpus/binary-one-doubles.morph"),
    ),
    (
        "binary-one-erased.morph",
        include_str!("../corpus/binary-one-erased.morph"),
    ),
    (
        "binary-one-fixed-framed.morph",
        include_str!("../corpus/binary-one-fixed-framed.morph"),
    ),
    (
        "binary-one-fixed-open.morph",
        include_str!("../corpus/binary-one-fixed-open.morph"),
    ),
    (
        "binary-zero-block.morph",
        include_str!("../corpus/binary-zero-block.morph"),
    ),
    (
        "bounded-inner.morph",
        include_str!("../corpus/bounded-inner.morph"),
    ),
    (
        "bounded-left-tail.morph",
        include_str!("../corpus/bounded-left-tail.morph"),
    ),
    ("fibonacci.morph", include_str!("../corpus/fibonacci.morph")),
    (
        "thue-morse-constant.morph",
        include_str!("../corpus/thue-morse-constant.morph"),
    ),
    (
        "thue-morse.morph",
        include_str!("../corpus/thue-morse.morph"),
    ),
    (
        "uniform-coded-absorbing.morph",
        include_str!("../corpus/uniform-coded-absorbing.morph"),
    ),
    (
        "uniform-coded-period-doubling.morph",
        include_str!("../corpus/uniform-coded-period-doubling.morph"),
    ),
];

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub file: String,
    pub doc: SpecDocument,
}

impl CorpusEntry {
    /// The `name:` field, or the file stem.
    pub fn name(&self) -> &str {
        self.doc
            .name
            .as_deref()
            .unwrap_or_else(|| self.file.trim_end_matches(".morph"))
    }
}

fn parse_entry(file: &str, text: &str) -> Result<CorpusEntry, String> {
    parse_spec(text)
        .map(|doc| CorpusEntry {
            file: file.to_string(),
            doc,
        })
        .map_err(|e: ParseError| format!("{file}: {e}"))
}

pub fn bundled() -> Vec<CorpusEntry> {
    BUNDLED
        .iter()
        .map(|(file, text)| parse_entry(file, text).expect("bundled corpus parses"))
        .collect()
}

/// Every `*.morph` file of a directory, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusEntry>, String> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "morph"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let file = p.file_name().expect("file").to_string_lossy().into_owned();
            parse_entry(&file, &text)
        })
        .collect()
}

pub fn find(name: &str) -> Option<CorpusEntry> {
    bundled()
        .into_iter()
        .find(|e| e.name() == name || e.file == name || e.file == format!("{name}.morph"))
}
