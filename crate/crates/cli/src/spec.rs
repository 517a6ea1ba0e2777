//! Line-oriented morphism specification files.
//!
//! ```text
//! # comments run to the end of the line
//! name: thue-morse
//! expect: AP
//! alphabet: 0 1
//! start: 0
//! rule: 0 -> 0 1
//! rule: 1 -> 1 0
//! code: 0 -> a
//! code: 1 -> a
//! ```
//!
//! Tokens are whitespace-delimited and may be several characters long. An
//! empty right-hand side is the empty word. `code:` lines are optional, but
//! once present every letter needs one.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use morphic_core::{Alphabet, Coding, Letter, Morphism, Verdict, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecDocument {
    pub name: Option<String>,
    pub expect: Option<Verdict>,
    pub alphabet: Vec<String>,
    pub start: String,
    /// One image per alphabet letter, in alphabet order.
    pub rules: Vec<Vec<String>>,
    /// One target per alphabet letter, in alphabet order.
    pub code: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line, or `None` for a problem with the document as a whole.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "header: {}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// A `lhs -> rhs…` mapping line.
fn split_arrow(rest: &str, line: usize) -> Result<(String, Vec<String>), ParseError> {
    let Some((lhs, rhs)) = rest.split_once("->") else {
        return err(Some(line), "expected `<letter> -> <letters>`");
    };
    let lhs: Vec<&str> = lhs.split_whitespace().collect();
    let [letter] = lhs.as_slice() else {
        return err(Some(line), "exactly one letter must precede `->`");
    };
    Ok((
        letter.to_string(),
        rhs.split_whitespace().map(String::from).collect(),
    ))
}

pub fn parse_spec(text: &str) -> Result<SpecDocument, ParseError> {
    let mut name = None;
    let mut expect = None;
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut start: Option<(usize, String)> = None;
    let mut rules: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut codes: Vec<(usize, String, Vec<String>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, rest)) = content.split_once(':') else {
            return err(
                Some(line),
                format!("expected `key: value`, found `{content}`"),
            );
        };
        let rest = rest.trim();
        match key.trim() {
            "name" => {
                if name.replace(rest.to_string()).is_some() {
                    return err(Some(line), "duplicate `name:`");
                }
            }
            "expect" => {
                let v = match rest {
                    "AP" => Verdict::AlmostPeriodic,
                    "NOT_AP" => Verdict::NotAlmostPeriodic,
                    other => {
                        return err(
                            Some(line),
                            format!("expected AP or NOT_AP, found `{other}`"),
                        )
                    }
                };
                if expect.replace(v).is_some() {
                    return err(Some(line), "duplicate `expect:`");
                }
            }
            "alphabet" => {
                let letters: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if letters.is_empty() {
                    return err(Some(line), "empty alphabet");
                }
                let mut seen = HashSet::new();
                if let Some(dup) = letters.iter().find(|l| !seen.insert(l.as_str())) {
                    return err(Some(line), format!("letter `{dup}` declared twice"));
                }
                if let Some(bad) = letters.iter().find(|l| l.contains("->")) {
                    return err(Some(line), format!("`{bad}` is not a valid letter"));
                }
                if alphabet.replace((line, letters)).is_some() {
                    return err(Some(line), "duplicate `alphabet:`");
                }
            }
            "start" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let [s] = tokens.as_slice() else {
                    return err(Some(line), "`start:` takes exactly one letter");
                };
                if start.replace((line, s.to_string())).is_some() {
                    return err(Some(line), "duplicate `start:`");
                }
            }
            "rule" => {
                let (lhs, rhs) = split_arrow(rest, line)?;
                rules.push((line, lhs, rhs));
            }
            "code" => {
                let (lhs, rhs) = split_arrow(rest, line)?;
                codes.push((line, lhs, rhs));
            }
            other => return err(Some(line), format!("unknown key `{other}`")),
        }
    }

    let Some((_, alphabet)) = alphabet else {
        return err(None, "missing `alphabet:` declaration");
    };
    let declared: HashSet<&str> = alphabet.iter().map(String::as_str).collect();
    let check = |line: usize, l: &str| -> Result<(), ParseError> {
        if declared.contains(l) {
            Ok(())
        } else {
            err(Some(line), format!("letter `{l}` is not in the alphabet"))
        }
    };

    let Some((start_line, start)) = start else {
        return err(None, "missing `start:` declaration");
    };
    check(start_line, &start)?;

    let mut by_letter: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (line, lhs, rhs) in &rules {
        check(*line, lhs)?;
        for l in rhs {
            check(*line, l)?;
        }
        if by_letter.insert(lhs.as_str(), rhs.clone()).is_some() {
            return err(Some(*line), format!("second rule for `{lhs}`"));
        }
    }
    let rules = alphabet
        .iter()
        .map(|l| {
            by_letter
                .remove(l.as_str())
                .map_or_else(|| err(None, format!("no rule for letter `{l}`")), Ok)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let code = if codes.is_empty() {
        None
    } else {
        let mut by_letter: BTreeMap<&str, String> = BTreeMap::new();
        for (line, lhs, rhs) in &codes {
            check(*line, lhs)?;
            let [target] = rhs.as_slice() else {
                return err(Some(*line), "a coding maps a letter to exactly one letter");
            };
            if by_letter.insert(lhs.as_str(), target.clone()).is_some() {
                return err(Some(*line), format!("second code for `{lhs}`"));
            }
        }
        Some(
            alphabet
                .iter()
                .map(|l| {
                    by_letter
                        .remove(l.as_str())
                        .map_or_else(|| err(None, format!("no code for letter `{l}`")), Ok)
                })
                .collect::<Result<Vec<_>, _>>()?,
        )
    };

    Ok(SpecDocument {
        name,
        expect,
        alphabet,
        start,
        rules,
        code,
    })
}

impl SpecDocument {
    pub fn morphism(&self) -> Morphism {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned()).expect("validated alphabet");
        let rules = self
            .rules
            .iter()
            .map(|r| {
                r.iter()
                    .map(|l| alphabet.letter(l).expect("validated letter"))
                    .collect::<Word>()
            })
            .collect();
        Morphism::new(alphabet, rules).expect("validated rules")
    }

    pub fn start_letter(&self, m: &Morphism) -> Letter {
        m.alphabet().letter(&self.start).expect("validated start")
    }

    /// The coding, with target letters ordered by first use.
    pub fn coding(&self, m: &Morphism) -> Option<Coding> {
        let code = self.code.as_ref()?;
        let mut targets: Vec<String> = Vec::new();
        for t in code {
            if !targets.contains(t) {
                targets.push(t.clone());
            }
        }
        let target = Alphabet::new(targets.iter().cloned()).expect("non-empty");
        let map = code
            .iter()
            .map(|t| target.letter(t).expect("collected target"))
            .collect();
        Some(Coding::new(m.alphabet().clone(), target, map).expect("one target per letter"))
    }

    /// Canonical text: metadata, alphabet, start, then rules and codes in
    /// alphabet order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("name: {n}\n"));
        }
        if let Some(v) = self.expect {
            out.push_str(&format!("expect: {v}\n"));
        }
        out.push_str(&format!("alphabet: {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("start: {}\n", self.start));
        for (l, r) in self.alphabet.iter().zip(&self.rules) {
            if r.is_empty() {
                out.push_str(&format!("rule: {l} ->\n"));
            } else {
                out.push_str(&format!("rule: {l} -> {}\n", r.join(" ")));
            }
        }
        if let Some(code) = &self.code {
            for (l, t) in self.alphabet.iter().zip(code) {
                out.push_str(&format!("code: {l} -> {t}\n"));
            }
        }
        out
    }
}
