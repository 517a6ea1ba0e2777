use std::fmt;

use crate::error::Result;
use crate::word::{Letter, Morphism, Trimmed, Word};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    AlmostPeriodic,
    NotAlmostPeriodic,
}

impl Verdict {
    pub fn from_bool(ap: bool) -> Self {
        if ap {
            Verdict::AlmostPeriodic
        } else {
            Verdict::NotAlmostPeriodic
        }
    }

    pub fn is_ap(self) -> bool {
        self == Verdict::AlmostPeriodic
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AlmostPeriodic => "AP",
            Verdict::NotAlmostPeriodic => "NOT_AP",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    PureNonErasing,
    Increasing,
    Binary,
    Automatic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PureNonErasing => "pure-non-erasing",
            Method::Increasing => "increasing",
            Method::Binary => "binary",
            Method::Automatic => "automatic",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// One checked condition of a criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

impl Clause {
    pub fn new(name: &'static str, holds: bool, detail: impl Into<String>) -> Self {
        Clause {
            name,
            holds,
            detail: detail.into(),
        }
    }
}

/// Machine-checkable reason for a negative verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// No path from `from` to `to` among the growing letters.
    Disconnected { from: Letter, to: Letter },
    /// A cycle of a tail graph with a non-empty label on `from -> to`.
    TailCycle {
        side: Side,
        cycle: Vec<Letter>,
        from: Letter,
        to: Letter,
        label: Word,
    },
    /// The morphism matrix has no positive power.
    NotPrimitive {
        disconnected: Option<(Letter, Letter)>,
        cycle_gcd: usize,
    },
    /// None of the binary conditions holds.
    BinaryNoCondition,
    /// Letters whose iterated images never meet the start letter's class.
    Uncovered { letters: Vec<Letter> },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Disconnected { .. } => "disconnected",
            Witness::TailCycle { .. } => "tail-cycle",
            Witness::NotPrimitive { .. } => "not-primitive",
            Witness::BinaryNoCondition => "binary-no-condition",
            Witness::Uncovered { .. } => "uncovered",
        }
    }
}

/// Extra data produced by the automatic decider.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticDetails {
    /// Letters equivalent to the start letter at level `2^r`.
    pub start_class: Vec<Letter>,
    pub r_iterations: u32,
    /// The coverage check runs at exponent `2^coverage_squarings`.
    pub coverage_squarings: u32,
    /// Per letter: does its image at the coverage exponent meet the class.
    pub coverage: Vec<(Letter, bool)>,
    pub route: crate::automatic::ClassRoute,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub method: Method,
    pub clauses: Vec<Clause>,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
    pub automatic: Option<AutomaticDetails>,
}

impl Decision {
    pub fn is_ap(&self) -> bool {
        self.verdict.is_ap()
    }
}

impl Witness {
    /// Renames every letter through `f`.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Witness {
        match self {
            Witness::Disconnected { from, to } => Witness::Disconnected {
                from: f(*from),
                to: f(*to),
            },
            Witness::TailCycle {
                side,
                cycle,
                from,
                to,
                label,
            } => Witness::TailCycle {
                side: *side,
                cycle: cycle.iter().map(|&l| f(l)).collect(),
                from: f(*from),
                to: f(*to),
                label: label.iter().map(|&l| f(l)).collect(),
            },
            Witness::NotPrimitive {
                disconnected,
                cycle_gcd,
            } => Witness::NotPrimitive {
                disconnected: disconnected.map(|(a, b)| (f(a), f(b))),
                cycle_gcd: *cycle_gcd,
            },
            Witness::BinaryNoCondition => Witness::BinaryNoCondition,
            Witness::Uncovered { letters } => Witness::Uncovered {
                letters: letters.iter().map(|&l| f(l)).collect(),
            },
        }
    }
}

impl AutomaticDetails {
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> AutomaticDetails {
        AutomaticDetails {
            start_class: self.start_class.iter().map(|&l| f(l)).collect(),
            coverage: self.coverage.iter().map(|&(l, ok)| (f(l), ok)).collect(),
            ..self.clone()
        }
    }
}

/// Runs `decide` on the restriction of `m` to the letters reachable from
/// `s` and maps the letters of the result back. Letters that never occur in
/// the sequence cannot affect it, so every criterion is evaluated on the
/// reachable part only.
pub(crate) fn on_reachable(
    m: &Morphism,
    s: Letter,
    decide: impl FnOnce(&Trimmed) -> Result<Decision>,
) -> Result<Decision> {
    let trimmed = m.trim_reachable_with_map(s)?;
    let mut d = decide(&trimmed)?;
    if trimmed.kept.len() != m.size() {
        let back = |l: Letter| trimmed.kept[l.index()];
        d.witness = d.witness.map(|w| w.map_letters(back));
        d.automatic = d.automatic.map(|a| a.map_letters(back));
        let dropped: Vec<&str> = m
            .alphabet()
            .letters()
            .filter(|l| !trimmed.kept.contains(l))
            .map(|l| m.alphabet().name(l))
            .collect();
        d.notes.push(format!(
            "letters {{{}}} do not occur in the sequence and were left out",
            dropped.join(", ")
        ));
    }
    Ok(d)
}
