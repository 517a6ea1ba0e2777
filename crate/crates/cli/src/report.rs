//! Serializable reports. Letters are always written by name.

use serde::Serialize;

use morphic_core::automatic::ClassRoute;
use morphic_core::decision::AutomaticDetails;
use morphic_core::growth::GrowthClassification;
use morphic_core::oracle::{Evidence, EvidenceVerdict};
use morphic_core::pure::BINARY_ERASING_NOTE;
use morphic_core::{Alphabet, Decision, Letter, Witness};

use crate::spec::SpecDocument;

#[derive(Serialize, Debug, Clone)]
pub struct RunReport {
    pub input: InputEcho,
    pub normalization: Option<Normalization>,
    pub decision: Option<DecisionReport>,
    /// Known inconsistencies of the underlying criteria that affected this
    /// run.
    pub errata: Vec<String>,
    pub evidence: Option<EvidenceReport>,
    pub expected: Option<String>,
    pub matches_expected: Option<bool>,
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

#[derive(Serialize, Debug, Clone)]
pub struct InputEcho {
    pub name: Option<String>,
    pub alphabet: Vec<String>,
    pub start: String,
    pub rules: Vec<RuleEcho>,
    pub coding: Option<Vec<CodeEcho>>,
}

#[derive(Serialize, Debug, Clone)]
pub struct RuleEcho {
    pub letter: String,
    pub image: Vec<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct CodeEcho {
    pub letter: String,
    pub target: String,
}

impl InputEcho {
    pub fn of(doc: &SpecDocument) -> Self {
        InputEcho {
            name: doc.name.clone(),
            alphabet: doc.alphabet.clone(),
            start: doc.start.clone(),
            rules: doc
                .alphabet
                .iter()
                .zip(&doc.rules)
                .map(|(l, r)| RuleEcho {
                    letter: l.clone(),
                    image: r.clone(),
                })
                .collect(),
            coding: doc.code.as_ref().map(|code| {
                doc.alphabet
                    .iter()
                    .zip(code)
                    .map(|(l, t)| CodeEcho {
                        letter: l.clone(),
                        target: t.clone(),
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct Normalization {
    pub steps: Vec<String>,
    /// Letters of the sequence, after dropping unreachable ones.
    pub letters: Vec<String>,
    pub classification: Option<ClassificationReport>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub growing: Vec<String>,
    pub bounded: Vec<String>,
    pub unit: Vec<String>,
    pub stable: Vec<String>,
}

fn names<'a>(a: &Alphabet, letters: impl IntoIterator<Item = &'a Letter>) -> Vec<String> {
    letters
        .into_iter()
        .map(|&l| a.name(l).to_string())
        .collect()
}

impl ClassificationReport {
    pub fn of(a: &Alphabet, c: &GrowthClassification) -> Self {
        ClassificationReport {
            growing: names(a, &c.growing),
            bounded: names(a, &c.bounded),
            unit: names(a, &c.unit),
            stable: names(a, &c.stable),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct DecisionReport {
    pub verdict: String,
    pub method: String,
    pub clauses: Vec<ClauseReport>,
    pub witness: Option<WitnessReport>,
    pub notes: Vec<String>,
    pub automatic: Option<AutomaticReport>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ClauseReport {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Serialize, Debug, Clone)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessReport {
    Disconnected {
        from: String,
        to: String,
    },
    TailCycle {
        side: String,
        cycle: Vec<String>,
        from: String,
        to: String,
        label: Vec<String>,
    },
    NotPrimitive {
        disconnected: Option<[String; 2]>,
        cycle_gcd: usize,
    },
    BinaryNoCondition {},
    Uncovered {
        letters: Vec<String>,
    },
}

impl WitnessReport {
    pub fn of(a: &Alphabet, w: &Witness) -> Self {
        let n = |l: &Letter| a.name(*l).to_string();
        match w {
            Witness::Disconnected { from, to } => WitnessReport::Disconnected {
                from: n(from),
                to: n(to),
            },
            Witness::TailCycle {
                side,
                cycle,
                from,
                to,
                label,
            } => WitnessReport::TailCycle {
                side: side.as_str().to_string(),
                cycle: names(a, cycle),
                from: n(from),
                to: n(to),
                label: names(a, label.iter()),
            },
            Witness::NotPrimitive {
                disconnected,
                cycle_gcd,
            } => WitnessReport::NotPrimitive {
                disconnected: disconnected.map(|(x, y)| [n(&x), n(&y)]),
                cycle_gcd: *cycle_gcd,
            },
            Witness::BinaryNoCondition => WitnessReport::BinaryNoCondition {},
            Witness::Uncovered { letters } => WitnessReport::Uncovered {
                letters: names(a, letters),
            },
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct AutomaticReport {
    pub start_class: Vec<String>,
    pub r_iterations: u32,
    pub coverage_squarings: u32,
    pub coverage: Vec<CoverageRow>,
    /// `relation-sequence` or `pair-graph`.
    pub class_route: String,
    pub relation_levels: Option<usize>,
    pub pair_graphs_computed: Option<usize>,
}

#[derive(Serialize, Debug, Clone)]
pub struct CoverageRow {
    pub letter: String,
    pub meets_class: bool,
}

impl AutomaticReport {
    pub fn of(a: &Alphabet, d: &AutomaticDetails) -> Self {
        AutomaticReport {
            start_class: names(a, &d.start_class),
            r_iterations: d.r_iterations,
            coverage_squarings: d.coverage_squarings,
            coverage: d
                .coverage
                .iter()
                .map(|(l, ok)| CoverageRow {
                    letter: a.name(*l).to_string(),
                    meets_class: *ok,
                })
                .collect(),
            class_route: match d.route {
                ClassRoute::RelationSequence { .. } => "relation-sequence",
                ClassRoute::PairGraph { .. } => "pair-graph",
            }
            .to_string(),
            relation_levels: match d.route {
                ClassRoute::RelationSequence { levels } => Some(levels),
                ClassRoute::PairGraph { .. } => None,
            },
            pair_graphs_computed: match d.route {
                ClassRoute::PairGraph { computed } => Some(computed),
                ClassRoute::RelationSequence { .. } => None,
            },
        }
    }
}

impl DecisionReport {
    pub fn of(a: &Alphabet, d: &Decision) -> Self {
        DecisionReport {
            verdict: d.verdict.as_str().to_string(),
            method: d.method.as_str().to_string(),
            clauses: d
                .clauses
                .iter()
                .map(|c| ClauseReport {
                    name: c.name.to_string(),
                    holds: c.holds,
                    detail: c.detail.clone(),
                })
                .collect(),
            witness: d.witness.as_ref().map(|w| WitnessReport::of(a, w)),
            notes: d.notes.clone(),
            automatic: d.automatic.as_ref().map(|x| AutomaticReport::of(a, x)),
        }
    }
}

/// Errata raised by a decision.
pub fn errata_of(d: &Decision) -> Vec<String> {
    d.notes
        .iter()
        .filter(|n| n.as_str() == BINARY_ERASING_NOTE)
        .cloned()
        .collect()
}

#[derive(Serialize, Debug, Clone)]
pub struct EvidenceReport {
    /// Always true: the evidence only covers two finite prefixes.
    pub finite_scale: bool,
    /// `all-factors`, or `witness-targets` when only the factors singled
    /// out by a negative verdict's witness were compared.
    pub mode: String,
    pub n_small: usize,
    pub n_large: usize,
    pub max_factor_len: usize,
    pub slack: usize,
    pub factors_checked: usize,
    pub verdict: String,
    pub factor: Option<Vec<String>>,
    pub window_small: Option<usize>,
    pub window_large: Option<usize>,
    pub agrees_with_decision: bool,
}

impl EvidenceReport {
    pub fn of(a: &Alphabet, e: &Evidence, targeted: bool, decision_ap: bool) -> Self {
        let (verdict, factor, small, large) = match &e.verdict {
            EvidenceVerdict::Consistent => ("CONSISTENT", None, None, None),
            EvidenceVerdict::Grew {
                factor,
                small,
                large,
            } => (
                "GREW",
                Some(names(a, factor.iter())),
                Some(*small),
                Some(*large),
            ),
        };
        EvidenceReport {
            finite_scale: e.finite_scale,
            mode: if targeted {
                "witness-targets"
            } else {
                "all-factors"
            }
            .to_string(),
            n_small: e.config.n_small,
            n_large: e.config.n_large,
            max_factor_len: e.config.max_factor_len,
            slack: e.config.slack,
            factors_checked: e.factors_checked,
            verdict: verdict.to_string(),
            factor,
            window_small: small,
            window_large: large,
            agrees_with_decision: e.is_consistent() == decision_ap,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub line: Option<usize>,
}

#[derive(Serialize, Debug, Clone)]
pub struct Timings {
    pub decide: f64,
    pub verify: Option<f64>,
}
