//! Almost periodicity of `φ^∞(s)` for non-erasing `φ`.
//!
//! The fixed point is almost periodic iff
//!
//! 1. the occurrence graph restricted to the growing letters is strongly
//!    connected, and
//! 2. every cycle of the left and right tail graphs carries only empty
//!    labels.
//!
//! A tail graph has one edge per growing letter `b`: `φ(b) = u·c·v` with `u`
//! the maximal prefix of bounded letters (suffix for the right graph) and
//! `c` growing. A non-empty label on a cycle produces ever longer blocks of
//! bounded letters, and those never contain the start letter.

use std::collections::BTreeMap;

use crate::decision::{on_reachable, Clause, Decision, Method, Side, Verdict, Witness};
use crate::error::{Error, Result};
use crate::graph::{is_primitive, OccurrenceGraph};
use crate::growth::{classify_letters, GrowthClassification};
use crate::word::{Letter, Morphism, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailEdge {
    pub target: Letter,
    pub label: Word,
}

/// Functional graph over the growing letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailGraph {
    pub side: Side,
    pub edges: BTreeMap<Letter, TailEdge>,
}

/// Outcome of [`cycles_all_empty`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCheck {
    pub all_empty: bool,
    /// On failure: the offending cycle (starting at its least letter) and
    /// the first edge on it with a non-empty label.
    pub offending: Option<(Vec<Letter>, Letter, TailEdge)>,
}

pub fn left_tail_graph(m: &Morphism, c: &GrowthClassification) -> Result<TailGraph> {
    tail_graph(m, c, Side::Left)
}

pub fn right_tail_graph(m: &Morphism, c: &GrowthClassification) -> Result<TailGraph> {
    tail_graph(m, c, Side::Right)
}

fn tail_graph(m: &Morphism, c: &GrowthClassification, side: Side) -> Result<TailGraph> {
    if c.growing.is_empty() {
        return Err(Error::Precondition("no growing letters".into()));
    }
    let mut edges = BTreeMap::new();
    for &b in &c.growing {
        m.alphabet().check(b)?;
        let image = m.image(b);
        let pos = match side {
            Side::Left => image.iter().position(|&x| c.is_growing(x)),
            Side::Right => image.iter().rposition(|&x| c.is_growing(x)),
        }
        .ok_or_else(|| {
            Error::Internal(format!(
                "growing letter `{}` has no growing letter in its image",
                m.alphabet().name(b)
            ))
        })?;
        let label = match side {
            Side::Left => Word::new(image[..pos].to_vec()),
            Side::Right => Word::new(image[pos + 1..].to_vec()),
        };
        if let Some(&x) = label.iter().find(|&&x| !c.is_bounded(x)) {
            return Err(Error::Internal(format!(
                "tail label letter `{}` is not bounded",
                m.alphabet().name(x)
            )));
        }
        edges.insert(
            b,
            TailEdge {
                target: image[pos],
                label,
            },
        );
    }
    Ok(TailGraph { side, edges })
}

impl TailGraph {
    pub fn vertices(&self) -> impl Iterator<Item = Letter> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, b: Letter) -> Option<&TailEdge> {
        self.edges.get(&b)
    }

    /// All cycles, each listed from its least letter, in ascending order of
    /// that letter.
    pub fn cycles(&self) -> Vec<Vec<Letter>> {
        let mut state: BTreeMap<Letter, u8> = BTreeMap::new(); // 1 = on path, 2 = done
        let mut cycles = Vec::new();
        for start in self.vertices() {
            if state.contains_key(&start) {
                continue;
            }
            let mut path = Vec::new();
            let mut cur = start;
            loop {
                match state.get(&cur) {
                    Some(1) => {
                        let at = path.iter().position(|&x| x == cur).expect("on path");
                        let mut cycle: Vec<Letter> = path[at..].to_vec();
                        let min_at = cycle
                            .iter()
                            .enumerate()
                            .min_by_key(|(_, &x)| x)
                            .map(|(i, _)| i)
                            .unwrap_or(0);
                        cycle.rotate_left(min_at);
                        cycles.push(cycle);
                        break;
                    }
                    Some(_) => break,
                    None => {
                        state.insert(cur, 1);
                        path.push(cur);
                        match self.edges.get(&cur) {
                            Some(e) => cur = e.target,
                            None => break,
                        }
                    }
                }
            }
            for v in path {
                state.insert(v, 2);
            }
        }
        cycles.sort();
        cycles
    }
}

pub fn cycles_all_empty(t: &TailGraph) -> CycleCheck {
    for cycle in t.cycles() {
        for &b in &cycle {
            let edge = &t.edges[&b];
            if !edge.label.is_empty() {
                return CycleCheck {
                    all_empty: false,
                    offending: Some((cycle, b, edge.clone())),
                };
            }
        }
    }
    CycleCheck {
        all_empty: true,
        offending: None,
    }
}

fn render_set(m: &Morphism, letters: impl IntoIterator<Item = Letter>) -> String {
    let names: Vec<&str> = letters.into_iter().map(|l| m.alphabet().name(l)).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn decide_pure_nonerasing(m: &Morphism, s: Letter) -> Result<Decision> {
    m.require_non_erasing()?;
    m.require_prolongable(s)?;
    on_reachable(m, s, |t| pure_reachable(&t.morphism, t.start))
}

fn pure_reachable(m: &Morphism, s: Letter) -> Result<Decision> {
    let c = classify_letters(m)?;
    if !c.is_growing(s) {
        // Prolongable and non-erasing puts s on a self-loop with |φ(s)| >= 2.
        return Err(Error::Internal("start letter is not growing".into()));
    }

    let growing: Vec<Letter> = c.growing.iter().copied().collect();
    let g = OccurrenceGraph::of(m);
    let mut clauses = Vec::new();
    let mut witness = None;

    let disconnected = g.disconnected_pair(Some(&growing));
    clauses.push(Clause::new(
        "growing-strongly-connected",
        disconnected.is_none(),
        match disconnected {
            None => format!(
                "I = {} is strongly connected",
                render_set(m, growing.iter().copied())
            ),
            Some((a, b)) => format!(
                "no path from {} to {} inside I",
                m.alphabet().name(a),
                m.alphabet().name(b)
            ),
        },
    ));
    if let Some((from, to)) = disconnected {
        witness = Some(Witness::Disconnected { from, to });
    }

    for side in [Side::Left, Side::Right] {
        let t = tail_graph(m, &c, side)?;
        let check = cycles_all_empty(&t);
        let name = match side {
            Side::Left => "left-tail-cycles-empty",
            Side::Right => "right-tail-cycles-empty",
        };
        let detail = match &check.offending {
            None => format!(
                "{} tail graph: every cycle edge is labelled by the empty word",
                side.as_str()
            ),
            Some((cycle, from, edge)) => format!(
                "{} tail edge {} -> {} on cycle {} carries \"{}\"",
                side.as_str(),
                m.alphabet().name(*from),
                m.alphabet().name(edge.target),
                render_set(m, cycle.iter().copied()),
                m.alphabet().render(&edge.label)
            ),
        };
        clauses.push(Clause::new(name, check.all_empty, detail));
        if witness.is_none() {
            if let Some((cycle, from, edge)) = check.offending {
                witness = Some(Witness::TailCycle {
                    side,
                    cycle,
                    from,
                    to: edge.target,
                    label: edge.label,
                });
            }
        }
    }

    let ap = clauses.iter().all(|c| c.holds);
    Ok(Decision {
        verdict: Verdict::from_bool(ap),
        method: Method::PureNonErasing,
        clauses,
        witness,
        notes: Vec::new(),
        automatic: None,
    })
}

/// Every image has length at least two: almost periodic iff primitive.
pub fn decide_increasing(m: &Morphism, s: Letter) -> Result<Decision> {
    if let Some(b) = m.alphabet().letters().find(|&b| m.image(b).len() < 2) {
        return Err(Error::Precondition(format!(
            "image of `{}` is shorter than two letters",
            m.alphabet().name(b)
        )));
    }
    m.require_prolongable(s)?;
    on_reachable(m, s, |t| increasing_reachable(&t.morphism))
}

fn increasing_reachable(m: &Morphism) -> Result<Decision> {
    let g = OccurrenceGraph::of(m);
    let primitive = is_primitive(m);
    let disconnected = g.disconnected_pair(None);
    let all: Vec<Letter> = m.alphabet().letters().collect();
    let cycle_gcd = if disconnected.is_none() {
        g.cycle_gcd_of_component(&all)
    } else {
        0
    };
    let clauses = vec![Clause::new(
        "primitive",
        primitive,
        if primitive {
            "some power of the morphism matrix is positive".to_string()
        } else if let Some((a, b)) = disconnected {
            format!(
                "no path from {} to {}",
                m.alphabet().name(a),
                m.alphabet().name(b)
            )
        } else {
            format!("cycle lengths have gcd {cycle_gcd}")
        },
    )];
    Ok(Decision {
        verdict: Verdict::from_bool(primitive),
        method: Method::Increasing,
        clauses,
        witness: (!primitive).then_some(Witness::NotPrimitive {
            disconnected,
            cycle_gcd,
        }),
        notes: Vec::new(),
        automatic: None,
    })
}

pub const BINARY_ERASING_NOTE: &str = "condition phi(1) = empty applies to an erasing rule, \
although the binary criterion is stated for non-erasing morphisms; it is applied as stated";

/// Explicit criterion over a two-letter alphabet, with `s` playing `0`.
pub fn decide_binary(m: &Morphism, s: Letter) -> Result<Decision> {
    if m.size() != 2 {
        return Err(Error::Precondition(format!(
            "binary criterion needs two letters, got {}",
            m.size()
        )));
    }
    m.require_prolongable(s)?;
    let zero = s;
    let one = Letter::from_index(1 - s.index());
    let img0 = m.image(zero);
    let img1 = m.image(one);

    let c1 = img0.iter().all(|&x| x == zero);
    let c2 = img1.contains(&zero);
    let c3 = img1.is_empty();
    let c4 = img1 == [one] && img0.len() >= 2 && img0.last() == Some(&zero);

    let clauses = vec![
        Clause::new("image-of-0-all-zeros", c1, "phi(0) contains only 0"),
        Clause::new("image-of-1-contains-0", c2, "phi(1) contains 0"),
        Clause::new("image-of-1-empty", c3, "phi(1) is empty"),
        Clause::new(
            "image-of-1-is-1-and-0-framed",
            c4,
            "phi(1) = 1 and phi(0) = 0u0",
        ),
    ];
    let ap = c1 || c2 || c3 || c4;
    let mut notes = Vec::new();
    if c3 {
        notes.push(BINARY_ERASING_NOTE.to_string());
    }
    Ok(Decision {
        verdict: Verdict::from_bool(ap),
        method: Method::Binary,
        clauses,
        witness: (!ap).then_some(Witness::BinaryNoCondition),
        notes,
        automatic: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inner_tail() -> Morphism {
        Morphism::from_chars("012", &["01", "120", "2"]).unwrap()
    }

    fn left_tail() -> Morphism {
        Morphism::from_chars("012", &["01", "210", "2"]).unwrap()
    }

    fn thue_morse() -> Morphism {
        Morphism::from_chars("01", &["01", "10"]).unwrap()
    }

    fn edge(t: &TailGraph, b: u32) -> (u32, String) {
        let e = t.edge(Letter(b)).unwrap();
        (
            e.target.0,
            e.label.iter().map(|l| l.0.to_string()).collect(),
        )
    }

    #[test]
    fn left_tails() {
        let m = inner_tail();
        let c = classify_letters(&m).unwrap();
        let l = left_tail_graph(&m, &c).unwrap();
        assert_eq!(edge(&l, 0), (0, String::new()));
        assert_eq!(edge(&l, 1), (1, String::new()));

        let m = left_tail();
        let c = classify_letters(&m).unwrap();
        let l = left_tail_graph(&m, &c).unwrap();
        assert_eq!(edge(&l, 0), (0, String::new()));
        assert_eq!(edge(&l, 1), (1, "2".into()));

        let m = thue_morse();
        let c = classify_letters(&m).unwrap();
        let l = left_tail_graph(&m, &c).unwrap();
        assert_eq!(edge(&l, 0), (0, String::new()));
        assert_eq!(edge(&l, 1), (1, String::new()));
    }

    #[test]
    fn right_tails() {
        for m in [inner_tail(), left_tail()] {
            let c = classify_letters(&m).unwrap();
            let r = right_tail_graph(&m, &c).unwrap();
            assert!(r.edges.values().all(|e| e.label.is_empty()));
            assert!(cycles_all_empty(&r).all_empty);
        }
        // φ(0) = 021: suffix 1 is growing, prefix 0 is growing
        let m = Morphism::from_chars("012", &["021", "10", "2"]).unwrap();
        let c = classify_letters(&m).unwrap();
        assert_eq!(
            edge(&right_tail_graph(&m, &c).unwrap(), 0),
            (1, String::new())
        );
        assert_eq!(
            edge(&left_tail_graph(&m, &c).unwrap(), 0),
            (0, String::new())
        );
    }

    #[test]
    fn tail_graphs_recompose_images() {
        let m = Morphism::from_chars("0123", &["0213", "31", "2", "2312"]).unwrap();
        let c = classify_letters(&m).unwrap();
        let l = left_tail_graph(&m, &c).unwrap();
        let r = right_tail_graph(&m, &c).unwrap();
        for b in c.growing.iter().copied() {
            let le = l.edge(b).unwrap();
            assert!(m.image(b).starts_with(&le.label.concat(&[le.target])));
            let re = r.edge(b).unwrap();
            let mut tail = vec![re.target];
            tail.extend_from_slice(&re.label);
            assert!(m.image(b).ends_with(&tail));
        }
    }

    #[test]
    fn cycle_check() {
        let m = left_tail();
        let c = classify_letters(&m).unwrap();
        let check = cycles_all_empty(&left_tail_graph(&m, &c).unwrap());
        assert!(!check.all_empty);
        let (cycle, from, e) = check.offending.unwrap();
        assert_eq!(cycle, vec![Letter(1)]);
        assert_eq!(from, Letter(1));
        assert_eq!(e.target, Letter(1));
        assert_eq!(e.label, Word::single(Letter(2)));

        let m = inner_tail();
        let c = classify_letters(&m).unwrap();
        assert!(cycles_all_empty(&left_tail_graph(&m, &c).unwrap()).all_empty);

        let single = TailGraph {
            side: Side::Left,
            edges: BTreeMap::from([(
                Letter(0),
                TailEdge {
                    target: Letter(0),
                    label: Word::empty(),
                },
            )]),
        };
        assert!(cycles_all_empty(&single).all_empty);
    }

    #[test]
    fn cycles_are_canonical() {
        let t = TailGraph {
            side: Side::Right,
            edges: (0..5)
                .map(|i| {
                    let target = match i {
                        0 => 1,
                        1 => 2,
                        2 => 1,
                        3 => 4,
                        _ => 3,
                    };
                    (
                        Letter(i),
                        TailEdge {
                            target: Letter(target),
                            label: Word::empty(),
                        },
                    )
                })
                .collect(),
        };
        assert_eq!(
            t.cycles(),
            vec![vec![Letter(1), Letter(2)], vec![Letter(3), Letter(4)]]
        );
    }

    #[test]
    fn pure_decisions() {
        let d = decide_pure_nonerasing(&inner_tail(), Letter(0)).unwrap();
        assert_eq!(d.verdict, Verdict::AlmostPeriodic);
        assert!(d.witness.is_none());
        assert_eq!(d.clauses.len(), 3);

        let d = decide_pure_nonerasing(&left_tail(), Letter(0)).unwrap();
        assert_eq!(d.verdict, Verdict::NotAlmostPeriodic);
        assert_eq!(
            d.witness,
            Some(Witness::TailCycle {
                side: Side::Left,
                cycle: vec![Letter(1)],
                from: Letter(1),
                to: Letter(1),
                label: Word::single(Letter(2)),
            })
        );

        assert!(decide_pure_nonerasing(&thue_morse(), Letter(0))
            .unwrap()
            .is_ap());
    }

    #[test]
    fn pure_rejects_bad_input() {
        let erasing = Morphism::from_chars("01", &["010", ""]).unwrap();
        assert!(matches!(
            decide_pure_nonerasing(&erasing, Letter(0)),
            Err(Error::Erasing(_))
        ));
        let stuck = Morphism::from_chars("01", &["0", "10"]).unwrap();
        assert!(matches!(
            decide_pure_nonerasing(&stuck, Letter(0)),
            Err(Error::NotProlongable(_))
        ));
    }

    #[test]
    fn disconnected_growing_letters() {
        let m = Morphism::from_chars("01", &["01", "11"]).unwrap();
        let d = decide_pure_nonerasing(&m, Letter(0)).unwrap();
        assert!(!d.is_ap());
        assert_eq!(
            d.witness,
            Some(Witness::Disconnected {
                from: Letter(1),
                to: Letter(0)
            })
        );
    }

    #[test]
    fn unreachable_letters_are_ignored() {
        // 2 and 3 never occur; on their own they would break connectivity
        let m = Morphism::from_chars("0123", &["01", "10", "23", "3"]).unwrap();
        assert!(decide_pure_nonerasing(&m, Letter(0)).unwrap().is_ap());
        // the witness is reported in the caller's letters
        let m = Morphism::from_chars("0123", &["03", "210", "2", "33"]).unwrap();
        let d = decide_pure_nonerasing(&m, Letter(0)).unwrap();
        assert_eq!(
            d.witness,
            Some(Witness::Disconnected {
                from: Letter(3),
                to: Letter(0)
            })
        );
    }

    #[test]
    fn increasing() {
        assert!(decide_increasing(&thue_morse(), Letter(0)).unwrap().is_ap());
        let m = Morphism::from_chars("01", &["01", "11"]).unwrap();
        assert!(!decide_increasing(&m, Letter(0)).unwrap().is_ap());

        // 1 never occurs, so the sequence is 000...
        let m = Morphism::from_chars("01", &["00", "11"]).unwrap();
        let d = decide_increasing(&m, Letter(0)).unwrap();
        assert!(d.is_ap());
        assert_eq!(d.notes.len(), 1);

        assert!(matches!(
            decide_increasing(&inner_tail(), Letter(0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn binary() {
        let cases = [
            ("00", "1", true),
            ("01", "10", true),
            ("01", "11", false),
            ("010", "1", true),
            ("01", "1", false),
            ("010", "", true),
        ];
        for (a, b, ap) in cases {
            let m = Morphism::from_chars("01", &[a, b]).unwrap();
            let d = decide_binary(&m, Letter(0)).unwrap();
            assert_eq!(d.is_ap(), ap, "0 -> {a}, 1 -> {b}");
            assert_eq!(d.witness.is_some(), !ap);
        }
        let m = Morphism::from_chars("01", &["010", ""]).unwrap();
        assert_eq!(
            decide_binary(&m, Letter(0)).unwrap().notes,
            vec![BINARY_ERASING_NOTE]
        );
        assert!(decide_binary(&inner_tail(), Letter(0)).is_err());
    }
}
