//! Picks the decision procedure that applies to a morphism, a start letter
//! and an optional coding.
//!
//! The morphism is first restricted to the letters reachable from the start
//! letter. Then:
//!
//! * a coding that is not injective needs a uniform morphism and goes to the
//!   automatic decider; an injective coding does not change the answer and
//!   is dropped;
//! * two letters use the binary criterion, which also covers `1 -> Λ`;
//! * any other erasing morphism is unsupported;
//! * everything else goes to the pure decider.

use crate::automatic::decide_automatic;
use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::growth::{classify_letters, GrowthClassification};
use crate::pure::{decide_binary, decide_pure_nonerasing};
use crate::word::{Coding, Letter, Morphism, Trimmed};

/// A decision together with the normalization that preceded it.
#[derive(Clone, Debug)]
pub struct Routed {
    /// The morphism restricted to the letters of the sequence. Letters in
    /// `decision` refer to this alphabet.
    pub trimmed: Trimmed,
    /// The coding restricted to the trimmed alphabet, if one was given.
    pub coding: Option<Coding>,
    /// Growth classes of the trimmed morphism, when it is non-erasing.
    pub classification: Option<GrowthClassification>,
    /// Human-readable normalization steps, in order.
    pub steps: Vec<String>,
    pub decision: Decision,
}

pub fn decide(m: &Morphism, s: Letter, h: Option<&Coding>) -> Result<Routed> {
    m.require_prolongable(s)?;
    let trimmed = m.trim_reachable_with_map(s)?;
    let mut steps = Vec::new();
    let dropped: Vec<&str> = m
        .alphabet()
        .letters()
        .filter(|l| !trimmed.kept.contains(l))
        .map(|l| m.alphabet().name(l))
        .collect();
    if dropped.is_empty() {
        steps.push("every letter occurs in the sequence".to_string());
    } else {
        steps.push(format!(
            "dropped letters not reachable from the start: {}",
            dropped.join(" ")
        ));
    }
    let coding = h.map(|h| h.restrict(&trimmed)).transpose()?;
    let tm = &trimmed.morphism;
    let ts = trimmed.start;
    let classification = tm
        .is_non_erasing()
        .then(|| classify_letters(tm))
        .transpose()?;

    let decision = match &coding {
        Some(c) if !c.is_injective() => {
            if tm.uniform_length().is_none() {
                return Err(Error::Unsupported(
                    "a non-injective coding is only decided for uniform morphisms; \
                     the general morphic case has no known procedure here"
                        .into(),
                ));
            }
            steps.push("coding is not injective and the morphism is uniform".to_string());
            decide_automatic(tm, c, ts)?
        }
        _ => {
            if coding.is_some() {
                steps.push("coding is injective and does not affect the answer".to_string());
            }
            if tm.size() == 2 {
                steps.push("two letters: binary criterion".to_string());
                decide_binary(tm, ts)?
            } else if let Some(b) = tm.erased_letter() {
                return Err(Error::Unsupported(format!(
                    "letter `{}` is erased; erasing morphisms are only decided over two letters, \
                     the general erasing case is open",
                    tm.alphabet().name(b)
                )));
            } else {
                decide_pure_nonerasing(tm, ts)?
            }
        }
    };
    Ok(Routed {
        trimmed,
        coding,
        classification,
        steps,
        decision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::Method;
    use crate::word::Alphabet;

    #[test]
    fn routes() {
        let tm = Morphism::from_chars("01", &["01", "10"]).unwrap();
        let r = decide(&tm, Letter(0), None).unwrap();
        assert_eq!(r.decision.method, Method::Binary);

        let constant = Coding::constant(tm.alphabet(), "x");
        let r = decide(&tm, Letter(0), Some(&constant)).unwrap();
        assert_eq!(r.decision.method, Method::Automatic);
        assert!(r.decision.is_ap());

        let m = Morphism::from_chars("012", &["01", "120", "2"]).unwrap();
        let r = decide(&m, Letter(0), None).unwrap();
        assert_eq!(r.decision.method, Method::PureNonErasing);

        let target = Alphabet::new(["a", "b"]).unwrap();
        let h = Coding::new(
            m.alphabet().clone(),
            target,
            vec![Letter(0), Letter(1), Letter(0)],
        )
        .unwrap();
        assert!(matches!(
            decide(&m, Letter(0), Some(&h)),
            Err(Error::Unsupported(_))
        ));

        let erasing = Morphism::from_chars("012", &["012", "1", ""]).unwrap();
        assert!(matches!(
            decide(&erasing, Letter(0), None),
            Err(Error::Unsupported(_))
        ));
        let erasing = Morphism::from_chars("01", &["001", ""]).unwrap();
        assert!(decide(&erasing, Letter(0), None).unwrap().decision.is_ap());
    }

    #[test]
    fn trimming_changes_the_route() {
        // 2 never occurs, leaving a binary problem
        let m = Morphism::from_chars("012", &["01", "10", "22"]).unwrap();
        let r = decide(&m, Letter(0), None).unwrap();
        assert_eq!(r.decision.method, Method::Binary);
        assert_eq!(r.trimmed.morphism.size(), 2);
        assert!(r.steps[0].contains('2'));
    }
}
