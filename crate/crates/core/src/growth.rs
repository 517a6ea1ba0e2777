//! Growing (`I`) versus bounded (`F`) letters of a non-erasing morphism.
//!
//! `E` holds the letters with one-letter images and `D` the letters on
//! cycles that never leave `E`. A letter is bounded exactly when every
//! cycle reachable from it lies inside `D`: any other cycle carries a letter
//! whose image is longer than one, and going round it adds a letter each
//! time.

use std::collections::{BTreeSet, VecDeque};

use crate::error::Result;
use crate::graph::OccurrenceGraph;
use crate::word::{Letter, Morphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthClassification {
    /// `I`: `|φ^m(b)| -> ∞`.
    pub growing: BTreeSet<Letter>,
    /// `F`: `|φ^m(b)|` bounded.
    pub bounded: BTreeSet<Letter>,
    /// `E`: `|φ(b)| = 1`.
    pub unit: BTreeSet<Letter>,
    /// `D`: letters on cycles lying entirely inside `E`.
    pub stable: BTreeSet<Letter>,
}

impl GrowthClassification {
    pub fn is_growing(&self, b: Letter) -> bool {
        self.growing.contains(&b)
    }

    pub fn is_bounded(&self, b: Letter) -> bool {
        self.bounded.contains(&b)
    }
}

pub fn classify_letters(m: &Morphism) -> Result<GrowthClassification> {
    m.require_non_erasing()?;
    let n = m.size();
    let unit: BTreeSet<Letter> = m
        .alphabet()
        .letters()
        .filter(|&b| m.image(b).len() == 1)
        .collect();

    // E-letters form a functional graph b -> φ(b); D is the union of its cycles.
    let mut stable = BTreeSet::new();
    for &b in &unit {
        let mut cur = b;
        for _ in 0..n {
            cur = m.image(cur)[0];
            if !unit.contains(&cur) {
                break;
            }
            if cur == b {
                stable.insert(b);
                break;
            }
        }
    }

    let g = OccurrenceGraph::of(m);
    let cyclic = g.cyclic_vertices();
    // Cyclic letters outside D seed growth; everything that reaches one grows.
    let mut growing_mask = vec![false; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if cyclic[v] && !stable.contains(&Letter::from_index(v)) {
            growing_mask[v] = true;
            queue.push_back(v);
        }
    }
    let adj = g.adjacency();
    while let Some(v) = queue.pop_front() {
        for (u, grows) in growing_mask.iter_mut().enumerate() {
            if adj.get(u, v) && !*grows {
                *grows = true;
                queue.push_back(u);
            }
        }
    }

    let (growing, bounded) = m
        .alphabet()
        .letters()
        .partition(|b| growing_mask[b.index()]);
    Ok(GrowthClassification {
        growing,
        bounded,
        unit,
        stable,
    })
}

/// An upper bound on `|φ^m(b)|` over every bounded letter `b` and every `m`:
/// `n·k^n`, saturating. Zero when no letter is bounded.
pub fn bounded_length_bound(m: &Morphism, c: &GrowthClassification) -> u128 {
    if c.bounded.is_empty() {
        return 0;
    }
    let n = m.size() as u128;
    let k = m.max_image_len().max(1) as u128;
    let mut pow: u128 = 1;
    for _ in 0..m.size() {
        pow = pow.saturating_mul(k);
    }
    n.saturating_mul(pow)
}
