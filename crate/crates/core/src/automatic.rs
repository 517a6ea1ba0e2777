//! Almost periodicity of `h(φ^∞(s))` for a `k`-uniform morphism `φ` and a
//! coding `h`.
//!
//! Letters `b ~_l c` when `h(φ^l(b)) = h(φ^l(c))`. The sequence of these
//! relations is eventually periodic with preperiod and period bounded by the
//! Bell number `B_n`, so for any level `L >= B_n` the sequence is almost
//! periodic iff the class `H` of `s` under `~_L` meets `φ^m(b)` for every
//! letter `b` and some `m`.
//!
//! `H` is found without expanding words: the pair graph `T_0` joins `{b, c}`
//! to the position-wise differing pairs of `φ(b)` and `φ(c)`, and each
//! doubling step `T_{i+1} = T_i²` moves the comparison `2^i` levels deeper.
//! The coverage test reads the occurrence graph squared `n² + 1` times.
//!
//! Before building pair graphs the relation sequence itself is stepped for a
//! budget of levels. If it repeats within the budget, `~_L` is read off the
//! cycle directly; the pair graphs are only needed when it does not.

use std::collections::{BTreeSet, HashMap};

use crate::bitmatrix::BitMatrix;
use crate::decision::{on_reachable, AutomaticDetails, Clause, Decision, Method, Verdict, Witness};
use crate::error::{Error, Result};
use crate::graph::OccurrenceGraph;
use crate::word::{Coding, Letter, Morphism};

/// Cap on `k^l` for direct expansion in [`relation_at_level`].
pub const RELATION_EXPANSION_CAP: usize = 1_000_000;

/// A partition of the alphabet, stored as the least member of each letter's
/// class. Two relations are equal iff their canonical vectors are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EquivalenceRelation {
    rep: Vec<Letter>,
}

impl EquivalenceRelation {
    /// Letters with equal keys are equivalent.
    pub fn from_keys<K: Eq + std::hash::Hash>(keys: &[K]) -> Self {
        let mut first: HashMap<&K, Letter> = HashMap::new();
        let rep = keys
            .iter()
            .enumerate()
            .map(|(i, k)| *first.entry(k).or_insert(Letter::from_index(i)))
            .collect();
        EquivalenceRelation { rep }
    }

    /// Closes an arbitrary symmetric pair predicate under transitivity.
    pub fn from_pairs(n: usize, mut related: impl FnMut(Letter, Letter) -> bool) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in 1..n {
            for b in 0..c {
                if related(Letter::from_index(b), Letter::from_index(c)) {
                    let (rb, rc) = (find(&mut parent, b), find(&mut parent, c));
                    // keep the smaller index as root so roots are least members
                    let (lo, hi) = (rb.min(rc), rb.max(rc));
                    parent[hi] = lo;
                }
            }
        }
        let rep = (0..n)
            .map(|x| Letter::from_index(find(&mut parent, x)))
            .collect();
        EquivalenceRelation { rep }
    }

    /// `~_0`: equal images under the coding.
    pub fn of_coding(h: &Coding) -> Self {
        let keys: Vec<Letter> = h.source().letters().map(|b| h.code(b)).collect();
        Self::from_keys(&keys)
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    pub fn representative(&self, b: Letter) -> Letter {
        self.rep[b.index()]
    }

    pub fn equivalent(&self, b: Letter, c: Letter) -> bool {
        self.rep[b.index()] == self.rep[c.index()]
    }

    pub fn class_of(&self, b: Letter) -> Vec<Letter> {
        let r = self.representative(b);
        (0..self.size())
            .map(Letter::from_index)
            .filter(|&x| self.rep[x.index()] == r)
            .collect()
    }

    pub fn classes(&self) -> Vec<Vec<Letter>> {
        let mut by_rep: Vec<Vec<Letter>> = vec![Vec::new(); self.size()];
        for (i, r) in self.rep.iter().enumerate() {
            by_rep[r.index()].push(Letter::from_index(i));
        }
        by_rep.into_iter().filter(|c| !c.is_empty()).collect()
    }

    pub fn class_count(&self) -> usize {
        self.rep
            .iter()
            .enumerate()
            .filter(|(i, r)| r.index() == *i)
            .count()
    }

    /// Position-wise equivalence of two words of equal length.
    pub fn words_equivalent(&self, u: &[Letter], v: &[Letter]) -> bool {
        u.len() == v.len() && u.iter().zip(v).all(|(&x, &y)| self.equivalent(x, y))
    }
}

fn require_uniform(m: &Morphism) -> Result<usize> {
    let k = m.image(Letter(0)).len();
    for b in m.alphabet().letters() {
        let len = m.image(b).len();
        if len != k {
            return Err(Error::NotUniform {
                letter: m.alphabet().name(b).to_string(),
                len,
                expected: k,
            });
        }
    }
    Ok(k)
}

fn require_coding_matches(m: &Morphism, h: &Coding) -> Result<()> {
    if h.source() != m.alphabet() {
        return Err(Error::Precondition(
            "coding source alphabet differs from the morphism alphabet".into(),
        ));
    }
    Ok(())
}

/// `~_l` by expanding `h(φ^l(b))` for every letter. Exponential in `l`;
/// kept as a reference for the pair-graph route.
pub fn relation_at_level(m: &Morphism, h: &Coding, l: usize) -> Result<EquivalenceRelation> {
    relation_at_level_capped(m, h, l, RELATION_EXPANSION_CAP)
}

pub fn relation_at_level_capped(
    m: &Morphism,
    h: &Coding,
    l: usize,
    cap: usize,
) -> Result<EquivalenceRelation> {
    require_uniform(m)?;
    require_coding_matches(m, h)?;
    let images = m
        .alphabet()
        .letters()
        .map(|b| m.power_apply_capped(&[b], l, cap).map(|w| h.apply(&w)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivalenceRelation::from_keys(&images))
}

/// `b ~_{l+1} c` iff `φ(b)` and `φ(c)` are position-wise `~_l`-equivalent.
pub fn next_relation(m: &Morphism, rel: &EquivalenceRelation) -> EquivalenceRelation {
    let keys: Vec<Vec<Letter>> = m
        .alphabet()
        .letters()
        .map(|b| m.image(b).iter().map(|&x| rel.representative(x)).collect())
        .collect();
    EquivalenceRelation::from_keys(&keys)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationProfile {
    /// `~_0 ..= ~_{l_max}`.
    pub relations: Vec<EquivalenceRelation>,
    /// `(preperiod, period)` of the first repeat, if one occurs by `l_max`.
    pub repeat: Option<(usize, usize)>,
}

pub fn relation_sequence_profile(
    m: &Morphism,
    h: &Coding,
    l_max: usize,
) -> Result<RelationProfile> {
    require_uniform(m)?;
    require_coding_matches(m, h)?;
    let mut relations = vec![EquivalenceRelation::of_coding(h)];
    let mut seen: HashMap<EquivalenceRelation, usize> = HashMap::from([(relations[0].clone(), 0)]);
    let mut repeat = None;
    for l in 1..=l_max {
        let next = next_relation(m, &relations[l - 1]);
        if repeat.is_none() {
            if let Some(&p) = seen.get(&next) {
                repeat = Some((p, l - p));
            } else {
                seen.insert(next.clone(), l);
            }
        }
        relations.push(next);
    }
    Ok(RelationProfile { relations, repeat })
}

/// Bell number `B_n`, `None` once it overflows.
pub fn bell_number(n: usize) -> Option<u128> {
    // Bell triangle
    let mut row: Vec<u128> = vec![1];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("non-empty"));
        for &x in &row {
            let v = next.last().expect("non-empty").checked_add(x)?;
            next.push(v);
        }
        row = next;
    }
    Some(row[0])
}

/// Doubling and squaring budgets for an alphabet of size `n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DeciderConfig {
    /// Pair-graph doublings; the class is read at level `2^r_iterations`.
    pub r_iterations: u32,
    /// Occurrence-graph squarings for the coverage test.
    pub coverage_squarings: u32,
    /// Levels of the relation sequence stepped directly before falling
    /// back to pair graphs. Zero always uses the pair graphs.
    pub relation_budget: usize,
}

impl DeciderConfig {
    /// `r = ⌈n·log₂ max(n, 2)⌉ + 1`, so `2^r >= n^n >= B_n`; `n² + 1`
    /// squarings so `2^(n²+1)` exceeds preperiod plus period of the
    /// occurrence sets.
    pub fn for_alphabet(n: usize) -> Self {
        let nf = n as f64;
        let r = (nf * nf.max(2.0).log2()).ceil() as u32 + 1;
        DeciderConfig {
            r_iterations: r,
            coverage_squarings: (n * n + 1) as u32,
            relation_budget: n * n + 1,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if (self.coverage_squarings as usize) < n * n + 1 {
            return Err(Error::Precondition(format!(
                "coverage_squarings = {} is below n² + 1 = {}",
                self.coverage_squarings,
                n * n + 1
            )));
        }
        let enough = match bell_number(n) {
            Some(b) if self.r_iterations < 127 => (1u128 << self.r_iterations) >= b,
            Some(_) => true,
            // B_n > 2^127 needs r >= n log2 n, which n^n bounds
            None => self.r_iterations as f64 >= (n as f64) * (n as f64).log2(),
        };
        if !enough {
            return Err(Error::Precondition(format!(
                "2^{} is below the Bell number B_{n}",
                self.r_iterations
            )));
        }
        Ok(())
    }
}

/// Graph on unordered pairs of distinct letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairGraph {
    n: usize,
    adj: BitMatrix,
    /// `T_level` compares letters `2^level` levels deeper.
    pub level: u32,
}

impl PairGraph {
    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n * (self.n.saturating_sub(1)) / 2
    }

    pub fn index(b: Letter, c: Letter) -> usize {
        let (lo, hi) = (b.index().min(c.index()), b.index().max(c.index()));
        debug_assert!(lo != hi);
        hi * (hi - 1) / 2 + lo
    }

    pub fn pair(index: usize) -> (Letter, Letter) {
        // hi is the largest h with h(h-1)/2 <= index
        let mut hi = ((((8 * index + 1) as f64).sqrt() + 1.0) / 2.0) as usize;
        while hi * (hi - 1) / 2 > index {
            hi -= 1;
        }
        while (hi + 1) * hi / 2 <= index {
            hi += 1;
        }
        (
            Letter::from_index(index - hi * (hi - 1) / 2),
            Letter::from_index(hi),
        )
    }

    /// `V_level(b, c)` as `(lo, hi)` letter pairs.
    pub fn neighbors(&self, b: Letter, c: Letter) -> Vec<(Letter, Letter)> {
        if b == c {
            return Vec::new();
        }
        self.adj.ones(Self::index(b, c)).map(Self::pair).collect()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    /// `b ~ c` iff every neighbour pair of `{b, c}` is `base`-equivalent.
    /// With `base = ~_l` this is `~_{l + 2^level}`.
    pub fn induced_relation(&self, base: &EquivalenceRelation) -> EquivalenceRelation {
        EquivalenceRelation::from_pairs(self.n, |b, c| {
            self.adj
                .ones(Self::index(b, c))
                .map(Self::pair)
                .all(|(x, y)| base.equivalent(x, y))
        })
    }
}

/// `T_0`: `{b, c}` points to every `{φ(b)_j, φ(c)_j}` with differing letters.
pub fn initial_pair_graph(m: &Morphism) -> Result<PairGraph> {
    require_uniform(m)?;
    let n = m.size();
    let mut adj = BitMatrix::new(n * n.saturating_sub(1) / 2);
    for c in 1..n {
        for b in 0..c {
            let (b, c) = (Letter::from_index(b), Letter::from_index(c));
            let from = PairGraph::index(b, c);
            for (&x, &y) in m.image(b).iter().zip(m.image(c)) {
                if x != y {
                    adj.set(from, PairGraph::index(x, y));
                }
            }
        }
    }
    Ok(PairGraph { n, adj, level: 0 })
}

/// `T_{i+1}`: two-step reachability in `T_i`.
pub fn double_pair_graph(t: &PairGraph) -> PairGraph {
    PairGraph {
        n: t.n,
        adj: t.adj.square(),
        level: t.level + 1,
    }
}

/// `T_r`, plus the number of squarings actually performed (the doubling
/// sequence is eventually periodic and is cut short once it repeats).
pub fn pair_graph_at(m: &Morphism, r: u32) -> Result<(PairGraph, usize)> {
    let t0 = initial_pair_graph(m)?;
    let (adj, computed) = t0.adj.repeated_square(r as u64);
    Ok((
        PairGraph {
            n: t0.n,
            adj,
            level: r,
        },
        computed,
    ))
}

/// The letters `~_{2^r}`-equivalent to `s`, in ascending order.
pub fn stable_class_of_start(
    m: &Morphism,
    h: &Coding,
    s: Letter,
    cfg: &DeciderConfig,
) -> Result<Vec<Letter>> {
    Ok(stable_class(m, h, s, cfg)?.0)
}

/// How the class of the start letter was obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ClassRoute {
    /// The relation sequence repeated after `levels` steps.
    RelationSequence { levels: usize },
    /// Pair-graph doubling; `computed` distinct graphs before it repeated.
    PairGraph { computed: usize },
}

fn pow2_mod(e: u32, m: usize) -> usize {
    let mut acc = 1 % m;
    for _ in 0..e {
        acc = acc * 2 % m;
    }
    acc
}

/// `~_{2^r}` from the relation sequence, if it repeats within `budget`
/// levels. Returns the relation and the number of levels stepped.
fn relation_by_cycle(
    m: &Morphism,
    h: &Coding,
    r: u32,
    budget: usize,
) -> Option<(EquivalenceRelation, usize)> {
    let target = (r < 64).then(|| 1u64 << r);
    let mut relations = vec![EquivalenceRelation::of_coding(h)];
    let mut seen = HashMap::from([(relations[0].clone(), 0usize)]);
    for l in 1..=budget {
        let next = next_relation(m, &relations[l - 1]);
        if target == Some(l as u64) {
            return Some((next, l));
        }
        if let Some(&p) = seen.get(&next) {
            let period = l - p;
            // 2^r > l > p here, so the level maps to p + (2^r - p) mod period
            let offset = (pow2_mod(r, period) + period - p % period) % period;
            return Some((relations[p + offset].clone(), l));
        }
        seen.insert(next.clone(), l);
        relations.push(next);
    }
    None
}

fn stable_class(
    m: &Morphism,
    h: &Coding,
    s: Letter,
    cfg: &DeciderConfig,
) -> Result<(Vec<Letter>, ClassRoute)> {
    require_coding_matches(m, h)?;
    m.alphabet().check(s)?;
    cfg.validate(m.size())?;
    if cfg.r_iterations == 0 {
        let rel = next_relation(m, &EquivalenceRelation::of_coding(h));
        return Ok((rel.class_of(s), ClassRoute::RelationSequence { levels: 1 }));
    }
    if let Some((rel, levels)) = relation_by_cycle(m, h, cfg.r_iterations, cfg.relation_budget) {
        return Ok((rel.class_of(s), ClassRoute::RelationSequence { levels }));
    }
    let (t, computed) = pair_graph_at(m, cfg.r_iterations)?;
    let class = m
        .alphabet()
        .letters()
        .filter(|&b| {
            b == s
                || t.adj
                    .ones(PairGraph::index(s, b))
                    .map(PairGraph::pair)
                    .all(|(x, y)| h.code(x) == h.code(y))
        })
        .collect();
    Ok((
        class,
        ClassRoute::PairGraph {
            computed: computed + 1,
        },
    ))
}

/// `P^(b)_M` for `M = 2^exponent_log`: the letters occurring in `φ^M(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceSets {
    pub exponent_log: u32,
    pub sets: Vec<BTreeSet<Letter>>,
}

impl OccurrenceSets {
    pub fn of(&self, b: Letter) -> &BTreeSet<Letter> {
        &self.sets[b.index()]
    }
}

pub fn occurrence_sets_at(m: &Morphism, exponent_log: u32) -> OccurrenceSets {
    let g = OccurrenceGraph::of(m);
    let (adj, _) = g.adjacency().repeated_square(exponent_log as u64);
    let powered = OccurrenceGraph::from_adjacency(adj);
    OccurrenceSets {
        exponent_log,
        sets: m
            .alphabet()
            .letters()
            .map(|b| powered.successor_set(b))
            .collect(),
    }
}

pub fn decide_automatic(m: &Morphism, h: &Coding, s: Letter) -> Result<Decision> {
    decide_automatic_with(m, h, s, &DeciderConfig::for_alphabet(m.size()))
}

pub fn decide_automatic_with(
    m: &Morphism,
    h: &Coding,
    s: Letter,
    cfg: &DeciderConfig,
) -> Result<Decision> {
    require_uniform(m)?;
    require_coding_matches(m, h)?;
    m.require_prolongable(s)?;
    on_reachable(m, s, |t| {
        automatic_reachable(&t.morphism, &h.restrict(t)?, t.start, cfg)
    })
}

fn automatic_reachable(
    m: &Morphism,
    h: &Coding,
    s: Letter,
    cfg: &DeciderConfig,
) -> Result<Decision> {
    let (class, route) = stable_class(m, h, s, cfg)?;
    let sets = occurrence_sets_at(m, cfg.coverage_squarings);
    let coverage: Vec<(Letter, bool)> = m
        .alphabet()
        .letters()
        .map(|b| (b, class.iter().any(|x| sets.of(b).contains(x))))
        .collect();
    let uncovered: Vec<Letter> = coverage
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|&(b, _)| b)
        .collect();
    let ap = uncovered.is_empty();
    let names = |ls: &[Letter]| {
        ls.iter()
            .map(|&l| m.alphabet().name(l))
            .collect::<Vec<_>>()
            .join(", ")
    };

    let clauses = vec![Clause::new(
        "start-class-covers-every-image",
        ap,
        if ap {
            format!(
                "every image at exponent 2^{} contains a letter of {{{}}}",
                cfg.coverage_squarings,
                names(&class)
            )
        } else {
            format!(
                "images of {{{}}} at exponent 2^{} avoid {{{}}}",
                names(&uncovered),
                cfg.coverage_squarings,
                names(&class)
            )
        },
    )];
    Ok(Decision {
        verdict: Verdict::from_bool(ap),
        method: Method::Automatic,
        clauses,
        witness: (!ap).then(|| Witness::Uncovered {
            letters: uncovered.clone(),
        }),
        notes: Vec::new(),
        automatic: Some(AutomaticDetails {
            start_class: class,
            r_iterations: cfg.r_iterations,
            coverage_squarings: cfg.coverage_squarings,
            coverage,
            route,
        }),
    })
}
