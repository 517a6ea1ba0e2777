//! Agreement suites: independent procedures run on the same instances and
//! compared. Every failure line carries enough to reproduce the instance.

use rand::Rng;
use rayon::prelude::*;

use crate::automatic::{
    bell_number, decide_automatic, double_pair_graph, initial_pair_graph, relation_at_level,
    relation_sequence_profile, EquivalenceRelation,
};
use crate::error::Result;
use crate::oracle::{ap_evidence, refute_from_witness, EvidenceConfig, EvidenceVerdict};
use crate::pure::{decide_binary, decide_pure_nonerasing};
use crate::sample::{
    binary_morphisms, random_coding, random_prolongable, random_uniform, rng, uniform_morphisms,
};
use crate::word::{Coding, Letter, Morphism, DEFAULT_WORD_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    /// Instances compared.
    pub total: usize,
    pub agreed: usize,
    /// Instances outside the suite's scope (not prolongable and so on).
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.agreed == self.total
    }

    fn collect(name: &str, outcomes: Vec<Outcome>) -> SuiteReport {
        let mut r = SuiteReport {
            name: name.to_string(),
            total: 0,
            agreed: 0,
            skipped: 0,
            failures: Vec::new(),
        };
        for o in outcomes {
            match o {
                Outcome::Agree => {
                    r.total += 1;
                    r.agreed += 1;
                }
                Outcome::Skip => r.skipped += 1,
                Outcome::Disagree(msg) => {
                    r.total += 1;
                    r.failures.push(msg);
                }
            }
        }
        r
    }
}

enum Outcome {
    Agree,
    Skip,
    Disagree(String),
}

fn outcome(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Agree
    } else {
        Outcome::Disagree(msg())
    }
}

fn failed(e: crate::error::Error, what: &str) -> Outcome {
    Outcome::Disagree(format!("{what}: error {e}"))
}

/// Compact rendering of a morphism for failure messages.
pub fn describe(m: &Morphism) -> String {
    m.alphabet()
        .letters()
        .map(|b| {
            format!(
                "{}->{}",
                m.alphabet().name(b),
                m.alphabet().render(m.image(b))
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Non-erasing binary morphisms, prolongable on `0`, with both images of
/// length at most `max_len`: the binary criterion against the pure one.
pub fn binary_vs_pure(max_len: usize) -> SuiteReport {
    let outcomes = binary_morphisms(max_len, 1)
        .par_iter()
        .map(|m| {
            match (
                decide_binary(m, Letter(0)),
                decide_pure_nonerasing(m, Letter(0)),
            ) {
                (Ok(b), Ok(p)) => outcome(b.verdict == p.verdict, || {
                    format!("{}: binary {} pure {}", describe(m), b.verdict, p.verdict)
                }),
                (Err(e), _) | (_, Err(e)) => failed(e, &describe(m)),
            }
        })
        .collect();
    SuiteReport::collect("binary-vs-pure", outcomes)
}

/// Binary morphisms with `1 -> Λ`, prolongable on `0`: the binary
/// criterion against prefix evidence.
pub fn binary_erasing_vs_oracle(max_len: usize, cfg: &EvidenceConfig) -> SuiteReport {
    let outcomes = binary_morphisms(max_len, 0)
        .into_iter()
        .filter(|m| m.image(Letter(1)).is_empty())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|m| {
            if !m.is_prolongable(Letter(0)) {
                return Outcome::Skip;
            }
            let d = match decide_binary(m, Letter(0)) {
                Ok(d) => d,
                Err(e) => return failed(e, &describe(m)),
            };
            match ap_evidence(m, Letter(0), None, cfg) {
                Ok(e) => outcome(e.is_consistent() == d.is_ap(), || {
                    format!(
                        "{}: binary {} evidence {:?}",
                        describe(m),
                        d.verdict,
                        e.verdict
                    )
                }),
                Err(e) => failed(e, &describe(m)),
            }
        })
        .collect();
    SuiteReport::collect("binary-erasing-vs-oracle", outcomes)
}

fn automatic_vs_pure(m: &Morphism, s: Letter) -> Outcome {
    let id = Coding::identity(m.alphabet());
    match (decide_automatic(m, &id, s), decide_pure_nonerasing(m, s)) {
        (Ok(a), Ok(p)) => outcome(a.verdict == p.verdict, || {
            format!(
                "{} start {}: automatic {} pure {}",
                describe(m),
                m.alphabet().name(s),
                a.verdict,
                p.verdict
            )
        }),
        (Err(e), _) | (_, Err(e)) => failed(e, &describe(m)),
    }
}

/// Every `k`-uniform morphism over `n` letters and every start letter it
/// is prolongable on: automatic decider with the identity coding against
/// the pure decider.
pub fn uniform_vs_pure(n: usize, k: usize) -> SuiteReport {
    let outcomes = uniform_morphisms(n, k)
        .par_iter()
        .flat_map_iter(|m| {
            m.alphabet()
                .letters()
                .filter(|&s| m.is_prolongable(s))
                .map(|s| automatic_vs_pure(m, s))
                .collect::<Vec<_>>()
        })
        .collect();
    SuiteReport::collect(&format!("uniform-{k}-over-{n}-vs-pure"), outcomes)
}

/// Seeded random uniform morphisms with `n <= max_n` and `2 <= k <= max_k`.
pub fn random_uniform_vs_pure(seed: u64, count: usize, max_n: usize, max_k: usize) -> SuiteReport {
    let mut r = rng(seed);
    let instances: Vec<Morphism> = (0..count)
        .map(|_| {
            let n = r.random_range(1..=max_n);
            let k = r.random_range(2..=max_k);
            random_uniform(&mut r, n, k)
        })
        .collect();
    let outcomes = instances
        .par_iter()
        .enumerate()
        .map(|(i, m)| match automatic_vs_pure(m, Letter(0)) {
            Outcome::Disagree(msg) => Outcome::Disagree(format!("seed {seed} #{i}: {msg}")),
            o => o,
        })
        .collect();
    SuiteReport::collect("random-uniform-vs-pure", outcomes)
}

/// Seeded random non-erasing morphisms prolongable on `0`. A positive
/// verdict must give consistent prefix evidence; a negative one must give a
/// growing window for a factor singled out by its witness.
pub fn decider_vs_oracle(
    seed: u64,
    count: usize,
    max_n: usize,
    max_len: usize,
    cfg: &EvidenceConfig,
) -> SuiteReport {
    let mut r = rng(seed);
    let instances: Vec<Morphism> = (0..count)
        .map(|_| {
            let n = r.random_range(1..=max_n);
            random_prolongable(&mut r, n, max_len)
        })
        .collect();
    let outcomes = instances
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let tag = format!("seed {seed} #{i} {}", describe(m));
            let d = match decide_pure_nonerasing(m, Letter(0)) {
                Ok(d) => d,
                Err(e) => return failed(e, &tag),
            };
            let evidence = match &d.witness {
                None => ap_evidence(m, Letter(0), None, cfg),
                Some(w) => refute_from_witness(m, Letter(0), None, w, cfg),
            };
            match evidence {
                Ok(e) => outcome(
                    match &e.verdict {
                        EvidenceVerdict::Consistent => d.is_ap(),
                        EvidenceVerdict::Grew { .. } => !d.is_ap(),
                    },
                    || format!("{tag}: decider {} evidence {:?}", d.verdict, e.verdict),
                ),
                Err(e) => failed(e, &tag),
            }
        })
        .collect();
    SuiteReport::collect("decider-vs-oracle", outcomes)
}

/// Seeded random uniform morphisms and codings: the relation induced by the
/// `i`-th pair graph against direct expansion at level `2^i`.
pub fn pair_graph_semantics(
    seed: u64,
    count: usize,
    max_n: usize,
    max_k: usize,
    max_level: u32,
) -> SuiteReport {
    let mut r = rng(seed);
    let instances: Vec<(Morphism, Coding)> = (0..count)
        .map(|_| {
            let n = r.random_range(1..=max_n);
            let k = r.random_range(2..=max_k);
            let m = random_uniform(&mut r, n, k);
            let target = r.random_range(1..=n);
            let h = random_coding(&mut r, &m, target);
            (m, h)
        })
        .collect();
    let outcomes = instances
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (m, h))| {
            let base = EquivalenceRelation::of_coding(h);
            let mut out = Vec::new();
            let mut t = match initial_pair_graph(m) {
                Ok(t) => t,
                Err(e) => return vec![failed(e, &describe(m))],
            };
            for level in 0..=max_level {
                if level > 0 {
                    t = double_pair_graph(&t);
                }
                out.push(match relation_at_level(m, h, 1 << level) {
                    Ok(direct) => {
                        let induced = t.induced_relation(&base);
                        outcome(induced == direct, || {
                            format!(
                                "seed {seed} #{i} {} level {level}: induced {:?} direct {:?}",
                                describe(m),
                                induced.classes(),
                                direct.classes()
                            )
                        })
                    }
                    Err(e) => failed(e, &describe(m)),
                });
            }
            out
        })
        .collect();
    SuiteReport::collect("pair-graph-semantics", outcomes)
}

/// Seeded random uniform morphisms and codings: the relation sequence
/// repeats with preperiod plus period at most the Bell number of `n`.
pub fn relation_periodicity(seed: u64, count: usize, max_n: usize, max_k: usize) -> SuiteReport {
    let mut r = rng(seed);
    let instances: Vec<(Morphism, Coding)> = (0..count)
        .map(|_| {
            let n = r.random_range(1..=max_n);
            let k = r.random_range(2..=max_k);
            let m = random_uniform(&mut r, n, k);
            let target = r.random_range(1..=n);
            let h = random_coding(&mut r, &m, target);
            (m, h)
        })
        .collect();
    let outcomes = instances
        .par_iter()
        .enumerate()
        .map(|(i, (m, h))| {
            let bell = bell_number(m.size()).expect("small alphabet") as usize;
            match relation_sequence_profile(m, h, bell) {
                Ok(p) => outcome(p.repeat.is_some_and(|(pre, per)| pre + per <= bell), || {
                    format!(
                        "seed {seed} #{i} {}: repeat {:?}, bound {bell}",
                        describe(m),
                        p.repeat
                    )
                }),
                Err(e) => failed(e, &describe(m)),
            }
        })
        .collect();
    SuiteReport::collect("relation-periodicity", outcomes)
}

/// Seeded random morphisms: `M(φ)^l = M(φ^l)` for `l <= max_power`.
pub fn matrix_identity(
    seed: u64,
    count: usize,
    max_n: usize,
    max_len: usize,
    max_power: usize,
) -> SuiteReport {
    let mut r = rng(seed);
    let instances: Vec<Morphism> = (0..count)
        .map(|_| {
            let n = r.random_range(1..=max_n);
            random_prolongable(&mut r, n, max_len)
        })
        .collect();
    let outcomes = instances
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, m)| {
            (1..=max_power)
                .map(|l| -> Result<Outcome> {
                    let lhs = m.matrix().checked_pow(l as u32);
                    let rhs = m.power(l, DEFAULT_WORD_CAP)?.matrix();
                    Ok(outcome(lhs.as_ref() == Some(&rhs), || {
                        format!("seed {seed} #{i} {} power {l}", describe(m))
                    }))
                })
                .map(|o| o.unwrap_or_else(|e| failed(e, &describe(m))))
                .collect::<Vec<_>>()
        })
        .collect();
    SuiteReport::collect("matrix-identity", outcomes)
}
