//! Finite-prefix measurements of `h(φ^∞(s))`.
//!
//! Nothing here proves anything about the infinite sequence. The functions
//! generate prefixes, locate occurrences and compare window statistics
//! between two prefix lengths, which is how the deciders are cross-checked.
//!
//! The main statistic is the *window* of a factor `u` in a prefix `w`: the
//! least `L` such that every length-`L` factor of `w` contains `u`. It never
//! decreases as the prefix grows, is bounded for every factor of an almost
//! periodic sequence, and grows without bound for some factor otherwise.

use std::collections::HashMap;

use crate::decision::Witness;
use crate::error::{Error, Result};
use crate::growth::classify_letters;
use crate::word::{Coding, Letter, Morphism, Word};

/// Default cap on generated prefix lengths.
pub const DEFAULT_PREFIX_CAP: usize = 1_000_000;

/// Append-only buffer holding a prefix of `φ^∞(s)`.
///
/// `φ^∞(s) = φ(x_0) φ(x_1) φ(x_2) …`, so the buffer is extended by
/// expanding its own letters one at a time; earlier letters are never
/// recomputed.
#[derive(Clone, Debug)]
pub struct PrefixStream {
    morphism: Morphism,
    coding: Option<Coding>,
    raw: Vec<Letter>,
    /// Index of the next letter whose image is appended.
    next: usize,
    cap: usize,
}

impl PrefixStream {
    pub fn new(m: &Morphism, s: Letter, h: Option<&Coding>) -> Result<Self> {
        m.require_prolongable(s)?;
        if let Some(h) = h {
            if h.source() != m.alphabet() {
                return Err(Error::Precondition(
                    "coding source alphabet differs from the morphism alphabet".into(),
                ));
            }
        }
        Ok(PrefixStream {
            morphism: m.clone(),
            coding: h.cloned(),
            raw: m.image(s).to_vec(),
            next: 1,
            cap: DEFAULT_PREFIX_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Letters of the uncoded fixed point produced so far.
    pub fn raw(&self) -> &[Letter] {
        &self.raw
    }

    /// Grows the buffer to at least `n` letters.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::ResourceLimit {
                requested: n as u128,
                cap: self.cap,
            });
        }
        while self.raw.len() < n {
            let Some(&b) = self.raw.get(self.next) else {
                // only possible when the tail of φ(s) is mortal
                return Err(Error::NotProlongable(format!(
                    "the fixed point is finite, of length {}",
                    self.raw.len()
                )));
            };
            self.raw.extend_from_slice(self.morphism.image(b));
            self.next += 1;
        }
        Ok(())
    }

    /// The first `n` letters of `h(φ^∞(s))`.
    pub fn prefix(&mut self, n: usize) -> Result<Word> {
        self.extend_to(n)?;
        let raw = &self.raw[..n];
        Ok(match &self.coding {
            Some(h) => h.apply(raw),
            None => Word::new(raw.to_vec()),
        })
    }
}

/// The first `n` letters of `h(φ^∞(s))` (of `φ^∞(s)` when `h` is `None`),
/// with the default cap.
pub fn generate_prefix(m: &Morphism, s: Letter, h: Option<&Coding>, n: usize) -> Result<Word> {
    generate_prefix_capped(m, s, h, n, DEFAULT_PREFIX_CAP)
}

pub fn generate_prefix_capped(
    m: &Morphism,
    s: Letter,
    h: Option<&Coding>,
    n: usize,
    cap: usize,
) -> Result<Word> {
    PrefixStream::new(m, s, h)?.with_cap(cap).prefix(n)
}

/// Occurrences of one factor in a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub factor: Word,
    /// Start indices, ascending; overlapping occurrences included.
    pub positions: Vec<usize>,
    /// Largest difference of consecutive positions; `None` with fewer than
    /// two occurrences.
    pub max_gap: Option<usize>,
    pub prefix_length: usize,
}

impl GapReport {
    /// Least `L` such that every length-`L` factor of the prefix contains
    /// an occurrence. `None` when the factor does not occur.
    pub fn window(&self) -> Option<usize> {
        window_of(&self.positions, self.factor.len(), self.prefix_length)
    }
}

fn window_of(positions: &[usize], len: usize, n: usize) -> Option<usize> {
    let (&first, &last) = (positions.first()?, positions.last()?);
    let inner = positions
        .windows(2)
        .map(|p| p[1] - p[0] - 1 + len)
        .max()
        .unwrap_or(0);
    Some((first + len).max(inner).max(n - last))
}

fn max_gap(positions: &[usize]) -> Option<usize> {
    positions.windows(2).map(|p| p[1] - p[0]).max()
}

pub fn factor_gaps(w: &[Letter], u: &[Letter]) -> Result<GapReport> {
    let positions = occurrences(w, u)?;
    Ok(GapReport {
        factor: Word::new(u.to_vec()),
        max_gap: max_gap(&positions),
        positions,
        prefix_length: w.len(),
    })
}

fn occurrences(w: &[Letter], u: &[Letter]) -> Result<Vec<usize>> {
    if u.is_empty() {
        return Err(Error::Precondition("the factor must be non-empty".into()));
    }
    if u.len() > w.len() {
        return Ok(Vec::new());
    }
    Ok(w.windows(u.len())
        .enumerate()
        .filter(|(_, f)| *f == u)
        .map(|(i, _)| i)
        .collect())
}

/// Occurrence starts of `u` in `w` divisible by `k`.
pub fn aligned_occurrences(w: &[Letter], u: &[Letter], k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::Precondition("alignment must be positive".into()));
    }
    Ok(occurrences(w, u)?
        .into_iter()
        .filter(|i| i % k == 0)
        .collect())
}

/// `w × y` with `y(i) = i mod period`. The pair `(a, j)` is encoded as the
/// letter `a · period + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWord {
    pub word: Word,
    pub period: usize,
}

impl ProductWord {
    pub fn decode(&self, letter: Letter) -> (Letter, usize) {
        (
            Letter::from_index(letter.index() / self.period),
            letter.index() % self.period,
        )
    }
}

pub fn product_with_periodic(w: &[Letter], period: usize) -> Result<ProductWord> {
    if period == 0 {
        return Err(Error::Precondition("period must be positive".into()));
    }
    let word = w
        .iter()
        .enumerate()
        .map(|(i, &a)| Letter::from_index(a.index() * period + i % period))
        .collect();
    Ok(ProductWord { word, period })
}

/// Per-factor occurrence statistics for all factors of one length.
struct FactorTable {
    len: usize,
    prefix_length: usize,
    stats: Stats,
}

#[derive(Clone, Copy)]
struct Occ {
    first: usize,
    last: usize,
    count: usize,
    max_gap: usize,
}

enum Stats {
    /// Indexed by the base-`n` code of the factor.
    Dense(Vec<Option<Occ>>),
    Sparse(HashMap<Vec<Letter>, Occ>),
}

const DENSE_LIMIT: usize = 1 << 22;

impl FactorTable {
    fn build(w: &[Letter], alphabet_size: usize, len: usize) -> Self {
        let record = |slot: &mut Option<Occ>, i: usize| match slot {
            None => {
                *slot = Some(Occ {
                    first: i,
                    last: i,
                    count: 1,
                    max_gap: 0,
                })
            }
            Some(o) => {
                o.max_gap = o.max_gap.max(i - o.last);
                o.last = i;
                o.count += 1;
            }
        };
        let n = alphabet_size.max(1);
        let dense_size = n.checked_pow(len as u32).filter(|&s| s <= DENSE_LIMIT);
        let stats = match dense_size {
            Some(size) if w.len() >= len => {
                let mut table = vec![None; size];
                let top = size / n;
                let mut code = 0usize;
                for (i, &a) in w.iter().enumerate() {
                    code = (code % top) * n + a.index();
                    if i + 1 >= len {
                        record(&mut table[code], i + 1 - len);
                    }
                }
                Stats::Dense(table)
            }
            Some(size) => Stats::Dense(vec![None; size]),
            None => {
                let mut map: HashMap<Vec<Letter>, Option<Occ>> = HashMap::new();
                if w.len() >= len {
                    for (i, f) in w.windows(len).enumerate() {
                        record(map.entry(f.to_vec()).or_default(), i);
                    }
                }
                Stats::Sparse(
                    map.into_iter()
                        .map(|(k, v)| (k, v.expect("recorded")))
                        .collect(),
                )
            }
        };
        FactorTable {
            len,
            prefix_length: w.len(),
            stats,
        }
    }

    fn occ(&self, u: &[Letter], alphabet_size: usize) -> Option<Occ> {
        match &self.stats {
            Stats::Dense(t) => {
                let code = u
                    .iter()
                    .fold(0usize, |c, a| c * alphabet_size.max(1) + a.index());
                t.get(code).copied().flatten()
            }
            Stats::Sparse(m) => m.get(u).copied(),
        }
    }

    fn window(&self, o: &Occ) -> usize {
        let inner = if o.count > 1 {
            o.max_gap - 1 + self.len
        } else {
            0
        };
        (o.first + self.len)
            .max(inner)
            .max(self.prefix_length - o.last)
    }

    /// Factors present, in lexicographic order of letter indices.
    fn factors(&self, alphabet_size: usize) -> Vec<(Word, Occ)> {
        match &self.stats {
            Stats::Dense(t) => t
                .iter()
                .enumerate()
                .filter_map(|(code, o)| o.map(|o| (decode(code, alphabet_size, self.len), o)))
                .collect(),
            Stats::Sparse(m) => {
                let mut v: Vec<(Word, Occ)> =
                    m.iter().map(|(k, o)| (Word::new(k.clone()), *o)).collect();
                v.sort_by(|a, b| a.0.cmp(&b.0));
                v
            }
        }
    }
}

fn decode(mut code: usize, n: usize, len: usize) -> Word {
    let mut letters = vec![Letter(0); len];
    for slot in letters.iter_mut().rev() {
        *slot = Letter::from_index(code % n.max(1));
        code /= n.max(1);
    }
    Word::new(letters)
}

/// Settings for [`ap_evidence`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvidenceConfig {
    pub n_small: usize,
    pub n_large: usize,
    pub max_factor_len: usize,
    /// Allowed growth of a window before it counts as growth.
    pub slack: usize,
    /// Cap on the generated prefix length.
    pub cap: usize,
}

impl EvidenceConfig {
    pub fn new(n_small: usize, n_large: usize, max_factor_len: usize) -> Self {
        EvidenceConfig {
            n_small,
            n_large,
            max_factor_len,
            slack: 0,
            cap: DEFAULT_PREFIX_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = slack;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_small >= self.n_large {
            return Err(Error::Precondition(format!(
                "small prefix length {} must be below large prefix length {}",
                self.n_small, self.n_large
            )));
        }
        if self.max_factor_len == 0 {
            return Err(Error::Precondition("factor length must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvidenceVerdict {
    /// No checked factor had a growing window.
    Consistent,
    /// The window of `factor` grew from `small` to `large`.
    Grew {
        factor: Word,
        small: usize,
        large: usize,
    },
}

/// Outcome of a finite-scale comparison. Always evidence, never proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub verdict: EvidenceVerdict,
    /// Always set: the verdict only describes two finite prefixes.
    pub finite_scale: bool,
    pub config: EvidenceConfig,
    pub factors_checked: usize,
    /// Per checked factor: window and max gap at both prefix lengths.
    pub rows: Vec<EvidenceRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceRow {
    pub factor: Word,
    pub window_small: usize,
    pub window_large: usize,
    pub max_gap_small: Option<usize>,
    pub max_gap_large: Option<usize>,
}

impl Evidence {
    pub fn is_consistent(&self) -> bool {
        self.verdict == EvidenceVerdict::Consistent
    }
}

/// Compares every factor of the `n_small`-prefix of length at most
/// `max_factor_len` against the `n_large`-prefix.
pub fn ap_evidence(
    m: &Morphism,
    s: Letter,
    h: Option<&Coding>,
    cfg: &EvidenceConfig,
) -> Result<Evidence> {
    cfg.validate()?;
    let w = generate_prefix_capped(m, s, h, cfg.n_large, cfg.cap)?;
    let n = h.map_or(m.size(), |h| h.target().len());
    evidence_on(&w, n, cfg, None)
}

/// Restricts which factors [`evidence_on`] compares.
pub type FactorFilter<'a> = &'a dyn Fn(&[Letter]) -> bool;

/// [`ap_evidence`] on an explicit word of length at least `n_large`.
/// `candidates`, when given, restricts the check to factors accepted by the
/// predicate.
pub fn evidence_on(
    w: &[Letter],
    alphabet_size: usize,
    cfg: &EvidenceConfig,
    candidates: Option<FactorFilter<'_>>,
) -> Result<Evidence> {
    cfg.validate()?;
    if w.len() < cfg.n_large {
        return Err(Error::Precondition(format!(
            "word of length {} is shorter than {}",
            w.len(),
            cfg.n_large
        )));
    }
    let mut rows = Vec::new();
    let mut verdict = EvidenceVerdict::Consistent;
    for len in 1..=cfg.max_factor_len {
        let small = FactorTable::build(&w[..cfg.n_small], alphabet_size, len);
        let large = FactorTable::build(&w[..cfg.n_large], alphabet_size, len);
        for (u, o_small) in small.factors(alphabet_size) {
            if candidates.is_some_and(|accept| !accept(&u)) {
                continue;
            }
            let o_large = large
                .occ(&u, alphabet_size)
                .expect("factor of the shorter prefix");
            let row = EvidenceRow {
                window_small: small.window(&o_small),
                window_large: large.window(&o_large),
                max_gap_small: (o_small.count > 1).then_some(o_small.max_gap),
                max_gap_large: (o_large.count > 1).then_some(o_large.max_gap),
                factor: u,
            };
            if verdict == EvidenceVerdict::Consistent
                && row.window_large > row.window_small + cfg.slack
            {
                verdict = EvidenceVerdict::Grew {
                    factor: row.factor.clone(),
                    small: row.window_small,
                    large: row.window_large,
                };
            }
            rows.push(row);
        }
    }
    Ok(Evidence {
        verdict,
        finite_scale: true,
        config: *cfg,
        factors_checked: rows.len(),
        rows,
    })
}

/// Factors whose windows must grow according to a negative verdict's
/// witness, as a predicate over words of the uncoded fixed point.
///
/// * a disconnected pair `from -> to`: iterates of `from` avoid `to`;
/// * a tail cycle with a non-empty label: ever longer blocks of bounded
///   letters, which avoid every growing letter;
/// * a binary verdict: long blocks of the other letter avoid the start;
/// * otherwise every factor is a candidate.
pub fn witness_targets(m: &Morphism, s: Letter, witness: &Witness) -> Result<Vec<Letter>> {
    Ok(match witness {
        Witness::Disconnected { to, .. } => vec![*to],
        Witness::NotPrimitive {
            disconnected: Some((_, to)),
            ..
        } => vec![*to],
        Witness::TailCycle { .. } => classify_letters(m)?.growing.into_iter().collect(),
        Witness::BinaryNoCondition => vec![s],
        Witness::NotPrimitive { .. } | Witness::Uncovered { .. } => Vec::new(),
    })
}

/// Looks for a growing window among the factors singled out by `witness`
/// (see [`witness_targets`]): factors containing one of the target letters.
/// With no targets every factor is checked, over the coded sequence.
pub fn refute_from_witness(
    m: &Morphism,
    s: Letter,
    h: Option<&Coding>,
    witness: &Witness,
    cfg: &EvidenceConfig,
) -> Result<Evidence> {
    cfg.validate()?;
    let targets = witness_targets(m, s, witness)?;
    if targets.is_empty() {
        return ap_evidence(m, s, h, cfg);
    }
    let w = generate_prefix_capped(m, s, None, cfg.n_large, cfg.cap)?;
    let accept = |u: &[Letter]| u.iter().any(|l| targets.contains(l));
    evidence_on(&w, m.size(), cfg, Some(&accept))
}

/// Empirical regulator: per factor length `n`, the least window length in
/// which every length-`n` factor of the prefix occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegulatorEstimate {
    /// `(n, f(n))`; `None` when some length-`n` factor occurs only once, so
    /// the prefix says nothing about its recurrence.
    pub values: Vec<(usize, Option<usize>)>,
    pub prefix_length: usize,
}

pub fn regulator_estimate(w: &[Letter], n_max: usize) -> RegulatorEstimate {
    let alphabet_size = w.iter().map(|l| l.index() + 1).max().unwrap_or(1);
    let values = (1..=n_max)
        .map(|len| {
            let table = FactorTable::build(w, alphabet_size, len);
            let factors = table.factors(alphabet_size);
            let value = if factors.is_empty() || factors.iter().any(|(_, o)| o.count < 2) {
                None
            } else {
                factors.iter().map(|(_, o)| table.window(o)).max()
            };
            (len, value)
        })
        .collect();
    RegulatorEstimate {
        values,
        prefix_length: w.len(),
    }
}
