//! Alphabets, words, morphisms and codings.
//!
//! Letters are opaque tokens mapped to dense indices `0..n` in declaration
//! order. Every matrix and graph in the crate indexes letters by that order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Default cap on the length of any materialized word.
pub const DEFAULT_WORD_CAP: usize = 100_000_000;

/// Dense index of a letter inside its [`Alphabet`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Letter {
        Letter(i as u32)
    }
}

/// An ordered, non-empty set of named letters.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, Letter>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if lookup.insert(name.clone(), Letter::from_index(i)).is_some() {
                return Err(Error::DuplicateLetter(name.clone()));
            }
        }
        Ok(Alphabet { names, lookup })
    }

    /// Letters named `"0"`, `"1"`, ... `"n-1"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = Letter> + '_ {
        (0..self.names.len()).map(Letter::from_index)
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.names[letter.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() < self.names.len()
    }

    pub fn check(&self, letter: Letter) -> Result<()> {
        if self.contains(letter) {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                index: letter.index(),
                size: self.len(),
            })
        }
    }

    /// Parses a word written with single-character letter names.
    pub fn word_from_chars(&self, text: &str) -> Result<Word> {
        text.chars()
            .map(|c| self.letter(c.encode_utf8(&mut [0; 4])))
            .collect()
    }

    /// Renders a word: concatenated when every name is one character,
    /// space-separated otherwise.
    pub fn render(&self, word: &[Letter]) -> String {
        let compact = self.names.iter().all(|n| n.chars().count() == 1);
        let parts = word.iter().map(|&l| self.name(l));
        if compact {
            parts.collect()
        } else {
            parts.collect::<Vec<_>>().join(" ")
        }
    }

    pub fn render_set<'a>(&self, letters: impl IntoIterator<Item = &'a Letter>) -> Vec<String> {
        letters
            .into_iter()
            .map(|&l| self.name(l).to_string())
            .collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

/// A finite word. The empty word is `Word::default()`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(letter: Letter) -> Self {
        Word(vec![letter])
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from_slice(&mut self, letters: &[Letter]) {
        self.0.extend_from_slice(letters);
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A morphism `A* -> A*` given by one image word per letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism {
    alphabet: Alphabet,
    rules: Vec<Word>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, rules: Vec<Word>) -> Result<Self> {
        if rules.len() != alphabet.len() {
            return Err(Error::RuleCount {
                expected: alphabet.len(),
                found: rules.len(),
            });
        }
        for rule in &rules {
            for &l in rule.iter() {
                alphabet.check(l)?;
            }
        }
        Ok(Morphism { alphabet, rules })
    }

    /// Builds a morphism over single-character letters, e.g.
    /// `Morphism::from_chars("012", &["01", "120", "2"])`.
    pub fn from_chars(letters: &str, rules: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(letters.chars().map(String::from))?;
        let rules = rules
            .iter()
            .map(|r| alphabet.word_from_chars(r))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(alphabet, rules)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let rules = alphabet.letters().map(Word::single).collect();
        Morphism { alphabet, rules }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Alphabet size `n`.
    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.rules[letter.index()]
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    /// `k = max |φ(b)|`.
    pub fn max_image_len(&self) -> usize {
        self.rules.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    pub fn is_non_erasing(&self) -> bool {
        self.rules.iter().all(|r| !r.is_empty())
    }

    /// First letter whose image is empty.
    pub fn erased_letter(&self) -> Option<Letter> {
        self.rules
            .iter()
            .position(|r| r.is_empty())
            .map(Letter::from_index)
    }

    /// `Some(k)` when every image has length exactly `k`.
    pub fn uniform_length(&self) -> Option<usize> {
        let k = self.rules[0].len();
        self.rules.iter().all(|r| r.len() == k).then_some(k)
    }

    pub fn is_growing(&self) -> bool {
        self.rules.iter().all(|r| r.len() >= 2)
    }

    pub fn apply(&self, word: &[Letter]) -> Result<Word> {
        let mut total = 0usize;
        for &l in word {
            self.alphabet.check(l)?;
            total += self.rules[l.index()].len();
        }
        let mut out = Vec::with_capacity(total);
        for &l in word {
            out.extend_from_slice(&self.rules[l.index()]);
        }
        Ok(Word(out))
    }

    pub fn power_apply(&self, word: &[Letter], t: usize) -> Result<Word> {
        self.power_apply_capped(word, t, DEFAULT_WORD_CAP)
    }

    /// `φ^t(word)`; fails before materializing anything longer than `cap`.
    pub fn power_apply_capped(&self, word: &[Letter], t: usize, cap: usize) -> Result<Word> {
        for &l in word {
            self.alphabet.check(l)?;
        }
        if word.len() > cap {
            return Err(Error::ResourceLimit {
                requested: word.len() as u128,
                cap,
            });
        }
        let mut current = word.to_vec();
        for _ in 0..t {
            let next_len: u128 = current
                .iter()
                .map(|l| self.rules[l.index()].len() as u128)
                .sum();
            if next_len > cap as u128 {
                return Err(Error::ResourceLimit {
                    requested: next_len,
                    cap,
                });
            }
            let mut next = Vec::with_capacity(next_len as usize);
            for &l in &current {
                next.extend_from_slice(&self.rules[l.index()]);
            }
            current = next;
        }
        Ok(Word(current))
    }

    /// `self ∘ inner`, i.e. `b ↦ self(inner(b))`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if self.alphabet != inner.alphabet {
            return Err(Error::Precondition(
                "composed morphisms must share an alphabet".into(),
            ));
        }
        let rules = inner
            .rules
            .iter()
            .map(|r| self.apply(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            alphabet: self.alphabet.clone(),
            rules,
        })
    }

    /// The explicit morphism `φ^t`, with every image capped at `cap`.
    pub fn power(&self, t: usize, cap: usize) -> Result<Morphism> {
        let rules = self
            .alphabet
            .letters()
            .map(|b| self.power_apply_capped(&[b], t, cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            alphabet: self.alphabet.clone(),
            rules,
        })
    }

    /// Letters `b` with `φ^t(b)` empty for some `t`.
    pub fn mortal_letters(&self) -> BTreeSet<Letter> {
        let n = self.size();
        let mut mortal = vec![false; n];
        // A letter becomes mortal once its whole image is mortal; n rounds suffice.
        for _ in 0..n {
            let mut changed = false;
            for b in 0..n {
                if !mortal[b] && self.rules[b].iter().all(|c| mortal[c.index()]) {
                    mortal[b] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..n)
            .filter(|&b| mortal[b])
            .map(Letter::from_index)
            .collect()
    }

    /// `φ(s) = s·u` with `u` containing a non-mortal letter.
    pub fn is_prolongable(&self, s: Letter) -> bool {
        if !self.alphabet.contains(s) {
            return false;
        }
        let image = self.image(s);
        if image.first() != Some(&s) {
            return false;
        }
        let mortal = self.mortal_letters();
        image[1..].iter().any(|c| !mortal.contains(c))
    }

    pub fn require_prolongable(&self, s: Letter) -> Result<()> {
        self.alphabet.check(s)?;
        if self.is_prolongable(s) {
            Ok(())
        } else {
            Err(Error::NotProlongable(self.alphabet.name(s).to_string()))
        }
    }

    pub fn require_non_erasing(&self) -> Result<()> {
        match self.erased_letter() {
            None => Ok(()),
            Some(b) => Err(Error::Erasing(self.alphabet.name(b).to_string())),
        }
    }

    /// Entry `(i, j)` counts occurrences of letter `i` in `φ(j)`.
    pub fn matrix(&self) -> IntMatrix {
        let n = self.size();
        let mut m = IntMatrix::zero(n);
        for (j, rule) in self.rules.iter().enumerate() {
            for &i in rule.iter() {
                m.set(i.index(), j, m.get(i.index(), j) + 1);
            }
        }
        m
    }

    /// Letters reachable from `s` in the occurrence graph, `s` included,
    /// in alphabet order.
    pub fn reachable_from(&self, s: Letter) -> Vec<Letter> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[s.index()] = true;
        queue.push_back(s);
        while let Some(b) = queue.pop_front() {
            for &c in self.image(b) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    queue.push_back(c);
                }
            }
        }
        (0..n)
            .filter(|&b| seen[b])
            .map(Letter::from_index)
            .collect()
    }

    pub fn trim_reachable(&self, s: Letter) -> Result<Morphism> {
        Ok(self.trim_reachable_with_map(s)?.morphism)
    }

    /// Restricts the morphism to the letters reachable from `s`. The kept
    /// letters keep their names and relative order.
    pub fn trim_reachable_with_map(&self, s: Letter) -> Result<Trimmed> {
        self.alphabet.check(s)?;
        let kept = self.reachable_from(s);
        let mut renumber = vec![None; self.size()];
        for (new, &old) in kept.iter().enumerate() {
            renumber[old.index()] = Some(Letter::from_index(new));
        }
        let alphabet = Alphabet::new(kept.iter().map(|&l| self.alphabet.name(l).to_string()))?;
        let rules = kept
            .iter()
            .map(|&old| {
                self.image(old)
                    .iter()
                    .map(|c| renumber[c.index()].expect("image of a reachable letter is reachable"))
                    .collect()
            })
            .collect();
        let start = renumber[s.index()].expect("start is reachable from itself");
        Ok(Trimmed {
            morphism: Morphism { alphabet, rules },
            start,
            kept,
        })
    }
}

/// Result of [`Morphism::trim_reachable_with_map`].
#[derive(Clone, Debug)]
pub struct Trimmed {
    pub morphism: Morphism,
    /// The start letter in the trimmed alphabet.
    pub start: Letter,
    /// `kept[new] = old` letter index.
    pub kept: Vec<Letter>,
}

/// A letter-to-letter map `A -> B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coding {
    source: Alphabet,
    target: Alphabet,
    map: Vec<Letter>,
}

impl Coding {
    pub fn new(source: Alphabet, target: Alphabet, map: Vec<Letter>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::RuleCount {
                expected: source.len(),
                found: map.len(),
            });
        }
        for &l in &map {
            target.check(l)?;
        }
        Ok(Coding {
            source,
            target,
            map,
        })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Coding {
            source: alphabet.clone(),
            target: alphabet.clone(),
            map: alphabet.letters().collect(),
        }
    }

    /// Sends every letter to a single target letter named `name`.
    pub fn constant(source: &Alphabet, name: &str) -> Self {
        Coding {
            source: source.clone(),
            target: Alphabet::new([name]).expect("single letter"),
            map: vec![Letter(0); source.len()],
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    #[inline]
    pub fn code(&self, letter: Letter) -> Letter {
        self.map[letter.index()]
    }

    pub fn apply(&self, word: &[Letter]) -> Word {
        word.iter().map(|&l| self.code(l)).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map
            .iter()
            .all(|l| !std::mem::replace(&mut seen[l.index()], true))
    }

    /// Restriction to the letters of a trimmed morphism.
    pub fn restrict(&self, trimmed: &Trimmed) -> Result<Coding> {
        let map = trimmed.kept.iter().map(|&old| self.code(old)).collect();
        Coding::new(
            trimmed.morphism.alphabet().clone(),
            self.target.clone(),
            map,
        )
    }
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

    fn w(m: &Morphism, s: &str) -> Word {
        m.alphabet().word_from_chars(s).unwrap()
    }

    #[test]
    fn apply_concatenates_images() {
        let m = inner_tail();
        assert_eq!(m.apply(&w(&m, "01")).unwrap(), w(&m, "01120"));
        assert_eq!(m.apply(&[]).unwrap(), Word::empty());
        let id = Morphism::identity(m.alphabet().clone());
        assert_eq!(id.apply(&w(&m, "0120")).unwrap(), w(&m, "0120"));
    }

    #[test]
    fn apply_rejects_foreign_letters() {
        let m = inner_tail();
        let err = m.apply(&[Letter(7)]).unwrap_err();
        assert_eq!(err, Error::LetterOutOfRange { index: 7, size: 3 });
    }

    #[test]
    fn power_apply_iterates() {
        let m = inner_tail();
        assert_eq!(m.power_apply(&w(&m, "0"), 2).unwrap(), w(&m, "01120"));
        assert_eq!(m.power_apply(&w(&m, "21"), 0).unwrap(), w(&m, "21"));

        // φ(0)=01, φ²(0)=01·210, φ³(0)=01·210·2·210·01
        let m = left_tail();
        let expected = ["01", "210", "2", "210", "01"].concat();
        assert_eq!(m.power_apply(&w(&m, "0"), 3).unwrap(), w(&m, &expected));
    }

    #[test]
    fn power_apply_cap_fails_loudly() {
        let tm = Morphism::from_chars("01", &["01", "10"]).unwrap();
        let err = tm.power_apply_capped(&[Letter(0)], 11, 1024).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                requested: 2048,
                cap: 1024
            }
        );
        assert_eq!(
            tm.power_apply_capped(&[Letter(0)], 10, 1024).unwrap().len(),
            1024
        );
    }

    #[test]
    fn mortal_letters_closure() {
        assert!(inner_tail().mortal_letters().is_empty());
        let m = Morphism::from_chars("01", &["01", ""]).unwrap();
        assert_eq!(m.mortal_letters(), BTreeSet::from([Letter(1)]));
        let chain = Morphism::from_chars("012", &["1", "2", ""]).unwrap();
        assert_eq!(chain.mortal_letters().len(), 3);
    }

    #[test]
    fn prolongability() {
        assert!(inner_tail().is_prolongable(Letter(0)));
        assert!(left_tail().is_prolongable(Letter(0)));
        let fixed = Morphism::from_chars("01", &["0", "10"]).unwrap();
        assert!(!fixed.is_prolongable(Letter(0)));
        let dying = Morphism::from_chars("01", &["01", ""]).unwrap();
        assert!(!dying.is_prolongable(Letter(0)));
        let lives = Morphism::from_chars("01", &["010", ""]).unwrap();
        assert!(lives.is_prolongable(Letter(0)));
        assert!(!inner_tail().is_prolongable(Letter(2)));
    }

    #[test]
    fn matrix_counts_occurrences() {
        let m = inner_tail().matrix();
        assert_eq!(m.column(0), vec![1, 1, 0]);
        assert_eq!(m.column(1), vec![1, 1, 1]);
        assert_eq!(m.column(2), vec![0, 0, 1]);
        // same matrix, different rule order
        assert_eq!(left_tail().matrix(), m);

        let a = Alphabet::numbered(3).unwrap();
        assert_eq!(
            Morphism::identity(a.clone()).matrix(),
            IntMatrix::identity(3)
        );
        let erase = Morphism::new(a, vec![Word::empty(); 3]).unwrap();
        assert_eq!(erase.matrix(), IntMatrix::zero(3));
    }

    #[test]
    fn trim_drops_unreachable_letters() {
        let extended = Morphism::from_chars("0123", &["01", "120", "2", "3"]).unwrap();
        let t = extended.trim_reachable_with_map(Letter(0)).unwrap();
        assert_eq!(t.morphism, inner_tail());
        assert_eq!(t.start, Letter(0));
        assert_eq!(
            inner_tail().trim_reachable(Letter(0)).unwrap(),
            inner_tail()
        );

        let m = Morphism::from_chars("012", &["01", "1", "0"]).unwrap();
        let t = m.trim_reachable(Letter(0)).unwrap();
        assert_eq!(t.alphabet().names(), &["0", "1"]);
    }

    #[test]
    fn trim_renumbers_start() {
        let m = Morphism::from_chars("abc", &["b", "cb", "c"]).unwrap();
        let t = m.trim_reachable_with_map(Letter(1)).unwrap();
        assert_eq!(t.morphism.alphabet().names(), &["b", "c"]);
        assert_eq!(t.start, Letter(0));
        assert_eq!(t.kept, vec![Letter(1), Letter(2)]);
        assert_eq!(t.morphism.image(Letter(0)), &[Letter(1), Letter(0)]);
    }

    #[test]
    fn coding_restriction_and_injectivity() {
        let m = Morphism::from_chars("0123", &["01", "120", "2", "3"]).unwrap();
        let target = Alphabet::new(["a", "b"]).unwrap();
        let h = Coding::new(
            m.alphabet().clone(),
            target,
            vec![Letter(0), Letter(1), Letter(0), Letter(1)],
        )
        .unwrap();
        assert!(!h.is_injective());
        let t = m.trim_reachable_with_map(Letter(0)).unwrap();
        let r = h.restrict(&t).unwrap();
        assert_eq!(
            r.apply(&w(&t.morphism, "012")),
            Word::new(vec![Letter(0), Letter(1), Letter(0)])
        );
        assert!(Coding::identity(m.alphabet()).is_injective());
    }

    #[test]
    fn render_words() {
        let m = inner_tail();
        assert_eq!(m.alphabet().render(&w(&m, "0120")), "0120");
        let a = Alphabet::new(["x1", "y"]).unwrap();
        assert_eq!(a.render(&[Letter(0), Letter(1)]), "x1 y");
    }

    #[test]
    fn duplicate_and_empty_alphabets_rejected() {
        assert_eq!(
            Alphabet::new(Vec::<String>::new()).unwrap_err(),
            Error::EmptyAlphabet
        );
        assert_eq!(
            Alphabet::new(["a", "a"]).unwrap_err(),
            Error::DuplicateLetter("a".into())
        );
    }
}
