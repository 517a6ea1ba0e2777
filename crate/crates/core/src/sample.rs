//! Seeded random morphisms and exhaustive enumerations for the agreement
//! suites. Letters are numbered `0..n` and the start letter is always `0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{Alphabet, Coding, Letter, Morphism, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word(rng: &mut impl Rng, n: usize, len: usize) -> Word {
    (0..len)
        .map(|_| Letter::from_index(rng.random_range(0..n)))
        .collect()
}

/// A non-erasing morphism over `n` letters with image lengths in
/// `1..=max_len`, prolongable on `0` (`max_len >= 2`).
pub fn random_prolongable(rng: &mut impl Rng, n: usize, max_len: usize) -> Morphism {
    assert!(n >= 1 && max_len >= 2);
    let mut rules: Vec<Word> = (0..n)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            random_word(rng, n, len)
        })
        .collect();
    let len = rng.random_range(2..=max_len);
    let mut first = random_word(rng, n, len).into_vec();
    first[0] = Letter(0);
    rules[0] = Word::new(first);
    Morphism::new(Alphabet::numbered(n).expect("n >= 1"), rules).expect("letters in range")
}

/// A `k`-uniform morphism over `n` letters, prolongable on `0` (`k >= 2`).
pub fn random_uniform(rng: &mut impl Rng, n: usize, k: usize) -> Morphism {
    assert!(n >= 1 && k >= 2);
    let mut rules: Vec<Word> = (0..n).map(|_| random_word(rng, n, k)).collect();
    let mut first = rules[0].clone().into_vec();
    first[0] = Letter(0);
    rules[0] = Word::new(first);
    Morphism::new(Alphabet::numbered(n).expect("n >= 1"), rules).expect("letters in range")
}

/// A coding from the morphism's alphabet onto letters `a0, a1, …` of an
/// alphabet of size `target`.
pub fn random_coding(rng: &mut impl Rng, m: &Morphism, target: usize) -> Coding {
    let alphabet = Alphabet::new((0..target).map(|i| format!("a{i}"))).expect("target >= 1");
    let map = (0..m.size())
        .map(|_| Letter::from_index(rng.random_range(0..target)))
        .collect();
    Coding::new(m.alphabet().clone(), alphabet, map).expect("letters in range")
}

/// All words over `n` letters of length `len`, in lexicographic order.
pub fn words(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| (0..n).map(move |c| w.concat(&[Letter::from_index(c)])))
            .collect();
    }
    out
}

/// Binary morphisms prolongable on `0` with `2 <= |φ(0)| <= max_len` and
/// `min_len_1 <= |φ(1)| <= max_len`. Pass `min_len_1 = 0` to include the
/// erasing rule `1 -> Λ`.
pub fn binary_morphisms(max_len: usize, min_len_1: usize) -> Vec<Morphism> {
    let alphabet = Alphabet::numbered(2).expect("two letters");
    let mut out = Vec::new();
    for len0 in 2..=max_len {
        for tail in words(2, len0 - 1) {
            let img0 = Word::single(Letter(0)).concat(&tail);
            for len1 in min_len_1..=max_len {
                for img1 in words(2, len1) {
                    out.push(
                        Morphism::new(alphabet.clone(), vec![img0.clone(), img1])
                            .expect("letters in range"),
                    );
                }
            }
        }
    }
    out
}

/// Every `k`-uniform morphism over `n` letters, in lexicographic order of
/// the rule tuple.
pub fn uniform_morphisms(n: usize, k: usize) -> Vec<Morphism> {
    let alphabet = Alphabet::numbered(n).expect("n >= 1");
    let images = words(n, k);
    let total = images.len().pow(n as u32);
    (0..total)
        .map(|mut code| {
            let rules = (0..n)
                .map(|_| {
                    let r = images[code % images.len()].clone();
                    code /= images.len();
                    r
                })
                .collect();
            Morphism::new(alphabet.clone(), rules).expect("letters in range")
        })
        .collect()
}
