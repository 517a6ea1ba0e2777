//! Square Boolean matrices stored as one bit set per row.

use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    n: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(WORD_BITS);
        BitMatrix {
            n,
            words_per_row,
            data: vec![0; n * words_per_row],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        let w = self.data[i * self.words_per_row + j / WORD_BITS];
        w >> (j % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words_per_row + j / WORD_BITS] |= 1 << (j % WORD_BITS);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_is_empty(&self, i: usize) -> bool {
        self.row(i).iter().all(|&w| w == 0)
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Column indices set in row `i`, ascending.
    pub fn ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    fn full_row_mask(&self) -> Vec<u64> {
        let mut mask = vec![!0u64; self.words_per_row];
        let rem = self.n % WORD_BITS;
        if rem != 0 {
            if let Some(last) = mask.last_mut() {
                *last = (1u64 << rem) - 1;
            }
        }
        mask
    }

    /// Boolean product `self · other`: `(i, j)` set iff some `l` has
    /// `self(i, l)` and `other(l, j)`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.n, other.n);
        let mut out = BitMatrix::new(self.n);
        let full = self.full_row_mask();
        let wpr = self.words_per_row;
        for i in 0..self.n {
            let acc = &mut out.data[i * wpr..(i + 1) * wpr];
            for l in self.ones(i) {
                let src = other.row(l);
                let mut saturated = true;
                for ((a, &s), &f) in acc.iter_mut().zip(src).zip(&full) {
                    *a |= s;
                    saturated &= *a == f;
                }
                // nothing more can be added to a full row
                if saturated {
                    break;
                }
            }
        }
        out
    }

    /// Two-step reachability: `(i, j)` set iff a path `i -> l -> j` exists.
    pub fn square(&self) -> BitMatrix {
        self.mul(self)
    }

    /// `self^(2^times)`, by squaring `times` times.
    ///
    /// The squares form an eventually periodic sequence; once a square
    /// repeats an earlier one the remaining steps are skipped by jumping
    /// along the cycle. Returns the result and the number of squarings
    /// actually performed.
    pub fn repeated_square(&self, times: u64) -> (BitMatrix, usize) {
        let mut history = vec![self.clone()];
        let mut index: HashMap<u64, Vec<usize>> = HashMap::new();
        index.entry(fingerprint(self)).or_default().push(0);
        for i in 1..=times {
            let next = history.last().expect("non-empty").square();
            let fp = fingerprint(&next);
            if let Some(&j) = index
                .get(&fp)
                .and_then(|c| c.iter().find(|&&j| history[j] == next))
            {
                // square i equals square j, so the sequence has period i - j from j on
                let period = i - j as u64;
                let target = j as u64 + (times - j as u64) % period;
                return (history[target as usize].clone(), i as usize);
            }
            index.entry(fp).or_default().push(history.len());
            history.push(next);
        }
        (history.pop().expect("non-empty"), times as usize)
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn reflexive_closure(&self) -> BitMatrix {
        let mut r = self.clone();
        let wpr = self.words_per_row;
        for i in 0..self.n {
            r.set(i, i);
        }
        for k in 0..self.n {
            let row_k = r.row(k).to_vec();
            for i in 0..self.n {
                if r.get(i, k) {
                    for (a, &b) in r.data[i * wpr..(i + 1) * wpr].iter_mut().zip(&row_k) {
                        *a |= b;
                    }
                }
            }
        }
        r
    }
}

fn fingerprint(m: &BitMatrix) -> u64 {
    let mut h = DefaultHasher::new();
    m.hash(&mut h);
    h.finish()
}
