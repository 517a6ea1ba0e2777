use std::fmt;

/// Square matrix of non-negative integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data
            .chunks(self.n.max(1))
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// `None` on overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if b == 0 {
                        continue;
                    }
                    let cell = &mut out.data[i * n + j];
                    *cell = cell.checked_add(a.checked_mul(b)?)?;
                }
            }
        }
        Some(out)
    }

    pub fn checked_pow(&self, mut e: u32) -> Option<IntMatrix> {
        let mut acc = IntMatrix::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Some(acc)
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&v| v > 0)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}
