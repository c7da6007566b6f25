//! k-element subsets of `{1, ..., m}`.

use std::fmt;

use crate::{Error, Result};

/// A strictly increasing sequence of 1-based positions drawn from `{1, ..., universe}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSubset {
    indices: Vec<usize>,
    universe: usize,
}

impl IndexSubset {
    pub fn new(indices: Vec<usize>, universe: usize) -> Result<Self> {
        if let Some(&first) = indices.first() {
            if first == 0 {
                return Err(Error::Argument("subset indices are 1-based".into()));
            }
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(format!(
                "subset indices must be strictly increasing: {indices:?}"
            )));
        }
        if indices.last().is_some_and(|&last| last > universe) {
            return Err(Error::Argument(format!(
                "subset {indices:?} does not fit in universe of size {universe}"
            )));
        }
        Ok(IndexSubset { indices, universe })
    }

    /// `{1, ..., m}`.
    pub fn full(universe: usize) -> Self {
        IndexSubset {
            indices: (1..=universe).collect(),
            universe,
        }
    }

    /// Subset from a bitmask over the universe; bit `i` selects position `i + 1`.
    pub fn from_mask(mask: u64, universe: usize) -> Result<Self> {
        if universe < 64 && mask >> universe != 0 {
            return Err(Error::Argument(format!(
                "mask {mask:#b} exceeds universe of size {universe}"
            )));
        }
        let indices = (0..universe.min(64))
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        Ok(IndexSubset { indices, universe })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// 0-based positions, for indexing into storage.
    pub fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().map(|&i| i - 1)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Positions of the universe not in this subset.
    pub fn complement(&self) -> IndexSubset {
        let mut rest = Vec::with_capacity(self.universe - self.len());
        let mut it = self.indices.iter().peekable();
        for i in 1..=self.universe {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                rest.push(i);
            }
        }
        IndexSubset {
            indices: rest,
            universe: self.universe,
        }
    }
}

impl fmt::Debug for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}/{}", self.universe)
    }
}

/// Lexicographic iterator over all k-subsets of `{1, ..., m}`.
#[derive(Clone, Debug)]
pub struct Subsets {
    current: Option<Vec<usize>>,
    m: usize,
}

/// All `C(m, k)` subsets of size `k`, in lexicographic order. Empty when `k > m`.
pub fn enumerate_subsets(k: usize, m: usize) -> Subsets {
    Subsets {
        current: (k <= m).then(|| (1..=k).collect()),
        m,
    }
}

impl Iterator for Subsets {
    type Item = IndexSubset;

    fn next(&mut self) -> Option<IndexSubset> {
        let cur = self.current.as_mut()?;
        let out = IndexSubset {
            indices: cur.clone(),
            universe: self.m,
        };
        let k = cur.len();
        // rightmost position that can still advance
        match (0..k).rev().find(|&i| cur[i] < self.m - (k - 1 - i)) {
            Some(i) => {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// Binomial coefficient as `u128`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
