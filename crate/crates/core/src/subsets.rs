//! Subset queries and their enumeration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

/// A set of element indices, kept sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetQuery(Vec<usize>);

impl SubsetQuery {
    /// Validates `indices` against a universe of `m` elements. Indices must be
    /// strictly increasing and below `m`.
    pub fn new(indices: Vec<usize>, m: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(usage("subset must contain at least one index"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(usage(format!(
                "subset indices {indices:?} are not strictly increasing"
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= m {
                return Err(usage(format!("subset index {last} out of range for m={m}")));
            }
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Indices in `0..m` not in the subset, ascending.
    pub fn complement(&self, m: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(m.saturating_sub(self.0.len()));
        let mut it = self.0.iter().peekable();
        for i in 0..m {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                out.push(i);
            }
        }
        out
    }
}

impl fmt::Display for SubsetQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Which subset sizes a query family contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetMode {
    /// Every size `1..=k`.
    #[default]
    AtMost,
    /// Only size `k`.
    Exactly,
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of subsets `enumerate_subsets` yields for `(m, k, mode)`.
pub fn subset_count(m: usize, k: usize, mode: SubsetMode) -> u64 {
    match mode {
        SubsetMode::AtMost => (1..=k).map(|j| binomial(m, j)).sum(),
        SubsetMode::Exactly => binomial(m, k),
    }
}

/// Lexicographic enumeration of subsets, sizes ascending.
#[derive(Debug, Clone)]
pub struct Subsets {
    m: usize,
    max_size: usize,
    current: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn starting_at(m: usize, size: usize, max_size: usize) -> Self {
        Self {
            m,
            max_size,
            current: (0..size).collect(),
            done: false,
        }
    }

    /// Advances `current` to the next combination of the same size; false when
    /// the size is exhausted.
    fn advance_same_size(&mut self) -> bool {
        let r = self.current.len();
        let mut i = r;
        while i > 0 {
            i -= 1;
            if self.current[i] < self.m - r + i {
                self.current[i] += 1;
                for j in i + 1..r {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Subsets {
    type Item = SubsetQuery;

    fn next(&mut self) -> Option<SubsetQuery> {
        if self.done {
            return None;
        }
        let out = SubsetQuery(self.current.clone());
        if !self.advance_same_size() {
            let next_size = self.current.len() + 1;
            if next_size > self.max_size {
                self.done = true;
            } else {
                self.current = (0..next_size).collect();
            }
        }
        Some(out)
    }
}

/// Every subset of `0..m` with size in `1..=k`, sizes ascending and
/// lexicographic within each size.
pub fn enumerate_subsets(m: usize, k: usize) -> Result<Subsets> {
    enumerate_subsets_mode(m, k, SubsetMode::AtMost)
}

pub fn enumerate_subsets_mode(m: usize, k: usize, mode: SubsetMode) -> Result<Subsets> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    if k > m {
        return Err(usage(format!("k={k} exceeds m={m}")));
    }
    let first = match mode {
        SubsetMode::AtMost => 1,
        SubsetMode::Exactly => k,
    };
    Ok(Subsets::starting_at(m, first, k))
}
