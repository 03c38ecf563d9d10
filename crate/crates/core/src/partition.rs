//! Integer partitions and their diagram statistics.
//!
//! Cells are addressed 1-based as `(row, col)`, row 1 being the longest part.
//! Partitions of a fixed size are always listed in reverse-lexicographic
//! order, `(n)` first and `(1^n)` last; this order refines dominance and is the
//! row/column order of every matrix and distribution in the crate.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

/// Arm and leg of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellStats {
    pub arm: usize,
    pub leg: usize,
}

/// Result of comparing two partitions of the same size in dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// The left partition is dominated by (or equal to) the right one.
    LessOrEqual,
    /// The left partition strictly dominates the right one.
    Greater,
    Incomparable,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts. Trailing zeros are
    /// dropped; any other violation is an error.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::ParsePartition(format!("{parts:?}")));
        }
        Ok(Self::from_sorted(parts))
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_multiset(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(parts)
    }

    pub(crate) fn from_sorted(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self::from_sorted(vec![n])
        }
    }

    /// `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self::from_sorted(vec![1; n])
    }

    /// `(k, 1^(n-k))`, a hook with first row `k`.
    pub fn hook(n: usize, k: usize) -> Self {
        assert!(
            k >= 1 && k <= n,
            "hook ({k}, 1^{}) is not a partition",
            n.saturating_sub(k)
        );
        let mut parts = vec![k];
        parts.extend(std::iter::repeat_n(1, n - k));
        Self::from_sorted(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of nonzero parts, l(λ).
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The `i`-th part, 1-based; zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// m_i(λ), the number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        let parts = (1..=width)
            .map(|i| self.parts.iter().take_while(|&&p| p >= i).count())
            .collect();
        Self::from_sorted(parts)
    }

    pub fn contains_cell(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && self.part(row) >= col
    }

    /// Cells of the diagram in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| (i + 1, j)))
    }

    pub fn arm_leg(&self, row: usize, col: usize) -> Result<CellStats> {
        if !self.contains_cell(row, col) {
            return Err(Error::InvalidCell {
                partition: self.clone(),
                row,
                col,
            });
        }
        let col_len = self.parts.iter().take_while(|&&p| p >= col).count();
        Ok(CellStats {
            arm: self.part(row) - col,
            leg: col_len - row,
        })
    }

    /// Arms and legs of every cell, row-major.
    pub fn cell_stats(&self) -> Vec<CellStats> {
        let conj = self.conjugate();
        self.cells()
            .map(|(r, c)| CellStats {
                arm: self.part(r) - c,
                leg: conj.part(c) - r,
            })
            .collect()
    }

    /// n(λ) = Σ (i-1) λ_i.
    pub fn n_stat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// z_λ = Π i^{m_i} m_i!, the centralizer order of a permutation of cycle
    /// type λ.
    pub fn z_stat(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut m = 0;
            while i < self.parts.len() && self.parts[i] == p {
                m += 1;
                z *= BigInt::from(p) * BigInt::from(m);
                i += 1;
            }
        }
        z
    }

    /// Rows whose last cell can be removed, with the resulting partition.
    pub fn removable(&self) -> Vec<(usize, Partition)> {
        (1..=self.length())
            .filter(|&r| self.part(r) > self.part(r + 1))
            .map(|r| {
                let mut parts = self.parts.clone();
                parts[r - 1] -= 1;
                if parts[r - 1] == 0 {
                    parts.pop();
                }
                (r, Self::from_sorted(parts))
            })
            .collect()
    }

    /// Rows where a cell can be appended, with the resulting partition.
    pub fn addable(&self) -> Vec<(usize, Partition)> {
        (1..=self.length() + 1)
            .filter(|&r| r == 1 || self.part(r - 1) > self.part(r))
            .map(|r| {
                let mut parts = self.parts.clone();
                if r > parts.len() {
                    parts.push(1);
                } else {
                    parts[r - 1] += 1;
                }
                (r, Self::from_sorted(parts))
            })
            .collect()
    }

    /// If `inner` is `self` with one cell removed, returns that cell.
    pub fn removed_cell(&self, inner: &Partition) -> Option<(usize, usize)> {
        if inner.size + 1 != self.size || inner.length() > self.length() {
            return None;
        }
        let mut diff = None;
        for r in 1..=self.length() {
            let (a, b) = (self.part(r), inner.part(r));
            if a == b {
                continue;
            }
            if a != b + 1 || diff.is_some() {
                return None;
            }
            diff = Some((r, a));
        }
        diff
    }

    pub fn dominance_cmp(&self, other: &Partition) -> Result<Dominance> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.clone(), other.clone()));
        }
        let len = self.length().max(other.length());
        let (mut le, mut ge) = (true, true);
        let (mut a, mut b) = (0, 0);
        for i in 1..=len {
            a += self.part(i);
            b += other.part(i);
            le &= a <= b;
            ge &= a >= b;
        }
        Ok(match (le, ge) {
            (true, _) => Dominance::LessOrEqual,
            (false, true) => Dominance::Greater,
            (false, false) => Dominance::Incomparable,
        })
    }

    /// Label in the text form, e.g. `[3,2]`; the empty partition is `[]`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

/// Accepts `[3,2]`, `3,2`, `[2,1^3]` and `[]`. Parts may appear in any order.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParsePartition(s.to_string());
        let t = s.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .or_else(|| t.strip_prefix('(').and_then(|x| x.strip_suffix(')')))
            .unwrap_or(t)
            .trim();
        if t.is_empty() || t == "∅" {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in t.split(',') {
            let tok = tok.trim();
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let base: usize = base.parse().map_err(|_| bad())?;
            if base == 0 {
                return Err(bad());
            }
            parts.extend(std::iter::repeat_n(base, exp));
        }
        Ok(Partition::from_multiset(parts))
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_sorted(prefix.clone()));
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            prefix.push(k);
            rec(rest - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// p(n) from Euler's pentagonal-number recurrence.
pub fn partition_count(n: usize) -> BigInt {
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::from(0);
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += &p[m - g1] * sign;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                acc += &p[m - g2] * sign;
            }
        }
        p.push(acc);
    }
    p.swap_remove(n)
}

/// The partitions of one size together with a lookup from partition to its
/// position in canonical order.
#[derive(Debug, Clone)]
pub struct PartitionIndex {
    n: usize,
    list: Vec<Partition>,
    pos: HashMap<Partition, usize>,
}

impl PartitionIndex {
    pub fn new(n: usize) -> Self {
        let list = enumerate_partitions(n);
        let pos = list
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        PartitionIndex { n, list, pos }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.list
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.list[i]
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.pos.get(p).copied()
    }
}
