//! Partitions, Young diagram cells, residues and strip tests.
//!
//! Cells use 1-based `(row, col)` matrix coordinates (English notation).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The level `k` that every bounded/core computation is relative to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelContext {
    k: usize,
}

impl LevelContext {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLevel(k));
        }
        Ok(LevelContext { k })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }
}

/// A box of a Young diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        debug_assert!(row >= 1 && col >= 1, "cells are 1-based");
        Cell { row, col }
    }

    /// `(col - row) mod (k+1)`, normalized to `[0, k]`.
    pub fn residue(&self, ctx: LevelContext) -> usize {
        let m = (ctx.k() + 1) as i64;
        (self.col as i64 - self.row as i64).rem_euclid(m) as usize
    }
}

/// A weakly decreasing sequence of positive integers.
///
/// Equality, hashing and ordering are structural; the derived `Ord` is the
/// lexicographic order on the parts.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition, dropping trailing zeros. Fails if the parts are not
    /// weakly decreasing.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(parts));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last() != Some(&0));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Part `i` (1-based); zero beyond the length. `part(0)` is treated as
    /// an infinitely long row.
    #[inline]
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn first(&self) -> usize {
        self.part(1)
    }

    pub fn last(&self) -> usize {
        self.parts.last().copied().unwrap_or(0)
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row >= 1 && c.col >= 1 && c.col <= self.part(c.row)
    }

    /// Diagram containment `other ⊆ self`.
    pub fn contains_partition(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (1..=p).map(move |j| Cell::new(i + 1, j)))
    }

    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.first()).map(|j| self.parts.iter().take_while(|&&p| p >= j).count()).collect();
        Partition { parts }
    }

    /// Length of column `j` (the conjugate's part `j`).
    pub fn column(&self, j: usize) -> usize {
        self.parts.iter().take_while(|&&p| p >= j).count()
    }

    /// Multiset union, reordered weakly decreasing.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.parts.iter().peekable(), other.parts.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x >= y {
                        parts.push(x);
                        a.next();
                    } else {
                        parts.push(y);
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    parts.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    parts.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Partition { parts }
    }

    pub fn hook_length(&self, c: Cell) -> Result<usize> {
        if !self.contains(c) {
            return Err(Error::CellOutside { row: c.row, col: c.col, shape: self.to_string() });
        }
        Ok(self.hook_unchecked(c))
    }

    #[inline]
    pub(crate) fn hook_unchecked(&self, c: Cell) -> usize {
        (self.part(c.row) - c.col) + (self.column(c.col) - c.row) + 1
    }

    pub fn removable_corners(&self) -> Vec<Cell> {
        (1..=self.len()).filter(|&i| self.part(i) > self.part(i + 1)).map(|i| Cell::new(i, self.part(i))).collect()
    }

    pub fn addable_corners(&self) -> Vec<Cell> {
        (1..=self.len() + 1)
            .filter(|&i| i == 1 || self.part(i - 1) > self.part(i))
            .map(|i| Cell::new(i, self.part(i) + 1))
            .collect()
    }

    /// `c` is blocked by `self` when the cell directly below it lies in `self`.
    pub fn blocks(&self, c: Cell) -> bool {
        self.contains(Cell::new(c.row + 1, c.col))
    }

    /// Parts strictly greater than `t` (a prefix, since parts decrease).
    pub fn prefix_above(&self, t: usize) -> Partition {
        let n = self.parts.iter().take_while(|&&p| p > t).count();
        Partition { parts: self.parts[..n].to_vec() }
    }

    /// First `u` rows, and the cells strictly below row `u`.
    pub fn slice(&self, u: usize) -> (Partition, Vec<Cell>) {
        let n = u.min(self.len());
        let head = Partition { parts: self.parts[..n].to_vec() };
        let tail = self.cells().filter(|c| c.row > u).collect();
        (head, tail)
    }

    /// Drops the last part.
    pub fn without_last(&self) -> Partition {
        let mut parts = self.parts.clone();
        parts.pop();
        Partition { parts }
    }

    /// `|self ∖ other|` as diagrams.
    pub fn difference_size(&self, other: &Partition) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| p.saturating_sub(other.part(i + 1))).sum()
    }

    /// Cells of `self ∖ other`; containment is not required.
    pub fn difference(&self, other: &Partition) -> Vec<Cell> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| {
                let lo = other.part(i + 1);
                (lo + 1..=p).map(move |j| Cell::new(i + 1, j))
            })
            .collect()
    }

    /// Componentwise max of the diagrams.
    pub fn cup(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition { parts: (1..=n).map(|i| self.part(i).max(other.part(i))).collect() }
    }

    /// Componentwise min of the diagrams.
    pub fn cap(&self, other: &Partition) -> Partition {
        let n = self.len().min(other.len());
        Partition { parts: (1..=n).map(|i| self.part(i).min(other.part(i))).collect() }
    }

    /// Adds one box to row `row` (1-based) if the result is a partition.
    pub fn add_cell(&self, row: usize) -> Option<Partition> {
        if row == 0 || row > self.len() + 1 || (row > 1 && self.part(row - 1) <= self.part(row)) {
            return None;
        }
        let mut parts = self.parts.clone();
        if row == parts.len() + 1 {
            parts.push(1);
        } else {
            parts[row - 1] += 1;
        }
        Some(Partition { parts })
    }

    /// Removes one box from row `row` if the result is a partition.
    pub fn remove_cell(&self, row: usize) -> Option<Partition> {
        if row == 0 || row > self.len() || self.part(row) <= self.part(row + 1) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[row - 1] -= 1;
        if parts[row - 1] == 0 {
            parts.pop();
        }
        Some(Partition { parts })
    }

    /// `true` iff every part is at most `k`.
    pub fn is_bounded(&self, k: usize) -> bool {
        self.first() <= k
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        let mut first = true;
        for p in &self.parts {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// `"3,3,1"`, or `"-"` for the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(Partition::empty());
        }
        if s.is_empty() {
            return Err(Error::Parse("empty partition text (use \"-\")".into()));
        }
        let parts = s
            .split(',')
            .map(|x| {
                let x = x.trim();
                match x.parse::<usize>() {
                    Ok(0) | Err(_) => Err(Error::Parse(format!("bad part {:?} in {:?}", x, s))),
                    Ok(v) => Ok(v),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// Shorthand used throughout tests: `part![3, 1]`.
#[macro_export]
macro_rules! part {
    () => { $crate::partition::Partition::empty() };
    ($($x:expr),+ $(,)?) => {
        $crate::partition::Partition::new(vec![$($x),+]).expect("valid partition literal")
    };
}

/// Every column meets `nu ∖ mu` at most once. Containment is not required.
pub fn is_horizontal_strip(nu: &Partition, mu: &Partition) -> bool {
    let mut seen = BTreeSet::new();
    nu.difference(mu).into_iter().all(|c| seen.insert(c.col))
}

/// Every row meets `nu ∖ mu` at most once. Containment is not required.
pub fn is_vertical_strip(nu: &Partition, mu: &Partition) -> bool {
    (1..=nu.len()).all(|i| nu.part(i).saturating_sub(mu.part(i)) <= 1)
}

/// Number of distinct residues among `mu`-removable corners that `lambda`
/// does not block.
pub fn corner_residue_count(lambda: &Partition, mu: &Partition, ctx: LevelContext) -> usize {
    let residues: BTreeSet<usize> =
        mu.removable_corners().into_iter().filter(|&c| !lambda.blocks(c)).map(|c| c.residue(ctx)).collect();
    residues.len()
}

/// `(t^{k+1-t})` for `1 <= t <= k`, empty otherwise.
pub fn k_rectangle(t: i64, ctx: LevelContext) -> Partition {
    let k = ctx.k() as i64;
    if t < 1 || t > k {
        return Partition::empty();
    }
    Partition { parts: vec![t as usize; (k + 1 - t) as usize] }
}

/// All partitions of `n` with parts at most `max_part`, lex descending.
pub fn partitions_bounded(n: usize, max_part: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_part, &mut Vec::new(), &mut out);
    out
}

/// All partitions of `n`, lex descending.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    partitions_bounded(n, n)
}

/// All partitions contained in `outer` (including `∅` and `outer`).
pub fn sub_partitions(outer: &Partition) -> Vec<Partition> {
    fn rec(outer: &Partition, i: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        out.push(Partition { parts: cur.clone() });
        if i > outer.len() {
            return;
        }
        for p in (1..=outer.part(i).min(cap)).rev() {
            cur.push(p);
            rec(outer, i + 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(outer, 1, usize::MAX, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Partitions `mu` with `inner ⊆ mu ⊆ outer`.
pub fn interval(inner: &Partition, outer: &Partition) -> Vec<Partition> {
    if !outer.contains_partition(inner) {
        return Vec::new();
    }
    sub_partitions(outer).into_iter().filter(|m| m.contains_partition(inner)).collect()
}

/// Orders by size first, then lex. Handy for stable report sorting.
pub fn graded_cmp(a: &Partition, b: &Partition) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: usize) -> LevelContext {
        LevelContext::new(k).unwrap()
    }

    #[test]
    fn contains_cells() {
        assert!(part![2, 1].contains(Cell::new(1, 2)));
        assert!(!part![2, 1].contains(Cell::new(2, 2)));
        assert!(!part![].contains(Cell::new(1, 1)));
    }

    #[test]
    fn conjugates() {
        assert_eq!(part![3, 1].conjugate(), part![2, 1, 1]);
        assert_eq!(part![].conjugate(), part![]);
        for k in 1..=6 {
            for t in 1..=k as i64 {
                let r = k_rectangle(t, ctx(k));
                assert_eq!(r.conjugate(), Partition::new(vec![k + 1 - t as usize; t as usize]).unwrap());
            }
        }
    }

    #[test]
    fn unions() {
        assert_eq!(part![3, 3].union(&part![3, 3]), part![3, 3, 3, 3]);
        assert_eq!(part![3, 1].union(&part![2]), part![3, 2, 1]);
        assert_eq!(part![4, 2].union(&part![]), part![4, 2]);
    }

    #[test]
    fn hooks() {
        assert_eq!(part![1].hook_length(Cell::new(1, 1)).unwrap(), 1);
        assert_eq!(part![2, 2].hook_length(Cell::new(1, 1)).unwrap(), 3);
        assert_eq!(part![3, 1].hook_length(Cell::new(1, 1)).unwrap(), 4);
        assert!(part![3, 1].hook_length(Cell::new(2, 2)).is_err());
    }

    #[test]
    fn residues() {
        assert_eq!(Cell::new(1, 1).residue(ctx(4)), 0);
        assert_eq!(Cell::new(2, 1).residue(ctx(2)), 2);
        assert_eq!(Cell::new(1, 5).residue(ctx(3)), 0);
    }

    #[test]
    fn corners() {
        assert_eq!(part![2, 1].removable_corners(), vec![Cell::new(1, 2), Cell::new(2, 1)]);
        assert_eq!(part![2, 2].removable_corners(), vec![Cell::new(2, 2)]);
        assert!(part![].removable_corners().is_empty());
        assert_eq!(part![].addable_corners(), vec![Cell::new(1, 1)]);
        assert_eq!(part![2, 1].addable_corners(), vec![Cell::new(1, 3), Cell::new(2, 2), Cell::new(3, 1)]);
        assert_eq!(part![2, 2].addable_corners(), vec![Cell::new(1, 3), Cell::new(3, 1)]);
    }

    #[test]
    fn blocking() {
        assert!(part![2, 2].blocks(Cell::new(1, 1)));
        assert!(!part![2, 1].blocks(Cell::new(2, 1)));
        assert!(!part![3, 1].blocks(Cell::new(1, 2)));
    }

    #[test]
    fn residue_counts() {
        assert_eq!(corner_residue_count(&part![1], &part![1], ctx(2)), 1);
        assert_eq!(corner_residue_count(&part![2, 1], &part![2, 1], ctx(2)), 2);
        assert_eq!(corner_residue_count(&part![2, 2], &part![2, 1], ctx(2)), 1);
    }

    #[test]
    fn strips() {
        assert!(is_horizontal_strip(&part![4, 2], &part![3, 2]));
        assert!(is_horizontal_strip(&part![2, 2], &part![3]));
        assert!(!is_horizontal_strip(&part![2, 2, 1], &part![2]));
        assert!(is_vertical_strip(&part![2, 1], &part![1, 1]));
        assert!(!is_vertical_strip(&part![3, 1], &part![1]));
        assert!(is_vertical_strip(&part![5, 3, 3], &part![5, 3, 3]));
    }

    #[test]
    fn prefixes_and_slices() {
        assert_eq!(part![5, 4, 2, 1].prefix_above(3), part![5, 4]);
        assert_eq!(part![3, 3].prefix_above(3), part![]);
        assert_eq!(part![].prefix_above(1), part![]);

        let (head, tail) = part![3, 2, 1].slice(1);
        assert_eq!(head, part![3]);
        assert_eq!(tail, vec![Cell::new(2, 1), Cell::new(2, 2), Cell::new(3, 1)]);
        let (head, tail) = part![3, 2, 1].slice(0);
        assert_eq!(head, part![]);
        assert_eq!(tail.len(), 6);
        let (head, tail) = part![3, 2, 1].slice(5);
        assert_eq!(head, part![3, 2, 1]);
        assert!(tail.is_empty());
    }

    #[test]
    fn rectangles() {
        assert_eq!(k_rectangle(3, ctx(4)), part![3, 3]);
        assert_eq!(k_rectangle(4, ctx(4)), part![4]);
        assert_eq!(k_rectangle(5, ctx(4)), part![]);
        assert_eq!(k_rectangle(0, ctx(4)), part![]);
    }

    #[test]
    fn text_syntax() {
        assert_eq!("3,3,1".parse::<Partition>().unwrap(), part![3, 3, 1]);
        assert_eq!("-".parse::<Partition>().unwrap(), part![]);
        assert!("1,3".parse::<Partition>().is_err());
        assert!("3,0".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
        assert_eq!(part![3, 3, 1].to_string(), "3,3,1");
        assert_eq!(part![].to_string(), "-");
    }

    #[test]
    fn enumeration_counts() {
        // p(n) for n = 0..10
        let expect = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &c) in expect.iter().enumerate() {
            assert_eq!(partitions_of(n).len(), c);
        }
        assert_eq!(sub_partitions(&part![3, 3]).len(), 10);
        let ps = partitions_bounded(6, 3);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
    }
}
