use alloc::vec::Vec;

use super::btree::{Agg, Fold, Seek, Tree};
use crate::{Error, Result};

const UNMAPPED: u16 = u16::MAX;

/// Count plus per-symbol counts, indexed by dense symbol id. The table only
/// grows as far as the largest id seen in the subtree.
#[derive(Clone, Debug, Default)]
struct SymAgg {
    count: usize,
    per: Vec<u32>,
}

impl PartialEq for SymAgg {
    fn eq(&self, o: &Self) -> bool {
        let n = self.per.len().max(o.per.len());
        self.count == o.count && (0..n).all(|d| self.at(d) == o.at(d))
    }
}

impl SymAgg {
    #[inline]
    fn at(&self, d: usize) -> u32 {
        self.per.get(d).copied().unwrap_or(0)
    }
    #[inline]
    fn slot(&mut self, d: usize) -> &mut u32 {
        if d >= self.per.len() {
            self.per.resize(d + 1, 0);
        }
        &mut self.per[d]
    }
}

impl Agg for SymAgg {
    type Item = u8;

    fn count(&self) -> usize {
        self.count
    }
    fn add_item(&mut self, it: &u8) {
        self.count += 1;
        *self.slot(*it as usize) += 1;
    }
    fn sub_item(&mut self, it: &u8) {
        self.count -= 1;
        *self.slot(*it as usize) -= 1;
    }
    fn add(&mut self, o: &Self) {
        self.count += o.count;
        for (d, v) in o.per.iter().enumerate() {
            if *v != 0 {
                *self.slot(d) += *v;
            }
        }
    }
    fn sub(&mut self, o: &Self) {
        self.count -= o.count;
        for (d, v) in o.per.iter().enumerate() {
            if *v != 0 {
                *self.slot(d) -= *v;
            }
        }
    }
}

struct RankFold {
    d: u8,
    acc: usize,
}

impl Fold<SymAgg> for RankFold {
    fn agg(&mut self, a: &SymAgg) {
        self.acc += a.at(self.d as usize) as usize;
    }
    fn item(&mut self, it: &u8) {
        self.acc += usize::from(*it == self.d);
    }
}

struct SelectSeek {
    d: u8,
    rem: usize,
}

impl Seek<SymAgg> for SelectSeek {
    fn skip(&mut self, a: &SymAgg) -> bool {
        let c = a.at(self.d as usize) as usize;
        if c < self.rem {
            self.rem -= c;
            true
        } else {
            false
        }
    }
    fn hit(&mut self, it: &u8) -> bool {
        if *it == self.d {
            self.rem -= 1;
            self.rem == 0
        } else {
            false
        }
    }
}

/// A dynamic byte sequence with access, rank and select.
///
/// Symbols are renumbered densely in order of first appearance so the
/// per-node count tables stay as small as the observed alphabet.
#[derive(Clone, Debug)]
pub struct CharSequence {
    tree: Tree<SymAgg>,
    dense: [u16; 256],
    syms: Vec<u8>,
}

impl Default for CharSequence {
    fn default() -> Self {
        CharSequence { tree: Tree::new(), dense: [UNMAPPED; 256], syms: Vec::new() }
    }
}

impl CharSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(chars: &[u8]) -> Self {
        let mut s = Self::default();
        let ids: Vec<u8> = chars.iter().map(|&c| s.map(c)).collect();
        s.tree = Tree::from_items(&ids);
        s
    }

    fn map(&mut self, c: u8) -> u8 {
        if self.dense[c as usize] == UNMAPPED {
            self.dense[c as usize] = self.syms.len() as u16;
            self.syms.push(c);
        }
        self.dense[c as usize] as u8
    }

    #[inline]
    fn lookup(&self, c: u8) -> Option<u8> {
        let d = self.dense[c as usize];
        (d != UNMAPPED).then_some(d as u8)
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn access(&self, i: usize) -> Result<u8> {
        if i == 0 || i > self.len() {
            return Err(Error::range("cseq access", i, self.len()));
        }
        Ok(self.syms[self.tree.get(i - 1) as usize])
    }

    /// Occurrences of `c` among the first `i` symbols, `0 <= i <= len`.
    pub fn rank(&self, i: usize, c: u8) -> Result<usize> {
        if i > self.len() {
            return Err(Error::range("cseq rank", i, self.len()));
        }
        let Some(d) = self.lookup(c) else { return Ok(0) };
        let mut f = RankFold { d, acc: 0 };
        self.tree.prefix(i, &mut f);
        Ok(f.acc)
    }

    /// Total occurrences of `c`.
    pub fn count(&self, c: u8) -> usize {
        self.lookup(c).map_or(0, |d| self.tree.total().at(d as usize) as usize)
    }

    /// Position of the `k`-th occurrence of `c`, or `None` when `c` occurs
    /// fewer than `k` times (the `-1` answer of the select query).
    pub fn select(&self, k: usize, c: u8) -> Option<usize> {
        let d = self.lookup(c)?;
        if k == 0 || k > self.count(c) {
            return None;
        }
        self.tree.seek(&mut SelectSeek { d, rem: k }).map(|p| p + 1)
    }

    pub fn insert(&mut self, i: usize, c: u8) -> Result<()> {
        if i == 0 || i > self.len() + 1 {
            return Err(Error::range("cseq insert", i, self.len()));
        }
        let d = self.map(c);
        self.tree.insert(i - 1, d);
        Ok(())
    }

    pub fn delete(&mut self, i: usize) -> Result<u8> {
        if i == 0 || i > self.len() {
            return Err(Error::range("cseq delete", i, self.len()));
        }
        Ok(self.syms[self.tree.remove(i - 1) as usize])
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.tree.to_vec().into_iter().map(|d| self.syms[d as usize]).collect()
    }

    pub fn visits(&self) -> u64 {
        self.tree.visits()
    }
}
