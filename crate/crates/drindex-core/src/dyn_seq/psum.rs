use alloc::vec::Vec;

use super::btree::{Agg, Fold, Seek, Tree};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct SumAgg {
    count: usize,
    sum: usize,
}

impl Agg for SumAgg {
    type Item = usize;

    fn count(&self) -> usize {
        self.count
    }
    fn add_item(&mut self, it: &usize) {
        self.count += 1;
        self.sum += *it;
    }
    fn sub_item(&mut self, it: &usize) {
        self.count -= 1;
        self.sum -= *it;
    }
    fn add(&mut self, o: &Self) {
        self.count += o.count;
        self.sum += o.sum;
    }
    fn sub(&mut self, o: &Self) {
        self.count -= o.count;
        self.sum -= o.sum;
    }
}

struct SumFold(usize);

impl Fold<SumAgg> for SumFold {
    fn agg(&mut self, a: &SumAgg) {
        self.0 += a.sum;
    }
    fn item(&mut self, it: &usize) {
        self.0 += *it;
    }
}

/// Finds the first prefix whose sum reaches the remaining target.
struct SumSeek(usize);

impl Seek<SumAgg> for SumSeek {
    fn skip(&mut self, a: &SumAgg) -> bool {
        if a.sum < self.0 {
            self.0 -= a.sum;
            true
        } else {
            false
        }
    }
    fn hit(&mut self, it: &usize) -> bool {
        if *it >= self.0 {
            true
        } else {
            self.0 -= *it;
            false
        }
    }
}

/// A dynamic sequence of non-negative integers with prefix sums.
#[derive(Clone, Debug, Default)]
pub struct PartialSumList {
    tree: Tree<SumAgg>,
}

impl PartialSumList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(values: &[usize]) -> Self {
        PartialSumList { tree: Tree::from_items(values) }
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of all elements.
    pub fn total(&self) -> usize {
        self.tree.total().sum
    }

    pub fn get(&self, i: usize) -> Result<usize> {
        self.check_pos("psum get", i)?;
        Ok(self.tree.get(i - 1))
    }

    /// Sum of the first `i` elements; `sum(0) = 0`.
    pub fn sum(&self, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::range("psum sum", i, self.len()));
        }
        let mut f = SumFold(0);
        self.tree.prefix(i, &mut f);
        Ok(f.0)
    }

    /// Smallest `i` with `sum(i) >= t`, or `len + 1` if there is none.
    pub fn search(&self, t: usize) -> usize {
        match self.tree.seek(&mut SumSeek(t)) {
            Some(p) => p + 1,
            None => self.len() + 1,
        }
    }

    pub fn insert(&mut self, i: usize, v: usize) -> Result<()> {
        if i == 0 || i > self.len() + 1 {
            return Err(Error::range("psum insert", i, self.len()));
        }
        self.tree.insert(i - 1, v);
        Ok(())
    }

    /// Removes and returns element `i`. Any value may be deleted.
    pub fn delete(&mut self, i: usize) -> Result<usize> {
        self.check_pos("psum delete", i)?;
        Ok(self.tree.remove(i - 1))
    }

    /// Replaces elements `i` and `i + 1` by their sum.
    pub fn merge(&mut self, i: usize) -> Result<()> {
        if i == 0 || i >= self.len() {
            return Err(Error::range("psum merge", i, self.len()));
        }
        let right = self.tree.remove(i);
        self.tree.update(i - 1, |v| v + right);
        Ok(())
    }

    /// Replaces element `i` by `t` and `s[i] - t`.
    pub fn divide(&mut self, i: usize, t: usize) -> Result<()> {
        let v = self.get(i)?;
        if t > v {
            return Err(Error::Precondition("psum divide: part exceeds element"));
        }
        self.tree.update(i - 1, |_| t);
        self.tree.insert(i, v - t);
        Ok(())
    }

    /// Adds a signed delta to element `i`; the element must stay non-negative.
    pub fn add(&mut self, i: usize, delta: isize) -> Result<()> {
        let v = self.get(i)?;
        let nv = v.checked_add_signed(delta).ok_or(Error::Precondition("psum add: element would go negative"))?;
        self.tree.update(i - 1, |_| nv);
        Ok(())
    }

    pub fn set(&mut self, i: usize, v: usize) -> Result<()> {
        self.check_pos("psum set", i)?;
        self.tree.update(i - 1, |_| v);
        Ok(())
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.tree.to_vec()
    }

    /// Cumulative number of tree nodes touched since construction.
    pub fn visits(&self) -> u64 {
        self.tree.visits()
    }

    fn check_pos(&self, what: &'static str, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            Err(Error::range(what, i, self.len()))
        } else {
            Ok(())
        }
    }
}
