use alloc::vec;
use alloc::vec::Vec;

use super::btree::{Agg, Tree};
use crate::{Error, Result};

/// Plain element count over tracked element ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct IdAgg(usize);

impl Agg for IdAgg {
    type Item = u32;
    const TRACK: bool = true;

    fn key(it: &u32) -> usize {
        *it as usize
    }
    fn count(&self) -> usize {
        self.0
    }
    fn add_item(&mut self, _: &u32) {
        self.0 += 1;
    }
    fn sub_item(&mut self, _: &u32) {
        self.0 -= 1;
    }
    fn add(&mut self, o: &Self) {
        self.0 += o.0;
    }
    fn sub(&mut self, o: &Self) {
        self.0 -= o.0;
    }
}

/// A dynamic permutation of `1..=len`.
///
/// Each element is an id placed in two trees: one in position order, one in
/// value order. A value is never stored; it is the id's rank in the value
/// tree, so shifting all larger values on insert or delete is free.
#[derive(Clone, Debug, Default)]
pub struct DynPermutation {
    by_pos: Tree<IdAgg>,
    by_val: Tree<IdAgg>,
    free_ids: Vec<u32>,
    next_id: u32,
}

impl DynPermutation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from `perm[0..n]`, which must be a permutation of `1..=n`.
    pub fn from_slice(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut slot = vec![u32::MAX; n];
        for (pos, &v) in perm.iter().enumerate() {
            if v == 0 || v > n || slot[v - 1] != u32::MAX {
                return Err(Error::InvalidArgument("not a permutation of 1..=n"));
            }
            slot[v - 1] = pos as u32;
        }
        let ids: Vec<u32> = (0..n as u32).collect();
        Ok(DynPermutation {
            by_pos: Tree::from_items(&ids),
            by_val: Tree::from_items(&slot),
            free_ids: Vec::new(),
            next_id: n as u32,
        })
    }

    pub fn len(&self) -> usize {
        self.by_pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `perm[i]`.
    pub fn access(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::range("perm access", i, self.len()));
        }
        let id = self.by_pos.get(i - 1);
        Ok(self.by_val.position_of_key(id as usize) + 1)
    }

    /// The position holding value `v`.
    pub fn inv_access(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.len() {
            return Err(Error::range("perm inv_access", v, self.len()));
        }
        let id = self.by_val.get(v - 1);
        Ok(self.by_pos.position_of_key(id as usize) + 1)
    }

    /// Increments every value `>= v` and then places `v` at position `i`.
    pub fn increment_insert(&mut self, i: usize, v: usize) -> Result<()> {
        let n = self.len();
        if i == 0 || i > n + 1 {
            return Err(Error::range("perm increment_insert position", i, n));
        }
        if v == 0 || v > n + 1 {
            return Err(Error::range("perm increment_insert value", v, n));
        }
        let id = self.free_ids.pop().unwrap_or_else(|| {
            self.next_id += 1;
            self.next_id - 1
        });
        self.by_pos.insert(i - 1, id);
        self.by_val.insert(v - 1, id);
        Ok(())
    }

    /// Removes position `i` and decrements every value above `perm[i]`.
    pub fn decrement_delete(&mut self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::range("perm decrement_delete", i, self.len()));
        }
        let id = self.by_pos.remove(i - 1);
        let vpos = self.by_val.position_of_key(id as usize);
        self.by_val.remove(vpos);
        self.free_ids.push(id);
        Ok(vpos + 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        let mut val_of = vec![0usize; self.next_id as usize];
        for (k, id) in self.by_val.to_vec().into_iter().enumerate() {
            val_of[id as usize] = k + 1;
        }
        self.by_pos.to_vec().into_iter().map(|id| val_of[id as usize]).collect()
    }

    pub fn visits(&self) -> u64 {
        self.by_pos.visits() + self.by_val.visits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sort_order_of_sa_e() {
        let p = DynPermutation::from_slice(&[4, 2, 3, 1]).unwrap();
        assert_eq!(p.access(1), Ok(4));
        assert_eq!(p.inv_access(4), Ok(1));
        assert_eq!(DynPermutation::from_slice(&[1]).unwrap().access(1), Ok(1));
        assert!(DynPermutation::from_slice(&[1, 1]).is_err());
    }

    #[test]
    fn increment_insert_then_delete() {
        let mut p = DynPermutation::from_slice(&[4, 2, 3, 1]).unwrap();
        p.increment_insert(2, 3).unwrap();
        assert_eq!(p.to_vec(), vec![5, 3, 2, 4, 1]);
        assert_eq!(p.decrement_delete(2), Ok(3));
        assert_eq!(p.to_vec(), vec![4, 2, 3, 1]);
        let mut e = DynPermutation::new();
        e.increment_insert(1, 1).unwrap();
        assert_eq!(e.to_vec(), vec![1]);
    }

    proptest! {
        #[test]
        fn matches_flat_model(ops in proptest::collection::vec((any::<bool>(), any::<usize>(), any::<usize>()), 1..500)) {
            let mut p = DynPermutation::new();
            let mut m: Vec<usize> = Vec::new();
            for (ins, i, v) in ops {
                if ins || m.is_empty() {
                    let i = i % (m.len() + 1) + 1;
                    let v = v % (m.len() + 1) + 1;
                    p.increment_insert(i, v).unwrap();
                    for x in m.iter_mut() {
                        if *x >= v { *x += 1; }
                    }
                    m.insert(i - 1, v);
                } else {
                    let i = i % m.len() + 1;
                    let before = p.clone();
                    let v = m.remove(i - 1);
                    prop_assert_eq!(p.decrement_delete(i).unwrap(), v);
                    for x in m.iter_mut() {
                        if *x > v { *x -= 1; }
                    }
                    // Re-inserting restores the permutation exactly.
                    let mut undo = p.clone();
                    undo.increment_insert(i, v).unwrap();
                    prop_assert_eq!(undo.to_vec(), before.to_vec());
                }
                p.by_pos.check();
                p.by_val.check();
            }
            prop_assert_eq!(p.to_vec(), m.clone());
            for (k, &v) in m.iter().enumerate() {
                prop_assert_eq!(p.access(k + 1).unwrap(), v);
                prop_assert_eq!(p.inv_access(v).unwrap(), k + 1);
            }
        }
    }
}
