//! Dynamic sampled suffix array.
//!
//! Holds r distinct values `SA_a[1..r]` indexed by run. Values are kept as r + 1
//! gaps between consecutive sorted values (the last gap runs up to the
//! universe), and a permutation Π maps sorted rank to run index. Shifting every
//! value above a threshold is then a single gap update.

use alloc::vec::Vec;

use crate::dyn_seq::{DynPermutation, PartialSumList};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SampledSa {
    /// `pi[k]` is the run index holding the k-th smallest value.
    pi: DynPermutation,
    gaps: PartialSumList,
}

impl SampledSa {
    /// An empty sample set over `1..=universe`.
    pub fn new(universe: usize) -> Self {
        SampledSa { pi: DynPermutation::new(), gaps: PartialSumList::from_slice(&[universe]) }
    }

    /// Builds from values in run order.
    pub fn from_values(values: &[usize], universe: usize) -> Result<Self> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&k| values[k]);
        let mut gaps = Vec::with_capacity(values.len() + 1);
        let mut prev = 0;
        for &k in &order {
            let v = values[k];
            if v == 0 || v > universe {
                return Err(Error::range("sampled value", v, universe));
            }
            if v == prev {
                return Err(Error::InvalidArgument("duplicate sampled value"));
            }
            gaps.push(v - prev);
            prev = v;
        }
        gaps.push(universe - prev);
        let pi: Vec<usize> = order.iter().map(|&k| k + 1).collect();
        Ok(SampledSa { pi: DynPermutation::from_slice(&pi)?, gaps: PartialSumList::from_slice(&gaps) })
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Current largest storable value.
    pub fn universe(&self) -> usize {
        self.gaps.total()
    }

    pub fn set_universe(&mut self, universe: usize) -> Result<()> {
        let last = self.gaps.len();
        let max = self.gaps.sum(last - 1)?;
        if universe < max {
            return Err(Error::Precondition("universe below largest stored value"));
        }
        self.gaps.set(last, universe - max)
    }

    /// `SA_a[i]`.
    pub fn access(&self, i: usize) -> Result<usize> {
        let k = self.pi.inv_access(i)?;
        self.gaps.sum(k)
    }

    /// Run index holding the `k`-th smallest value.
    pub fn order(&self, k: usize) -> Result<usize> {
        self.pi.access(k)
    }

    /// Number of stored values smaller than `t`. Any `t` is accepted.
    pub fn count(&self, t: usize) -> usize {
        (self.gaps.search(t) - 1).min(self.len())
    }

    /// Inserts `t` as the new `i`-th value; later run indices shift up.
    pub fn insert(&mut self, i: usize, t: usize) -> Result<()> {
        if i == 0 || i > self.len() + 1 {
            return Err(Error::range("sampled insert", i, self.len()));
        }
        if t == 0 || t > self.universe() {
            return Err(Error::range("sampled insert value", t, self.universe()));
        }
        let u = self.count(t);
        let below = self.gaps.sum(u)?;
        if u < self.len() && self.gaps.sum(u + 1)? == t {
            return Err(Error::Precondition("sampled insert: value already present"));
        }
        self.gaps.divide(u + 1, t - below)?;
        self.pi.increment_insert(u + 1, i)
    }

    /// Removes the `i`-th value and returns it.
    pub fn delete(&mut self, i: usize) -> Result<usize> {
        let k = self.pi.inv_access(i)?;
        let v = self.gaps.sum(k)?;
        self.gaps.merge(k)?;
        self.pi.decrement_delete(k)?;
        Ok(v)
    }

    /// Overwrites the `i`-th value.
    pub fn replace(&mut self, i: usize, t: usize) -> Result<()> {
        self.delete(i)?;
        self.insert(i, t)
    }

    /// Adds `k` to every value larger than `t`. The universe grows by `k`.
    pub fn increment(&mut self, t: usize, k: usize) -> Result<()> {
        let v = self.count(t.saturating_add(1));
        let g = self.gaps.get(v + 1)?;
        self.gaps.set(v + 1, g + k)
    }

    /// Subtracts `k` from every value larger than `t`. The universe shrinks by
    /// `k`. Fails if that would reorder values or make one equal to a value
    /// at most `t`.
    pub fn decrement(&mut self, t: usize, k: usize) -> Result<()> {
        let v = self.count(t.saturating_add(1));
        let g = self.gaps.get(v + 1)?;
        let floor = usize::from(v < self.len());
        if g < k + floor {
            return Err(Error::Precondition("decrement would reorder sampled values"));
        }
        self.gaps.set(v + 1, g - k)
    }

    /// Values in run order.
    pub fn values(&self) -> Vec<usize> {
        let pi = self.pi.to_vec();
        let gaps = self.gaps.to_vec();
        let mut out = alloc::vec![0; pi.len()];
        let mut acc = 0;
        for (k, &run) in pi.iter().enumerate() {
            acc += gaps[k];
            out[run - 1] = acc;
        }
        out
    }

    pub fn visits(&self) -> u64 {
        self.pi.visits() + self.gaps.visits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn samples_of_bbabba() {
        let se = SampledSa::from_values(&[7, 2, 4, 1], 7).unwrap();
        assert_eq!(se.access(3), Ok(4));
        assert_eq!(se.order(1), Ok(4));
        assert_eq!(se.order(4), Ok(1));
        assert_eq!(se.count(5), 3);
        assert_eq!(se.count(1), 0);
        assert_eq!(se.count(100), 4);
        let ss = SampledSa::from_values(&[7, 6, 4, 1], 7).unwrap();
        assert_eq!(ss.access(1), Ok(7));
        let one = SampledSa::from_values(&[5], 5).unwrap();
        assert_eq!(one.access(1), Ok(5));
        assert_eq!(one.order(1), Ok(1));
    }

    #[test]
    fn insert_delete_shift() {
        let mut ss = SampledSa::from_values(&[7, 6, 4, 1], 7).unwrap();
        ss.insert(3, 5).unwrap();
        assert_eq!(ss.values(), vec![7, 6, 5, 4, 1]);
        assert_eq!(ss.delete(3), Ok(5));
        assert_eq!(ss.values(), vec![7, 6, 4, 1]);
        assert!(ss.insert(1, 4).is_err());
        assert!(ss.insert(1, 8).is_err());
        let mut e = SampledSa::new(1);
        e.insert(1, 1).unwrap();
        assert_eq!(e.values(), vec![1]);

        let mut ss = SampledSa::from_values(&[7, 6, 4, 1], 7).unwrap();
        ss.increment(5, 1).unwrap();
        assert_eq!(ss.values(), vec![8, 7, 4, 1]);
        assert_eq!(ss.universe(), 8);
        ss.increment(100, 5).unwrap();
        assert_eq!(ss.values(), vec![8, 7, 4, 1]);
        ss.set_universe(8).unwrap();
        ss.decrement(5, 1).unwrap();
        assert_eq!(ss.values(), vec![7, 6, 4, 1]);
        assert_eq!(ss.universe(), 7);
        // 6 - 3 would land on 3 < 4: reorders.
        assert!(ss.decrement(4, 3).is_err());
        assert!(ss.decrement(4, 2).is_err());
    }

    proptest! {
        #[test]
        fn matches_sorted_model(ops in proptest::collection::vec((0u8..4, any::<usize>(), any::<usize>(), 1usize..4), 1..300)) {
            let mut universe = 50;
            let mut s = SampledSa::new(universe);
            let mut m: Vec<usize> = Vec::new();
            for (kind, a, b, k) in ops {
                match kind {
                    0 => {
                        let t = b % universe + 1;
                        if m.contains(&t) { continue; }
                        let i = a % (m.len() + 1) + 1;
                        s.insert(i, t).unwrap();
                        m.insert(i - 1, t);
                    }
                    1 if !m.is_empty() => {
                        let i = a % m.len() + 1;
                        prop_assert_eq!(s.delete(i).unwrap(), m.remove(i - 1));
                    }
                    2 => {
                        let t = b % (universe + 2);
                        let before = s.values();
                        s.increment(t, k).unwrap();
                        for v in m.iter_mut() { if *v > t { *v += k; } }
                        universe += k;
                        s.decrement(t, k).unwrap();
                        prop_assert_eq!(s.values(), before);
                        universe -= k;
                        s.increment(t, k).unwrap();
                        universe += k;
                    }
                    _ => {}
                }
                prop_assert_eq!(s.universe(), universe);
                prop_assert_eq!(s.values(), m.clone());
            }
            let mut sorted = m.clone();
            sorted.sort_unstable();
            for (k, &v) in sorted.iter().enumerate() {
                let run = s.order(k + 1).unwrap();
                prop_assert_eq!(m[run - 1], v);
                prop_assert_eq!(s.access(run).unwrap(), v);
            }
            for t in 0..universe + 3 {
                prop_assert_eq!(s.count(t), m.iter().filter(|&&v| v < t).count());
            }
        }
    }
}
