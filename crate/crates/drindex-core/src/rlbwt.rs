//! Dynamic run-length BWT.
//!
//! Four sequences describe the r runs `(c_1, l_1) .. (c_r, l_r)`:
//! - `s1`: run heads in BWT order;
//! - `s2`: run lengths in BWT order;
//! - `s3`: run lengths in (head, run index) order, the order Π;
//! - `s4`: r + 1 head gaps in Π order, `c_Π[1] - 0, c_Π[2] - c_Π[1], .., 255 - c_Π[r]`.
//!
//! With these, `lex_count` is one search on `s4` and one prefix sum on `s3`,
//! and rank/select reduce to rank/select on `s1` plus sums over the contiguous
//! block of `s3` holding the runs of one head.

use alloc::vec::Vec;

use crate::dyn_seq::{CharSequence, PartialSumList};
use crate::{Error, Result};

/// Largest symbol; closes the last `s4` gap.
const MAX_SYMBOL: usize = 255;

/// One maximal run of equal BWT characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub ch: u8,
    pub len: usize,
}

/// Where [`RlbwtIndex::insert_char`] placed the new character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    /// Strictly inside a run with the same head; no run boundary moved.
    Lengthened { run: usize },
    /// Prepended to run `run`, which now starts at the new character.
    ExtendedStart { run: usize },
    /// Appended to run `run`, which now ends at the new character.
    ExtendedEnd { run: usize },
    /// A new run `(ch, 1)` with index `run`.
    NewRun { run: usize },
    /// Strictly inside run `run` with a different head: the run was split and
    /// the new character became run `run + 1`, between the halves.
    Split { run: usize },
}

/// What [`RlbwtIndex::delete_char`] did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeleteOutcome {
    /// Run `run` lost one character and still exists.
    Shortened { run: usize, at_start: bool, at_end: bool },
    /// Run `run` had length 1 and is gone. Runs `run - 1` and `run` may now
    /// share a head; merging them is the caller's job.
    Removed { run: usize },
}

#[derive(Clone, Debug)]
pub struct RlbwtIndex {
    s1: CharSequence,
    s2: PartialSumList,
    s3: PartialSumList,
    s4: PartialSumList,
}

impl Default for RlbwtIndex {
    fn default() -> Self {
        Self::new()
    }
}

impl RlbwtIndex {
    pub fn new() -> Self {
        RlbwtIndex {
            s1: CharSequence::new(),
            s2: PartialSumList::new(),
            s3: PartialSumList::new(),
            s4: PartialSumList::from_slice(&[MAX_SYMBOL]),
        }
    }

    /// Builds from a run list. Runs must have positive length; adjacent runs
    /// may share a head (see [`RlbwtIndex::check_quiescent`]).
    pub fn from_runs(runs: &[Run]) -> Result<Self> {
        if runs.iter().any(|r| r.len == 0) {
            return Err(Error::InvalidArgument("run of length zero"));
        }
        let heads: Vec<u8> = runs.iter().map(|r| r.ch).collect();
        let lens: Vec<usize> = runs.iter().map(|r| r.len).collect();
        let mut order: Vec<usize> = (0..runs.len()).collect();
        order.sort_by_key(|&k| (runs[k].ch, k));
        let s3: Vec<usize> = order.iter().map(|&k| runs[k].len).collect();
        let mut s4 = Vec::with_capacity(runs.len() + 1);
        let mut prev = 0;
        for &k in &order {
            s4.push(runs[k].ch as usize - prev);
            prev = runs[k].ch as usize;
        }
        s4.push(MAX_SYMBOL - prev);
        Ok(RlbwtIndex {
            s1: CharSequence::from_slice(&heads),
            s2: PartialSumList::from_slice(&lens),
            s3: PartialSumList::from_slice(&s3),
            s4: PartialSumList::from_slice(&s4),
        })
    }

    pub fn from_bwt(bwt: &[u8]) -> Self {
        let mut runs: Vec<Run> = Vec::new();
        for &c in bwt {
            match runs.last_mut() {
                Some(r) if r.ch == c => r.len += 1,
                _ => runs.push(Run { ch: c, len: 1 }),
            }
        }
        Self::from_runs(&runs).expect("runs decoded from a byte string are non-empty")
    }

    /// BWT length n.
    pub fn len(&self) -> usize {
        self.s2.total()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of runs r.
    pub fn run_count(&self) -> usize {
        self.s1.len()
    }

    pub fn runs(&self) -> Vec<Run> {
        self.s1.to_vec().into_iter().zip(self.s2.to_vec()).map(|(ch, len)| Run { ch, len }).collect()
    }

    pub fn to_bwt(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len());
        for r in self.runs() {
            out.extend(core::iter::repeat(r.ch).take(r.len));
        }
        out
    }

    /// The raw sequences `(s1, s2, s3, s4)`, the form serialized to disk.
    pub fn sequences(&self) -> (Vec<u8>, Vec<usize>, Vec<usize>, Vec<usize>) {
        (self.s1.to_vec(), self.s2.to_vec(), self.s3.to_vec(), self.s4.to_vec())
    }

    /// Rebuilds from raw sequences, rejecting any `s3`/`s4` that disagree
    /// with the runs described by `s1`/`s2`.
    pub fn from_sequences(s1: &[u8], s2: &[usize], s3: &[usize], s4: &[usize]) -> Result<Self> {
        if s1.len() != s2.len() {
            return Err(Error::InvalidArgument("s1 and s2 differ in length"));
        }
        let runs: Vec<Run> = s1.iter().zip(s2).map(|(&ch, &len)| Run { ch, len }).collect();
        let rb = Self::from_runs(&runs)?;
        if rb.s3.to_vec() != s3 || rb.s4.to_vec() != s4 {
            return Err(Error::InvalidArgument("s3/s4 inconsistent with s1/s2"));
        }
        Ok(rb)
    }

    /// Cumulative tree-node visits over all four sequences.
    pub fn visits(&self) -> u64 {
        self.s1.visits() + self.s2.visits() + self.s3.visits() + self.s4.visits()
    }

    /// Quiescent-state invariants: no two adjacent runs share a head, and the
    /// four sequences agree with each other.
    pub fn check_quiescent(&self) -> Result<()> {
        let heads = self.s1.to_vec();
        if heads.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Internal("adjacent runs share a head"));
        }
        let (s1, s2, s3, s4) = self.sequences();
        Self::from_sequences(&s1, &s2, &s3, &s4).map(|_| ()).map_err(|_| Error::Internal("s3/s4 out of sync"))
    }

    // ---- queries

    /// Number of runs whose head is smaller than `c`.
    fn runs_below(&self, c: u8) -> usize {
        (self.s4.search(c as usize) - 1).min(self.run_count())
    }

    /// Number of runs whose head is at most `c`.
    fn runs_up_to(&self, c: u8) -> usize {
        if c == u8::MAX { self.run_count() } else { self.runs_below(c + 1) }
    }

    /// Position of run `w` (with head `c`) in the order Π.
    fn pi_pos(&self, w: usize, c: u8) -> usize {
        self.runs_below(c) + self.s1.rank(w, c).expect("run index in range")
    }

    /// Number of characters smaller than `c` in L.
    pub fn lex_count(&self, c: u8) -> usize {
        self.s3.sum(self.runs_below(c)).expect("prefix within s3")
    }

    /// Number of occurrences of `c` in L.
    pub fn count(&self, c: u8) -> usize {
        let j0 = self.runs_below(c);
        let k = self.s1.count(c);
        self.s3.sum(j0 + k).expect("prefix within s3") - self.s3.sum(j0).expect("prefix within s3")
    }

    /// The symbol `c` with `lex_count(c) < i <= lex_count(c) + count(c)`.
    pub fn lex_search(&self, i: usize) -> Result<u8> {
        if i == 0 || i > self.len() {
            return Err(Error::range("lex_search", i, self.len()));
        }
        let k = self.s3.search(i);
        Ok(self.s4.sum(k)? as u8)
    }

    pub fn run_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::range("run_index", i, self.len()));
        }
        Ok(self.s2.search(i))
    }

    /// The `w`-th run and its first BWT position.
    pub fn run_access(&self, w: usize) -> Result<(Run, usize)> {
        let ch = self.s1.access(w)?;
        let len = self.s2.get(w)?;
        Ok((Run { ch, len }, self.s2.sum(w - 1)? + 1))
    }

    pub(crate) fn run_start(&self, w: usize) -> usize {
        self.s2.sum(w - 1).expect("run index in range") + 1
    }

    pub(crate) fn head(&self, w: usize) -> u8 {
        self.s1.access(w).expect("run index in range")
    }

    /// Run index, run start and run of BWT position `i`.
    pub(crate) fn locate(&self, i: usize) -> Result<(usize, usize, Run)> {
        let w = self.run_index(i)?;
        let (run, start) = self.run_access(w)?;
        Ok((w, start, run))
    }

    /// `L[i]`.
    pub fn char_at(&self, i: usize) -> Result<u8> {
        let w = self.run_index(i)?;
        self.s1.access(w)
    }

    /// Occurrences of `c` in `L[1..=i]`.
    pub fn rank(&self, i: usize, c: u8) -> Result<usize> {
        if i > self.len() {
            return Err(Error::range("rank", i, self.len()));
        }
        if i == 0 {
            return Ok(0);
        }
        let w = self.s2.search(i);
        let start = self.s2.sum(w - 1)? + 1;
        let j0 = self.runs_below(c);
        let k = self.s1.rank(w - 1, c)?;
        let before = self.s3.sum(j0 + k)? - self.s3.sum(j0)?;
        if self.s1.access(w)? == c {
            Ok(before + i - start + 1)
        } else {
            Ok(before)
        }
    }

    /// Position of the `k`-th `c` in L, or `None` if there are fewer.
    pub fn select(&self, k: usize, c: u8) -> Option<usize> {
        let runs = self.s1.count(c);
        if k == 0 || runs == 0 {
            return None;
        }
        let j0 = self.runs_below(c);
        let base = self.s3.sum(j0).ok()?;
        if k > self.s3.sum(j0 + runs).ok()? - base {
            return None;
        }
        let jj = self.s3.search(base + k);
        let w = self.s1.select(jj - j0, c)?;
        let before = self.s3.sum(jj - 1).ok()? - base;
        Some(self.run_start(w) + (k - before) - 1)
    }

    pub fn lf(&self, t: usize) -> Result<usize> {
        let c = self.char_at(t)?;
        Ok(self.lex_count(c) + self.rank(t, c)?)
    }

    pub fn lf_inverse(&self, j: usize) -> Result<usize> {
        let c = self.lex_search(j)?;
        self.select(j - self.lex_count(c), c).ok_or(Error::Internal("lf_inverse: select out of range"))
    }

    // ---- navigation used by the update engine

    /// Next run after `w` whose head is `c`.
    pub(crate) fn next_run_with(&self, w: usize, c: u8) -> Option<usize> {
        let k = self.s1.rank(w, c).ok()?;
        self.s1.select(k + 1, c)
    }

    /// Previous run before `w` whose head is `c`.
    pub(crate) fn prev_run_with(&self, w: usize, c: u8) -> Option<usize> {
        let k = self.s1.rank(w - 1, c).ok()?;
        self.s1.select(k, c)
    }

    /// Smallest present head larger than `c`, wrapping to the smallest head.
    pub(crate) fn succ_head(&self, c: u8) -> u8 {
        let j = self.runs_up_to(c);
        let k = if j < self.run_count() { j + 1 } else { 1 };
        self.s4.sum(k).expect("head gap in range") as u8
    }

    /// Largest present head smaller than `c`, wrapping to the largest head.
    pub(crate) fn pred_head(&self, c: u8) -> u8 {
        let j = self.runs_below(c);
        let k = if j > 0 { j } else { self.run_count() };
        self.s4.sum(k).expect("head gap in range") as u8
    }

    pub(crate) fn first_run_with(&self, c: u8) -> usize {
        self.s1.select(1, c).expect("head is present")
    }

    pub(crate) fn last_run_with(&self, c: u8) -> usize {
        self.s1.select(self.s1.count(c), c).expect("head is present")
    }

    // ---- run-level updates

    fn insert_run(&mut self, w: usize, c: u8, len: usize) -> Result<()> {
        let jp = 1 + self.runs_below(c) + self.s1.rank(w - 1, c)?;
        let gap_base = self.s4.sum(jp - 1)?;
        self.s1.insert(w, c)?;
        self.s2.insert(w, len)?;
        self.s3.insert(jp, len)?;
        self.s4.divide(jp, c as usize - gap_base)
    }

    fn remove_run(&mut self, w: usize) -> Result<Run> {
        let c = self.s1.access(w)?;
        let jp = self.pi_pos(w, c);
        self.s1.delete(w)?;
        let len = self.s2.delete(w)?;
        self.s3.delete(jp)?;
        self.s4.merge(jp)?;
        Ok(Run { ch: c, len })
    }

    fn add_len(&mut self, w: usize, delta: isize) -> Result<()> {
        let c = self.s1.access(w)?;
        let jp = self.pi_pos(w, c);
        self.s2.add(w, delta)?;
        self.s3.add(jp, delta)
    }

    /// Splits run `w` into `(c, t)` and `(c, len - t)`, `1 <= t < len`.
    pub fn split_run(&mut self, w: usize, t: usize) -> Result<()> {
        let (run, _) = self.run_access(w)?;
        if t == 0 || t >= run.len {
            return Err(Error::Precondition("split_run: t must satisfy 1 <= t < len"));
        }
        let jp = self.pi_pos(w, run.ch);
        self.s1.insert(w + 1, run.ch)?;
        self.s2.divide(w, t)?;
        self.s3.divide(jp, t)?;
        self.s4.insert(jp + 1, 0)
    }

    /// Merges runs `w` and `w + 1`, which must share a head.
    pub fn merge_runs(&mut self, w: usize) -> Result<()> {
        if w == 0 || w >= self.run_count() {
            return Err(Error::range("merge_runs", w, self.run_count()));
        }
        let c = self.s1.access(w)?;
        if self.s1.access(w + 1)? != c {
            return Err(Error::Precondition("merge_runs: heads differ"));
        }
        let jp = self.pi_pos(w, c);
        self.s1.delete(w + 1)?;
        self.s2.merge(w)?;
        self.s3.merge(jp)?;
        self.s4.delete(jp + 1).map(|_| ())
    }

    /// Inserts `ch` so that it becomes `L[i]`, `1 <= i <= n + 1`.
    ///
    /// Landing strictly inside a run with a different head splits that run
    /// first and then inserts the new run between the halves.
    pub fn insert_char(&mut self, ch: u8, i: usize) -> Result<InsertOutcome> {
        let n = self.len();
        if i == 0 || i > n + 1 {
            return Err(Error::range("insert_char", i, n));
        }
        let w = if i <= n {
            let (w, start, run) = self.locate(i)?;
            if start < i {
                if run.ch == ch {
                    self.add_len(w, 1)?;
                    return Ok(InsertOutcome::Lengthened { run: w });
                }
                self.split_run(w, i - start)?;
                self.insert_run(w + 1, ch, 1)?;
                return Ok(InsertOutcome::Split { run: w });
            }
            w
        } else {
            self.run_count() + 1
        };
        // Boundary between runs w - 1 and w.
        if w <= self.run_count() && self.head(w) == ch {
            self.add_len(w, 1)?;
            Ok(InsertOutcome::ExtendedStart { run: w })
        } else if w > 1 && self.head(w - 1) == ch {
            self.add_len(w - 1, 1)?;
            Ok(InsertOutcome::ExtendedEnd { run: w - 1 })
        } else {
            self.insert_run(w, ch, 1)?;
            Ok(InsertOutcome::NewRun { run: w })
        }
    }

    /// Deletes `L[i]`.
    pub fn delete_char(&mut self, i: usize) -> Result<DeleteOutcome> {
        let (w, start, run) = self.locate(i)?;
        if run.len == 1 {
            self.remove_run(w)?;
            Ok(DeleteOutcome::Removed { run: w })
        } else {
            self.add_len(w, -1)?;
            Ok(DeleteOutcome::Shortened { run: w, at_start: i == start, at_end: i == start + run.len - 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn bbabba() -> RlbwtIndex {
        RlbwtIndex::from_bwt(b"abbbba\0")
    }

    #[test]
    fn queries_on_abbbba() {
        let rb = bbabba();
        assert_eq!(rb.rank(4, b'b'), Ok(3));
        assert_eq!(rb.rank(0, b'a'), Ok(0));
        assert_eq!(rb.rank(7, 0), Ok(1));
        assert!(rb.rank(8, b'a').is_err());
        assert_eq!(rb.select(2, b'b'), Some(3));
        assert_eq!(rb.select(2, b'a'), Some(6));
        assert_eq!(rb.select(5, b'b'), None);
        assert_eq!(rb.lex_count(b'b'), 3);
        assert_eq!(rb.lex_count(0), 0);
        assert_eq!(rb.lex_count(b'a'), 1);
        assert_eq!(rb.lex_search(4), Ok(b'b'));
        assert_eq!(rb.lex_search(1), Ok(0));
        assert_eq!(rb.lex_search(2), Ok(b'a'));
        assert_eq!(rb.run_access(2), Ok((Run { ch: b'b', len: 4 }, 2)));
        assert_eq!(rb.run_access(1), Ok((Run { ch: b'a', len: 1 }, 1)));
        assert_eq!(rb.run_access(4), Ok((Run { ch: 0, len: 1 }, 7)));
        assert_eq!(rb.run_index(4), Ok(2));
        assert_eq!(rb.run_index(1), Ok(1));
        assert_eq!(rb.run_index(7), Ok(4));
        assert_eq!(rb.lf(5), Ok(7));
        assert_eq!(rb.lf(7), Ok(1));
        assert_eq!(rb.lf(1), Ok(2));
        assert_eq!(rb.lf_inverse(7), Ok(5));
        assert_eq!(rb.lf_inverse(1), Ok(7));
        for t in 1..=7 {
            assert_eq!(rb.lf_inverse(rb.lf(t).unwrap()), Ok(t));
        }
    }

    #[test]
    fn insert_cases() {
        let mut rb = bbabba();
        assert_eq!(rb.insert_char(b'b', 3), Ok(InsertOutcome::Lengthened { run: 2 }));
        assert_eq!(rb.to_bwt(), b"abbbbba\0".to_vec());
        let mut rb = bbabba();
        assert_eq!(rb.insert_char(b'c', 6), Ok(InsertOutcome::NewRun { run: 3 }));
        assert_eq!(
            rb.runs(),
            vec![Run { ch: b'a', len: 1 }, Run { ch: b'b', len: 4 }, Run { ch: b'c', len: 1 }, Run { ch: b'a', len: 1 }, Run { ch: 0, len: 1 }]
        );
        let mut rb = bbabba();
        assert_eq!(rb.insert_char(b'a', 4), Ok(InsertOutcome::Split { run: 2 }));
        assert_eq!(rb.to_bwt(), b"abbabba\0".to_vec());
        rb.check_quiescent().unwrap();
        let mut e = RlbwtIndex::new();
        assert_eq!(e.insert_char(0, 1), Ok(InsertOutcome::NewRun { run: 1 }));
        assert_eq!(e.runs(), vec![Run { ch: 0, len: 1 }]);
    }

    #[test]
    fn delete_split_merge() {
        let mut rb = bbabba();
        assert_eq!(rb.delete_char(3), Ok(DeleteOutcome::Shortened { run: 2, at_start: false, at_end: false }));
        assert_eq!(rb.to_bwt(), b"abbba\0".to_vec());
        let mut rb = RlbwtIndex::from_bwt(b"aba");
        assert_eq!(rb.delete_char(2), Ok(DeleteOutcome::Removed { run: 2 }));
        assert_eq!(rb.runs(), vec![Run { ch: b'a', len: 1 }, Run { ch: b'a', len: 1 }]);
        assert!(rb.check_quiescent().is_err());
        rb.merge_runs(1).unwrap();
        assert_eq!(rb.runs(), vec![Run { ch: b'a', len: 2 }]);
        rb.check_quiescent().unwrap();
        let mut rb = RlbwtIndex::from_bwt(b"\0");
        rb.delete_char(1).unwrap();
        assert!(rb.is_empty());
        assert_eq!(rb.run_count(), 0);

        let mut rb = bbabba();
        rb.split_run(2, 1).unwrap();
        assert_eq!(rb.runs()[1..3], [Run { ch: b'b', len: 1 }, Run { ch: b'b', len: 3 }]);
        assert_eq!(rb.rank(5, b'b'), Ok(4));
        rb.merge_runs(2).unwrap();
        assert_eq!(rb.to_bwt(), b"abbbba\0".to_vec());
        rb.check_quiescent().unwrap();
        assert!(rb.split_run(2, 4).is_err());
        assert!(rb.merge_runs(1).is_err());
    }

    #[test]
    fn empty_index() {
        let rb = RlbwtIndex::new();
        assert_eq!(rb.rank(0, b'a'), Ok(0));
        assert_eq!(rb.select(1, b'a'), None);
        assert_eq!(rb.lex_count(b'a'), 0);
        assert!(rb.lex_search(1).is_err());
        assert!(rb.run_index(1).is_err());
    }

    fn naive_runs(l: &[u8]) -> Vec<Run> {
        RlbwtIndex::from_bwt(l).runs()
    }

    proptest! {
        #[test]
        fn matches_naive_string(
            init in proptest::collection::vec(0u8..4, 0..40),
            ops in proptest::collection::vec((any::<bool>(), any::<usize>(), 0u8..4), 0..200),
        ) {
            let mut rb = RlbwtIndex::from_bwt(&init);
            let mut m = init.clone();
            for (ins, i, c) in ops {
                if ins || m.is_empty() {
                    let i = i % (m.len() + 1) + 1;
                    rb.insert_char(c, i).unwrap();
                    m.insert(i - 1, c);
                } else {
                    let i = i % m.len() + 1;
                    if let DeleteOutcome::Removed { run } = rb.delete_char(i).unwrap() {
                        if run > 1 && run <= rb.run_count() && rb.head(run - 1) == rb.head(run) {
                            rb.merge_runs(run - 1).unwrap();
                        }
                    }
                    m.remove(i - 1);
                }
                prop_assert_eq!(rb.runs(), naive_runs(&m));
            }
            rb.check_quiescent().unwrap();
            let n = m.len();
            for c in 0u8..5 {
                let mut r = 0;
                for i in 0..=n {
                    prop_assert_eq!(rb.rank(i, c).unwrap(), r);
                    if m.get(i) == Some(&c) {
                        r += 1;
                        prop_assert_eq!(rb.select(r, c), Some(i + 1));
                    }
                }
                prop_assert_eq!(rb.select(r + 1, c), None);
                let below = m.iter().filter(|&&x| x < c).count();
                prop_assert_eq!(rb.lex_count(c), below);
                prop_assert_eq!(rb.count(c), r);
            }
            // LF is a bijection and inverts.
            let mut seen = vec![false; n + 1];
            for t in 1..=n {
                let u = rb.lf(t).unwrap();
                prop_assert!(!seen[u]);
                seen[u] = true;
                prop_assert_eq!(rb.lf_inverse(u).unwrap(), t);
            }
        }
    }
}
