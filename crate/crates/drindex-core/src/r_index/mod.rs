//! The dynamic r-index: queries over the run-length BWT and the two sampled
//! suffix arrays, plus in-place text edits (see [`DynamicRIndex::insert_char`],
//! [`DynamicRIndex::insert_string`] and [`DynamicRIndex::delete_substring`]).

mod update;

use alloc::vec::Vec;

use crate::rlbwt::RlbwtIndex;
use crate::sampled_sa::SampledSa;
use crate::{Error, Result, SENTINEL};

pub use update::{dynamic_lf, IterationObserver, IterationState, LfWindow, UpdateStats};

/// One text edit. Positions are 1-based against the text before the edit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditOp {
    /// `T[1..i-1] ch T[i..n]`.
    InsertChar { i: usize, ch: u8 },
    /// `T[1..i-1] p T[i..n]`.
    InsertString { i: usize, p: Vec<u8> },
    /// `T[1..i-1] T[i+m..n]`.
    DeleteSubstring { i: usize, m: usize },
}

impl EditOp {
    /// Checks the edit against a text of length `n` (sentinel included).
    /// Nothing may be placed after the sentinel or remove it.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            EditOp::InsertChar { i, ch } => {
                if *i == 0 || *i > n {
                    return Err(Error::range("insert position", *i, n));
                }
                if *ch == SENTINEL {
                    return Err(Error::InvalidArgument("cannot insert the sentinel"));
                }
            }
            EditOp::InsertString { i, p } => {
                if *i == 0 || *i > n {
                    return Err(Error::range("insert position", *i, n));
                }
                if p.is_empty() {
                    return Err(Error::InvalidArgument("empty insertion"));
                }
                if p.contains(&SENTINEL) {
                    return Err(Error::InvalidArgument("cannot insert the sentinel"));
                }
            }
            EditOp::DeleteSubstring { i, m } => {
                if *m == 0 {
                    return Err(Error::InvalidArgument("empty deletion"));
                }
                if *i == 0 || i.saturating_add(*m) > n {
                    return Err(Error::range("deletion would reach the sentinel", *i, n));
                }
            }
        }
        Ok(())
    }

    /// The text position the edit starts at.
    pub fn position(&self) -> usize {
        match self {
            EditOp::InsertChar { i, .. } | EditOp::InsertString { i, .. } | EditOp::DeleteSubstring { i, .. } => *i,
        }
    }
}

/// A range of suffix-array rows; empty when `sp == ep + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaInterval {
    pub sp: usize,
    pub ep: usize,
    /// `SA[sp]`, known whenever the interval is non-empty.
    pub sa_sp: Option<usize>,
}

impl SaInterval {
    pub fn len(&self) -> usize {
        self.ep + 1 - self.sp
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct DynamicRIndex {
    rlbwt: RlbwtIndex,
    /// SA value at the first row of each run.
    sa_s: SampledSa,
    /// SA value at the last row of each run.
    sa_e: SampledSa,
}

impl Default for DynamicRIndex {
    fn default() -> Self {
        Self::new()
    }
}

impl DynamicRIndex {
    /// The index of the empty text, i.e. of the sentinel alone.
    pub fn new() -> Self {
        DynamicRIndex {
            rlbwt: RlbwtIndex::from_bwt(&[SENTINEL]),
            sa_s: SampledSa::from_values(&[1], 1).unwrap(),
            sa_e: SampledSa::from_values(&[1], 1).unwrap(),
        }
    }

    pub fn from_parts(rlbwt: RlbwtIndex, sa_s: SampledSa, sa_e: SampledSa) -> Result<Self> {
        let r = rlbwt.run_count();
        if sa_s.len() != r || sa_e.len() != r {
            return Err(Error::InvalidArgument("sample count differs from run count"));
        }
        let n = rlbwt.len();
        if n == 0 || sa_s.universe() != n || sa_e.universe() != n {
            return Err(Error::InvalidArgument("sample universe differs from text length"));
        }
        if rlbwt.count(SENTINEL) != 1 {
            return Err(Error::InvalidArgument("BWT must hold exactly one sentinel"));
        }
        Ok(DynamicRIndex { rlbwt, sa_s, sa_e })
    }

    /// Builds the index of `body` (no sentinel) through the update path:
    /// starting from the empty text, blocks of `block` bytes are inserted at
    /// position 1 from the last block to the first.
    pub fn from_text(body: &[u8], block: usize) -> Result<Self> {
        if body.contains(&SENTINEL) {
            return Err(Error::InvalidArgument("input contains the sentinel byte"));
        }
        if block == 0 {
            return Err(Error::InvalidArgument("block size must be positive"));
        }
        let mut ix = Self::new();
        let mut end = body.len();
        while end > 0 {
            let start = end.saturating_sub(block);
            ix.insert_string(1, &body[start..end])?;
            end = start;
        }
        Ok(ix)
    }

    /// Text length n, sentinel included.
    pub fn len(&self) -> usize {
        self.rlbwt.len()
    }

    /// Always false: the sentinel is always present.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn run_count(&self) -> usize {
        self.rlbwt.run_count()
    }

    pub fn rlbwt(&self) -> &RlbwtIndex {
        &self.rlbwt
    }

    pub fn sa_s(&self) -> &SampledSa {
        &self.sa_s
    }

    pub fn sa_e(&self) -> &SampledSa {
        &self.sa_e
    }

    /// Cumulative tree-node visits over every structure in the index.
    pub fn visits(&self) -> u64 {
        self.rlbwt.visits() + self.sa_s.visits() + self.sa_e.visits()
    }

    /// Decodes the text (sentinel included) by walking LF from the `$` row.
    pub fn text(&self) -> Result<Vec<u8>> {
        let n = self.len();
        let mut out = alloc::vec![SENTINEL; n];
        let mut row = 1;
        for k in (0..n - 1).rev() {
            out[k] = self.rlbwt.char_at(row)?;
            row = self.rlbwt.lf(row)?;
        }
        Ok(out)
    }

    fn check_text_pos(&self, what: &'static str, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            Err(Error::range(what, i, self.len()))
        } else {
            Ok(())
        }
    }

    /// `φ⁻¹(i) = SA[ISA[i] + 1]`, wrapping from the last row to the first.
    pub fn phi_inverse(&self, i: usize) -> Result<usize> {
        self.check_text_pos("phi_inverse", i)?;
        let r = self.run_count();
        let j = self.sa_e.order(self.sa_e.count(i + 1))?;
        let next = if j == r { 1 } else { j + 1 };
        Ok(i - self.sa_e.access(j)? + self.sa_s.access(next)?)
    }

    /// `φ(i) = SA[ISA[i] - 1]`, wrapping from the first row to the last.
    pub fn phi(&self, i: usize) -> Result<usize> {
        self.check_text_pos("phi", i)?;
        let r = self.run_count();
        let k = self.sa_s.order(self.sa_s.count(i + 1))?;
        let prev = if k == 1 { r } else { k - 1 };
        Ok(i - self.sa_s.access(k)? + self.sa_e.access(prev)?)
    }

    /// `ISA[i]` and the number of inverse-LF steps it took: the walk starts at
    /// the run whose start sample is the largest value not above `i`.
    pub(crate) fn isa_walk(&self, i: usize) -> Result<(usize, usize)> {
        self.check_text_pos("isa", i)?;
        let lam = self.sa_s.order(self.sa_s.count(i + 1))?;
        let mut row = self.rlbwt.run_start(lam);
        let steps = i - self.sa_s.access(lam)?;
        for _ in 0..steps {
            row = self.rlbwt.lf_inverse(row)?;
        }
        Ok((row, steps))
    }

    /// `ISA[i]`.
    pub fn comp_isa2(&self, i: usize) -> Result<usize> {
        self.isa_walk(i).map(|(row, _)| row)
    }

    /// `ISA[i - 1]`, with `ISA[0] = ISA[n]`.
    pub fn comp_isa1(&self, i: usize) -> Result<usize> {
        self.rlbwt.lf(self.comp_isa2(i)?)
    }

    /// `T[i - 1]`, with `T[0] = T[n]`.
    pub fn comp_t(&self, i: usize) -> Result<u8> {
        self.rlbwt.char_at(self.comp_isa2(i)?)
    }

    /// Backward search for `pattern`, carrying `SA[sp]` along.
    ///
    /// The carried value follows the top row: if the top row's character is
    /// the next pattern symbol, the new top row is its LF image and the value
    /// drops by one; otherwise the new top row is the image of the first
    /// occurrence below it, which starts a run, so its value is a start sample.
    pub fn backward_search(&self, pattern: &[u8]) -> Result<SaInterval> {
        if pattern.is_empty() {
            return Err(Error::InvalidArgument("empty pattern"));
        }
        let n = self.len();
        let (mut sp, mut ep, mut toe) = (1, n, n);
        for &c in pattern.iter().rev() {
            let empty = SaInterval { sp: 1, ep: 0, sa_sp: None };
            if c == SENTINEL {
                return Ok(empty);
            }
            let before = self.rlbwt.rank(sp - 1, c)?;
            let upto = self.rlbwt.rank(ep, c)?;
            if before == upto {
                return Ok(empty);
            }
            toe = if self.rlbwt.char_at(sp)? == c {
                toe - 1
            } else {
                let pos = self.rlbwt.select(before + 1, c).ok_or(Error::Internal("backward search select"))?;
                self.sa_s.access(self.rlbwt.run_index(pos)?)? - 1
            };
            let base = self.rlbwt.lex_count(c);
            sp = base + before + 1;
            ep = base + upto;
        }
        Ok(SaInterval { sp, ep, sa_sp: Some(toe) })
    }

    /// Number of occurrences of `pattern`.
    pub fn count(&self, pattern: &[u8]) -> Result<usize> {
        self.backward_search(pattern).map(|iv| iv.len())
    }

    /// `SA[sp]` of the final interval; fails on an empty match.
    pub fn toehold_sa_sp(&self, pattern: &[u8]) -> Result<usize> {
        self.backward_search(pattern)?.sa_sp.ok_or(Error::Precondition("pattern does not occur"))
    }

    /// Sorted start positions of `pattern`.
    pub fn locate(&self, pattern: &[u8]) -> Result<Vec<usize>> {
        let iv = self.backward_search(pattern)?;
        let Some(mut v) = iv.sa_sp else { return Ok(Vec::new()) };
        let mut out = Vec::with_capacity(iv.len());
        out.push(v);
        for _ in 1..iv.len() {
            v = self.phi_inverse(v)?;
            out.push(v);
        }
        out.sort_unstable();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bootstrap_index, build_snapshot};
    use alloc::vec;

    fn bbabba() -> DynamicRIndex {
        bootstrap_index(b"bbabba").unwrap()
    }

    #[test]
    fn worked_example_queries() {
        let ix = bbabba();
        assert_eq!(ix.phi_inverse(5), Ok(2));
        assert_eq!(ix.phi_inverse(7), Ok(6));
        assert_eq!(ix.phi(2), Ok(5));
        assert_eq!(ix.phi(6), Ok(7));
        assert_eq!(ix.phi(ix.phi_inverse(5).unwrap()), Ok(5));
        let mut v = 7;
        let mut chain = vec![v];
        for _ in 1..7 {
            v = ix.phi_inverse(v).unwrap();
            chain.push(v);
        }
        assert_eq!(chain, vec![7, 6, 3, 5, 2, 4, 1]);
        assert_eq!(ix.comp_isa2(6), Ok(2));
        assert_eq!(ix.comp_isa1(6), Ok(4));
        assert_eq!(ix.comp_t(6), Ok(b'b'));
        assert_eq!(ix.text().unwrap(), b"bbabba\0".to_vec());
    }

    #[test]
    fn count_locate_toehold() {
        let ix = bbabba();
        assert_eq!(ix.count(b"ab"), Ok(1));
        assert_eq!(ix.count(b"b"), Ok(4));
        assert_eq!(ix.count(b"zz"), Ok(0));
        assert_eq!(ix.locate(b"ab"), Ok(vec![3]));
        assert_eq!(ix.locate(b"bb"), Ok(vec![1, 4]));
        assert_eq!(ix.locate(b"$x"), Ok(vec![]));
        assert_eq!(ix.locate(b"\0"), Ok(vec![]));
        assert_eq!(ix.toehold_sa_sp(b"ab"), Ok(3));
        assert_eq!(ix.toehold_sa_sp(b"bbabba"), Ok(1));
        assert!(ix.toehold_sa_sp(b"zz").is_err());
        assert!(ix.count(b"").is_err());
        let iv = ix.backward_search(b"ab").unwrap();
        assert_eq!((iv.sp, iv.ep), (3, 3));
    }

    #[test]
    fn toehold_matches_snapshot() {
        let text = b"abaababaabaababaababa\0";
        let snap = build_snapshot(text).unwrap();
        let ix = snap.to_index().unwrap();
        for a in 0..text.len() - 1 {
            for b in a + 1..(a + 6).min(text.len()) {
                let p = &text[a..b];
                let iv = ix.backward_search(p).unwrap();
                assert_eq!(iv.sa_sp, Some(snap.sa[iv.sp - 1]), "pattern {p:?}");
            }
        }
    }

    #[test]
    fn edit_validation() {
        assert!(EditOp::InsertChar { i: 8, ch: b'a' }.validate(7).is_err());
        assert!(EditOp::InsertChar { i: 7, ch: b'a' }.validate(7).is_ok());
        assert!(EditOp::InsertChar { i: 1, ch: 0 }.validate(7).is_err());
        assert!(EditOp::InsertString { i: 1, p: vec![] }.validate(7).is_err());
        assert!(EditOp::DeleteSubstring { i: 6, m: 1 }.validate(7).is_ok());
        assert!(EditOp::DeleteSubstring { i: 7, m: 1 }.validate(7).is_err());
        assert!(EditOp::DeleteSubstring { i: 1, m: 0 }.validate(7).is_err());
    }
}
