//! Brute-force reference implementations.
//!
//! Everything here is deliberately slow and obvious: suffix arrays come from a
//! comparison sort of explicit suffixes, LCP values from pairwise scans, and
//! the update trace from re-sorting explicit row lists. Tests and the `verify`
//! command treat these as ground truth.

mod replay;
mod trace_check;

use alloc::vec::Vec;

use crate::rlbwt::{RlbwtIndex, Run};
use crate::sampled_sa::SampledSa;
use crate::{DynamicRIndex, EditOp, Error, Result, SENTINEL};

pub use replay::{replay_iterations, Trace, TraceStep, DEBUG_CAP};
pub use trace_check::TraceChecker;

/// A text together with every array the index is compared against.
/// All stored positions and SA values are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextSnapshot {
    pub text: Vec<u8>,
    pub sa: Vec<usize>,
    /// `isa[k - 1] = ISA[k]`.
    pub isa: Vec<usize>,
    /// `lcp[0] = 0`; `lcp[k]` compares `sa[k - 1]` and `sa[k]`.
    pub lcp: Vec<usize>,
    pub bwt: Vec<u8>,
    pub runs: Vec<Run>,
    pub sa_s: Vec<usize>,
    pub sa_e: Vec<usize>,
    /// Suffix and LCP arrays of the reversed text `T[n] T[n-1] .. T[1]`.
    pub sa_rev: Vec<usize>,
    pub lcp_rev: Vec<usize>,
}

/// Checks that `text` ends with the only sentinel.
pub fn check_text(text: &[u8]) -> Result<()> {
    match text.iter().position(|&c| c == SENTINEL) {
        Some(p) if p + 1 == text.len() => Ok(()),
        Some(_) => Err(Error::InvalidArgument("sentinel must occur exactly once, at the end")),
        None => Err(Error::InvalidArgument("text must end with the sentinel")),
    }
}

/// Sorts all suffixes by direct comparison. Values are 1-based.
pub fn suffix_array(text: &[u8]) -> Vec<usize> {
    let mut sa: Vec<usize> = (1..=text.len()).collect();
    sa.sort_by(|&a, &b| text[a - 1..].cmp(&text[b - 1..]));
    sa
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn lcp_array(text: &[u8], sa: &[usize]) -> Vec<usize> {
    let mut lcp = alloc::vec![0; sa.len()];
    for k in 1..sa.len() {
        lcp[k] = common_prefix(&text[sa[k - 1] - 1..], &text[sa[k] - 1..]);
    }
    lcp
}

pub fn build_snapshot(text: &[u8]) -> Result<TextSnapshot> {
    check_text(text)?;
    let n = text.len();
    let sa = suffix_array(text);
    let mut isa = alloc::vec![0; n];
    for (k, &v) in sa.iter().enumerate() {
        isa[v - 1] = k + 1;
    }
    let lcp = lcp_array(text, &sa);
    let bwt: Vec<u8> = sa.iter().map(|&v| text[(v + n - 2) % n]).collect();
    let runs = RlbwtIndex::from_bwt(&bwt).runs();
    let (sa_s, sa_e) = samples(&bwt, &sa);
    let rev: Vec<u8> = text.iter().rev().copied().collect();
    let sa_rev = suffix_array(&rev);
    let lcp_rev = lcp_array(&rev, &sa_rev);
    Ok(TextSnapshot { text: text.to_vec(), sa, isa, lcp, bwt, runs, sa_s, sa_e, sa_rev, lcp_rev })
}

/// SA values at the first and last row of every run of `l`.
pub fn samples(l: &[u8], sa: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut ss = Vec::new();
    let mut se = Vec::new();
    for k in 0..l.len() {
        if k == 0 || l[k] != l[k - 1] {
            ss.push(sa[k]);
        }
        if k + 1 == l.len() || l[k] != l[k + 1] {
            se.push(sa[k]);
        }
    }
    (ss, se)
}

impl TextSnapshot {
    /// `max(LCP^R[p], LCP^R[p + 1])` where `p` is the position of `n - i + 2`
    /// in `SA^R`, i.e. the row of the reversed prefix `T[i - 1] .. T[1]`.
    /// Entries outside `1..=n` count as 0, and the value is 0 for `i = 1`.
    pub fn reversed_lcp_bound(&self, i: usize) -> usize {
        let n = self.text.len();
        if i <= 1 || i > n + 1 {
            return 0;
        }
        let target = n - i + 2;
        let p = self.sa_rev.iter().position(|&v| v == target).expect("suffix present") + 1;
        let at = |k: usize| if k >= 1 && k <= n { self.lcp_rev[k - 1] } else { 0 };
        at(p).max(at(p + 1))
    }

    /// Builds the index directly from the snapshot arrays.
    pub fn to_index(&self) -> Result<DynamicRIndex> {
        let n = self.text.len();
        let rlbwt = RlbwtIndex::from_runs(&self.runs)?;
        let sa_s = SampledSa::from_values(&self.sa_s, n)?;
        let sa_e = SampledSa::from_values(&self.sa_e, n)?;
        DynamicRIndex::from_parts(rlbwt, sa_s, sa_e)
    }
}

/// Builds an index for `body` (no sentinel) from the naive snapshot.
pub fn bootstrap_index(body: &[u8]) -> Result<DynamicRIndex> {
    let mut text = body.to_vec();
    text.push(SENTINEL);
    build_snapshot(&text)?.to_index()
}

/// Mean and maximum of the LCP array, and the run count of the BWT.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LcpStats {
    pub sum: usize,
    pub len: usize,
    pub max: usize,
    pub runs: usize,
}

impl LcpStats {
    pub fn avg(&self) -> f64 {
        if self.len == 0 { 0.0 } else { self.sum as f64 / self.len as f64 }
    }
}

pub fn lcp_stats(snap: &TextSnapshot) -> LcpStats {
    LcpStats {
        sum: snap.lcp.iter().sum(),
        len: snap.lcp.len(),
        max: snap.lcp.iter().copied().max().unwrap_or(0),
        runs: snap.runs.len(),
    }
}

/// Start positions of `pattern` in `text`. The sentinel never matches.
pub fn naive_locate(text: &[u8], pattern: &[u8]) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument("empty pattern"));
    }
    if pattern.contains(&SENTINEL) {
        return Ok(Vec::new());
    }
    Ok(text.windows(pattern.len()).enumerate().filter(|(_, w)| *w == pattern).map(|(k, _)| k + 1).collect())
}

pub fn naive_count(text: &[u8], pattern: &[u8]) -> Result<usize> {
    naive_locate(text, pattern).map(|v| v.len())
}

/// Applies an edit to an explicit text (sentinel included), checking the same
/// preconditions as the index.
pub fn apply_edit(text: &mut Vec<u8>, op: &EditOp) -> Result<()> {
    op.validate(text.len())?;
    match op {
        EditOp::InsertChar { i, ch } => text.insert(i - 1, *ch),
        EditOp::InsertString { i, p } => {
            text.splice(i - 1..i - 1, p.iter().copied());
        }
        EditOp::DeleteSubstring { i, m } => {
            text.drain(i - 1..i - 1 + m);
        }
    }
    Ok(())
}

/// Compares an index against the snapshot of `text`. Returns a list of
/// human-readable differences, empty when they agree.
pub fn diff_index(ix: &DynamicRIndex, text: &[u8]) -> Result<Vec<alloc::string::String>> {
    use alloc::format;
    let snap = build_snapshot(text)?;
    let mut out = Vec::new();
    if ix.len() != text.len() {
        out.push(format!("n: index {} vs text {}", ix.len(), text.len()));
    }
    let runs = ix.rlbwt().runs();
    if runs != snap.runs {
        let k = runs.iter().zip(&snap.runs).position(|(a, b)| a != b).unwrap_or(runs.len().min(snap.runs.len()));
        out.push(format!(
            "rlbwt: first difference at run {} (index {:?} vs oracle {:?}); r {} vs {}",
            k + 1,
            runs.get(k),
            snap.runs.get(k),
            runs.len(),
            snap.runs.len()
        ));
    }
    for (name, got, want) in [("sa_s", ix.sa_s().values(), &snap.sa_s), ("sa_e", ix.sa_e().values(), &snap.sa_e)] {
        if &got != want {
            let k = got.iter().zip(want).position(|(a, b)| a != b).unwrap_or(got.len().min(want.len()));
            out.push(format!(
                "{name}: first difference at run {} (index {:?} vs oracle {:?})",
                k + 1,
                got.get(k),
                want.get(k)
            ));
        }
    }
    Ok(out)
}
