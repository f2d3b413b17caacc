//! Literal replay of the row-by-row transformation between two texts.
//!
//! Rows are circular shifts tagged with the text they come from: `Old(k)` is
//! the shift of the current text starting at k, `New(k)` the shift of the
//! edited text. Iteration j (from the top down to 1) removes one old shift
//! and/or adds one new shift, and the rows are re-sorted each time. Shifts
//! compare by their suffix; equal suffixes put the old shift first.
//!
//! Each row carries the label the index stores for it:
//! - insertion at `i`: `Old(k)` and `New(k)` are both labelled `k`;
//! - deletion at `i`: `Old(k)` is `k`, `New(k)` is `k` below `i` and `k + m` from `i` on.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::check_text;
use crate::{EditOp, Error, Result};

/// Largest text length `replay_iterations` accepts.
pub const DEBUG_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shift {
    Old(usize),
    New(usize),
}

/// State of one iteration: the rows before it runs and what it does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub j: usize,
    /// Last column `L_j`.
    pub l: Vec<u8>,
    /// Row labels `SA_j`.
    pub sa: Vec<usize>,
    /// Row removed by this iteration, if any.
    pub x: Option<usize>,
    /// Row (in the next matrix) of the shift added by this iteration, if any.
    pub y: Option<usize>,
    /// Row labels `SA_{j-1}` after the iteration.
    pub next_sa: Vec<usize>,
    /// Positional LF: for each row, the row of the shift one position to the
    /// left in the next matrix; `None` when that shift is not present.
    pub lf: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// Indexed by `j - 1`.
    pub steps: Vec<TraceStep>,
    pub final_text: Vec<u8>,
    pub final_sa: Vec<usize>,
    pub final_l: Vec<u8>,
}

impl Trace {
    pub fn step(&self, j: usize) -> &TraceStep {
        &self.steps[j - 1]
    }
}

pub fn replay_iterations(text: &[u8], op: &EditOp) -> Result<Trace> {
    check_text(text)?;
    if text.len() > DEBUG_CAP {
        return Err(Error::InvalidArgument("text exceeds the replay cap"));
    }
    op.validate(text.len())?;
    let n = text.len();
    let mut edited = text.to_vec();
    super::apply_edit(&mut edited, op)?;
    let (insert, i, m) = match op {
        EditOp::InsertChar { i, .. } => (true, *i, 1),
        EditOp::InsertString { i, p } => (true, *i, p.len()),
        EditOp::DeleteSubstring { i, m } => (false, *i, *m),
    };
    let top = if insert { n + m } else { n };
    let removed = |j: usize| -> Option<Shift> {
        if !insert {
            Some(Shift::Old(j))
        } else if j >= i + m {
            Some(Shift::Old(j - m))
        } else if j < i {
            Some(Shift::Old(j))
        } else {
            None
        }
    };
    let added = |j: usize| -> Option<Shift> {
        if insert {
            Some(Shift::New(j))
        } else if j >= i + m {
            Some(Shift::New(j - m))
        } else if j < i {
            Some(Shift::New(j))
        } else {
            None
        }
    };
    let label = |s: Shift| -> usize {
        match s {
            Shift::Old(k) => k,
            Shift::New(k) if insert || k < i => k,
            Shift::New(k) => k + m,
        }
    };
    let body = |s: Shift| -> &[u8] {
        match s {
            Shift::Old(k) => &text[k - 1..],
            Shift::New(k) => &edited[k - 1..],
        }
    };
    let cmp = |a: &Shift, b: &Shift| -> Ordering {
        body(*a).cmp(body(*b)).then_with(|| matches!(a, Shift::New(_)).cmp(&matches!(b, Shift::New(_))))
    };
    let last = |s: Shift| -> u8 {
        match s {
            Shift::Old(k) => text[(k + n - 2) % n],
            Shift::New(k) => edited[(k + edited.len() - 2) % edited.len()],
        }
    };
    let left = |s: Shift| -> Option<Shift> {
        match s {
            Shift::Old(k) if k >= 2 => Some(Shift::Old(k - 1)),
            Shift::New(k) if k >= 2 => Some(Shift::New(k - 1)),
            _ => None,
        }
    };

    let mut cur: Vec<Shift> = (1..=n).map(Shift::Old).collect();
    cur.sort_by(cmp);
    let mut steps = Vec::with_capacity(top);
    for j in (1..=top).rev() {
        let mut nxt = cur.clone();
        let mut x = None;
        if let Some(r) = removed(j) {
            let at = cur.iter().position(|s| *s == r).ok_or(Error::Internal("replay: removed shift missing"))?;
            x = Some(at + 1);
            nxt.remove(at);
        }
        let mut y = None;
        if let Some(a) = added(j) {
            nxt.push(a);
            nxt.sort_by(cmp);
            y = Some(nxt.iter().position(|s| *s == a).unwrap() + 1);
        }
        let dollar_row = nxt.iter().position(|s| body(*s).len() == 1).map(|p| p + 1);
        let lf = cur
            .iter()
            .map(|s| match left(*s) {
                Some(t) => nxt.iter().position(|u| *u == t).map(|p| p + 1),
                None => dollar_row,
            })
            .collect();
        steps.push(TraceStep {
            j,
            l: cur.iter().map(|s| last(*s)).collect(),
            sa: cur.iter().map(|s| label(*s)).collect(),
            x,
            y,
            next_sa: nxt.iter().map(|s| label(*s)).collect(),
            lf,
        });
        cur = nxt;
    }
    steps.reverse();
    Ok(Trace {
        steps,
        final_sa: cur.iter().map(|s| label(*s)).collect(),
        final_l: cur.iter().map(|s| last(*s)).collect(),
        final_text: edited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::build_snapshot;
    use alloc::vec;

    #[test]
    fn insertion_trace_of_bbabba() {
        let t = replay_iterations(b"bbabba\0", &EditOp::InsertChar { i: 6, ch: b'b' }).unwrap();
        assert_eq!(t.step(7).l, b"abbbba\0".to_vec());
        assert_eq!(t.step(6).l, b"abbbba\0".to_vec());
        assert_eq!(t.step(7).sa, vec![8, 6, 3, 5, 2, 4, 1]);
        assert_eq!(t.step(6).sa, vec![8, 7, 3, 5, 2, 4, 1]);
        // The first iterations leave L untouched.
        assert_eq!(t.step(8).l, t.step(7).l);
        let snap = build_snapshot(b"bbabbba\0").unwrap();
        assert_eq!(t.final_sa, snap.sa);
        assert_eq!(t.final_l, snap.bwt);
    }

    #[test]
    fn deletion_trace_ends_at_edited_text() {
        let t = replay_iterations(b"bbabbba\0", &EditOp::DeleteSubstring { i: 6, m: 1 }).unwrap();
        let snap = build_snapshot(b"bbabba\0").unwrap();
        assert_eq!(t.final_l, snap.bwt);
        // Labels above the deleted block are shifted by m until the end.
        let shifted: Vec<usize> = t.final_sa.iter().map(|&v| if v > 6 { v - 1 } else { v }).collect();
        assert_eq!(shifted, snap.sa);
    }

    #[test]
    fn cap_is_enforced() {
        let mut long = vec![b'a'; DEBUG_CAP];
        long.push(0);
        assert!(replay_iterations(&long, &EditOp::InsertChar { i: 1, ch: b'a' }).is_err());
    }
}
