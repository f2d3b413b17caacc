//! Text edits applied to the index in place.
//!
//! An edit is carried out as a sequence of iterations j = top, .., 1, each
//! turning the row set of one intermediate matrix into the next: a row is
//! removed, a row is added, or both. Iterations that leave L and the samples
//! unchanged are skipped: the ones above the edited block collapse into one
//! relabelling of the samples, and the ones below it stop as soon as the row
//! being added lands where the row being removed was.
//!
//! Sampled values are row labels, and labels are fixed for the whole update:
//! - insertion at `i`: every value above `i` is shifted by `m` up front, so an
//!   old shift and the new shift with the same suffix share a label;
//! - deletion at `i`: new shifts at or after `i` keep the label of the old
//!   shift with the same suffix; values from `i + m` on are shifted down at
//!   the end.
//!
//! Each iteration only needs the SA values next to the tracked rows, and
//! those are carried along: one step of LF moves a row's neighbour value down
//! by one, except where the neighbour comes from another run, in which case
//! it is a run sample.

use core::time::Duration;

use super::DynamicRIndex;
use crate::rlbwt::{DeleteOutcome, InsertOutcome, RlbwtIndex};
use crate::{EditOp, Error, Result, SENTINEL};

/// What an update cost.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// Iterations below the edited block that changed the index.
    pub k: usize,
    /// Iterations actually executed.
    pub iterations: usize,
    /// Inverse-LF steps spent locating `ISA[i]`.
    pub isa_walk: usize,
    /// Wall time, when the `std` feature is on.
    pub elapsed: Option<Duration>,
}

/// How LF is computed on the L column of one intermediate matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LfWindow {
    /// `LF(t) = C[c] + rank_c(L, t)`.
    Plain,
    /// Inside an inserted block: the old shift at `i - 1` is still present but
    /// its left neighbour is counted one row higher. `q` is the row of the new
    /// shift at `i + m`.
    Insert { tprev: u8, q: usize },
    /// Inside a deleted block: row `p` holds the new shift at `i`, whose left
    /// neighbour is not present yet. At `i = 1` (`tprev` is the sentinel) that
    /// neighbour is the `$` shift, always in row 1.
    Delete { tprev: u8, p: usize },
}

/// The formula LF of one iteration; `None` at the row with no image.
pub fn dynamic_lf(rb: &RlbwtIndex, window: &LfWindow, t: usize) -> Result<Option<usize>> {
    let plain = rb.lf(t)?;
    match *window {
        LfWindow::Plain => Ok(Some(plain)),
        LfWindow::Insert { tprev, q } => {
            let c = rb.char_at(t)?;
            let kappa = tprev < c || (tprev == c && q <= t);
            Ok(Some(plain + usize::from(kappa)))
        }
        LfWindow::Delete { tprev, p } => {
            if t == p {
                return Ok((tprev == SENTINEL).then_some(1));
            }
            let c = rb.char_at(t)?;
            let kappa = tprev < c || (tprev == c && p < t);
            Ok(Some(plain - usize::from(kappa)))
        }
    }
}

/// The rows an executed iteration works on, reported before it mutates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationState {
    pub j: usize,
    /// Row removed from the current matrix.
    pub x: Option<usize>,
    /// `SA_j[x + 1]` and `SA_j[x - 1]` (wrapping).
    pub x_sa_next: usize,
    pub x_sa_prev: usize,
    /// Row added in the next matrix.
    pub y: Option<usize>,
    /// `SA_(j-1)[y + 1]` and `SA_(j-1)[y - 1]` (wrapping).
    pub y_sa_next: usize,
    pub y_sa_prev: usize,
    /// LF on the current matrix.
    pub window: LfWindow,
}

impl IterationState {
    fn at(j: usize, window: LfWindow) -> Self {
        IterationState { j, x: None, x_sa_next: 0, x_sa_prev: 0, y: None, y_sa_next: 0, y_sa_prev: 0, window }
    }

    fn with_x(mut self, x: (usize, usize, usize)) -> Self {
        (self.x, self.x_sa_next, self.x_sa_prev) = (Some(x.0), x.1, x.2);
        self
    }

    fn with_y(mut self, y: (usize, usize, usize)) -> Self {
        (self.y, self.y_sa_next, self.y_sa_prev) = (Some(y.0), y.1, y.2);
        self
    }
}

/// Hook called once per executed iteration, before it changes the index.
pub trait IterationObserver {
    fn on_iteration(&mut self, ix: &DynamicRIndex, st: &IterationState);
}

impl IterationObserver for () {
    fn on_iteration(&mut self, _: &DynamicRIndex, _: &IterationState) {}
}

/// A tracked row with the SA values just below and above it.
type Row = (usize, usize, usize);

#[cfg(feature = "std")]
struct Clock(std::time::Instant);

#[cfg(feature = "std")]
impl Clock {
    fn start() -> Self {
        Clock(std::time::Instant::now())
    }

    fn elapsed(&self) -> Option<Duration> {
        Some(self.0.elapsed())
    }
}

#[cfg(not(feature = "std"))]
struct Clock;

#[cfg(not(feature = "std"))]
impl Clock {
    fn start() -> Self {
        Clock
    }

    fn elapsed(&self) -> Option<Duration> {
        None
    }
}

impl DynamicRIndex {
    /// Inserts `ch` before text position `i`.
    pub fn insert_char(&mut self, i: usize, ch: u8) -> Result<UpdateStats> {
        self.apply_observed(&EditOp::InsertChar { i, ch }, &mut ())
    }

    /// Inserts `p` before text position `i`.
    pub fn insert_string(&mut self, i: usize, p: &[u8]) -> Result<UpdateStats> {
        self.apply_observed(&EditOp::InsertString { i, p: p.to_vec() }, &mut ())
    }

    /// Deletes `T[i..i+m-1]`.
    pub fn delete_substring(&mut self, i: usize, m: usize) -> Result<UpdateStats> {
        self.apply_observed(&EditOp::DeleteSubstring { i, m }, &mut ())
    }

    pub fn apply(&mut self, op: &EditOp) -> Result<UpdateStats> {
        self.apply_observed(op, &mut ())
    }

    /// Applies `op`, reporting every executed iteration to `obs`.
    ///
    /// The edit is validated first; a rejected edit leaves the index as it
    /// was. An error after that is an internal invariant failure and leaves
    /// the index unusable.
    pub fn apply_observed<O: IterationObserver>(&mut self, op: &EditOp, obs: &mut O) -> Result<UpdateStats> {
        op.validate(self.len())?;
        let clock = Clock::start();
        let mut stats = match op {
            EditOp::InsertChar { i, ch } => self.insert_block(*i, &[*ch], obs)?,
            EditOp::InsertString { i, p } => self.insert_block(*i, p, obs)?,
            EditOp::DeleteSubstring { i, m } => self.delete_block(*i, *m, obs)?,
        };
        stats.elapsed = clock.elapsed();
        Ok(stats)
    }

    // ---- row-level primitives

    /// Removes row `x`; `next`/`prev` are the SA values of rows `x + 1` and
    /// `x - 1`, which become samples if `x` was at a run boundary.
    fn remove_row(&mut self, x: usize, next: usize, prev: usize) -> Result<()> {
        match self.rlbwt.delete_char(x)? {
            DeleteOutcome::Removed { run } => {
                self.sa_s.delete(run)?;
                self.sa_e.delete(run)?;
                if run > 1 && run <= self.rlbwt.run_count() && self.rlbwt.head(run - 1) == self.rlbwt.head(run) {
                    self.rlbwt.merge_runs(run - 1)?;
                    self.sa_e.delete(run - 1)?;
                    self.sa_s.delete(run)?;
                }
            }
            DeleteOutcome::Shortened { run, at_start, at_end } => {
                if at_start {
                    self.sa_s.replace(run, next)?;
                }
                if at_end {
                    self.sa_e.replace(run, prev)?;
                }
            }
        }
        Ok(())
    }

    /// Inserts a row with last character `ch` and SA value `label` at row `y`;
    /// `next`/`prev` are the SA values that will sit at rows `y + 1`, `y - 1`.
    fn insert_row(&mut self, y: usize, ch: u8, label: usize, next: usize, prev: usize) -> Result<()> {
        match self.rlbwt.insert_char(ch, y)? {
            InsertOutcome::Lengthened { .. } => {}
            InsertOutcome::ExtendedStart { run } => self.sa_s.replace(run, label)?,
            InsertOutcome::ExtendedEnd { run } => self.sa_e.replace(run, label)?,
            InsertOutcome::NewRun { run } => {
                self.sa_s.insert(run, label)?;
                self.sa_e.insert(run, label)?;
            }
            InsertOutcome::Split { run } => {
                self.sa_s.insert(run + 1, label)?;
                self.sa_s.insert(run + 2, next)?;
                self.sa_e.insert(run, prev)?;
                self.sa_e.insert(run + 1, label)?;
            }
        }
        Ok(())
    }

    /// Row after `t` in LF order among rows with the same character, wrapping
    /// to the next character: inside a run that is `t + 1` (SA value `next`,
    /// already known), otherwise the start of another run.
    fn row_next(&self, t: usize, next: usize) -> Result<(usize, usize)> {
        let (w, start, run) = self.rlbwt.locate(t)?;
        if t + 1 < start + run.len {
            return Ok((t + 1, next));
        }
        let d = match self.rlbwt.next_run_with(w, run.ch) {
            Some(d) => d,
            None => self.rlbwt.first_run_with(self.rlbwt.succ_head(run.ch)),
        };
        Ok((self.rlbwt.run_start(d), self.sa_s.access(d)?))
    }

    /// Mirror of [`Self::row_next`].
    fn row_prev(&self, t: usize, prev: usize) -> Result<(usize, usize)> {
        let (w, start, run) = self.rlbwt.locate(t)?;
        if t > start {
            return Ok((t - 1, prev));
        }
        let d = match self.rlbwt.prev_run_with(w, run.ch) {
            Some(d) => d,
            None => self.rlbwt.last_run_with(self.rlbwt.pred_head(run.ch)),
        };
        let (r, s) = self.rlbwt.run_access(d)?;
        Ok((s + r.len - 1, self.sa_e.access(d)?))
    }

    /// One step of LF on a tracked row with plain LF.
    fn step(&self, (t, next, prev): Row, pred: impl Fn(usize) -> usize) -> Result<Row> {
        let y = self.rlbwt.lf(t)?;
        Ok((y, pred(self.row_next(t, next)?.1), pred(self.row_prev(t, prev)?.1)))
    }

    /// The iterations below the edited block: move the old row `x` to the new
    /// row `y` until they coincide. Returns K and the iterations executed.
    fn finish_below<O: IterationObserver>(
        &mut self,
        i: usize,
        mut x: Row,
        mut y: Row,
        pred: impl Fn(usize) -> usize + Copy,
        obs: &mut O,
    ) -> Result<(usize, usize)> {
        let mut iterations = 0;
        for j in (1..i).rev() {
            let y2 = self.step(y, pred)?;
            iterations += 1;
            let st = IterationState::at(j, LfWindow::Plain).with_x(x).with_y(y2);
            if y2.0 == x.0 {
                obs.on_iteration(self, &st);
                return Ok((i - j, iterations));
            }
            let x2 = self.step(x, pred)?;
            let ch = self.rlbwt.char_at(x.0)?;
            obs.on_iteration(self, &st);
            self.remove_row(x.0, x.1, x.2)?;
            self.insert_row(y2.0, ch, j, y2.1, y2.2)?;
            x = x2;
            y = y2;
        }
        Ok((i, iterations))
    }

    fn insert_block<O: IterationObserver>(&mut self, i: usize, p: &[u8], obs: &mut O) -> Result<UpdateStats> {
        let n = self.len();
        let m = p.len();
        let (isa_i, isa_walk) = self.isa_walk(i)?;
        let tprev = self.rlbwt.char_at(isa_i)?;
        let isa_im1 = self.rlbwt.lf(isa_i)?;
        let (pi_i, ph_i) = (self.phi_inverse(i)?, self.phi(i)?);
        let im1 = if i >= 2 { i - 1 } else { n };
        let (pi_im1, ph_im1) = (self.phi_inverse(im1)?, self.phi(im1)?);

        self.sa_s.increment(i, m)?;
        self.sa_e.increment(i, m)?;
        let dollar = n + m;
        let pred = move |v: usize| if v == 1 { dollar } else { v - 1 };
        // Relabel values read before the shift: `rs` for old shifts, `rf`
        // for values taken as new-shift labels.
        let rs = |v: usize| if v > i { v + m } else { v };
        let rf = |v: usize| if v >= i { v + m } else { v };
        // SA value to the right of the old shift at i - 1.
        let zl = if i >= 2 { i - 1 } else { n + m };

        // j = i + m: the old shift at i becomes the new shift at i + m.
        let x: Row = (isa_i, rs(pi_i), rs(ph_i));
        obs.on_iteration(self, &IterationState::at(i + m, LfWindow::Plain).with_x(x).with_y(x));
        self.remove_row(x.0, x.1, x.2)?;
        self.insert_row(x.0, p[m - 1], i + m, x.1, x.2)?;
        let mut y = x;

        // p: row of the old shift at i - 1; q: row of the new shift at i + m.
        let (mut pr, mut pn, mut pp) = (isa_im1, rf(pi_im1), rf(ph_im1));
        let mut q = isa_i;
        let mut iterations = 1;
        for j in (i..i + m).rev() {
            let t = y.0;
            let window = LfWindow::Insert { tprev, q };
            let yy = dynamic_lf(&self.rlbwt, &window, t)?.ok_or(Error::Internal("insert window without image"))?;
            let p2 = pr + usize::from(yy <= pr);
            let q2 = q + usize::from(yy <= q);
            let size = self.len() + 1;
            let below = if yy < size { yy + 1 } else { 1 };
            let yn = if below == p2 { zl } else { pred(self.row_next(t, y.1)?.1) };
            let above = if yy > 1 { yy - 1 } else { size };
            let yp = if above == p2 { zl } else { pred(self.row_prev(t, y.2)?.1) };
            let ch = if j > i { p[j - i - 1] } else { tprev };
            obs.on_iteration(self, &IterationState::at(j, window).with_y((yy, yn, yp)));
            self.insert_row(yy, ch, j, yn, yp)?;
            if yy == p2 + 1 {
                pn = j;
            }
            if yy + 1 == p2 {
                pp = j;
            }
            y = (yy, yn, yp);
            (pr, q) = (p2, q2);
            iterations += 1;
        }

        let (k, below) = self.finish_below(i, (pr, pn, pp), y, pred, obs)?;
        Ok(UpdateStats { k, iterations: iterations + below, isa_walk, elapsed: None })
    }

    fn delete_block<O: IterationObserver>(&mut self, i: usize, m: usize, obs: &mut O) -> Result<UpdateStats> {
        let n = self.len();
        let (isa_i, isa_walk) = self.isa_walk(i)?;
        let tprev = self.rlbwt.char_at(isa_i)?;
        let mut isa_im = isa_i;
        for _ in 0..m {
            isa_im = self.rlbwt.lf_inverse(isa_im)?;
        }
        let (pi, ph) = (self.phi_inverse(i + m)?, self.phi(i + m)?);
        let zl = if i >= 2 { i - 1 } else { n };
        // Left neighbour label; the new shift at i (label i + m) sits next to
        // the old shift at i - 1.
        let pred = move |v: usize| {
            if v == 1 {
                n
            } else if v == i + m {
                zl
            } else {
                v - 1
            }
        };

        // j = i + m: the old shift at i + m becomes the new shift at i.
        let x0: Row = (isa_im, pi, ph);
        let mut x = self.step(x0, pred)?;
        obs.on_iteration(self, &IterationState::at(i + m, LfWindow::Plain).with_x(x0).with_y(x0));
        self.remove_row(x0.0, x0.1, x0.2)?;
        self.insert_row(x0.0, tprev, i + m, x0.1, x0.2)?;
        // Row of the new shift at i, with its neighbour values.
        let (mut pr, mut pn, mut pp) = x0;
        let mut iterations = 1;

        for j in (i..i + m).rev() {
            let t = x.0;
            if t == pr {
                return Err(Error::Internal("deleted row met the new shift"));
            }
            let window = LfWindow::Delete { tprev, p: pr };
            let xx = dynamic_lf(&self.rlbwt, &window, t)?.ok_or(Error::Internal("delete window without image"))?;
            // The new shift at i has no image yet: step over it.
            let (h, v) = self.row_next(t, x.1)?;
            let xn = pred(if h == pr { self.row_next(pr, pn)?.1 } else { v });
            let (h, v) = self.row_prev(t, x.2)?;
            let xp = pred(if h == pr { self.row_prev(pr, pp)?.1 } else { v });
            obs.on_iteration(self, &IterationState::at(j, window).with_x(x));
            self.remove_row(t, x.1, x.2)?;
            if t == pr + 1 {
                pn = x.1;
            }
            if t + 1 == pr {
                pp = x.2;
            }
            if t < pr {
                pr -= 1;
            }
            x = (xx, xn, xp);
            iterations += 1;
        }

        let (k, below) = self.finish_below(i, x, (pr, pn, pp), pred, obs)?;
        self.sa_s.decrement(i + m - 1, m)?;
        self.sa_e.decrement(i + m - 1, m)?;
        Ok(UpdateStats { k, iterations: iterations + below, isa_walk, elapsed: None })
    }
}
