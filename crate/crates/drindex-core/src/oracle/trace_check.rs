use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::replay::Trace;
use super::samples;
use crate::r_index::{dynamic_lf, IterationObserver, IterationState, LfWindow};
use crate::{DynamicRIndex, RlbwtIndex};

/// Cross-checks every executed iteration of an update against a replay trace:
/// the last column, both sample arrays, the tracked rows x and y with their
/// neighbouring SA values, and the formula LF on every row.
#[derive(Clone, Debug)]
pub struct TraceChecker {
    trace: Trace,
    windows: BTreeMap<usize, LfWindow>,
    errors: Vec<String>,
    /// Number of (iteration, row) pairs whose LF formula was compared.
    pub lf_checks: usize,
    /// Iterations the engine reported.
    pub executed: usize,
}

impl TraceChecker {
    pub fn new(trace: Trace) -> Self {
        TraceChecker { trace, windows: BTreeMap::new(), errors: Vec::new(), lf_checks: 0, executed: 0 }
    }

    pub fn errors(&self) -> &[String] {
        &self.errors
    }

    fn fail(&mut self, msg: String) {
        // Keep the report readable when one bug cascades.
        if self.errors.len() < 32 {
            self.errors.push(msg);
        }
    }

    fn check_lf(&mut self, j: usize, rb: &RlbwtIndex, window: &LfWindow) {
        let want = self.trace.step(j).lf.clone();
        for (k, w) in want.iter().enumerate() {
            let t = k + 1;
            let got = dynamic_lf(rb, window, t);
            self.lf_checks += 1;
            if got.as_ref() != Ok(w) {
                self.fail(format!("j={j}: LF formula at row {t} gave {got:?}, positional {w:?} ({window:?})"));
            }
        }
    }

    /// Checks the LF formula on every iteration of the trace, including the
    /// ones the engine skipped (those use the plain formula on the trace's
    /// own last column). Call after the update has run.
    pub fn check_all_iterations(&mut self) {
        for j in 1..=self.trace.steps.len() {
            let window = self.windows.get(&j).copied().unwrap_or(LfWindow::Plain);
            let rb = RlbwtIndex::from_bwt(&self.trace.step(j).l);
            self.check_lf(j, &rb, &window);
        }
    }

    pub fn into_result(self) -> Result<usize, Vec<String>> {
        if self.errors.is_empty() { Ok(self.lf_checks) } else { Err(self.errors) }
    }
}

impl IterationObserver for TraceChecker {
    fn on_iteration(&mut self, ix: &DynamicRIndex, st: &IterationState) {
        let j = st.j;
        self.executed += 1;
        self.windows.insert(j, st.window);
        let step = self.trace.step(j).clone();
        let l = ix.rlbwt().to_bwt();
        if l != step.l {
            self.fail(format!("j={j}: L differs: index {l:?} vs trace {:?}", step.l));
            return;
        }
        let (ss, se) = samples(&step.l, &step.sa);
        if ix.sa_s().values() != ss {
            self.fail(format!("j={j}: SA_s {:?} vs trace {ss:?}", ix.sa_s().values()));
        }
        if ix.sa_e().values() != se {
            self.fail(format!("j={j}: SA_e {:?} vs trace {se:?}", ix.sa_e().values()));
        }
        if let Some(x) = st.x {
            if step.x != Some(x) {
                self.fail(format!("j={j}: x={x}, trace {:?}", step.x));
            } else {
                if x < step.sa.len() && st.x_sa_next != step.sa[x] {
                    self.fail(format!("j={j}: SA_j[x+1] = {} vs trace {}", st.x_sa_next, step.sa[x]));
                }
                if x > 1 && st.x_sa_prev != step.sa[x - 2] {
                    self.fail(format!("j={j}: SA_j[x-1] = {} vs trace {}", st.x_sa_prev, step.sa[x - 2]));
                }
            }
        }
        if let Some(y) = st.y {
            if step.y != Some(y) {
                self.fail(format!("j={j}: y={y}, trace {:?}", step.y));
            } else {
                if y < step.next_sa.len() && st.y_sa_next != step.next_sa[y] {
                    self.fail(format!("j={j}: SA_(j-1)[y+1] = {} vs trace {}", st.y_sa_next, step.next_sa[y]));
                }
                if y > 1 && st.y_sa_prev != step.next_sa[y - 2] {
                    self.fail(format!("j={j}: SA_(j-1)[y-1] = {} vs trace {}", st.y_sa_prev, step.next_sa[y - 2]));
                }
            }
        }
        self.check_lf(j, ix.rlbwt(), &st.window);
    }
}
