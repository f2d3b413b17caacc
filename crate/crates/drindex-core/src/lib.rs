//! Dynamic r-index over byte strings.
//!
//! The index keeps only the run-length BWT of the text and two sampled suffix
//! arrays (the SA values at the first and last row of every BWT run). It
//! answers count and locate queries and supports in-place insertion and deletion
//! of substrings without rebuilding.
//!
//! Positions at every public interface are 1-based. The text always ends with
//! the sentinel byte [`SENTINEL`] (`0x00`), which is smaller than every other
//! symbol and never appears in user input.
//!
//! Layout, bottom-up:
//! - [`dyn_seq`]: partial-sum list, character sequence and permutation, all
//!   backed by one B-tree with per-subtree aggregates;
//! - [`rlbwt`]: the run-length BWT with LF and inverse LF;
//! - [`sampled_sa`]: a dynamic set of sampled SA values indexed by run;
//! - [`r_index`]: queries and the three update algorithms;
//! - [`oracle`]: slow, obvious reference implementations used by tests.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dyn_seq;
mod error;
pub mod oracle;
pub mod r_index;
pub mod rlbwt;
pub mod sampled_sa;

pub use error::{Error, Result};
pub use r_index::{DynamicRIndex, EditOp, IterationObserver, IterationState, LfWindow, SaInterval, UpdateStats};
pub use rlbwt::{RlbwtIndex, Run};
pub use sampled_sa::SampledSa;

/// The terminator appended to every text. It sorts before every other byte.
pub const SENTINEL: u8 = 0;
