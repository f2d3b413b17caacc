//! Order-maintained dynamic sequences: a partial-sum list, a byte sequence
//! with rank/select, and a permutation with inverse access.
//!
//! All three sit on one B-tree with fanout 32 and per-subtree aggregates, so
//! every operation touches O(log N) nodes. Each type exposes a cumulative
//! node-visit counter for instrumentation.

mod btree;
mod cseq;
mod perm;
mod psum;

pub use cseq::CharSequence;
pub use perm::DynPermutation;
pub use psum::PartialSumList;
