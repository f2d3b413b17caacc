use drindex_core::oracle::{bootstrap_index, build_snapshot, diff_index, replay_iterations, TraceChecker};
use drindex_core::{DynamicRIndex, EditOp, Run};

fn bbabba() -> DynamicRIndex {
    DynamicRIndex::from_text(b"bbabba", 4096).unwrap()
}

#[test]
fn built_index_matches_known_arrays() {
    let ix = bbabba();
    assert_eq!(ix.rlbwt().to_bwt(), b"abbbba\0".to_vec());
    assert_eq!(
        ix.rlbwt().runs(),
        vec![Run { ch: b'a', len: 1 }, Run { ch: b'b', len: 4 }, Run { ch: b'a', len: 1 }, Run { ch: 0, len: 1 }]
    );
    assert_eq!(ix.sa_s().values(), vec![7, 6, 4, 1]);
    assert_eq!(ix.sa_e().values(), vec![7, 2, 4, 1]);
    assert_eq!(ix.phi_inverse(5), Ok(2));
    assert_eq!(ix.len(), 7);
    assert_eq!(ix.run_count(), 4);
}

#[test]
fn insertion_skips_three_iterations() {
    let mut ix = bbabba();
    let st = ix.insert_char(6, b'b').unwrap();
    assert_eq!(st.k, 3);
    assert_eq!(st.iterations, 5);
    assert!(diff_index(&ix, b"bbabbba\0").unwrap().is_empty());

    let st = ix.delete_substring(6, 1).unwrap();
    assert!(st.k <= 6);
    assert!(diff_index(&ix, b"bbabba\0").unwrap().is_empty());
    assert_eq!(ix.sa_s().values(), bbabba().sa_s().values());
}

#[test]
fn insertion_trace_is_checked_row_by_row() {
    let op = EditOp::InsertChar { i: 6, ch: b'b' };
    let trace = replay_iterations(b"bbabba\0", &op).unwrap();
    assert_eq!(trace.step(7).sa, vec![8, 6, 3, 5, 2, 4, 1]);
    assert_eq!(trace.step(6).sa, vec![8, 7, 3, 5, 2, 4, 1]);
    let mut chk = TraceChecker::new(trace);
    let mut ix = bootstrap_index(b"bbabba").unwrap();
    let st = ix.apply_observed(&op, &mut chk).unwrap();
    assert_eq!(chk.executed, st.iterations);
    chk.check_all_iterations();
    // Matrices 8..6 have 7 rows and 5..1 have 8: 61 rows over all of them,
    // plus 38 in the 5 executed iterations seen live.
    assert_eq!(chk.into_result(), Ok(61 + 38));
}

#[test]
fn empty_text_index() {
    let ix = DynamicRIndex::from_text(b"", 4096).unwrap();
    assert_eq!((ix.len(), ix.run_count()), (1, 1));
    assert_eq!(ix.count(b"a"), Ok(0));
    assert_eq!(build_snapshot(b"\0").unwrap().sa, vec![1]);
}

#[test]
fn sentinel_in_input_is_rejected() {
    assert!(DynamicRIndex::from_text(b"ab\0c", 4096).is_err());
    let mut ix = bbabba();
    assert!(ix.insert_string(2, b"a\0").is_err());
    assert!(diff_index(&ix, b"bbabba\0").unwrap().is_empty());
}
